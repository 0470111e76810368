#include "pcs/rng.hpp"

#include "pcs/errors.hpp"

namespace pcs {

std::size_t RngStream::next_index(std::size_t n) {
    if (n == 0) throw InvalidInputError("next_index: n must be positive");
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod n
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return static_cast<std::size_t>(r % bound);
    }
}

}  // namespace pcs
