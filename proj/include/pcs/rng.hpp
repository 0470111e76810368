// Deterministic splittable random streams (splitmix64 core).
//
// Every stochastic operation in the toolkit receives an explicit RngStream;
// no ambient entropy is used anywhere. Substreams are derived from the stream
// key rather than the draw position, so `substream(i)` yields the same child
// stream no matter how many values the parent has already produced. That is
// what makes Monte Carlo trials reproducible under any parallel schedule:
// trial i always runs on `master.substream(i)`.
#pragma once

#include <cstddef>
#include <cstdint>

namespace pcs {

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(mix(seed + kGolden)), state_(key_) {}

    // Child stream for the given index, independent of draws made so far.
    // Draw outputs use mix(key + n*golden) while child keys use an extra +1
    // offset, so the two input sets never overlap.
    RngStream substream(std::uint64_t index) const {
        return RngStream(RawKey{mix(key_ + kGolden * (index + 1) + 1)});
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n); unbiased via rejection.
    std::size_t next_index(std::size_t n);

    // Uniform in [lo, hi).
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool next_bernoulli(double p) { return next_double() < p; }

    std::uint64_t key() const { return key_; }

private:
    struct RawKey {
        std::uint64_t value;
    };
    explicit RngStream(RawKey raw) : key_(raw.value), state_(raw.value) {}

    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t state_;
};

}  // namespace pcs
