// Deterministic number formatting shared by the dataset writer and the
// report writers: shortest round-trip representation, '.' decimal separator.
#pragma once

#include <string>

namespace pcs {

std::string format_double(double value);

}  // namespace pcs
