#pragma once

#include <string>

namespace fkswitch {

/// Shortest round-trippable decimal representation, always with a '.' or
/// exponent marker and never locale-formatted.
std::string format_double(double value);

std::string format_int(long long value);

}  // namespace fkswitch
