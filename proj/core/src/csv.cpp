#include "fkswitch/csv.hpp"

#include <cstdio>

namespace fkswitch {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string format_int(long long value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%lld", value);
    return buf;
}

}  // namespace fkswitch
