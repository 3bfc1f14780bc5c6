#include "brux/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "brux/errors.hpp"

namespace brux {

std::string to_string(Label label) {
    return label == Label::Grinding ? "grinding" : "no_grinding";
}

Label parse_label(const std::string& text) {
    if (text == "grinding") return Label::Grinding;
    if (text == "no_grinding") return Label::NoGrinding;
    raise(Errc::BadConfig, "unknown label '" + text + "' (expected grinding|no_grinding)");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

}  // namespace brux
