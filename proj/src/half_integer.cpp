#include "spinsim/half_integer.hpp"

#include <cmath>

namespace spinsim {

namespace {

bool parse_int(std::string_view text, long& out) {
    if (text.empty()) return false;
    std::size_t pos = 0;
    bool neg = false;
    if (text[0] == '+' || text[0] == '-') {
        neg = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size()) return false;
    long value = 0;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
        if (value > 1000000) return false;
    }
    out = neg ? -value : value;
    return true;
}

}  // namespace

HalfInteger HalfInteger::parse(std::string_view text) {
    auto fail = [&] {
        throw ConfigError("cannot parse spin quantum number '" + std::string(text) + "'");
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        long num = 0, den = 0;
        if (!parse_int(text.substr(0, slash), num) ||
            !parse_int(text.substr(slash + 1), den) || den != 2)
            fail();
        return HalfInteger(static_cast<int>(num));
    }
    if (text.find('.') != std::string_view::npos) {
        double value = 0.0;
        try {
            value = std::stod(std::string(text));
        } catch (const std::exception&) {
            fail();
        }
        double twice = 2.0 * value;
        if (std::abs(twice - std::round(twice)) > 1e-9) fail();
        return HalfInteger(static_cast<int>(std::lround(twice)));
    }
    long whole = 0;
    if (!parse_int(text, whole)) fail();
    return HalfInteger(static_cast<int>(2 * whole));
}

std::string HalfInteger::str() const { return format_twice_value(twice_).substr(twice_ > 0 ? 1 : 0); }

std::string format_twice_value(int twice) {
    std::string sign = twice > 0 ? "+" : twice < 0 ? "-" : "";
    int mag = std::abs(twice);
    if (mag % 2 == 0) return sign + std::to_string(mag / 2);
    return sign + std::to_string(mag) + "/2";
}

}  // namespace spinsim
