#pragma once

#include <string>
#include <string_view>

#include "spinsim/types.hpp"

namespace spinsim {

/// Spin quantum number S stored exactly as 2S, so S = 1/2, 1, 3/2, ...
/// never touches floating point until a value is actually needed.
class HalfInteger {
public:
    explicit HalfInteger(int twice) : twice_(twice) {
        if (twice < 1)
            throw ConfigError("spin quantum number must be at least 1/2 (got 2S = " +
                              std::to_string(twice) + ")");
    }

    static HalfInteger from_twice(int twice) { return HalfInteger(twice); }

    /// Accepts "1/2", "3/2", "1", "2" and decimal forms "0.5", "1.5".
    static HalfInteger parse(std::string_view text);

    int twice() const { return twice_; }
    double value() const { return 0.5 * twice_; }
    int dimension() const { return twice_ + 1; }  // 2S+1
    bool is_integer() const { return twice_ % 2 == 0; }

    /// "1/2", "1", "3/2", ...
    std::string str() const;

    friend bool operator==(HalfInteger a, HalfInteger b) { return a.twice_ == b.twice_; }
    friend bool operator!=(HalfInteger a, HalfInteger b) { return a.twice_ != b.twice_; }

private:
    int twice_;
};

/// Formats a twice-value (possibly negative, e.g. a total-m class) as a
/// signed rational: "+3/2", "-1", "0".
std::string format_twice_value(int twice);

}  // namespace spinsim
