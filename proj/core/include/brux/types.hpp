#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace brux {

inline constexpr double kSpeedOfLightMps = 299792458.0;

// Dataset class label. The integer values are the class indices used by the
// classifier; NoGrinding deliberately sits at index 0 so that deterministic
// "lowest class index wins" tie-breaking is well defined.
enum class Label : int {
    NoGrinding = 0,
    Grinding = 1,
};

inline constexpr int kNumClasses = 2;

inline int class_index(Label label) { return static_cast<int>(label); }

std::string to_string(Label label);
Label parse_label(const std::string& text);  // throws BadConfig on unknown text

// Closed interval used for scenario parameter draws.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Interval&) const = default;
};

// Dense row-major matrix of doubles; rows are observations.
struct Matrix {
    std::vector<double> values;
    int rows = 0;
    int cols = 0;

    static Matrix zeros(int rows, int cols) {
        Matrix m;
        m.rows = rows;
        m.cols = cols;
        m.values.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
        return m;
    }

    double& at(int r, int c) {
        return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                      static_cast<std::size_t>(c)];
    }
    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                      static_cast<std::size_t>(c)];
    }
    std::span<const double> row(int r) const {
        return {values.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols),
                static_cast<std::size_t>(cols)};
    }

    bool operator==(const Matrix&) const = default;
};

// Shortest decimal representation of x that parses back to exactly the same
// double. Used for every floating-point value the library writes to disk so
// that serialized artifacts are both readable and bit-exact round-trippable.
std::string format_double(double x);

}  // namespace brux
