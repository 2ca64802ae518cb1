#pragma once
#include <cmath>
#include <cstdint>
#include <functional>

namespace eqa {

// Integer grid cell coordinate.
struct Cell {
    int x = 0;
    int y = 0;

    friend bool operator==(const Cell& a, const Cell& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
    // Row-major order: (y, x). Used wherever a deterministic cell order is needed.
    friend bool operator<(const Cell& a, const Cell& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct CellHash {
    size_t operator()(const Cell& c) const {
        return std::hash<int64_t>()((static_cast<int64_t>(c.y) << 32) ^ static_cast<uint32_t>(c.x));
    }
};

// Continuous agent pose. heading is radians in [0, 2*pi).
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;

    Cell cell() const { return Cell{static_cast<int>(std::floor(x)), static_cast<int>(std::floor(y))}; }
};

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Normalize an angle into [0, 2*pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

// Smallest absolute difference between two angles, in [0, pi].
inline double angle_diff(double a, double b) {
    double d = std::fabs(wrap_angle(a) - wrap_angle(b));
    return d > kTwoPi / 2.0 ? kTwoPi - d : d;
}

inline int manhattan(const Cell& a, const Cell& b) {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

inline double cell_center_x(const Cell& c) { return c.x + 0.5; }
inline double cell_center_y(const Cell& c) { return c.y + 0.5; }

}  // namespace eqa
