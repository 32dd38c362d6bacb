#pragma once

#include <cmath>

#include "pan/errors.hpp"

namespace pan {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double c) const { return {c * x, c * y, c * z}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    double norm_inf() const { return std::fmax(std::fabs(x), std::fmax(std::fabs(y), std::fabs(z))); }
};

inline Vec3 operator*(double c, const Vec3& v) { return v * c; }

// Axis-aligned box [lo.x,hi.x] x [lo.y,hi.y] x [lo.z,hi.z].
struct Box {
    Vec3 lo, hi;

    static Box centered_cube(double half_width, Vec3 center = {}) {
        return {{center.x - half_width, center.y - half_width, center.z - half_width},
                {center.x + half_width, center.y + half_width, center.z + half_width}};
    }

    bool degenerate() const { return !(hi.x > lo.x && hi.y > lo.y && hi.z > lo.z); }

    double volume() const { return (hi.x - lo.x) * (hi.y - lo.y) * (hi.z - lo.z); }

    bool contains(const Vec3& p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
    }

    bool contains(const Box& b) const { return contains(b.lo) && contains(b.hi); }

    // Does the closed ball B(center, radius) fit inside?
    bool contains_ball(const Vec3& c, double radius) const {
        return c.x - radius >= lo.x && c.x + radius <= hi.x && c.y - radius >= lo.y &&
               c.y + radius <= hi.y && c.z - radius >= lo.z && c.z + radius <= hi.z;
    }

    Box intersect(const Box& b) const {
        return {{std::fmax(lo.x, b.lo.x), std::fmax(lo.y, b.lo.y), std::fmax(lo.z, b.lo.z)},
                {std::fmin(hi.x, b.hi.x), std::fmin(hi.y, b.hi.y), std::fmin(hi.z, b.hi.z)}};
    }
};

} // namespace pan
