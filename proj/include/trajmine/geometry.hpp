#ifndef TRAJMINE_GEOMETRY_HPP
#define TRAJMINE_GEOMETRY_HPP

#include <cmath>

namespace trajmine {

inline constexpr double kPi = 3.14159265358979323846;

inline double to_radians(double deg) { return deg * kPi / 180.0; }
inline double to_degrees(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees into (-180, 180].
inline double wrap_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r <= -180.0) r += 360.0;
    else if (r > 180.0) r -= 360.0;
    return r;
}

/// Heading of the vector (vx, vy) in degrees, in (-180, 180].
/// Zero points along +x; positive angles rotate toward +y.
inline double heading_of(double vx, double vy) {
    return wrap_deg(to_degrees(std::atan2(vy, vx)));
}

/// Signed angle from heading `a` to heading `b`, wrapped to (-180, 180].
inline double signed_angle_deg(double a, double b) { return wrap_deg(b - a); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    /// Counter-clockwise perpendicular.
    Vec2 perp() const { return {-y, x}; }
    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

}  // namespace trajmine

#endif
