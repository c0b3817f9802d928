// Shared value types and error hierarchy for the springlink library.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace springlink {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double norm2() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
    /// Counterclockwise quarter turn.
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into [0, 2π).
inline double wrap_two_pi(double angle) {
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

/// Wraps an angle into (-π, π].
inline double wrap_pi(double angle) {
    double w = wrap_two_pi(angle);
    return w > kPi ? w - kTwoPi : w;
}

/// Crank travel direction. CW traverses decreasing θ.
enum class Direction { CW, CCW };

/// Sign of ds/dθ where s is the arc parameter in the travel direction.
constexpr double travel_sign(Direction d) { return d == Direction::CCW ? 1.0 : -1.0; }

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define SPRINGLINK_ERROR(Name)                  \
    class Name : public Error {                 \
    public:                                     \
        using Error::Error;                     \
    }

SPRINGLINK_ERROR(GeometryError);
SPRINGLINK_ERROR(AssemblyError);
SPRINGLINK_ERROR(RootError);
SPRINGLINK_ERROR(DegenerateCurveError);
SPRINGLINK_ERROR(PlacementError);
SPRINGLINK_ERROR(NumericalError);
SPRINGLINK_ERROR(SizingError);
SPRINGLINK_ERROR(TotalInfeasible);
SPRINGLINK_ERROR(ConfigError);
SPRINGLINK_ERROR(DataError);

#undef SPRINGLINK_ERROR

}  // namespace springlink
