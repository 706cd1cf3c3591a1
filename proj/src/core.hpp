#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bsfem {

/// Error categories shared between the C++ core and the C API status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    OutsideTube,
    NonConvergence,
    DegenerateGradient,
    MeshQualityFailure,
    ParseError,
    InvariantViolation,
    TopologyError,
    SingularJacobian,
    DegenerateFace,
    QuadratureTooWeak,
    IndexOutOfRange,
    DimensionMismatch,
    MaxIterationsExceeded,
    IndefiniteMatrix,
    SingularGram,
    EvaluationFailure,
    OutsideSkin,
    MapInversionFailure,
    UnknownSolution,
    ConfigError,
    IoError,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// 2D vector with the handful of operations the solver needs.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 r) {
        x += r.x;
        y += r.y;
        return *this;
    }
    constexpr Vec2& operator-=(Vec2 r) {
        x -= r.x;
        y -= r.y;
        return *this;
    }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product of {x,y,0} vectors.
    constexpr double cross(Vec2 r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm_sq() const { return x * x + y * y; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Rotation of v by -90 degrees; maps a CCW boundary tangent to the outward normal.
inline constexpr Vec2 rotate_cw(Vec2 v) { return {v.y, -v.x}; }

/// 2x2 matrix in row-major order.
struct Mat2 {
    double a00 = 0.0, a01 = 0.0;
    double a10 = 0.0, a11 = 0.0;

    constexpr double det() const { return a00 * a11 - a01 * a10; }

    constexpr Vec2 apply(Vec2 v) const { return {a00 * v.x + a01 * v.y, a10 * v.x + a11 * v.y}; }

    /// Applies the inverse transpose, i.e. maps reference gradients to physical ones.
    Vec2 apply_inv_transpose(Vec2 v) const {
        const double d = det();
        return {(a11 * v.x - a10 * v.y) / d, (-a01 * v.x + a00 * v.y) / d};
    }

    Vec2 solve(Vec2 b) const {
        const double d = det();
        return {(a11 * b.x - a01 * b.y) / d, (-a10 * b.x + a00 * b.y) / d};
    }
};

}  // namespace bsfem
