#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace flier {

inline constexpr const char* kToolName = "microflier-sim";
inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kGravity = 9.80665;          // m/s^2
inline constexpr double kMu0 = 4e-7 * kPi;           // vacuum permeability
inline constexpr double kCopperResistivity = 1.72e-8;  // ohm*m

// Input that violates a documented precondition.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver failed to converge; carries the final residual.
struct SolverError : std::runtime_error {
    double residual;
    SolverError(const std::string& msg, double res)
        : std::runtime_error(msg + " (residual " + std::to_string(res) + ")"),
          residual(res) {}
};

// Numerical-integration consistency failure (e.g. energy-balance violation).
struct IntegratorError : std::runtime_error {
    explicit IntegratorError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Vec3 {
    double x = 0, y = 0, z = 0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        return {x / n, y / n, z / n};
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a <= 0) a += 2.0 * kPi;
    return a - kPi;
}

// First-order dual number for forward-mode derivatives.
struct Dual {
    double v = 0;  // value
    double d = 0;  // derivative

    Dual() = default;
    Dual(double value, double deriv = 0.0) : v(value), d(deriv) {}

    Dual operator+(const Dual& o) const { return {v + o.v, d + o.d}; }
    Dual operator-(const Dual& o) const { return {v - o.v, d - o.d}; }
    Dual operator-() const { return {-v, -d}; }
    Dual operator*(const Dual& o) const { return {v * o.v, d * o.v + v * o.d}; }
    Dual operator/(const Dual& o) const {
        return {v / o.v, (d * o.v - v * o.d) / (o.v * o.v)};
    }
};

inline Dual operator+(double a, const Dual& b) { return Dual(a) + b; }
inline Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
inline Dual operator*(double a, const Dual& b) { return Dual(a) * b; }
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual sqrt(const Dual& a) {
    double s = std::sqrt(a.v);
    return {s, a.d / (2.0 * s)};
}
inline Dual atan2(const Dual& y, const Dual& x) {
    double r2 = x.v * x.v + y.v * y.v;
    return {std::atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}
inline Dual acos(const Dual& a) {
    return {std::acos(a.v), -a.d / std::sqrt(1.0 - a.v * a.v)};
}

// FNV-1a 64-bit hash, used for config fingerprints in output headers.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace flier
