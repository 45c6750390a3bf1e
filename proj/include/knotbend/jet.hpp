#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Dense>

namespace knotbend {

// Truncated Taylor series at a point: a[k] = f^(k)(u0)/k!. Arithmetic follows
// the standard Taylor-coefficient recurrences, so every operation propagates
// exact derivatives up to the jet's order. Order is fixed per expression
// evaluation; kMaxLen bounds it.
struct Jet {
    static constexpr int kMaxLen = 8;

    int len = 1;
    std::array<double, kMaxLen> a{};

    static Jet constant(double v, int len);
    static Jet variable(double u, int len);

    double value() const { return a[0]; }
    // f^(k)(u0), de-normalized from the Taylor coefficient.
    double derivative(int k) const;
};

Jet operator+(const Jet& x, const Jet& y);
Jet operator-(const Jet& x, const Jet& y);
Jet operator-(const Jet& x);
Jet operator*(const Jet& x, const Jet& y);
Jet operator/(const Jet& x, const Jet& y);
Jet operator*(double c, const Jet& x);
Jet operator+(const Jet& x, double c);
Jet operator-(const Jet& x, double c);

Jet sqrt(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);
Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet tan(const Jet& x);
Jet abs(const Jet& x);
Jet pow(const Jet& x, double exponent);
Jet powi(const Jet& x, long long n);

// d/du as a jet one order shorter: coefficients (k+1)*a[k+1].
Jet shift_derivative(const Jet& x);

// Vector of three jets with the usual 3-vector algebra.
struct Vec3Jet {
    Jet x, y, z;

    static Vec3Jet constant(const Eigen::Vector3d& v, int len);

    Eigen::Vector3d value() const { return {x.value(), y.value(), z.value()}; }
    Eigen::Vector3d derivative(int k) const {
        return {x.derivative(k), y.derivative(k), z.derivative(k)};
    }
    int len() const { return x.len; }
};

Vec3Jet operator+(const Vec3Jet& a, const Vec3Jet& b);
Vec3Jet operator-(const Vec3Jet& a, const Vec3Jet& b);
Vec3Jet operator*(const Jet& s, const Vec3Jet& a);
Vec3Jet operator*(double s, const Vec3Jet& a);
Jet dot(const Vec3Jet& a, const Vec3Jet& b);
Vec3Jet cross(const Vec3Jet& a, const Vec3Jet& b);
Jet norm(const Vec3Jet& a);
Vec3Jet shift_derivative(const Vec3Jet& a);

}  // namespace knotbend
