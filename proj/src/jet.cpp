#include "knotbend/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace knotbend {

namespace {

int common_len(const Jet& x, const Jet& y) { return x.len < y.len ? x.len : y.len; }

[[noreturn]] void domain_fail(const char* what) { throw std::domain_error(what); }

}  // namespace

Jet Jet::constant(double v, int len) {
    Jet j;
    j.len = len;
    j.a[0] = v;
    return j;
}

Jet Jet::variable(double u, int len) {
    Jet j;
    j.len = len;
    j.a[0] = u;
    if (len > 1) j.a[1] = 1.0;
    return j;
}

double Jet::derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return a[static_cast<std::size_t>(k)] * fact;
}

Jet operator+(const Jet& x, const Jet& y) {
    Jet r;
    r.len = common_len(x, y);
    for (int k = 0; k < r.len; ++k) r.a[k] = x.a[k] + y.a[k];
    return r;
}

Jet operator-(const Jet& x, const Jet& y) {
    Jet r;
    r.len = common_len(x, y);
    for (int k = 0; k < r.len; ++k) r.a[k] = x.a[k] - y.a[k];
    return r;
}

Jet operator-(const Jet& x) {
    Jet r = x;
    for (int k = 0; k < r.len; ++k) r.a[k] = -r.a[k];
    return r;
}

Jet operator*(const Jet& x, const Jet& y) {
    Jet r;
    r.len = common_len(x, y);
    for (int k = 0; k < r.len; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += x.a[i] * y.a[k - i];
        r.a[k] = s;
    }
    return r;
}

Jet operator/(const Jet& x, const Jet& y) {
    if (y.a[0] == 0.0) domain_fail("division by zero");
    Jet r;
    r.len = common_len(x, y);
    for (int k = 0; k < r.len; ++k) {
        double s = x.a[k];
        for (int i = 0; i < k; ++i) s -= r.a[i] * y.a[k - i];
        r.a[k] = s / y.a[0];
    }
    return r;
}

Jet operator*(double c, const Jet& x) {
    Jet r = x;
    for (int k = 0; k < r.len; ++k) r.a[k] *= c;
    return r;
}

Jet operator+(const Jet& x, double c) {
    Jet r = x;
    r.a[0] += c;
    return r;
}

Jet operator-(const Jet& x, double c) {
    Jet r = x;
    r.a[0] -= c;
    return r;
}

Jet sqrt(const Jet& x) {
    if (x.a[0] <= 0.0) domain_fail("sqrt of non-positive value");
    Jet r;
    r.len = x.len;
    r.a[0] = std::sqrt(x.a[0]);
    for (int k = 1; k < r.len; ++k) {
        double s = x.a[k];
        for (int i = 1; i < k; ++i) s -= r.a[i] * r.a[k - i];
        r.a[k] = s / (2.0 * r.a[0]);
    }
    return r;
}

Jet exp(const Jet& x) {
    Jet r;
    r.len = x.len;
    r.a[0] = std::exp(x.a[0]);
    for (int k = 1; k < r.len; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += i * x.a[i] * r.a[k - i];
        r.a[k] = s / k;
    }
    return r;
}

Jet log(const Jet& x) {
    if (x.a[0] <= 0.0) domain_fail("log of non-positive value");
    Jet r;
    r.len = x.len;
    r.a[0] = std::log(x.a[0]);
    for (int k = 1; k < r.len; ++k) {
        double s = k * x.a[k];
        for (int i = 1; i < k; ++i) s -= i * r.a[i] * x.a[k - i];
        r.a[k] = s / (k * x.a[0]);
    }
    return r;
}

namespace {

void sincos_jet(const Jet& x, Jet& s, Jet& c) {
    s.len = c.len = x.len;
    s.a[0] = std::sin(x.a[0]);
    c.a[0] = std::cos(x.a[0]);
    for (int k = 1; k < x.len; ++k) {
        double as = 0.0, ac = 0.0;
        for (int i = 1; i <= k; ++i) {
            as += i * x.a[i] * c.a[k - i];
            ac -= i * x.a[i] * s.a[k - i];
        }
        s.a[k] = as / k;
        c.a[k] = ac / k;
    }
}

}  // namespace

Jet sin(const Jet& x) {
    Jet s, c;
    sincos_jet(x, s, c);
    return s;
}

Jet cos(const Jet& x) {
    Jet s, c;
    sincos_jet(x, s, c);
    return c;
}

Jet tan(const Jet& x) {
    Jet s, c;
    sincos_jet(x, s, c);
    if (c.a[0] == 0.0) domain_fail("tan at odd multiple of pi/2");
    return s / c;
}

Jet abs(const Jet& x) {
    if (x.a[0] > 0.0) return x;
    if (x.a[0] < 0.0) return -x;
    domain_fail("abs is not differentiable at 0");
}

Jet powi(const Jet& x, long long n) {
    if (n == 0) return Jet::constant(1.0, x.len);
    if (n < 0) return Jet::constant(1.0, x.len) / powi(x, -n);
    Jet base = x;
    Jet result = Jet::constant(1.0, x.len);
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

Jet pow(const Jet& x, double exponent) {
    if (exponent == std::floor(exponent) && std::abs(exponent) <= 64.0)
        return powi(x, static_cast<long long>(exponent));
    if (x.a[0] <= 0.0) domain_fail("pow of non-positive base with non-integer exponent");
    Jet r;
    r.len = x.len;
    r.a[0] = std::pow(x.a[0], exponent);
    for (int k = 1; k < r.len; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += (exponent * i - (k - i)) * x.a[i] * r.a[k - i];
        r.a[k] = s / (k * x.a[0]);
    }
    return r;
}

Jet shift_derivative(const Jet& x) {
    Jet r;
    r.len = x.len > 1 ? x.len - 1 : 1;
    if (x.len == 1) {
        r.a[0] = 0.0;
        return r;
    }
    for (int k = 0; k < r.len; ++k) r.a[k] = (k + 1) * x.a[k + 1];
    return r;
}

Vec3Jet Vec3Jet::constant(const Eigen::Vector3d& v, int len) {
    return {Jet::constant(v.x(), len), Jet::constant(v.y(), len), Jet::constant(v.z(), len)};
}

Vec3Jet operator+(const Vec3Jet& a, const Vec3Jet& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}

Vec3Jet operator-(const Vec3Jet& a, const Vec3Jet& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}

Vec3Jet operator*(const Jet& s, const Vec3Jet& a) { return {s * a.x, s * a.y, s * a.z}; }

Vec3Jet operator*(double s, const Vec3Jet& a) { return {s * a.x, s * a.y, s * a.z}; }

Jet dot(const Vec3Jet& a, const Vec3Jet& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3Jet cross(const Vec3Jet& a, const Vec3Jet& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

Jet norm(const Vec3Jet& a) { return sqrt(dot(a, a)); }

Vec3Jet shift_derivative(const Vec3Jet& a) {
    return {shift_derivative(a.x), shift_derivative(a.y), shift_derivative(a.z)};
}

}  // namespace knotbend
