#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace knotbend {

using Vec3 = Eigen::Vector3d;

// Pairwise (cascade) summation: deterministic for a fixed element order and
// accurate to O(log n) ulps.
double pairwise_sum(std::span<const double> values);

// Composite Simpson over [a,b] with 8 equal subintervals (9 evaluations).
double simpson_panel(const std::function<double(double)>& f, double a, double b);
Vec3 simpson_panel(const std::function<Vec3(double)>& f, double a, double b);

// Cumulative integral of a smooth scalar function over a breakpoint grid.
// F(x_i) is tabulated with one Simpson panel per interval; values between
// breakpoints come from the table plus a partial panel, so the object can be
// queried anywhere in [x_front, x_back].
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, std::vector<double> breakpoints,
                       double initial_value = 0.0);

    double at_breakpoint(std::size_t i) const { return table_[i]; }
    double total() const { return table_.back(); }
    double operator()(double x) const;
    const std::vector<double>& breakpoints() const { return x_; }

private:
    std::function<double(double)> f_;
    std::vector<double> x_;
    std::vector<double> table_;
};

// Vector-valued counterpart used for bending-field integrals.
class CumulativeIntegralVec {
public:
    CumulativeIntegralVec(std::function<Vec3(double)> f, std::vector<double> breakpoints,
                          const Vec3& initial_value = Vec3::Zero());

    Vec3 at_breakpoint(std::size_t i) const { return table_[i]; }
    Vec3 total() const { return table_.back(); }
    Vec3 operator()(double x) const;

private:
    std::function<Vec3(double)> f_;
    std::vector<double> x_;
    std::vector<Vec3> table_;
};

// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of strictly
// increasing data. Used to invert arc-length tables without overshoot.
class MonotoneCubic {
public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

private:
    std::vector<double> x_, y_, slope_;
};

// Least-squares slope of log|err| vs log(eps); pairs with err <= floor are
// dropped. Returns +inf if fewer than two usable points remain (errors at
// rounding level count as converged).
double log_log_slope(std::span<const double> eps, std::span<const double> err,
                     double floor = 1e-14);

}  // namespace knotbend
