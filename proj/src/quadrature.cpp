#include "knotbend/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace knotbend {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

constexpr int kPanelSub = 8;  // Simpson subintervals per panel

template <typename T, typename F>
T simpson_panel_impl(const F& f, double a, double b, const T& zero) {
    const double h = (b - a) / kPanelSub;
    T acc = f(a) + f(b);
    for (int j = 1; j < kPanelSub; ++j) {
        const double w = (j % 2 == 1) ? 4.0 : 2.0;
        acc += w * f(a + j * h);
    }
    (void)zero;
    return (h / 3.0) * acc;
}

}  // namespace

double simpson_panel(const std::function<double(double)>& f, double a, double b) {
    return simpson_panel_impl<double>(f, a, b, 0.0);
}

Vec3 simpson_panel(const std::function<Vec3(double)>& f, double a, double b) {
    return simpson_panel_impl<Vec3>(f, a, b, Vec3::Zero().eval());
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       std::vector<double> breakpoints, double initial_value)
    : f_(std::move(f)), x_(std::move(breakpoints)) {
    if (x_.size() < 2) throw std::invalid_argument("CumulativeIntegral: need at least 2 breakpoints");
    table_.resize(x_.size());
    table_[0] = initial_value;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CumulativeIntegral: breakpoints must increase");
        table_[i] = table_[i - 1] + simpson_panel(f_, x_[i - 1], x_[i]);
    }
}

double CumulativeIntegral::operator()(double x) const {
    if (x <= x_.front()) return table_.front() - simpson_panel(f_, x, x_.front());
    if (x >= x_.back()) return table_.back() + simpson_panel(f_, x_.back(), x);
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    if (x == x_[i]) return table_[i];
    return table_[i] + simpson_panel(f_, x_[i], x);
}

CumulativeIntegralVec::CumulativeIntegralVec(std::function<Vec3(double)> f,
                                             std::vector<double> breakpoints,
                                             const Vec3& initial_value)
    : f_(std::move(f)), x_(std::move(breakpoints)) {
    if (x_.size() < 2) throw std::invalid_argument("CumulativeIntegralVec: need at least 2 breakpoints");
    table_.resize(x_.size());
    table_[0] = initial_value;
    for (std::size_t i = 1; i < x_.size(); ++i) {
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CumulativeIntegralVec: breakpoints must increase");
        table_[i] = table_[i - 1] + simpson_panel(f_, x_[i - 1], x_[i]);
    }
}

Vec3 CumulativeIntegralVec::operator()(double x) const {
    if (x <= x_.front()) return table_.front() - simpson_panel(f_, x, x_.front());
    if (x >= x_.back()) return table_.back() + simpson_panel(f_, x_.back(), x);
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    if (x == x_[i]) return table_[i];
    return table_[i] + simpson_panel(f_, x_[i], x);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("MonotoneCubic: bad data");
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double dx = x_[i + 1] - x_[i];
        if (!(dx > 0)) throw std::invalid_argument("MonotoneCubic: x must increase");
        d[i] = (y_[i + 1] - y_[i]) / dx;
    }
    slope_.resize(n);
    slope_[0] = d[0];
    slope_[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0) {
            slope_[i] = 0.0;
        } else {
            // Fritsch-Carlson weighted harmonic mean keeps the cubic monotone.
            const double w1 = 2 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
            const double w2 = (x_[i + 1] - x_[i]) + 2 * (x_[i] - x_[i - 1]);
            slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // Clamp endpoint slopes (standard PCHIP endpoint treatment).
    for (std::size_t i : {std::size_t{0}, n - 1}) {
        const double di = (i == 0) ? d[0] : d[n - 2];
        if (slope_[i] * di <= 0)
            slope_[i] = 0.0;
        else if (std::abs(slope_[i]) > 3 * std::abs(di))
            slope_[i] = 3 * di;
    }
}

double MonotoneCubic::operator()(double x) const {
    const std::size_t n = x_.size();
    if (x <= x_.front()) return y_.front() + slope_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + slope_.back() * (x - x_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    (void)n;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

double log_log_slope(std::span<const double> eps, std::span<const double> err, double floor) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (err[i] > floor) {
            lx.push_back(std::log(eps[i]));
            ly.push_back(std::log(err[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::infinity();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    return num / den;
}

}  // namespace knotbend
