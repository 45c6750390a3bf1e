#include "knotbend/energy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "knotbend/variation.hpp"

namespace knotbend {

NotClosedError::NotClosedError(double gap)
    : std::runtime_error("curve is not closed: |r(0) - r(period)| = " + std::to_string(gap)),
      gap_(gap) {}

NotClosedError::NotClosedError(double gap, const std::string& what)
    : std::runtime_error(what), gap_(gap) {}

SelfIntersectionError::SelfIntersectionError(std::size_t i, std::size_t j, double chord)
    : std::runtime_error("near self-intersection between samples " + std::to_string(i) + " and " +
                         std::to_string(j) + ": chord = " + std::to_string(chord)),
      i_(i),
      j_(j),
      chord_(chord) {}

double min_nonadjacent_chord(const SampledCurve& c, int guard_divisor, std::size_t* out_i,
                             std::size_t* out_j) {
    const std::size_t n = c.r.size();
    const std::size_t guard = n / static_cast<std::size_t>(guard_divisor);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const std::size_t sep = std::min(j - i, n - (j - i));
            if (sep <= guard) continue;
            const double d = (c.r[i] - c.r[j]).norm();
            if (d < best) {
                best = d;
                if (out_i) *out_i = i;
                if (out_j) *out_j = j;
            }
        }
    }
    return best;
}

namespace {

constexpr double kClosureTol = 1e-8;
constexpr double kEmbedTol = 1e-6;

void require_base_closed(const SampledCurve& c) {
    if (!c.closed(kClosureTol) && !c.bent_member) throw NotClosedError(c.closure_gap);
}

// Closed-integral of a ds-density given per sample, with the trapezoid
// endpoint correction (exactly zero when the integrand is periodic). The
// grid variable has a uniform step: u for parameter grids, s for arc-length
// grids.
double arc_integral(const SampledCurve& c, std::span<const double> density, double density_0,
                    double density_period) {
    const std::size_t n = c.u.size();
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = density[i] * c.speed[i] * c.grid_weight[i];
    double corr;
    if (c.arclength_uniform) {
        const double ds = c.length / static_cast<double>(n);
        corr = 0.5 * ds * (density_period - density_0);
    } else {
        const double du = c.period / static_cast<double>(n);
        corr = 0.5 * du *
               (density_period * c.source->speed(c.period) - density_0 * c.speed[0]);
    }
    return pairwise_sum(terms) + corr;
}

// Deterministic row-parallel double sum: each row is pairwise-summed in
// index order, rows are pairwise-reduced in index order, so the result is
// independent of the thread count.
double double_sum_rows(std::size_t n, const std::function<double(std::size_t, std::size_t)>& term) {
    std::vector<double> row_sums(n);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(hw, n));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            std::vector<double> row(n);
            for (std::size_t i = begin; i < end; ++i) {
                for (std::size_t j = 0; j < n; ++j) row[j] = term(i, j);
                row_sums[i] = pairwise_sum(row);
            }
        });
    }
    for (auto& th : pool) th.join();
    return pairwise_sum(row_sums);
}

void require_mobius_grid(const SampledCurve& c) {
    if (!c.arclength_uniform)
        throw std::invalid_argument("mobius: curve must be arc-length resampled");
    if (!c.closed(kClosureTol)) throw NotClosedError(c.closure_gap);
    std::size_t i = 0, j = 0;
    const double chord = min_nonadjacent_chord(c, 32, &i, &j);
    if (chord < kEmbedTol) throw SelfIntersectionError(i, j, chord);
}

double mobius_value(const SampledCurve& c, std::size_t stride) {
    const std::size_t n = c.u.size() / stride;
    const double ds = c.length / static_cast<double>(n);
    const double L = c.length;
    auto kernel = [&](std::size_t bi, std::size_t bj) {
        const std::size_t i = bi * stride, j = bj * stride;
        if (bi == bj) {
            const double k = c.curv[i];
            return k * k / 12.0;
        }
        const double chord2 = (c.r[i] - c.r[j]).squaredNorm();
        const double dsig = std::abs(c.sigma[i] - c.sigma[j]);
        const double l = std::min(dsig, L - dsig);
        return 1.0 / chord2 - 1.0 / (l * l);
    };
    return ds * ds * double_sum_rows(n, kernel);
}

}  // namespace

EnergyValue willmore(const SampledCurve& c) {
    require_base_closed(c);
    const std::size_t n = c.u.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i) density[i] = 0.5 * c.curv[i] * c.curv[i];
    const double k0 = c.curv[0];
    const double kp = frenet_jets(*c.source, c.period, 0).curv.value();
    EnergyValue e;
    e.kind = EnergyKind::kWillmore;
    e.samples = static_cast<int>(n);
    e.value = arc_integral(c, density, 0.5 * k0 * k0, 0.5 * kp * kp);

    // Refinement diagnostic on the half grid.
    if (n % 2 == 0 && n >= 64) {
        std::vector<double> half_terms(n / 2);
        for (std::size_t i = 0; i < n / 2; ++i)
            half_terms[i] = density[2 * i] * c.speed[2 * i] * 2.0 * c.grid_weight[2 * i];
        double corr;
        if (c.arclength_uniform)
            corr = 0.5 * (2.0 * c.length / static_cast<double>(n)) * (0.5 * kp * kp - 0.5 * k0 * k0);
        else
            corr = 0.5 * (2.0 * c.period / static_cast<double>(n)) *
                   (0.5 * kp * kp * c.source->speed(c.period) - 0.5 * k0 * k0 * c.speed[0]);
        e.refinement_delta = std::abs(e.value - (pairwise_sum(half_terms) + corr));
    }
    return e;
}

EnergyVariation willmore_variation_direct(const SampledCurve& c, const BendingField& f) {
    require_base_closed(c);
    const std::size_t n = c.u.size();
    std::vector<double> density(n);
    const std::vector<double> dk = delta_curvature(c, f);
    for (std::size_t i = 0; i < n; ++i) density[i] = c.curv[i] * dk[i];
    const double d0 = c.curv[0] * dk[0];
    const double dP = frenet_jets(*c.source, c.period, 0).curv.value() *
                      delta_curvature_at(*c.source, *f.source, c.period);
    EnergyVariation v;
    v.kind = EnergyKind::kWillmore;
    v.value = arc_integral(c, density, d0, dP);
    v.interior = v.value;
    return v;
}

namespace {

struct TheoremPoint {
    double interior;  // (k'' + k^3/2 - k tau^2) z1 + (2 k' tau + k tau') z2
    double boundary;  // k^2 z /2 - k' z1 + k z1' - 2 k tau z2
};

TheoremPoint theorem_point(const CurveSource& curve, const FieldSource& field, double u) {
    const FrenetJets fr = frenet_jets(curve, u, 2);
    const Vec3Jet zj = field.field_jet(u, 2);
    const double k = fr.curv.value();
    const double tau = fr.tors.value();
    const Jet kp_jet = arc_derivative(fr.curv, fr.v);
    const double kp = kp_jet.value();
    const double kpp = arc_derivative(kp_jet, fr.v).value();
    const double taup = arc_derivative(fr.tors, fr.v).value();
    const double zt = dot(zj, fr.t).value();
    const Jet z1_jet = dot(zj, fr.n1);
    const double z1 = z1_jet.value();
    const double z1p = arc_derivative(z1_jet, fr.v).value();
    const double z2 = dot(zj, fr.n2).value();
    TheoremPoint p;
    p.interior = (kpp + 0.5 * k * k * k - k * tau * tau) * z1 + (2.0 * kp * tau + k * taup) * z2;
    p.boundary = 0.5 * k * k * zt - kp * z1 + k * z1p - 2.0 * k * tau * z2;
    return p;
}

}  // namespace

EnergyVariation willmore_variation_theorem(const SampledCurve& c, const BendingField& f) {
    require_base_closed(c);
    if (f.z.size() != c.u.size())
        throw std::invalid_argument("willmore_variation_theorem: field grid mismatch");
    const std::size_t n = c.u.size();
    std::vector<double> density(n);
    for (std::size_t i = 0; i < n; ++i)
        density[i] = theorem_point(*c.source, *f.source, c.u[i]).interior;
    const TheoremPoint p0 = theorem_point(*c.source, *f.source, 0.0);
    const TheoremPoint pP = theorem_point(*c.source, *f.source, c.period);
    EnergyVariation v;
    v.kind = EnergyKind::kWillmore;
    v.interior = arc_integral(c, density, p0.interior, pP.interior);
    v.boundary = pP.boundary - p0.boundary;
    v.value = v.interior + v.boundary;
    return v;
}

EnergyValue mobius(const SampledCurve& c) {
    require_mobius_grid(c);
    EnergyValue e;
    e.kind = EnergyKind::kMobius;
    e.samples = static_cast<int>(c.u.size());
    e.value = mobius_value(c, 1);
    if (c.u.size() % 2 == 0 && c.u.size() >= 64)
        e.refinement_delta = std::abs(e.value - mobius_value(c, 2));
    return e;
}

EnergyVariation mobius_variation(const SampledCurve& c, const BendingField& f) {
    require_mobius_grid(c);
    if (f.z.size() != c.u.size())
        throw std::invalid_argument("mobius_variation: field grid mismatch");
    if (f.bending_residual > 1e-8)
        throw std::invalid_argument("mobius_variation: field fails the bending condition");
    // The variation formula assumes a family of closed knots; an open field
    // makes z jump across the seam and the near-diagonal kernel divergent.
    if (f.open_family)
        throw NotClosedError(f.closure_defect,
                             "mobius_variation: bending field is open (|z(L) - z(0)| = " +
                                 std::to_string(f.closure_defect) + ")");
    const std::size_t n = c.u.size();
    const double ds = c.length / static_cast<double>(n);
    const std::vector<double> dk = delta_curvature(c, f);

    auto kernel = [&](std::size_t i, std::size_t j) {
        if (i == j) return c.curv[i] * dk[i] / 6.0;
        const Vec3 dr = c.r[j] - c.r[i];
        const Vec3 dz = f.z[i] - f.z[j];
        const double d2 = dr.squaredNorm();
        return 2.0 * dr.dot(dz) / (d2 * d2);
    };

    EnergyVariation v;
    v.kind = EnergyKind::kMobius;
    v.value = ds * ds * double_sum_rows(n, kernel);

    double asym = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            asym = std::max(asym, std::abs(kernel(i, j) - kernel(j, i)));
    v.symmetry_error = asym;
    return v;
}

namespace {

// Mobius energy on the curve's material grid (per-sample arc weights, arc
// distances from the curve's own sigma table). Equals the resampled form up
// to O(N^-2); used by the oracle so bent members share the base pair
// structure and the grid error cancels in the eps-difference.
double mobius_material(const SampledCurve& c) {
    const std::size_t n = c.u.size();
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c.speed[i] * c.grid_weight[i];
    const double L = c.length;
    auto kernel = [&](std::size_t i, std::size_t j) {
        if (i == j) return c.curv[i] * c.curv[i] / 12.0 * w[i] * w[i];
        const double chord2 = (c.r[i] - c.r[j]).squaredNorm();
        const double dsig = std::abs(c.sigma[i] - c.sigma[j]);
        const double l = std::min(dsig, L - dsig);
        return (1.0 / chord2 - 1.0 / (l * l)) * w[i] * w[j];
    };
    return double_sum_rows(n, kernel);
}

}  // namespace

EnergyOracle fd_energy_variation(EnergyKind kind, const SampledCurve& c, const BendingField& f,
                                 std::span<const double> eps_list) {
    EnergyOracle o;
    o.kind = kind;

    auto measure = [&](double eps) -> double {
        if (eps == 0.0)
            return kind == EnergyKind::kWillmore ? willmore(c).value : mobius_material(c);
        const SampledCurve member = bend(c, f, eps);
        return kind == EnergyKind::kWillmore ? willmore(member).value : mobius_material(member);
    };

    // The direct forms are the discretization-consistent references: they
    // are the exact eps-derivatives of the discrete energies above.
    o.analytic = kind == EnergyKind::kWillmore ? willmore_variation_direct(c, f).value
                                               : mobius_variation(c, f).value;
    const double base = measure(0.0);
    for (double eps : eps_list) {
        const double plus = measure(eps);
        const double minus = measure(-eps);
        o.eps.push_back(eps);
        o.central.push_back((plus - minus) / (2 * eps));
        o.one_sided.push_back((plus - base) / eps);
        o.discrepancy.push_back(std::abs(o.central.back() - o.analytic));
    }
    o.slope = log_log_slope(o.eps, o.discrepancy);
    return o;
}

}  // namespace knotbend
