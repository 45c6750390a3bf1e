#include "knotbend/curve.hpp"

#include <algorithm>
#include <cmath>

namespace knotbend {

namespace {

constexpr double kBiregularFloor = 1e-9;

const char* kind_name(GeometryError::Kind k) {
    switch (k) {
        case GeometryError::Kind::kNonBiregular: return "non-biregular";
        case GeometryError::Kind::kCurvatureVanishes: return "curvature-vanishes";
        case GeometryError::Kind::kDomain: return "domain";
    }
    return "?";
}

}  // namespace

GeometryError::GeometryError(Kind kind, std::size_t index, double diagnostic,
                             const std::string& detail)
    : std::runtime_error("geometry error (" + std::string(kind_name(kind)) + ") at sample " +
                         std::to_string(index) + ": " + detail),
      kind_(kind),
      index_(index),
      diagnostic_(diagnostic) {}

double CurveSource::speed(double u) const {
    const Vec3Jet j = position_jet(u, 1);
    return j.derivative(1).norm();
}

SymbolicCurveSource::SymbolicCurveSource(CurveDefinition def) : def_(std::move(def)) {
    const expr::Expression* comp[3] = {&def_.x, &def_.y, &def_.z};
    for (int axis = 0; axis < 3; ++axis) {
        d_[axis][0] = expr::differentiate(*comp[axis]);
        d_[axis][1] = expr::differentiate(d_[axis][0]);
        d_[axis][2] = expr::differentiate(d_[axis][1]);
    }
}

Vec3Jet SymbolicCurveSource::position_jet(double u, int order) const {
    const int len = order + 1;
    const expr::Expression* comp[3] = {&def_.x, &def_.y, &def_.z};
    Vec3Jet out{Jet::constant(0, len), Jet::constant(0, len), Jet::constant(0, len)};
    Jet* axes[3] = {&out.x, &out.y, &out.z};
    for (int axis = 0; axis < 3; ++axis) {
        Jet& j = *axes[axis];
        j.a[0] = expr::evaluate(*comp[axis], u);
        double fact = 1.0;
        for (int k = 1; k <= order && k <= 3; ++k) {
            fact *= k;
            j.a[k] = expr::evaluate(d_[axis][k - 1], u) / fact;
        }
        if (order > 3) {
            // Extend past the stored symbolic derivatives with a jet of the
            // third-derivative expression.
            const Jet tail = expr::evaluate_jet(d_[axis][2], u, order - 3);
            double jfact = 1.0;   // j!
            double kfact = fact;  // (3+j)!
            for (int j3 = 1; j3 <= order - 3; ++j3) {
                jfact *= j3;
                kfact *= (3 + j3);
                j.a[3 + j3] = tail.a[j3] * jfact / kfact;
            }
        }
    }
    return out;
}

FrenetJets frenet_jets(const CurveSource& source, double u, int order) {
    const Vec3Jet rj = source.position_jet(u, order + 3);
    const Vec3Jet drj = shift_derivative(rj);
    const Vec3Jet ddrj = shift_derivative(drj);
    const Vec3Jet dddrj = shift_derivative(ddrj);

    FrenetJets f;
    f.v = norm(drj);
    const Vec3Jet cr = cross(drj, ddrj);
    const Jet ncr = norm(cr);
    const Jet v3 = f.v * f.v * f.v;
    f.curv = ncr / v3;
    f.tors = dot(cr, dddrj) / dot(cr, cr);
    const Jet inv_v = Jet::constant(1.0, f.v.len) / f.v;
    f.t = inv_v * drj;
    f.n2 = (Jet::constant(1.0, ncr.len) / ncr) * cr;
    // n1 = ((dr.dr) ddr - (dr.ddr) dr) / (|dr| |dr x ddr|)
    const Vec3Jet n1_num = dot(drj, drj) * ddrj - dot(drj, ddrj) * drj;
    f.n1 = (Jet::constant(1.0, f.v.len) / (f.v * ncr)) * n1_num;
    return f;
}

Jet arc_derivative(const Jet& f, const Jet& v) { return shift_derivative(f) / v; }

namespace {

void fill_frenet_arrays(SampledCurve& c) {
    const std::size_t n = c.u.size();
    c.speed.resize(n);
    c.curv.resize(n);
    c.tors.resize(n);
    c.tang.resize(n);
    c.norm1.resize(n);
    c.norm2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = c.dr[i].norm();
        const Vec3 cr = c.dr[i].cross(c.ddr[i]);
        const double ncr = cr.norm();
        if (v < kBiregularFloor || ncr < kBiregularFloor)
            throw GeometryError(GeometryError::Kind::kNonBiregular, i, std::min(v, ncr),
                                "|r'| or |r' x r''| below 1e-9");
        c.speed[i] = v;
        c.curv[i] = ncr / (v * v * v);
        c.tors[i] = cr.dot(c.dddr[i]) / (ncr * ncr);
        c.tang[i] = c.dr[i] / v;
        c.norm2[i] = cr / ncr;
        c.norm1[i] = ((c.dr[i].dot(c.dr[i])) * c.ddr[i] - (c.dr[i].dot(c.ddr[i])) * c.dr[i]) /
                     (v * ncr);
    }
}

void fill_arclength(SampledCurve& c) {
    const auto source = c.source;
    std::vector<double> breakpoints = c.u;
    breakpoints.push_back(c.period);
    auto arclen = std::make_shared<CumulativeIntegral>(
        [source](double uu) { return source->speed(uu); }, std::move(breakpoints), 0.0);
    c.sigma.resize(c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i) c.sigma[i] = arclen->at_breakpoint(i);
    c.length = arclen->total();
    c.arclen = std::move(arclen);
}

}  // namespace

SampledCurve sample_on_grid(std::shared_ptr<const CurveSource> source, std::vector<double> grid,
                            std::vector<double> weights, bool arclength_uniform) {
    SampledCurve c;
    c.source = std::move(source);
    c.period = c.source->period();
    c.n = static_cast<int>(grid.size());
    c.arclength_uniform = arclength_uniform;
    c.u = std::move(grid);
    c.grid_weight = std::move(weights);

    const std::size_t n = c.u.size();
    c.r.resize(n);
    c.dr.resize(n);
    c.ddr.resize(n);
    c.dddr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        try {
            const Vec3Jet j = c.source->position_jet(c.u[i], 3);
            c.r[i] = j.value();
            c.dr[i] = j.derivative(1);
            c.ddr[i] = j.derivative(2);
            c.dddr[i] = j.derivative(3);
        } catch (const expr::EvalError& err) {
            throw GeometryError(GeometryError::Kind::kDomain, i, c.u[i], err.what());
        }
    }
    fill_frenet_arrays(c);
    fill_arclength(c);
    c.closure_gap = (c.source->position(0.0) - c.source->position(c.period)).norm();
    return c;
}

SampledCurve sample_curve(const CurveDefinition& def, int n) {
    if (n < 32 || n % 2 != 0)
        throw std::invalid_argument("sample_curve: n must be even and >= 32");
    if (!(def.period > 0.0)) throw std::invalid_argument("sample_curve: period must be positive");
    auto source = std::make_shared<SymbolicCurveSource>(def);
    std::vector<double> grid(static_cast<std::size_t>(n));
    std::vector<double> weights(static_cast<std::size_t>(n), def.period / n);
    for (int i = 0; i < n; ++i) grid[i] = def.period * i / n;
    return sample_on_grid(std::move(source), std::move(grid), std::move(weights), false);
}

SampledCurve resample_by_arclength(const SampledCurve& c, int m) {
    if (m < 32 || m % 2 != 0)
        throw std::invalid_argument("resample_by_arclength: m must be even and >= 32");
    if (!c.source || !c.arclen)
        throw std::invalid_argument("resample_by_arclength: curve lacks a source");

    // Monotone inverse of sigma for initial guesses, then Newton on
    // sigma(u) - s with the exact integrand.
    std::vector<double> sig = c.sigma;
    std::vector<double> upar = c.u;
    sig.push_back(c.length);
    upar.push_back(c.period);
    MonotoneCubic inverse(sig, upar);

    const double L = c.length;
    const auto& arclen = *c.arclen;
    const auto source = c.source;

    std::vector<double> grid(static_cast<std::size_t>(m));
    std::vector<double> weights(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        const double s = L * j / m;
        double uu = (j == 0) ? 0.0 : inverse(s);
        for (int it = 0; it < 4 && j != 0; ++it) {
            const double f = arclen(uu) - s;
            const double v = source->speed(uu);
            uu -= f / v;
            uu = std::clamp(uu, 0.0, c.period);
        }
        grid[j] = uu;
    }
    for (int j = 0; j < m; ++j) weights[j] = (L / m) / source->speed(grid[j]);

    SampledCurve out = sample_on_grid(source, std::move(grid), std::move(weights), true);
    out.bent_member = c.bent_member;
    return out;
}

double curvature(const SampledCurve& c, std::size_t i) { return c.curv.at(i); }

double torsion(const SampledCurve& c, std::size_t i) { return c.tors.at(i); }

Frame frenet_frame(const SampledCurve& c, std::size_t i) {
    const double ncr = c.dr.at(i).cross(c.ddr.at(i)).norm();
    if (ncr < kBiregularFloor)
        throw GeometryError(GeometryError::Kind::kCurvatureVanishes, i, ncr,
                            "|r' x r''| below 1e-9");
    return Frame{c.tang[i], c.norm1[i], c.norm2[i]};
}

double arc_distance(const SampledCurve& c, std::size_t i, std::size_t j) {
    const double d = std::abs(c.sigma.at(i) - c.sigma.at(j));
    return std::min(d, c.length - d);
}

}  // namespace knotbend
