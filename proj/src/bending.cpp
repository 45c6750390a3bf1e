#include "knotbend/bending.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace knotbend {

FieldRecipe FieldRecipe::normal_plane(expr::Expression p, expr::Expression q, const Vec3& z0) {
    FieldRecipe r;
    r.p = std::move(p);
    r.q = std::move(q);
    r.z0 = z0;
    return r;
}

FieldRecipe FieldRecipe::general(expr::Expression p1, expr::Expression p2, expr::Expression big_q,
                                 const Vec3& z0) {
    FieldRecipe r;
    r.p1 = std::move(p1);
    r.p2 = std::move(p2);
    r.big_q = std::move(big_q);
    r.z0 = z0;
    return r;
}

double FieldSource::closure_defect() const {
    return (value(period()) - value(0.0)).norm();
}

LinearFieldSource::LinearFieldSource(std::shared_ptr<const CurveSource> curve,
                                     const Eigen::Matrix3d& map, const Vec3& offset)
    : curve_(std::move(curve)), map_(map), offset_(offset) {}

Vec3Jet LinearFieldSource::field_jet(double u, int order) const {
    const Vec3Jet rj = curve_->position_jet(u, order);
    const int len = order + 1;
    Vec3Jet out{Jet::constant(offset_.x(), len), Jet::constant(offset_.y(), len),
                Jet::constant(offset_.z(), len)};
    const Jet* rc[3] = {&rj.x, &rj.y, &rj.z};
    Jet* oc[3] = {&out.x, &out.y, &out.z};
    for (int row = 0; row < 3; ++row)
        for (int col = 0; col < 3; ++col)
            for (int k = 0; k < len; ++k) oc[row]->a[k] += map_(row, col) * rc[col]->a[k];
    return out;
}

namespace {

// Bending-field source whose z is the integral of a frame-based integrand.
// The integrand and all its parameter derivatives are exact via jets; only
// the order-0 value comes from the quadrature table.
class IntegralFieldSource final : public FieldSource {
public:
    enum class Form { kNormalPlane, kGeneral };

    IntegralFieldSource(std::shared_ptr<const CurveSource> curve, Form form, expr::Expression a,
                        expr::Expression b, expr::Expression c, Vec3 z0, int table_n)
        : curve_(std::move(curve)), form_(form), fa_(std::move(a)), fb_(std::move(b)),
          fc_(std::move(c)) {
        std::vector<double> breakpoints(static_cast<std::size_t>(table_n) + 1);
        const double p = curve_->period();
        for (int i = 0; i <= table_n; ++i) breakpoints[i] = p * i / table_n;
        breakpoints.back() = p;
        integral_ = std::make_unique<CumulativeIntegralVec>(
            [this](double uu) { return integrand_jet(uu, 0).value(); }, std::move(breakpoints),
            z0);
    }

    Vec3Jet integrand_jet(double u, int order) const {
        const Vec3Jet rj = curve_->position_jet(u, order + 2);
        const Vec3Jet drj = shift_derivative(rj);
        const Vec3Jet ddrj = shift_derivative(drj);
        if (form_ == Form::kGeneral) {
            const Jet aj = expr::evaluate_jet(fa_, u, order);
            const Jet bj = expr::evaluate_jet(fb_, u, order);
            const Jet cj = expr::evaluate_jet(fc_, u, order);
            return aj * drj + bj * ddrj + cj * cross(drj, ddrj);
        }
        const Jet v = norm(drj);
        const Vec3Jet cr = cross(drj, ddrj);
        const Jet ncr = norm(cr);
        const Jet one = Jet::constant(1.0, v.len);
        const Vec3Jet n2 = (one / ncr) * cr;
        const Vec3Jet n1 = (one / (v * ncr)) * (dot(drj, drj) * ddrj - dot(drj, ddrj) * drj);
        const Jet pj = expr::evaluate_jet(fa_, u, order);
        const Jet qj = expr::evaluate_jet(fb_, u, order);
        return pj * n1 + qj * n2;
    }

    Vec3Jet field_jet(double u, int order) const override {
        const Vec3 zval = (*integral_)(u);
        const int len = order + 1;
        Vec3Jet out{Jet::constant(zval.x(), len), Jet::constant(zval.y(), len),
                    Jet::constant(zval.z(), len)};
        if (order == 0) return out;
        const Vec3Jet zd = integrand_jet(u, order - 1);
        const Jet* src[3] = {&zd.x, &zd.y, &zd.z};
        Jet* dst[3] = {&out.x, &out.y, &out.z};
        for (int axis = 0; axis < 3; ++axis)
            for (int k = 1; k <= order; ++k) dst[axis]->a[k] = src[axis]->a[k - 1] / k;
        return out;
    }

    double period() const override { return curve_->period(); }

private:
    std::shared_ptr<const CurveSource> curve_;
    Form form_;
    expr::Expression fa_, fb_, fc_;
    std::unique_ptr<CumulativeIntegralVec> integral_;
};

// A bent family member: r(u) + eps z(u).
class BentCurveSource final : public CurveSource {
public:
    BentCurveSource(std::shared_ptr<const CurveSource> base,
                    std::shared_ptr<const FieldSource> field, double eps)
        : base_(std::move(base)), field_(std::move(field)), eps_(eps) {}

    Vec3Jet position_jet(double u, int order) const override {
        return base_->position_jet(u, order) + eps_ * field_->field_jet(u, order);
    }

    double period() const override { return base_->period(); }

private:
    std::shared_ptr<const CurveSource> base_;
    std::shared_ptr<const FieldSource> field_;
    double eps_;
};

BendingField finish_field(const SampledCurve& c, std::shared_ptr<const FieldSource> source,
                          bool exact_pq_rate) {
    BendingField f;
    f.source = std::move(source);
    const std::size_t n = c.u.size();
    f.z.resize(n);
    f.zdot.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3Jet zj = f.source->field_jet(c.u[i], exact_pq_rate ? 0 : 1);
        f.z[i] = zj.value();
        if (!exact_pq_rate) f.zdot[i] = zj.derivative(1);
    }
    f.closure_defect = f.source->closure_defect();
    f.open_family = f.closure_defect > 1e-6 * c.length;
    return f;
}

void fill_residual(const SampledCurve& c, BendingField& f) {
    f.bending_residual = bending_residual(c, f);
    f.non_bending = f.bending_residual > 1e-8;
}

}  // namespace

BendingField field_from_pq(const SampledCurve& c, const FieldRecipe& recipe) {
    if (!recipe.is_normal_plane())
        throw std::invalid_argument("field_from_pq: recipe lacks p,q coefficients");
    auto source = std::make_shared<IntegralFieldSource>(
        c.source, IntegralFieldSource::Form::kNormalPlane, *recipe.p, *recipe.q,
        expr::number(0.0), recipe.z0, std::max(c.n, 64));
    BendingField f = finish_field(c, source, /*exact_pq_rate=*/true);
    // z' stored exactly as p n1 + q n2 on the curve's own frames.
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        const double pv = expr::evaluate(*recipe.p, c.u[i]);
        const double qv = expr::evaluate(*recipe.q, c.u[i]);
        f.zdot[i] = pv * c.norm1[i] + qv * c.norm2[i];
    }
    fill_residual(c, f);
    return f;
}

BendingField field_from_general(const SampledCurve& c, const FieldRecipe& recipe) {
    if (recipe.is_normal_plane() || !recipe.p1.has_value())
        throw std::invalid_argument("field_from_general: recipe lacks P1,P2,Q coefficients");
    auto source = std::make_shared<IntegralFieldSource>(
        c.source, IntegralFieldSource::Form::kGeneral, *recipe.p1, *recipe.p2, *recipe.big_q,
        recipe.z0, std::max(c.n, 64));
    BendingField f = finish_field(c, source, /*exact_pq_rate=*/true);
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        const double a = expr::evaluate(*recipe.p1, c.u[i]);
        const double b = expr::evaluate(*recipe.p2, c.u[i]);
        const double q = expr::evaluate(*recipe.big_q, c.u[i]);
        f.zdot[i] = a * c.dr[i] + b * c.ddr[i] + q * c.dr[i].cross(c.ddr[i]);
    }
    fill_residual(c, f);
    return f;
}

BendingField make_field(const SampledCurve& c, std::shared_ptr<const FieldSource> source) {
    BendingField f = finish_field(c, std::move(source), /*exact_pq_rate=*/false);
    fill_residual(c, f);
    return f;
}

double bending_residual(const SampledCurve& c, const BendingField& f) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        const double num = std::abs(c.dr[i].dot(f.zdot[i]));
        const double den = c.dr[i].norm() * f.zdot[i].norm() + 1e-300;
        worst = std::max(worst, num / den);
    }
    return worst;
}

SampledCurve bend(const SampledCurve& c, const BendingField& f, double eps) {
    if (f.z.size() != c.u.size())
        throw std::invalid_argument("bend: field was built on a different grid");
    if (eps == 0.0) return c;
    auto source = std::make_shared<BentCurveSource>(c.source, f.source, eps);
    SampledCurve out = sample_on_grid(std::move(source), c.u, c.grid_weight, false);
    out.bent_member = true;
    return out;
}

IsometryDefect isometry_defect(const SampledCurve& c, const BendingField& f, double eps) {
    if (f.bending_residual > 1e-8)
        throw std::invalid_argument("isometry_defect: field fails the bending condition");
    IsometryDefect d;
    if (eps == 0.0) return d;
    const SampledCurve bent = bend(c, f, eps);
    d.delta_length = bent.length - c.length;
    d.min_growth = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        const double growth = bent.speed[i] - c.speed[i];
        const double predicted = eps * eps * f.zdot[i].squaredNorm() / (2.0 * c.speed[i]);
        d.max_gap = std::max(d.max_gap, std::abs(growth - predicted));
        d.min_growth = std::min(d.min_growth, growth);
    }
    return d;
}

BendingField decompose_field(const SampledCurve& c, BendingField f) {
    if (!c.arclength_uniform)
        throw std::invalid_argument("decompose_field: curve must be arc-length resampled");
    if (f.z.size() != c.u.size())
        throw std::invalid_argument("decompose_field: field was built on a different grid");
    const std::size_t n = c.u.size();
    f.comp_t.resize(n);
    f.comp_n1.resize(n);
    f.comp_n2.resize(n);
    f.dt_s.resize(n);
    f.d1_s.resize(n);
    f.d1_ss.resize(n);
    f.d2_s.resize(n);
    f.d2_ss.resize(n);

    double max_z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const FrenetJets fr = frenet_jets(*c.source, c.u[i], 2);
        const Vec3Jet zj = f.source->field_jet(c.u[i], 2);
        const Jet zt = dot(zj, fr.t);
        const Jet z1 = dot(zj, fr.n1);
        const Jet z2 = dot(zj, fr.n2);
        f.comp_t[i] = zt.value();
        f.comp_n1[i] = z1.value();
        f.comp_n2[i] = z2.value();
        const Jet ztp = arc_derivative(zt, fr.v);
        const Jet z1p = arc_derivative(z1, fr.v);
        const Jet z2p = arc_derivative(z2, fr.v);
        f.dt_s[i] = ztp.value();
        f.d1_s[i] = z1p.value();
        f.d2_s[i] = z2p.value();
        f.d1_ss[i] = arc_derivative(z1p, fr.v).value();
        f.d2_ss[i] = arc_derivative(z2p, fr.v).value();
        max_z = std::max(max_z, f.z[i].norm());
    }

    // Theorem-2.4 check, independent route: second-order central differences
    // of the sampled tangential component against k z1. Seam samples are
    // skipped for open families (the periodic wrap is invalid there).
    const double ds = c.length / static_cast<double>(n);
    const bool wrap = f.closure_defect <= 1e-6 * c.length;
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!wrap && (i == 0 || i + 1 == n)) continue;
        const std::size_t prev = (i == 0) ? n - 1 : i - 1;
        const std::size_t next = (i + 1 == n) ? 0 : i + 1;
        const double fd = (f.comp_t[next] - f.comp_t[prev]) / (2.0 * ds);
        worst = std::max(worst, std::abs(fd - c.curv[i] * f.comp_n1[i]));
    }
    f.theorem24_residual = worst;
    f.theorem24_tol = 50.0 * max_z / (static_cast<double>(n) * static_cast<double>(n));
    f.theorem24_pass = worst <= f.theorem24_tol;
    f.decomposed = true;
    return f;
}

}  // namespace knotbend
