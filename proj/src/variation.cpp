#include "knotbend/variation.hpp"

#include <cmath>
#include <stdexcept>

namespace knotbend {

namespace {

// Shared per-point state for the delta formulas: component jets and the
// scalar jets of k, tau, v at one parameter value.
struct PointState {
    FrenetJets fr;
    Jet zt, z1, z2;  // z.t, z.n1, z.n2
    Jet z1p, z2p;    // first arc-length derivatives
    Jet z1pp, z2pp;  // second arc-length derivatives
    double ztv = 0, z1v = 0, z2v = 0;
    double z1pv = 0, z2pv = 0, z1ppv = 0, z2ppv = 0;
    double kv = 0, tv = 0, kpv = 0, tpv = 0;
};

PointState make_state(const CurveSource& curve, const FieldSource& field, double u) {
    PointState s;
    s.fr = frenet_jets(curve, u, 3);
    const Vec3Jet zj = field.field_jet(u, 3);
    s.zt = dot(zj, s.fr.t);
    s.z1 = dot(zj, s.fr.n1);
    s.z2 = dot(zj, s.fr.n2);
    s.z1p = arc_derivative(s.z1, s.fr.v);
    s.z2p = arc_derivative(s.z2, s.fr.v);
    s.z1pp = arc_derivative(s.z1p, s.fr.v);
    s.z2pp = arc_derivative(s.z2p, s.fr.v);
    s.ztv = s.zt.value();
    s.z1v = s.z1.value();
    s.z2v = s.z2.value();
    s.z1pv = s.z1p.value();
    s.z2pv = s.z2p.value();
    s.z1ppv = s.z1pp.value();
    s.z2ppv = s.z2pp.value();
    s.kv = s.fr.curv.value();
    s.tv = s.fr.tors.value();
    s.kpv = arc_derivative(s.fr.curv, s.fr.v).value();
    s.tpv = arc_derivative(s.fr.tors, s.fr.v).value();
    return s;
}

void check_inputs(const SampledCurve& c, const BendingField& f) {
    if (!c.arclength_uniform)
        throw std::invalid_argument("variations: curve must be arc-length resampled");
    if (f.z.size() != c.u.size())
        throw std::invalid_argument("variations: field was built on a different grid");
    if (f.bending_residual > 1e-8)
        throw std::invalid_argument("variations: field fails the bending condition");
}

}  // namespace

double delta_curvature_at(const CurveSource& curve, const FieldSource& field, double u) {
    const PointState s = make_state(curve, field, u);
    return s.kpv * s.ztv + s.z1ppv + (s.kv * s.kv - s.tv * s.tv) * s.z1v - 2.0 * s.tv * s.z2pv -
           s.tpv * s.z2v;
}

double delta_torsion_at(const CurveSource& curve, const FieldSource& field, double u) {
    const PointState s = make_state(curve, field, u);
    // bracket = (2 tau z1' + tau' z1 + z2'' - tau^2 z2)/k, differentiated in s
    const Jet taup = arc_derivative(s.fr.tors, s.fr.v);
    const Jet bracket =
        (2.0 * (s.fr.tors * s.z1p) + taup * s.z1 + s.z2pp - s.fr.tors * s.fr.tors * s.z2) /
        s.fr.curv;
    const double bracket_prime = arc_derivative(bracket, s.fr.v).value();
    return s.ztv * s.tpv + s.kv * (s.z2pv + 2.0 * s.tv * s.z1v) + bracket_prime;
}

Vec3 delta_tangent_at(const CurveSource& curve, const FieldSource& field, double u) {
    const PointState s = make_state(curve, field, u);
    const Vec3 n1 = s.fr.n1.value();
    const Vec3 n2 = s.fr.n2.value();
    return (s.z1pv - s.tv * s.z2v + s.kv * s.ztv) * n1 + (s.z2pv + s.tv * s.z1v) * n2;
}

std::pair<Vec3, Vec3> delta_normals_at(const CurveSource& curve, const FieldSource& field,
                                       double u) {
    const PointState s = make_state(curve, field, u);
    const Vec3 t = s.fr.t.value();
    const Vec3 n1 = s.fr.n1.value();
    const Vec3 n2 = s.fr.n2.value();
    const double bracket = (s.kv * s.tv * s.ztv + s.z2ppv - s.tv * s.tv * s.z2v +
                            2.0 * s.tv * s.z1pv + s.tpv * s.z1v) /
                           s.kv;
    const Vec3 dn1 = -(s.kv * s.ztv + s.z1pv - s.tv * s.z2v) * t + bracket * n2;
    const Vec3 dn2 = -(s.z2pv + s.tv * s.z1v) * t - bracket * n1;
    return {dn1, dn2};
}

std::vector<Vec3> delta_tangent(const SampledCurve& c, const BendingField& f) {
    check_inputs(c, f);
    std::vector<Vec3> out(c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i)
        out[i] = delta_tangent_at(*c.source, *f.source, c.u[i]);
    return out;
}

std::vector<double> delta_curvature(const SampledCurve& c, const BendingField& f) {
    check_inputs(c, f);
    std::vector<double> out(c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i)
        out[i] = delta_curvature_at(*c.source, *f.source, c.u[i]);
    return out;
}

std::vector<double> delta_torsion(const SampledCurve& c, const BendingField& f) {
    check_inputs(c, f);
    std::vector<double> out(c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i)
        out[i] = delta_torsion_at(*c.source, *f.source, c.u[i]);
    return out;
}

std::pair<std::vector<Vec3>, std::vector<Vec3>> delta_normals(const SampledCurve& c,
                                                              const BendingField& f) {
    check_inputs(c, f);
    std::vector<Vec3> dn1(c.u.size()), dn2(c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        const auto [a, b] = delta_normals_at(*c.source, *f.source, c.u[i]);
        dn1[i] = a;
        dn2[i] = b;
    }
    return {std::move(dn1), std::move(dn2)};
}

DeformedMagnitudes deformed_magnitudes(const SampledCurve& c, const BendingField& f, double eps) {
    check_inputs(c, f);
    DeformedMagnitudes m;
    const std::size_t n = c.u.size();
    m.curv.resize(n);
    m.tors.resize(n);
    m.tang.resize(n);
    m.norm1.resize(n);
    m.norm2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        m.curv[i] = c.curv[i] + eps * delta_curvature_at(*c.source, *f.source, c.u[i]);
        m.tors[i] = c.tors[i] + eps * delta_torsion_at(*c.source, *f.source, c.u[i]);
        m.tang[i] = c.tang[i] + eps * delta_tangent_at(*c.source, *f.source, c.u[i]);
        const auto [dn1, dn2] = delta_normals_at(*c.source, *f.source, c.u[i]);
        m.norm1[i] = c.norm1[i] + eps * dn1;
        m.norm2[i] = c.norm2[i] + eps * dn2;
    }
    return m;
}

VariationReport fd_variation(VarQuantity quantity, const SampledCurve& c, const BendingField& f,
                             std::span<const double> eps_list) {
    check_inputs(c, f);
    if (eps_list.size() < 3)
        throw std::invalid_argument("fd_variation: need at least 3 eps values");

    const std::size_t n = c.u.size();

    // Analytic side.
    std::vector<double> scalar;
    std::vector<Vec3> vectorial;
    switch (quantity) {
        case VarQuantity::kCurvature: scalar = delta_curvature(c, f); break;
        case VarQuantity::kTorsion: scalar = delta_torsion(c, f); break;
        case VarQuantity::kTangent: vectorial = delta_tangent(c, f); break;
        case VarQuantity::kNormal1: vectorial = delta_normals(c, f).first; break;
        case VarQuantity::kNormal2: vectorial = delta_normals(c, f).second; break;
        case VarQuantity::kLineElement: scalar.assign(n, 0.0); break;
    }

    VariationReport report;
    report.quantity = quantity;
    for (std::size_t i = 0; i < n; ++i) {
        if (!scalar.empty())
            report.analytic_max_abs = std::max(report.analytic_max_abs, std::abs(scalar[i]));
        else
            report.analytic_max_abs = std::max(report.analytic_max_abs, vectorial[i].norm());
    }

    for (double eps : eps_list) {
        const SampledCurve plus = bend(c, f, eps);
        const SampledCurve minus = bend(c, f, -eps);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            switch (quantity) {
                case VarQuantity::kCurvature: {
                    const double fd = (plus.curv[i] - minus.curv[i]) / (2 * eps);
                    worst = std::max(worst, std::abs(fd - scalar[i]));
                    break;
                }
                case VarQuantity::kTorsion: {
                    const double fd = (plus.tors[i] - minus.tors[i]) / (2 * eps);
                    worst = std::max(worst, std::abs(fd - scalar[i]));
                    break;
                }
                case VarQuantity::kTangent: {
                    const Vec3 fd = (plus.tang[i] - minus.tang[i]) / (2 * eps);
                    worst = std::max(worst, (fd - vectorial[i]).norm());
                    break;
                }
                case VarQuantity::kNormal1: {
                    const Vec3 fd = (plus.norm1[i] - minus.norm1[i]) / (2 * eps);
                    worst = std::max(worst, (fd - vectorial[i]).norm());
                    break;
                }
                case VarQuantity::kNormal2: {
                    const Vec3 fd = (plus.norm2[i] - minus.norm2[i]) / (2 * eps);
                    worst = std::max(worst, (fd - vectorial[i]).norm());
                    break;
                }
                case VarQuantity::kLineElement: {
                    const double fd = (plus.speed[i] - minus.speed[i]) / (2 * eps);
                    worst = std::max(worst, std::abs(fd));
                    break;
                }
            }
        }
        report.eps.push_back(eps);
        report.max_discrepancy.push_back(worst);
    }
    report.slope = log_log_slope(report.eps, report.max_discrepancy);
    return report;
}

}  // namespace knotbend
