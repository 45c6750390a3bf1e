#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "knotbend/curve.hpp"

namespace knotbend {

// Coefficient functions for a bending-field construction. Variant A drives
// the normal-plane form (p, q); variant B the general form (P1, P2, Q). z0 is
// the integration constant z(0).
struct FieldRecipe {
    std::optional<expr::Expression> p, q;
    std::optional<expr::Expression> p1, p2, big_q;
    Vec3 z0 = Vec3::Zero();

    static FieldRecipe normal_plane(expr::Expression p, expr::Expression q,
                                    const Vec3& z0 = Vec3::Zero());
    static FieldRecipe general(expr::Expression p1, expr::Expression p2, expr::Expression big_q,
                               const Vec3& z0 = Vec3::Zero());
    bool is_normal_plane() const { return p.has_value(); }
};

// z(u) together with its parameter derivatives as a jet. a[0] may come from a
// quadrature table (integral recipes) or a closed form (rigid fields); all
// higher coefficients are exact.
class FieldSource {
public:
    virtual ~FieldSource() = default;

    virtual Vec3Jet field_jet(double u, int order) const = 0;
    virtual double period() const = 0;

    Vec3 value(double u) const { return field_jet(u, 0).value(); }
    Vec3 rate(double u) const { return field_jet(u, 1).derivative(1); }
    // |z(period) - z(0)|
    double closure_defect() const;
};

// z = A r(u) + b. Covers translations (A = 0), rotations (A skew) and the
// non-bending scaling field (A = I) used in tests.
class LinearFieldSource final : public FieldSource {
public:
    LinearFieldSource(std::shared_ptr<const CurveSource> curve, const Eigen::Matrix3d& map,
                      const Vec3& offset);

    Vec3Jet field_jet(double u, int order) const override;
    double period() const override { return curve_->period(); }

private:
    std::shared_ptr<const CurveSource> curve_;
    Eigen::Matrix3d map_;
    Vec3 offset_;
};

struct BendingField {
    std::shared_ptr<const FieldSource> source;
    std::vector<Vec3> z;     // quadrature samples on the host grid
    std::vector<Vec3> zdot;  // stored analytically, never differenced

    double bending_residual = 0.0;  // max normalized |r'.z'|
    double closure_defect = 0.0;
    bool non_bending = false;  // residual > 1e-8
    bool open_family = false;  // defect > 1e-6 * L

    // Frenet decomposition, filled by decompose_field. Primes are d/ds.
    bool decomposed = false;
    std::vector<double> comp_t, comp_n1, comp_n2;          // z, z1, z2
    std::vector<double> dt_s;                              // z'
    std::vector<double> d1_s, d1_ss, d2_s, d2_ss;          // z1', z1'', z2', z2''
    double theorem24_residual = 0.0;  // max |z'_fd - k z1|, FD route
    double theorem24_tol = 0.0;       // 50 N^-2 max|z|
    bool theorem24_pass = false;      // recorded outcome of the FD check
};

struct BendReport {
    double closure_defect = 0.0;
    double bending_residual = 0.0;
    std::vector<double> eps;
    std::vector<double> isometry_gap;  // per eps
};

struct IsometryDefect {
    double delta_length = 0.0;  // L_eps - L
    double max_gap = 0.0;       // max |(ds_eps - ds) - eps^2 |z'|^2/(2|r'|^2) ds|
    double min_growth = 0.0;    // min (ds_eps - ds), Theorem "non-negative addition"
};

// z(u) = z0 + integral of p n1 + q n2 (recipe A).
BendingField field_from_pq(const SampledCurve& c, const FieldRecipe& recipe);

// z(u) = z0 + integral of P1 r' + P2 r'' + Q (r' x r''). The integrand is not
// normal to r' for arbitrary coefficients; the residual is reported, not
// asserted.
BendingField field_from_general(const SampledCurve& c, const FieldRecipe& recipe);

// Wraps an arbitrary field source (rigid motions in tests).
BendingField make_field(const SampledCurve& c, std::shared_ptr<const FieldSource> source);

double bending_residual(const SampledCurve& c, const BendingField& f);

// r + eps z with full geometry reconstruction on the same parameter grid.
SampledCurve bend(const SampledCurve& c, const BendingField& f, double eps);

IsometryDefect isometry_defect(const SampledCurve& c, const BendingField& f, double eps);

// Fills the Frenet components and their arc-length derivatives; requires an
// arc-length-uniform curve. The Theorem-2.4 residual check uses second-order
// central differences of the sampled tangential component as an independent
// route.
BendingField decompose_field(const SampledCurve& c, BendingField f);

}  // namespace knotbend
