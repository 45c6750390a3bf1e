#pragma once

#include <span>
#include <utility>
#include <vector>

#include "knotbend/bending.hpp"
#include "knotbend/curve.hpp"

namespace knotbend {

// First-variation formulas under infinitesimal bending. Primes are arc-length
// derivatives, evaluated exactly through jets of the symbolic curve and
// field; the operations require an arc-length-resampled curve and a field
// that passes the bending condition.

// Pointwise forms, usable at any parameter value (endpoint corrections and
// boundary terms evaluate these at u = 0 and u = period).
double delta_curvature_at(const CurveSource& curve, const FieldSource& field, double u);
double delta_torsion_at(const CurveSource& curve, const FieldSource& field, double u);
Vec3 delta_tangent_at(const CurveSource& curve, const FieldSource& field, double u);
std::pair<Vec3, Vec3> delta_normals_at(const CurveSource& curve, const FieldSource& field,
                                       double u);

// Sampled forms over the curve grid.
std::vector<Vec3> delta_tangent(const SampledCurve& c, const BendingField& f);
std::vector<double> delta_curvature(const SampledCurve& c, const BendingField& f);
std::vector<double> delta_torsion(const SampledCurve& c, const BendingField& f);
std::pair<std::vector<Vec3>, std::vector<Vec3>> delta_normals(const SampledCurve& c,
                                                              const BendingField& f);

struct DeformedMagnitudes {
    std::vector<double> curv, tors;
    std::vector<Vec3> tang, norm1, norm2;
};

// First-order deformed magnitudes k + eps delta k, etc.
DeformedMagnitudes deformed_magnitudes(const SampledCurve& c, const BendingField& f, double eps);

enum class VarQuantity { kCurvature, kTorsion, kTangent, kNormal1, kNormal2, kLineElement };

struct VariationReport {
    VarQuantity quantity = VarQuantity::kCurvature;
    double analytic_max_abs = 0.0;
    std::vector<double> eps;
    std::vector<double> max_discrepancy;  // per eps, max over samples
    double slope = 0.0;                   // log-log fit of discrepancy vs eps
};

// Central-difference oracle (A(+eps) - A(-eps)) / (2 eps) on fully
// recomputed bent curves, compared per sample against the analytic formula.
VariationReport fd_variation(VarQuantity quantity, const SampledCurve& c, const BendingField& f,
                             std::span<const double> eps_list);

}  // namespace knotbend
