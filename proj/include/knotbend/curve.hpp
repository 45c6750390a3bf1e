#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "knotbend/expression.hpp"
#include "knotbend/jet.hpp"
#include "knotbend/quadrature.hpp"

namespace knotbend {

struct CurveDefinition {
    expr::Expression x, y, z;
    double period = 0.0;
};

class GeometryError : public std::runtime_error {
public:
    enum class Kind { kNonBiregular, kCurvatureVanishes, kDomain };

    GeometryError(Kind kind, std::size_t index, double diagnostic, const std::string& detail);

    Kind kind() const { return kind_; }
    std::size_t index() const { return index_; }
    double diagnostic() const { return diagnostic_; }

private:
    Kind kind_;
    std::size_t index_;
    double diagnostic_;
};

// Position jets at arbitrary parameter values. Implemented by symbolic curve
// definitions and by bent families, so sampling, arc-length inversion and
// finite-difference oracles all run through one interface.
class CurveSource {
public:
    virtual ~CurveSource() = default;

    virtual Vec3Jet position_jet(double u, int order) const = 0;
    virtual double period() const = 0;

    Vec3 position(double u) const { return position_jet(u, 0).value(); }
    // |dr/du|
    double speed(double u) const;
};

class SymbolicCurveSource final : public CurveSource {
public:
    explicit SymbolicCurveSource(CurveDefinition def);

    Vec3Jet position_jet(double u, int order) const override;
    double period() const override { return def_.period; }

    const CurveDefinition& definition() const { return def_; }
    // Parameter-derivative expressions, k applications of differentiate
    // (k = 1..3).
    const expr::Expression& derivative(int axis, int k) const { return d_[axis][k - 1]; }

private:
    CurveDefinition def_;
    expr::Expression d_[3][3];
};

// Frenet data (and their parameter derivatives, as jets) at one point.
struct FrenetJets {
    Jet v;        // |dr/du|
    Jet curv;     // k
    Jet tors;     // tau
    Vec3Jet t, n1, n2;
};

FrenetJets frenet_jets(const CurveSource& source, double u, int order);

// Derivative with respect to arc length: shift the jet and divide by speed.
Jet arc_derivative(const Jet& f, const Jet& v);

struct Frame {
    Vec3 t, n1, n2;
};

struct SampledCurve {
    std::shared_ptr<const CurveSource> source;
    double period = 0.0;
    int n = 0;
    bool arclength_uniform = false;
    bool bent_member = false;  // produced by bend(); may be an open family member

    std::vector<double> u;            // parameter per sample
    std::vector<double> grid_weight;  // spectral weights for integrals du
    std::vector<Vec3> r, dr, ddr, dddr;
    std::vector<double> speed;
    std::vector<double> sigma;  // cumulative arc length at samples
    double length = 0.0;
    double closure_gap = 0.0;  // |r(0) - r(period)|
    std::vector<double> curv, tors;
    std::vector<Vec3> tang, norm1, norm2;

    std::shared_ptr<const CumulativeIntegral> arclen;  // sigma(u) evaluator

    bool closed(double tol = 1e-8) const { return closure_gap <= tol; }
};

// Samples a closed-curve definition at n uniform parameter values. Position
// derivatives come from symbolic differentiation of the component
// expressions; arc length from composite Simpson of |dr/du|.
SampledCurve sample_curve(const CurveDefinition& def, int n);

// Samples an arbitrary source on an explicit parameter grid (weights must be
// spectral for the grid; used by resampling and bending).
SampledCurve sample_on_grid(std::shared_ptr<const CurveSource> source, std::vector<double> grid,
                            std::vector<double> weights, bool arclength_uniform);

// New samples at uniform arc-length spacing via monotone inversion of the
// arc-length table polished by Newton iterations.
SampledCurve resample_by_arclength(const SampledCurve& c, int m);

double curvature(const SampledCurve& c, std::size_t i);
double torsion(const SampledCurve& c, std::size_t i);
Frame frenet_frame(const SampledCurve& c, std::size_t i);

// Shorter of the two sub-arcs between samples i and j (closed curve).
double arc_distance(const SampledCurve& c, std::size_t i, std::size_t j);

}  // namespace knotbend
