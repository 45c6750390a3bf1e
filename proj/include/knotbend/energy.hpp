#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "knotbend/bending.hpp"
#include "knotbend/curve.hpp"

namespace knotbend {

class NotClosedError : public std::runtime_error {
public:
    explicit NotClosedError(double gap);
    NotClosedError(double gap, const std::string& what);
    double gap() const { return gap_; }

private:
    double gap_;
};

class SelfIntersectionError : public std::runtime_error {
public:
    SelfIntersectionError(std::size_t i, std::size_t j, double chord);
    std::size_t i() const { return i_; }
    std::size_t j() const { return j_; }
    double chord() const { return chord_; }

private:
    std::size_t i_, j_;
    double chord_;
};

enum class EnergyKind { kWillmore, kMobius };

struct EnergyValue {
    EnergyKind kind = EnergyKind::kWillmore;
    double value = 0.0;
    int samples = 0;
    double refinement_delta = 0.0;  // |value - value on the half grid|
};

struct EnergyVariation {
    EnergyKind kind = EnergyKind::kWillmore;
    double value = 0.0;
    // Willmore theorem form: interior integral and the endpoint (boundary)
    // term; for closed fields the boundary vanishes.
    double interior = 0.0;
    double boundary = 0.0;
    // Mobius: max |V(i,j) - V(j,i)| over the grid (expected exactly 0).
    double symmetry_error = 0.0;
};

// Minimum chord between samples more than n/guard_divisor apart (indices,
// modulo n). Returns the pair through the out parameters when given.
double min_nonadjacent_chord(const SampledCurve& c, int guard_divisor = 32,
                             std::size_t* out_i = nullptr, std::size_t* out_j = nullptr);

// W = 1/2 closed-integral of k^2 ds via the grid's spectral weights. Open
// bent-family members get the trapezoid endpoint correction; base curves
// must close within 1e-8.
EnergyValue willmore(const SampledCurve& c);

// delta W = closed-integral of k delta k ds.
EnergyVariation willmore_variation_direct(const SampledCurve& c, const BendingField& f);

// delta W = integral of [(k'' + k^3/2 - k tau^2) z1 + (2 k' tau + k tau') z2] ds
// plus the recorded endpoint term of the integrated-by-parts form.
EnergyVariation willmore_variation_theorem(const SampledCurve& c, const BendingField& f);

// Double periodic trapezoid of 1/|r(s)-r(t)|^2 - 1/l(s,t)^2 on the N x N
// grid; the diagonal uses the continuous extension k^2/12. Requires an
// arc-length-uniform closed embedded curve.
EnergyValue mobius(const SampledCurve& c);

// delta E = 2 double-integral of (r(t)-r(s)).(z(s)-z(t)) / |r(s)-r(t)|^4.
EnergyVariation mobius_variation(const SampledCurve& c, const BendingField& f);

struct EnergyOracle {
    EnergyKind kind = EnergyKind::kWillmore;
    double analytic = 0.0;
    std::vector<double> eps;
    std::vector<double> central;      // (X(+e) - X(-e)) / 2e
    std::vector<double> one_sided;    // (X(e) - X(0)) / e
    std::vector<double> discrepancy;  // |central - analytic|
    double slope = 0.0;
};

// Finite-difference oracle on fully recomputed bent curves (Mobius members
// are resampled by their own arc length first).
EnergyOracle fd_energy_variation(EnergyKind kind, const SampledCurve& c, const BendingField& f,
                                 std::span<const double> eps_list);

}  // namespace knotbend
