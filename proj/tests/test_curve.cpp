#include <doctest.h>

#include <cmath>
#include <numbers>

#include "knotbend/curve.hpp"
#include "oracle.hpp"

using namespace knotbend;
namespace ke = knotbend::expr;

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

CurveDefinition circle_def(double radius = 1.0) {
    return {ke::number(radius) * ke::cos(ke::var_u()), ke::number(radius) * ke::sin(ke::var_u()),
            ke::number(0.0), kTau};
}

CurveDefinition helix_def(double a = 1.0, double b = 1.0) {
    return {ke::number(a) * ke::cos(ke::var_u()), ke::number(a) * ke::sin(ke::var_u()),
            ke::number(b) * ke::var_u(), kTau};
}

CurveDefinition trefoil_def() {
    const auto u = ke::var_u();
    return {ke::sin(u) + ke::number(2) * ke::cos(ke::number(2) * u),
            ke::cos(u) - ke::number(2) * ke::cos(ke::number(2) * u),
            -ke::sin(ke::number(3) * u), kTau};
}

CurveDefinition ellipse_def() {
    return {ke::number(2) * ke::cos(ke::var_u()), ke::sin(ke::var_u()), ke::number(0.0), kTau};
}

CurveDefinition figure_eight_def() {
    const auto u = ke::var_u();
    const auto shell = ke::number(2) + ke::cos(ke::number(2) * u);
    return {shell * ke::cos(ke::number(3) * u), shell * ke::sin(ke::number(3) * u),
            ke::sin(ke::number(4) * u), kTau};
}

}  // namespace

TEST_CASE("unit circle arc length") {
    const SampledCurve c = sample_curve(circle_def(), 256);
    CHECK(std::abs(c.length - kTau) <= 1e-10);
    CHECK(c.closed());
}

TEST_CASE("sample_curve preconditions") {
    CHECK_THROWS_AS(sample_curve(circle_def(), 31), std::invalid_argument);
    CHECK_THROWS_AS(sample_curve(circle_def(), 33), std::invalid_argument);
    CHECK_THROWS_AS(sample_curve(circle_def(), 16), std::invalid_argument);
}

TEST_CASE("degenerate line is rejected as non-biregular") {
    const CurveDefinition line{ke::var_u(), ke::number(0.0), ke::number(0.0), 1.0};
    try {
        sample_curve(line, 32);
        CHECK(false);
    } catch (const GeometryError& err) {
        CHECK(err.kind() == GeometryError::Kind::kNonBiregular);
    }
}

TEST_CASE("circle curvature and torsion") {
    const SampledCurve c = sample_curve(circle_def(2.0), 128);
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        CHECK(curvature(c, i) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(torsion(c, i)) <= 1e-12);
    }
}

TEST_CASE("helix family curvature and torsion") {
    for (const auto [a, b] : {std::pair{1.0, 1.0}, {2.0, 1.0}, {1.0, 3.0}}) {
        CAPTURE(a);
        CAPTURE(b);
        const SampledCurve c = sample_curve(helix_def(a, b), 128);
        const double k_expect = a / (a * a + b * b);
        const double t_expect = b / (a * a + b * b);
        for (std::size_t i = 0; i < c.u.size(); ++i) {
            CHECK(std::abs(c.curv[i] - k_expect) <= 1e-8);
            CHECK(std::abs(c.tors[i] - t_expect) <= 1e-8);
        }
    }
}

TEST_CASE("frames at reference points") {
    const SampledCurve c = sample_curve(circle_def(), 64);
    const Frame f0 = frenet_frame(c, 0);
    CHECK((f0.t - Vec3(0, 1, 0)).norm() <= 1e-12);
    CHECK((f0.n1 - Vec3(-1, 0, 0)).norm() <= 1e-12);
    CHECK((f0.n2 - Vec3(0, 0, 1)).norm() <= 1e-12);

    const SampledCurve h = sample_curve(helix_def(), 64);
    const Frame h0 = frenet_frame(h, 0);
    CHECK((h0.n2 - Vec3(0, -1, 1).normalized()).norm() <= 1e-12);
}

TEST_CASE("frame orthonormality and orientation at every sample") {
    for (const auto& def : {trefoil_def(), figure_eight_def(), helix_def(2, 1)}) {
        const SampledCurve c = sample_curve(def, 128);
        for (std::size_t i = 0; i < c.u.size(); ++i) {
            CHECK(std::abs(c.tang[i].norm() - 1.0) <= 1e-10);
            CHECK(std::abs(c.norm1[i].norm() - 1.0) <= 1e-10);
            CHECK(std::abs(c.norm2[i].norm() - 1.0) <= 1e-10);
            CHECK(std::abs(c.tang[i].dot(c.norm1[i])) <= 1e-10);
            CHECK(std::abs(c.tang[i].dot(c.norm2[i])) <= 1e-10);
            CHECK(std::abs(c.norm1[i].dot(c.norm2[i])) <= 1e-10);
            CHECK((c.norm2[i] - c.tang[i].cross(c.norm1[i])).norm() <= 1e-10);
        }
    }
}

TEST_CASE("trefoil curvature and torsion match position-only FD oracles") {
    const SampledCurve c = sample_curve(trefoil_def(), 512);
    auto r = [&](double u) { return c.source->position(u); };
    CHECK(std::abs(c.curv[0] - oracle::curvature_fd(r, 0.0, 1e-4)) <= 1e-6);
    const double u_probe = std::numbers::pi / 6.0;
    const FrenetJets fj = frenet_jets(*c.source, u_probe, 0);
    CHECK(std::abs(fj.tors.value() - oracle::torsion_fd(r, u_probe, 1e-3)) <= 1e-4);
    CHECK(std::abs(fj.curv.value() - oracle::curvature_fd(r, u_probe, 1e-4)) <= 1e-6);
}

TEST_CASE("Frenet equation residuals decay at second order") {
    auto residual = [](int n) {
        const SampledCurve base = sample_curve(figure_eight_def(), n);
        const SampledCurve c = resample_by_arclength(base, n);
        const double ds = c.length / n;
        double worst = 0.0;
        for (std::size_t i = 0; i < c.u.size(); ++i) {
            const std::size_t prev = (i == 0) ? c.u.size() - 1 : i - 1;
            const std::size_t next = (i + 1) % c.u.size();
            const Vec3 dt = (c.tang[next] - c.tang[prev]) / (2 * ds);
            const Vec3 dn1 = (c.norm1[next] - c.norm1[prev]) / (2 * ds);
            const Vec3 dn2 = (c.norm2[next] - c.norm2[prev]) / (2 * ds);
            worst = std::max(worst, (dt - c.curv[i] * c.norm1[i]).norm());
            worst = std::max(worst,
                             (dn1 + c.curv[i] * c.tang[i] - c.tors[i] * c.norm2[i]).norm());
            worst = std::max(worst, (dn2 + c.tors[i] * c.norm1[i]).norm());
        }
        return worst;
    };
    const double h[] = {1.0 / 256, 1.0 / 512, 1.0 / 1024};
    const double res[] = {residual(256), residual(512), residual(1024)};
    CHECK(log_log_slope(h, res) >= 1.9);
}

TEST_CASE("resampling the circle reproduces the uniform grid") {
    const SampledCurve c = sample_curve(circle_def(), 64);
    const SampledCurve rs = resample_by_arclength(c, 64);
    REQUIRE(rs.u.size() == c.u.size());
    for (std::size_t i = 0; i < c.u.size(); ++i) CHECK((rs.r[i] - c.r[i]).norm() <= 1e-12);
    CHECK(rs.arclength_uniform);
}

TEST_CASE("resampled ellipse has uniform chords") {
    const SampledCurve c = sample_curve(ellipse_def(), 512);
    const SampledCurve rs = resample_by_arclength(c, 512);
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < rs.u.size(); ++i) {
        const std::size_t next = (i + 1) % rs.u.size();
        const double chord = (rs.r[next] - rs.r[i]).norm();
        lo = std::min(lo, chord);
        hi = std::max(hi, chord);
    }
    CHECK((hi - lo) / lo <= 1e-3);
}

TEST_CASE("resampled trefoil is unit-speed and arc-uniform") {
    const SampledCurve c = sample_curve(trefoil_def(), 512);
    const SampledCurve rs = resample_by_arclength(c, 512);
    const double ds = rs.length / 512;
    for (std::size_t j = 0; j < rs.u.size(); ++j) {
        // dr/ds via the chain rule on stored parameter derivatives.
        CHECK(std::abs((rs.dr[j] / rs.speed[j]).norm() - 1.0) <= 1e-6);
        // The inversion itself: sigma(u_j) must sit on the uniform grid.
        CHECK(std::abs(rs.sigma[j] - ds * static_cast<double>(j)) <= 1e-8 * rs.length);
    }
    CHECK(std::abs(rs.length - c.length) <= 1e-8 * c.length);
}

TEST_CASE("resample preconditions") {
    const SampledCurve c = sample_curve(circle_def(), 64);
    CHECK_THROWS_AS(resample_by_arclength(c, 31), std::invalid_argument);
    CHECK_THROWS_AS(resample_by_arclength(c, 30), std::invalid_argument);
}

TEST_CASE("sigma is strictly increasing") {
    for (const auto& def : {trefoil_def(), figure_eight_def()}) {
        const SampledCurve c = sample_curve(def, 256);
        for (std::size_t i = 1; i < c.sigma.size(); ++i) CHECK(c.sigma[i] > c.sigma[i - 1]);
        CHECK(c.sigma[0] == 0.0);
        CHECK(c.length > c.sigma.back());
    }
}

TEST_CASE("arc distance") {
    const SampledCurve c = sample_curve(circle_def(), 128);
    CHECK(arc_distance(c, 5, 5) == 0.0);
    CHECK(arc_distance(c, 0, 64) == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{3, 97}, {10, 20}, {0, 127}}) {
        CHECK(arc_distance(c, i, j) == arc_distance(c, j, i));
        CHECK(arc_distance(c, i, j) <= c.length / 2 + 1e-12);
    }
}

TEST_CASE("position jets agree with symbolic derivative trees") {
    const auto def = trefoil_def();
    const auto source = std::make_shared<SymbolicCurveSource>(def);
    for (double u : oracle::random_points(0.0, kTau, 20, 17)) {
        const Vec3Jet j = source->position_jet(u, 3);
        const ke::Expression* comps[3] = {&def.x, &def.y, &def.z};
        for (int axis = 0; axis < 3; ++axis) {
            ke::Expression d = *comps[axis];
            for (int k = 0; k <= 3; ++k) {
                const double expect = ke::evaluate(d, u);
                CHECK(std::abs(j.derivative(k)[axis] - expect) <=
                      1e-10 * (1.0 + std::abs(expect)));
                d = ke::differentiate(d);
            }
        }
    }
}

TEST_CASE("frenet jets carry correct arc-length derivatives of curvature") {
    // k'(s) on the figure-eight via jets vs a fine central difference of k(u).
    const auto source = std::make_shared<SymbolicCurveSource>(figure_eight_def());
    for (double u : oracle::random_points(0.0, kTau, 10, 3)) {
        const FrenetJets fj = frenet_jets(*source, u, 2);
        const double kp_jet = arc_derivative(fj.curv, fj.v).value();
        const double h = 1e-5;
        auto k_at = [&](double uu) { return frenet_jets(*source, uu, 0).curv.value(); };
        const double kp_fd = (k_at(u + h) - k_at(u - h)) / (2 * h) / fj.v.value();
        CHECK(std::abs(kp_jet - kp_fd) <= 1e-5 * (1.0 + std::abs(kp_fd)));
    }
}
