#include "knotbend/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>

#include "knotbend/knot_file.hpp"
#include "knotbend/tube_mesh.hpp"
#include "knotbend/variation.hpp"

namespace knotbend {

namespace {

constexpr double kFdEps[3] = {1e-2, 1e-3, 1e-4};

int classify(const std::exception& err) {
    if (dynamic_cast<const SpecFileError*>(&err)) return exit_code::kParse;
    if (dynamic_cast<const expr::ParseError*>(&err)) return exit_code::kParse;
    if (dynamic_cast<const SelfIntersectionError*>(&err)) return exit_code::kSelfIntersection;
    if (dynamic_cast<const GeometryError*>(&err)) return exit_code::kGeometry;
    if (dynamic_cast<const NotClosedError*>(&err)) return exit_code::kGeometry;
    if (dynamic_cast<const MeshError*>(&err)) return exit_code::kGeometry;
    if (dynamic_cast<const expr::EvalError*>(&err)) return exit_code::kGeometry;
    if (dynamic_cast<const std::ios_base::failure*>(&err)) return exit_code::kWrite;
    if (dynamic_cast<const std::invalid_argument*>(&err)) return exit_code::kUsage;
    return exit_code::kUsage;
}

CommandResult run_guarded(const std::function<void(RunReport&)>& body) {
    CommandResult result;
    try {
        body(result.report);
    } catch (const std::exception& err) {
        result.code = classify(err);
        result.error = err.what();
    }
    return result;
}

BendingField build_field(const SampledCurve& c, const FieldRecipe& recipe) {
    return recipe.is_normal_plane() ? field_from_pq(c, recipe) : field_from_general(c, recipe);
}

void report_curve(RunReport& rep, const SampledCurve& c) {
    rep.begin_section("curve");
    rep.add("samples", c.n);
    rep.add("length", c.length);
    rep.add("closure_gap", c.closure_gap);
    rep.add("closed", c.closed());
    double min_speed = c.speed[0], min_cross = std::numeric_limits<double>::infinity();
    double kmin = c.curv[0], kmax = c.curv[0];
    for (std::size_t i = 0; i < c.u.size(); ++i) {
        min_speed = std::min(min_speed, c.speed[i]);
        min_cross = std::min(min_cross, c.dr[i].cross(c.ddr[i]).norm());
        kmin = std::min(kmin, c.curv[i]);
        kmax = std::max(kmax, c.curv[i]);
    }
    rep.add("biregular", true);
    rep.add("min_speed", min_speed);
    rep.add("min_cross_norm", min_cross);
    rep.add("curvature_min", kmin);
    rep.add("curvature_max", kmax);
}

void report_field(RunReport& rep, const SampledCurve& cs, const BendingField& f) {
    rep.begin_section("field");
    rep.add("bending_residual", f.bending_residual);
    rep.add("non_bending", f.non_bending);
    rep.add("closure_defect", f.closure_defect);
    rep.add("open_family", f.open_family);
    rep.add("theorem24_residual", f.theorem24_residual);
    rep.add("theorem24_tolerance", f.theorem24_tol);
    rep.add("theorem24_pass", f.theorem24_pass);
    (void)cs;
}

}  // namespace

CommandResult cmd_check(const CheckOptions& opt) {
    return run_guarded([&](RunReport& rep) {
        const KnotSpec spec = load_knot_file(opt.file);
        rep.begin_section("run");
        rep.add("command", std::string("check"));
        rep.add("file", opt.file);
        rep.add("samples", opt.samples);

        const SampledCurve c = sample_curve(spec.curve, opt.samples);
        report_curve(rep, c);

        if (spec.field) {
            const SampledCurve cs = resample_by_arclength(c, opt.samples);
            BendingField f = build_field(cs, *spec.field);
            f = decompose_field(cs, std::move(f));
            report_field(rep, cs, f);
        }
    });
}

CommandResult cmd_energy(const EnergyOptions& opt) {
    return run_guarded([&](RunReport& rep) {
        const KnotSpec spec = load_knot_file(opt.file);
        rep.begin_section("run");
        rep.add("command", std::string("energy"));
        rep.add("file", opt.file);
        rep.add("samples", opt.samples);

        const SampledCurve c = sample_curve(spec.curve, opt.samples);
        const SampledCurve cs = resample_by_arclength(c, opt.samples);

        const bool is_willmore = opt.kind == EnergyKind::kWillmore;
        const EnergyValue base = is_willmore ? willmore(cs) : mobius(cs);
        rep.begin_section("energy");
        rep.add("kind", std::string(is_willmore ? "willmore" : "mobius"));
        rep.add("value", base.value);
        rep.add("refinement_delta", base.refinement_delta);

        if (opt.eps && !spec.field)
            throw std::invalid_argument("--eps requires a [field] section in the knot file");
        if (!spec.field) return;

        const BendingField f = build_field(cs, *spec.field);
        rep.begin_section("variation");
        double analytic = 0.0;
        if (is_willmore) {
            const EnergyVariation direct = willmore_variation_direct(cs, f);
            const EnergyVariation theorem = willmore_variation_theorem(cs, f);
            analytic = theorem.value;
            rep.add("analytic", theorem.value);
            rep.add("interior", theorem.interior);
            rep.add("boundary", theorem.boundary);
            rep.add("direct_form", direct.value);
        } else {
            const EnergyVariation dE = mobius_variation(cs, f);
            analytic = dE.value;
            rep.add("analytic", dE.value);
            rep.add("symmetry_error", dE.symmetry_error);
        }
        rep.add("bending_residual", f.bending_residual);

        if (opt.eps) {
            const double eps = *opt.eps;
            const SampledCurve bent = bend(cs, f, eps);
            const double bent_value =
                is_willmore ? willmore(bent).value
                            : mobius(resample_by_arclength(bent, cs.n)).value;
            rep.begin_section("bent");
            rep.add("eps", eps);
            rep.add("value", bent_value);
            rep.add("fd_estimate", (bent_value - base.value) / eps);
            rep.add("analytic", analytic);
        }
    });
}

CommandResult cmd_variation(const VariationOptions& opt) {
    return run_guarded([&](RunReport& rep) {
        const KnotSpec spec = load_knot_file(opt.file);
        if (!spec.field)
            throw std::invalid_argument("variation requires a [field] section in the knot file");
        rep.begin_section("run");
        rep.add("command", std::string("variation"));
        rep.add("file", opt.file);
        rep.add("samples", opt.samples);

        const SampledCurve c = sample_curve(spec.curve, opt.samples);
        const SampledCurve cs = resample_by_arclength(c, opt.samples);
        BendingField f = build_field(cs, *spec.field);
        f = decompose_field(cs, std::move(f));

        rep.begin_section("variation");
        switch (opt.kind) {
            case VariationKind::kCurvature:
            case VariationKind::kTorsion: {
                const bool is_k = opt.kind == VariationKind::kCurvature;
                rep.add("kind", std::string(is_k ? "k" : "tau"));
                const std::vector<double> d =
                    is_k ? delta_curvature(cs, f) : delta_torsion(cs, f);
                double lo = d[0], hi = d[0], mx = 0.0;
                for (double v : d) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    mx = std::max(mx, std::abs(v));
                }
                rep.add("min", lo);
                rep.add("max", hi);
                rep.add("max_abs", mx);
                if (opt.fd_check) {
                    const VariationReport r = fd_variation(
                        is_k ? VarQuantity::kCurvature : VarQuantity::kTorsion, cs, f, kFdEps);
                    rep.begin_section("fd_check");
                    for (std::size_t i = 0; i < r.eps.size(); ++i) {
                        rep.add("eps_" + std::to_string(i), r.eps[i]);
                        rep.add("discrepancy_" + std::to_string(i), r.max_discrepancy[i]);
                    }
                    rep.add("slope", r.slope);
                }
                break;
            }
            case VariationKind::kWillmore: {
                rep.add("kind", std::string("willmore"));
                const EnergyVariation direct = willmore_variation_direct(cs, f);
                const EnergyVariation theorem = willmore_variation_theorem(cs, f);
                rep.add("analytic", theorem.value);
                rep.add("interior", theorem.interior);
                rep.add("boundary", theorem.boundary);
                rep.add("direct_form", direct.value);
                if (opt.fd_check) {
                    const EnergyOracle o =
                        fd_energy_variation(EnergyKind::kWillmore, cs, f, kFdEps);
                    rep.begin_section("fd_check");
                    for (std::size_t i = 0; i < o.eps.size(); ++i) {
                        rep.add("eps_" + std::to_string(i), o.eps[i]);
                        rep.add("fd_" + std::to_string(i), o.central[i]);
                        rep.add("discrepancy_" + std::to_string(i), o.discrepancy[i]);
                    }
                    rep.add("slope", o.slope);
                }
                break;
            }
            case VariationKind::kMobius: {
                rep.add("kind", std::string("mobius"));
                const EnergyVariation dE = mobius_variation(cs, f);
                rep.add("analytic", dE.value);
                rep.add("symmetry_error", dE.symmetry_error);
                if (opt.fd_check) {
                    const EnergyOracle o = fd_energy_variation(EnergyKind::kMobius, cs, f, kFdEps);
                    rep.begin_section("fd_check");
                    for (std::size_t i = 0; i < o.eps.size(); ++i) {
                        rep.add("eps_" + std::to_string(i), o.eps[i]);
                        rep.add("fd_" + std::to_string(i), o.central[i]);
                        rep.add("discrepancy_" + std::to_string(i), o.discrepancy[i]);
                    }
                    rep.add("slope", o.slope);
                }
                break;
            }
        }
    });
}

std::string obj_filename(const std::string& stem, double eps) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", eps);
    return stem + "_eps" + buf + ".obj";
}

CommandResult cmd_mesh(const MeshOptions& opt) {
    return run_guarded([&](RunReport& rep) {
        const KnotSpec spec = load_knot_file(opt.file);
        rep.begin_section("run");
        rep.add("command", std::string("mesh"));
        rep.add("file", opt.file);

        bool needs_field = false;
        for (double e : opt.eps_list) needs_field = needs_field || e != 0.0;
        if (needs_field && !spec.field)
            throw std::invalid_argument("nonzero eps requires a [field] section in the knot file");

        const int samples = std::max(512, opt.rings);
        const SampledCurve c = sample_curve(spec.curve, samples % 2 ? samples + 1 : samples);
        if (!c.closed()) throw NotClosedError(c.closure_gap);

        std::optional<BendingField> f;
        if (spec.field) f = build_field(c, *spec.field);

        std::error_code ec;
        std::filesystem::create_directories(opt.out_dir, ec);
        if (ec) throw std::ios_base::failure("cannot create output directory " + opt.out_dir);

        const std::string stem = std::filesystem::path(opt.file).stem().string();
        rep.begin_section("mesh");
        rep.add("radius", opt.radius);
        rep.add("rings", opt.rings);
        rep.add("segments", opt.segments);
        int index = 0;
        for (double eps : opt.eps_list) {
            const SampledCurve member = (eps == 0.0) ? c : bend(c, *f, eps);
            const TubeMesh mesh = tube_mesh(member, opt.radius, opt.rings, opt.segments);
            const std::string name = obj_filename(stem, eps);
            const std::string path = (std::filesystem::path(opt.out_dir) / name).string();
            export_obj(mesh, path);
            const std::string suffix = "_" + std::to_string(index);
            rep.add("eps" + suffix, eps);
            rep.add("file" + suffix, path);
            rep.add("vertices" + suffix, static_cast<int>(mesh.vertices.size()));
            rep.add("faces" + suffix, static_cast<int>(mesh.quads.size()));
            rep.add("tight_clearance" + suffix, mesh.tight_clearance);
            ++index;
        }
    });
}

}  // namespace knotbend
