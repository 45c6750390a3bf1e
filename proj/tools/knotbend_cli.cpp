#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knotbend/commands.hpp"

namespace {

int finish(const knotbend::CommandResult& result) {
    const std::string text = result.report.str();
    if (!text.empty()) std::cout << text;
    if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
    return result.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Infinitesimal bending laboratory for closed space curves"};
    app.require_subcommand(1);

    knotbend::CheckOptions check_opt;
    auto* check = app.add_subcommand("check", "Validate a knot file and report field diagnostics");
    check->add_option("file", check_opt.file, "knot definition file")->required();
    check->add_option("--samples", check_opt.samples, "sample count (even)");

    knotbend::EnergyOptions energy_opt;
    std::string energy_kind = "willmore";
    auto* energy = app.add_subcommand("energy", "Compute Willmore or Mobius energy");
    energy->add_option("file", energy_opt.file, "knot definition file")->required();
    energy->add_option("--kind", energy_kind, "willmore|mobius")
        ->check(CLI::IsMember({"willmore", "mobius"}));
    energy->add_option("--samples", energy_opt.samples, "sample count (even)");
    double energy_eps = 0.0;
    auto* eps_opt = energy->add_option("--eps", energy_eps, "also evaluate the bent curve");

    knotbend::VariationOptions var_opt;
    std::string var_kind = "k";
    auto* variation = app.add_subcommand("variation", "First variations under the bending field");
    variation->add_option("file", var_opt.file, "knot definition file")->required();
    variation->add_option("--kind", var_kind, "k|tau|willmore|mobius")
        ->check(CLI::IsMember({"k", "tau", "willmore", "mobius"}));
    variation->add_option("--samples", var_opt.samples, "sample count (even)");
    variation->add_flag("--fd-check", var_opt.fd_check,
                        "compare against finite-difference oracles");

    knotbend::MeshOptions mesh_opt;
    std::string eps_list = "0";
    auto* mesh = app.add_subcommand("mesh", "Export tube meshes of the bent family as OBJ");
    mesh->add_option("file", mesh_opt.file, "knot definition file")->required();
    mesh->add_option("--radius", mesh_opt.radius, "tube radius");
    mesh->add_option("--rings", mesh_opt.rings, "rings along the curve");
    mesh->add_option("--segments", mesh_opt.segments, "vertices per ring");
    mesh->add_option("--eps-list", eps_list, "comma-separated bending amounts");
    mesh->add_option("--out", mesh_opt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : knotbend::exit_code::kUsage;
    }

    if (check->parsed()) return finish(knotbend::cmd_check(check_opt));

    if (energy->parsed()) {
        energy_opt.kind = energy_kind == "mobius" ? knotbend::EnergyKind::kMobius
                                                  : knotbend::EnergyKind::kWillmore;
        if (eps_opt->count() > 0) energy_opt.eps = energy_eps;
        return finish(knotbend::cmd_energy(energy_opt));
    }

    if (variation->parsed()) {
        if (var_kind == "k")
            var_opt.kind = knotbend::VariationKind::kCurvature;
        else if (var_kind == "tau")
            var_opt.kind = knotbend::VariationKind::kTorsion;
        else if (var_kind == "willmore")
            var_opt.kind = knotbend::VariationKind::kWillmore;
        else
            var_opt.kind = knotbend::VariationKind::kMobius;
        return finish(knotbend::cmd_variation(var_opt));
    }

    if (mesh->parsed()) {
        mesh_opt.eps_list.clear();
        std::string token;
        for (char ch : eps_list + ",") {
            if (ch == ',') {
                if (!token.empty()) {
                    try {
                        mesh_opt.eps_list.push_back(std::stod(token));
                    } catch (const std::exception&) {
                        std::cerr << "error: bad eps value '" << token << "'\n";
                        return knotbend::exit_code::kUsage;
                    }
                }
                token.clear();
            } else {
                token += ch;
            }
        }
        if (mesh_opt.eps_list.empty()) mesh_opt.eps_list.push_back(0.0);
        return finish(knotbend::cmd_mesh(mesh_opt));
    }

    return knotbend::exit_code::kUsage;
}
