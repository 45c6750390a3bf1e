#pragma once

#include <optional>
#include <string>
#include <vector>

#include "knotbend/energy.hpp"
#include "knotbend/report.hpp"

namespace knotbend {

namespace exit_code {
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kGeometry = 3;
constexpr int kSelfIntersection = 4;
constexpr int kWrite = 5;
}  // namespace exit_code

struct CommandResult {
    int code = exit_code::kOk;
    RunReport report;
    std::string error;  // non-empty on failure, goes to stderr
};

struct CheckOptions {
    std::string file;
    int samples = 512;
};

struct EnergyOptions {
    std::string file;
    EnergyKind kind = EnergyKind::kWillmore;
    int samples = 512;
    std::optional<double> eps;
};

enum class VariationKind { kCurvature, kTorsion, kWillmore, kMobius };

struct VariationOptions {
    std::string file;
    VariationKind kind = VariationKind::kCurvature;
    int samples = 512;
    bool fd_check = false;
};

struct MeshOptions {
    std::string file;
    double radius = 0.25;
    int rings = 256;
    int segments = 24;
    std::vector<double> eps_list{0.0};
    std::string out_dir = ".";
};

CommandResult cmd_check(const CheckOptions& opt);
CommandResult cmd_energy(const EnergyOptions& opt);
CommandResult cmd_variation(const VariationOptions& opt);
CommandResult cmd_mesh(const MeshOptions& opt);

// <stem>_eps<value>.obj
std::string obj_filename(const std::string& stem, double eps);

}  // namespace knotbend
