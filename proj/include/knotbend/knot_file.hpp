#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "knotbend/bending.hpp"
#include "knotbend/curve.hpp"

namespace knotbend {

class SpecFileError : public std::runtime_error {
public:
    SpecFileError(int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

// A .knot file: a [curve] section (x, y, z, period) and an optional [field]
// section (p, q or P1, P2, Q, plus z0 = three comma-separated reals). Values
// are expressions in u; '#' starts a comment.
struct KnotSpec {
    CurveDefinition curve;
    std::optional<FieldRecipe> field;
};

KnotSpec parse_knot_spec(std::string_view text);
KnotSpec load_knot_file(const std::string& path);

}  // namespace knotbend
