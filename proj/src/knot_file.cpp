#include "knotbend/knot_file.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace knotbend {

SpecFileError::SpecFileError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

struct KeyedValue {
    std::string value;
    int line;
};

expr::Expression parse_value(const KeyedValue& kv, const std::string& key) {
    try {
        return expr::parse(kv.value);
    } catch (const expr::ParseError& err) {
        throw SpecFileError(kv.line, key + ": " + err.what());
    }
}

double constant_value(const KeyedValue& kv, const std::string& key) {
    const expr::Expression e = parse_value(kv, key);
    if (expr::depends_on_u(e))
        throw SpecFileError(kv.line, key + " must be a constant expression");
    return expr::evaluate(e, 0.0);
}

Vec3 parse_z0(const KeyedValue& kv) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : kv.value) {
        if (ch == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3)
        throw SpecFileError(kv.line, "z0 must be three comma-separated values");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        const KeyedValue comp{trim(parts[i]), kv.line};
        out[i] = constant_value(comp, "z0");
    }
    return out;
}

}  // namespace

KnotSpec parse_knot_spec(std::string_view text) {
    std::map<std::string, KeyedValue> curve_keys, field_keys;
    int curve_sections = 0, field_sections = 0;
    std::string section;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;

        std::string line(raw);
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw SpecFileError(line_no, "malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section == "curve")
                ++curve_sections;
            else if (section == "field")
                ++field_sections;
            else
                throw SpecFileError(line_no, "unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw SpecFileError(line_no, "expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty() || value.empty()) throw SpecFileError(line_no, "expected key = value");

        if (section == "curve") {
            if (key != "x" && key != "y" && key != "z" && key != "period")
                throw SpecFileError(line_no, "unknown curve key '" + key + "'");
            if (curve_keys.count(key)) throw SpecFileError(line_no, "duplicate key '" + key + "'");
            curve_keys[key] = {value, line_no};
        } else if (section == "field") {
            if (key != "p" && key != "q" && key != "P1" && key != "P2" && key != "Q" &&
                key != "z0")
                throw SpecFileError(line_no, "unknown field key '" + key + "'");
            if (field_keys.count(key)) throw SpecFileError(line_no, "duplicate key '" + key + "'");
            field_keys[key] = {value, line_no};
        } else {
            throw SpecFileError(line_no, "key outside of a section");
        }
    }

    if (curve_sections != 1) throw SpecFileError(line_no, "file must have exactly one [curve] section");
    if (field_sections > 1) throw SpecFileError(line_no, "at most one [field] section allowed");

    for (const char* key : {"x", "y", "z", "period"})
        if (!curve_keys.count(key))
            throw SpecFileError(line_no, std::string("[curve] is missing '") + key + "'");

    KnotSpec spec;
    spec.curve.x = parse_value(curve_keys["x"], "x");
    spec.curve.y = parse_value(curve_keys["y"], "y");
    spec.curve.z = parse_value(curve_keys["z"], "z");
    spec.curve.period = constant_value(curve_keys["period"], "period");
    if (!(spec.curve.period > 0.0))
        throw SpecFileError(curve_keys["period"].line, "period must be positive");

    if (field_sections == 1) {
        const bool has_pq = field_keys.count("p") || field_keys.count("q");
        const bool has_general =
            field_keys.count("P1") || field_keys.count("P2") || field_keys.count("Q");
        if (has_pq && has_general)
            throw SpecFileError(line_no, "[field] must use either p,q or P1,P2,Q, not both");
        Vec3 z0 = Vec3::Zero();
        if (field_keys.count("z0")) z0 = parse_z0(field_keys["z0"]);
        if (has_pq) {
            for (const char* key : {"p", "q"})
                if (!field_keys.count(key))
                    throw SpecFileError(line_no, std::string("[field] is missing '") + key + "'");
            spec.field = FieldRecipe::normal_plane(parse_value(field_keys["p"], "p"),
                                                   parse_value(field_keys["q"], "q"), z0);
        } else if (has_general) {
            for (const char* key : {"P1", "P2", "Q"})
                if (!field_keys.count(key))
                    throw SpecFileError(line_no, std::string("[field] is missing '") + key + "'");
            spec.field = FieldRecipe::general(parse_value(field_keys["P1"], "P1"),
                                              parse_value(field_keys["P2"], "P2"),
                                              parse_value(field_keys["Q"], "Q"), z0);
        } else {
            throw SpecFileError(line_no, "[field] needs p,q or P1,P2,Q");
        }
    }
    return spec;
}

KnotSpec load_knot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_knot_spec(buf.str());
}

}  // namespace knotbend
