#include "knotbend/report.hpp"

#include <cstdio>

namespace knotbend {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void RunReport::begin_section(const std::string& name) { sections_.push_back({name, {}}); }

void RunReport::add(const std::string& key, const std::string& value) {
    sections_.back().entries.push_back({key, value});
}

void RunReport::add(const std::string& key, double value) { add(key, format_double(value)); }

void RunReport::add(const std::string& key, int value) { add(key, std::to_string(value)); }

void RunReport::add(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }

std::string RunReport::str() const {
    std::string out;
    for (std::size_t s = 0; s < sections_.size(); ++s) {
        if (s > 0) out += '\n';
        out += '[' + sections_[s].name + "]\n";
        for (const auto& e : sections_[s].entries) out += e.key + " = " + e.value + '\n';
    }
    return out;
}

}  // namespace knotbend
