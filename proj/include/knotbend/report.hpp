#pragma once

#include <string>
#include <vector>

namespace knotbend {

// Fixed %.12g formatting so identical runs produce byte-identical reports.
std::string format_double(double v);

// Grouped key = value text, greppable and diffable.
class RunReport {
public:
    void begin_section(const std::string& name);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, double value);
    void add(const std::string& key, int value);
    void add(const std::string& key, bool value);

    std::string str() const;

private:
    struct Entry {
        std::string key, value;
    };
    struct Section {
        std::string name;
        std::vector<Entry> entries;
    };
    std::vector<Section> sections_;
};

}  // namespace knotbend
