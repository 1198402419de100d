#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qtoken {

// INI-style scenario document. Every key must be known to the schema;
// values are kept as text and parsed on access.
class Config {
public:
    Config();  // schema defaults

    static Config load(const std::string& path);
    void apply_text(const std::string& text, const std::string& origin = "<text>");
    // key is "section.name"
    void set(const std::string& key, const std::string& value);

    double number(const std::string& section, const std::string& key) const;
    int integer(const std::string& section, const std::string& key) const;
    bool flag(const std::string& section, const std::string& key) const;
    const std::string& text(const std::string& section, const std::string& key) const;
    std::vector<double> list(const std::string& section, const std::string& key) const;
    bool has(const std::string& section, const std::string& key) const;

    // Pattern keys (h-table rows) present in a section.
    std::map<std::string, std::string> matching(const std::string& section, const std::string& prefix) const;

    std::string canonical() const;
    std::uint64_t hash() const;

private:
    void assign(const std::string& section, const std::string& key, const std::string& value,
                const std::string& where);
    std::map<std::string, std::map<std::string, std::string>> values_;
};

}  // namespace qtoken
