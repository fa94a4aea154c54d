#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ma2 {

/// Flat key-value config: one `key = value` per line, `#` comments.
/// Unknown keys are reported as warnings, never errors (forward compatible).
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;

    /// Keys present in the file but not in `known`.
    std::vector<std::string> unknown_keys(const std::set<std::string>& known) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

} // namespace ma2
