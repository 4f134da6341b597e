#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gvof/study.hpp"

namespace gvof {

// Flat key-value config with [section] headers. '#' starts a comment.
// Consumers mark keys as consumed; leftovers are reported as errors so a
// typo never passes silently.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    // comma-separated list
    std::vector<std::string> get_list(const std::string& section,
                                      const std::string& key,
                                      const std::vector<std::string>& fallback) const;

    // throws naming the first unconsumed key, if any
    void check_all_consumed() const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    mutable std::set<std::string> consumed_;  // "section.key"
};

StudyConfig study_config_from(const ConfigFile& cfg);
StudyConfig load_study_config(const std::string& path);

// Full resolved config echo; parsing it back reproduces the same study
// (this is the rerun manifest).
std::string study_config_to_string(const StudyConfig& cfg);
void save_study_config(const StudyConfig& cfg, const std::string& path);

}  // namespace gvof
