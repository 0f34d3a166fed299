#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pneuro::harness {

// Line-oriented config text: `key = value` entries under `[section]` headers
// flatten to "section.key". Unsectioned keys keep their bare name. Line
// numbers are kept so schema errors can point at the offending entry.
struct ConfigFile {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
    std::string source = "<none>";
};

ConfigFile parse_config_text(std::istream& in, const std::string& source_name);
ConfigFile parse_config_file(const std::string& path);

// A fully resolved experiment: every run is a pure function of this struct.
struct ExperimentConfig {
    std::string experiment;  // transfer | sllg | dist | network | range
    std::map<std::string, std::string> options;

    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::string require_str(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
};

// File values overlaid with command-line overrides; validates the experiment
// name and rejects unknown keys (with the file line when it came from one).
ExperimentConfig resolve_config(const ConfigFile& file,
                                const std::vector<std::pair<std::string, std::string>>& overrides);

// Dispatches to the proper module, writes the data file(s) plus a manifest,
// and prints a one-line summary. Throws std::invalid_argument for config
// problems and std::runtime_error for module failures.
void run(const ExperimentConfig& cfg);

// Re-runs the experiment recorded in a manifest file.
void run_from_manifest(const std::string& manifest_path);

}  // namespace pneuro::harness
