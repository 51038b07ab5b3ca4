#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "atiqo/core.hpp"

namespace atiqo::pipeline {

using json = nlohmann::json;

inline constexpr const char* kCodeVersion = "0.1.0";

/// Rejected experiment document. `path` names the offending key
/// (e.g. "pulse.omegaL"); empty for document-level parse errors.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& message);
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

enum class Kind { delta_trace, delta_at_saddles, scaling_sweep, wigner_map, entropy_curve, custom_sweep };

std::string to_string(Kind k);

enum class Format { csv, json };

std::string to_string(Format f);
Format format_from_string(const std::string& name);

struct SweepAxis {
    /// Dotted config path, e.g. "pulse.omega_L".
    std::string path;
    std::vector<double> values;
};

struct OutputSpec {
    std::string path;
    Format format = Format::csv;
};

struct ExperimentSpec {
    Kind kind = Kind::delta_trace;
    std::string name;
    /// Physical configuration with every default filled in (pulse, atom,
    /// modes, numerics, n_atoms).
    json base;
    std::vector<SweepAxis> sweep;
    /// Kind-specific parameters with defaults filled in.
    json params;
    OutputSpec output;

    /// Number of sweep combinations (product of axis lengths).
    std::size_t sweep_size() const;
    /// Sweep values for combination `index`, last axis fastest.
    std::vector<double> sweep_values(std::size_t index) const;
    /// The base configuration with the given sweep combination applied.
    SimConfig config_at(std::size_t sweep_index) const;
    SimConfig base_config() const;
};

/// Strict parse: unknown keys are rejected with a suggestion, wrong types
/// and invalid physical values are reported with their key path.
ExperimentSpec parse_config(const std::string& text);

/// Canonical document (sorted keys); round-trips through parse_config.
json to_json(const ExperimentSpec& spec);

/// SHA-256 hex digest over the code version and the canonical document
/// without the output section.
std::string spec_hash(const ExperimentSpec& spec);

/// Replace numerics.quad_tolerance.
ExperimentSpec with_quad_tolerance(ExperimentSpec spec, double tolerance);

/// Build a SimConfig from a normalized physical configuration document.
SimConfig build_config(const json& base);

/// Edit distance used for key suggestions.
std::size_t levenshtein(const std::string& a, const std::string& b);

}  // namespace atiqo::pipeline
