#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "atiqo/pipeline/config.hpp"

namespace atiqo::pipeline {

/// Environment variable read when no worker count is given.
inline constexpr const char* kWorkersEnv = "ATIQO_WORKERS";

/// One evaluated point: sweep values plus the rows it produced.
struct Record {
    std::size_t index = 0;
    std::vector<double> sweep;
    bool ok = true;
    std::string error;
    /// Objects keyed by column name (sweep columns excluded).
    json rows = json::array();
    /// Dense Wigner matrix {x, y, values} for wigner_map records.
    json map;
    double seconds = 0.0;
    bool cached = false;
};

struct Timing {
    double total_seconds = 0.0;
    int workers = 1;
    std::size_t cache_hits = 0;
    std::size_t computed = 0;
};

struct ResultEnvelope {
    std::string spec_hash;
    std::string code_version;
    Kind kind = Kind::delta_trace;
    std::string name;
    /// Sweep paths first, then the kind's columns.
    std::vector<std::string> columns;
    std::vector<Record> records;
    bool partial = false;
    Timing timing;
    json spec;

    std::size_t failed() const;
};

json to_json(const ResultEnvelope& env);
ResultEnvelope envelope_from_json(const json& doc);

struct RunOptions {
    /// <= 0 picks the flag fallback chain: ATIQO_WORKERS, then the core count.
    int workers = 0;
    /// Reuse cached points from an earlier run of the same spec.
    bool resume = false;
    bool use_cache = true;
    /// Defaults to <output.path>/.cache.
    std::optional<std::filesystem::path> cache_dir;
};

int resolve_workers(int requested);

/// Columns the kind emits after the sweep columns.
std::vector<std::string> kind_columns(const ExperimentSpec& spec);

/// Points per sweep combination.
std::size_t kind_points(const ExperimentSpec& spec);
std::size_t point_count(const ExperimentSpec& spec);

/// Evaluate one point; throws on failure.
Record evaluate_point(const ExperimentSpec& spec, std::size_t index, int inner_threads = 0);

ResultEnvelope run(const ExperimentSpec& spec, const RunOptions& options = {});

}  // namespace atiqo::pipeline
