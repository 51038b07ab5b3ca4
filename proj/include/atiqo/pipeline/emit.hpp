#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "atiqo/pipeline/runner.hpp"

namespace atiqo::pipeline {

/// One row per record row, columns in envelope order, preceded by `#`
/// metadata lines (version, spec hash, kind, units, status). Timing is left
/// out so the text depends only on the config and the results.
std::string csv_text(const ResultEnvelope& env);

/// Dense matrix: first row the x axis, first column the y axis, corner empty.
std::string matrix_csv(const json& map);

/// Write <dir>/<name>.csv or .json, plus <name>_map_<index>.csv for every
/// Wigner record. Returns the written paths.
std::vector<std::filesystem::path> emit(const ResultEnvelope& env, Format format, const std::filesystem::path& dir);

/// %.17g, the shortest form that round-trips every double.
std::string format_number(double x);

}  // namespace atiqo::pipeline
