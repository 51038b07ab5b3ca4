#pragma once

#include <string>
#include <vector>

#include "atiqo/pipeline/config.hpp"

namespace atiqo::pipeline {

/// fig1, fig2, fig3a, fig3b, fig3c, fig4, fig5, fig6.
const std::vector<std::string>& preset_names();

/// Config document of a figure preset. `reduced` lowers grid densities so
/// the preset runs in seconds.
std::string preset_document(const std::string& name, bool reduced = false);

ExperimentSpec preset(const std::string& name, bool reduced = false);

/// A single preset, or every member of a group ("fig3" expands to fig3a/b/c).
std::vector<ExperimentSpec> preset_group(const std::string& name, bool reduced = false);

}  // namespace atiqo::pipeline
