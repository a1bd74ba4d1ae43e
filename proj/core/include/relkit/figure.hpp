#pragma once

#include <filesystem>
#include <string>

#include "relkit/experiment.hpp"

namespace relkit {

/// Renders the three-panel summary figure (A: benchmark error measures,
/// B: coefficients under raw latent scores, C: coefficients under percentile
/// ranks) as standalone SVG, 900x300 per panel. Output bytes are a pure
/// function of the table.
std::string render_figure_svg(const AggregateTable& table);

void write_figure_svg(const AggregateTable& table, const std::filesystem::path& path);

}  // namespace relkit
