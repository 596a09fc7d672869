#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spdc/jsa.hpp"
#include "spdc/scan.hpp"

namespace spdc {

// Self-contained SVG renderings; no plotting dependency. Output is
// deterministic (fixed-precision coordinates, no timestamps).

// Joint-spectrum heatmap. Grids beyond 128 cells per axis are block-averaged
// down to keep files small.
void write_heatmap_svg(const std::filesystem::path& path, const JointSpectrum& js,
                       const std::string& title);

// Purity curves of a sweep (p_jsi and p_jsa vs wavelength).
void write_sweep_svg(const std::filesystem::path& path, const std::vector<SweepRow>& rows,
                     const std::string& title);

}  // namespace spdc
