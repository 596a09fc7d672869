#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spdc/instrument.hpp"
#include "spdc/scan.hpp"

namespace spdc {

// Everything a run needs: crystal, pump, grid policy.
struct SimulationConfig {
    CrystalConfig crystal;
    PumpSpec pump;
    GridOptions grid;
};

// The 30 mm periodically poled KTP source: grating matched at 1584 nm, pump
// bandwidth pre-optimized for intensity purity at the design point.
SimulationConfig default_simulation_config();

// JSON round trip for configs. Layout:
//   { "crystal": { length_mm, poling_period_um?, degenerate_nm, temperature_c,
//                  axes: {pump, signal, idler}, sellmeier: [axis docs] },
//     "pump": { center_nm?, sigma_rad_ps }, "grid": { n, span_widths, ... } }
// A missing poling period is solved at the degenerate wavelength; a missing
// pump center defaults to half the degenerate wavelength.
SimulationConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SimulationConfig& cfg);

// Write-to-temp-then-rename; readers never see partial files.
void atomic_write(const std::filesystem::path& path, const std::string& contents);

// Joint spectrum CSV: header lambda_s_nm,lambda_i_nm,value, one row per cell,
// signal as the outer (slow) index, values in scientific notation. Reruns of
// the same computation produce byte-identical files.
void write_spectrum_csv(const std::filesystem::path& path, const JointSpectrum& js);
JointSpectrum read_spectrum_csv(const std::filesystem::path& path, SpectrumKind kind);

// Measured grids: same CSV layout with integer values, plus a JSON sidecar
// { "dwell_s": ..., "filters": [{center_nm, fwhm_nm}, {center_nm, fwhm_nm}] }.
void write_measured(const std::filesystem::path& csv_path,
                    const std::filesystem::path& sidecar_path, const MeasuredGrid& grid);
MeasuredGrid read_measured(const std::filesystem::path& csv_path,
                           const std::filesystem::path& sidecar_path);

std::string schmidt_to_json(const SchmidtResult& result);
std::string report_to_json(const MeasurementReport& report,
                           const std::vector<FilterSpec>& filters);
std::string comparison_to_json(const ComparisonReport& report);

// Sweep CSV header: lambda_nm,poling_um,tilt_deg,p_jsi,p_jsa,fwhm_s_nm,fwhm_i_nm.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path);

}  // namespace spdc
