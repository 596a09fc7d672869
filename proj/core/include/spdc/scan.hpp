#pragma once

#include <optional>
#include <vector>

#include "spdc/instrument.hpp"

namespace spdc {

// Grid construction policy for the analysis pipelines. Spans are multiples of
// the estimated marginal FWHM; amplitude purity needs a wider window than
// intensity purity because the sinc side lobes die off only as 1/x, so the
// two analyses carry separate defaults.
struct GridOptions {
    int n = 256;
    double span_widths = 4.0;       // intensity analyses
    double jsa_span_widths = 8.5;   // amplitude analyses
    double pad_nm = 0.0;            // extra half-span, e.g. room for filters
    std::optional<double> half_span_nm;  // overrides the width rule entirely

    double half_span_for(const CrystalConfig& cfg, const PumpSpec& pump,
                         double lambda0_nm, SpectrumKind kind) const;
};

enum class Objective { PJsi, PJsa };

// Degenerate single-point simulation: pump at lambda0/2, grids centered on
// lambda0. Purities come from frequency-uniform grids; marginals and the
// exported map from the wavelength grid.
struct PointResult {
    double lambda0_nm = 0.0;
    double poling_period_um = 0.0;
    double tilt_deg = 0.0;
    double p_jsi = 0.0;
    double p_jsa = 0.0;
    double fwhm_signal_nm = 0.0;
    double fwhm_idler_nm = 0.0;
    JointSpectrum jsi;  // wavelength grid
};
PointResult simulate_point(const CrystalConfig& cfg, const PumpSpec& pump,
                           const GridOptions& grid);

struct OptimizeResult {
    double sigma_rad_ps = 0.0;
    double purity = 0.0;
    int evaluations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Maximize purity over the pump bandwidth by golden-section search, relative
// tolerance 1e-4 on sigma. The objective is assumed unimodal; the initial
// bracket comes from matching pump and phase-matching widths and is expanded
// geometrically until it holds an interior maximum. Throws NumericalError
// with the attempted bracket when expansion fails.
OptimizeResult optimize_pump_bandwidth(const CrystalConfig& cfg, double lambda0_nm,
                                       Objective objective, const GridOptions& grid,
                                       int max_expansions = 8);

struct SweepOptions {
    double from_nm = 1460.0;
    double to_nm = 1675.0;
    double step_nm = 5.0;
    bool resolve_poling = false;  // default mirrors a fixed physical crystal
    double sigma_jsi = 0.0;       // pump bandwidths fixed per objective
    double sigma_jsa = 0.0;
    GridOptions grid;
    int threads = 0;  // 0 = hardware concurrency
};

struct SweepRow {
    double lambda_nm = 0.0;
    double poling_um = 0.0;
    double tilt_deg = 0.0;
    double p_jsi = 0.0;
    double p_jsa = 0.0;
    double fwhm_s_nm = 0.0;
    double fwhm_i_nm = 0.0;
};

// Tunability scan. The pump tracks lambda/2; sigma_jsi and sigma_jsa stay
// fixed (optimized once at the design point). With resolve_poling the grating
// is re-matched at every wavelength; otherwise the config's period is held.
// Rows are independent and computed concurrently, assembled in order.
std::vector<SweepRow> wavelength_sweep(const CrystalConfig& cfg, const SweepOptions& opts);

}  // namespace spdc
