#pragma once

#include <vector>

#include "spdc/jsa.hpp"
#include "spdc/schmidt.hpp"

namespace spdc {

// Scanning bandpass filter, Gaussian in wavelength. The center only matters
// as metadata (a scan moves the filter across the grid); convolution uses the
// FWHM alone.
struct FilterSpec {
    double center_nm = 0.0;
    double fwhm_nm = 0.0;
};

enum class Arm { Signal, Idler };

// Separable Gaussian blur of an intensity spectrum on its wavelength grid,
// one kernel per arm. Kernels are sampled at cell centers, truncated at 7
// sigma, and renormalized per output cell where the support leaves the grid,
// so interior mass is conserved exactly and edges are not darkened.
// Requires filter FWHM >= 2 grid steps (the kernel must be resolvable).
JointSpectrum convolve_jsi(const JointSpectrum& jsi, const FilterSpec& signal_filter,
                           const FilterSpec& idler_filter);

// Marginal distribution of one arm: sum over the other axis times that axis's
// cell width. Integrates (times own step) to the spectrum's total mass.
struct Marginal1D {
    Axis1D axis;
    Eigen::VectorXd values;
};
Marginal1D marginal(const JointSpectrum& js, Arm arm);

// Full width at half maximum by linear interpolation at half of the raw
// sampled maximum. Throws DomainError when either crossing is not bracketed
// inside the axis (peak too close to an edge).
double fwhm(const Marginal1D& m);

// Width of a Gaussian convolved with a Gaussian.
double quadrature_fwhm(double fwhm_a, double fwhm_b);

// A filter-scan measurement: integer counts per grid cell plus dwell time.
struct MeasuredGrid {
    SpectralGrid grid;            // wavelength domain
    Eigen::MatrixXd counts;       // non-negative integers
    double dwell_s = 0.0;
    std::vector<FilterSpec> filters;  // metadata from the sidecar

    void validate() const;
};

struct MeasurementReport {
    double p_jsi = 0.0;
    double schmidt_number = 0.0;
    double fwhm_signal_nm = 0.0;
    double fwhm_idler_nm = 0.0;
    double peak_cps = 0.0;
    SchmidtResult schmidt;
};

// Normalize counts into a JSI, resample to frequency for the Schmidt step,
// and read off marginal widths and the peak rate.
MeasurementReport analyze_measured(const MeasuredGrid& grid);

// Side-by-side of model and measurement at the measured grid's center
// wavelength: theoretical, filter-convolved, and measured purity and widths,
// with differences. sigma_p is the pump bandwidth for the model columns.
struct ComparisonReport {
    double lambda0_nm = 0.0;
    double sigma_p = 0.0;
    double p_theory = 0.0, p_convolved = 0.0, p_measured = 0.0;
    double fwhm_s_theory = 0.0, fwhm_s_convolved = 0.0, fwhm_s_measured = 0.0;
    double fwhm_i_theory = 0.0, fwhm_i_convolved = 0.0, fwhm_i_measured = 0.0;
    double peak_cps = 0.0;
};
ComparisonReport compare_measurement(const CrystalConfig& cfg, double sigma_p,
                                     const MeasuredGrid& grid);

}  // namespace spdc
