#pragma once

#include <Eigen/Dense>

#include "spdc/constants.hpp"

namespace spdc {

enum class AxisDomain { Wavelength, AngularFrequency };

// Uniform sample axis. Wavelength axes are in nm, frequency axes in rad/ps.
struct Axis1D {
    double start = 0.0;
    double step = 0.0;
    int n = 0;
    AxisDomain domain = AxisDomain::Wavelength;

    double value(int i) const { return start + step * i; }
    double last() const { return value(n - 1); }
    double center() const { return start + 0.5 * step * (n - 1); }
    double span() const { return step * (n - 1); }

    Eigen::VectorXd values() const {
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = value(i);
        return v;
    }
};

// Two-axis sample grid for joint spectra; both axes share a domain. At least
// 16 points per axis (spectral analyses need structure to resolve).
struct SpectralGrid {
    Axis1D signal;
    Axis1D idler;

    void validate() const;
    double cell_area() const { return signal.step * idler.step; }
    bool is_wavelength() const { return signal.domain == AxisDomain::Wavelength; }
};

// Wavelength grid centered on center_nm covering +- half_span_nm, n points.
SpectralGrid make_wavelength_grid(double center_signal_nm, double center_idler_nm,
                                  double half_span_nm, int n);

// Frequency grid covering exactly the band of a wavelength grid (endpoints
// mapped through omega = 2 pi c / lambda), uniform in omega, same point count.
SpectralGrid make_frequency_grid(const SpectralGrid& wavelength_grid);

// Reconstruct an axis from sampled coordinates; enforces uniform spacing to
// 1e-9 relative and snaps to (start, step). Used by file readers.
Axis1D axis_from_samples(const Eigen::VectorXd& coords, AxisDomain domain);

}  // namespace spdc
