#include "spdc/grid.hpp"

#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

void SpectralGrid::validate() const {
    if (signal.domain != idler.domain)
        throw ContractError("grid axes must share a domain");
    for (const Axis1D* a : {&signal, &idler}) {
        if (a->n < 16) {
            std::ostringstream os;
            os << "grid needs at least 16 points per axis, got " << a->n;
            throw DomainError(os.str());
        }
        if (!(a->step > 0.0)) throw DomainError("grid step must be positive");
        if (!(a->start > 0.0)) throw DomainError("grid coordinates must be positive");
    }
}

SpectralGrid make_wavelength_grid(double center_signal_nm, double center_idler_nm,
                                  double half_span_nm, int n) {
    if (n < 16) throw DomainError("grid needs at least 16 points per axis");
    if (!(half_span_nm > 0.0)) throw DomainError("grid half-span must be positive");
    const double step = 2.0 * half_span_nm / (n - 1);
    SpectralGrid g;
    g.signal = {center_signal_nm - half_span_nm, step, n, AxisDomain::Wavelength};
    g.idler = {center_idler_nm - half_span_nm, step, n, AxisDomain::Wavelength};
    g.validate();
    return g;
}

SpectralGrid make_frequency_grid(const SpectralGrid& wavelength_grid) {
    if (!wavelength_grid.is_wavelength())
        throw ContractError("make_frequency_grid expects a wavelength grid");
    auto convert = [](const Axis1D& a) {
        // Long wavelength end maps to the low frequency end.
        const double w_lo = omega_from_lambda_um(um_from_nm(a.last()));
        const double w_hi = omega_from_lambda_um(um_from_nm(a.start));
        Axis1D f;
        f.start = w_lo;
        f.step = (w_hi - w_lo) / (a.n - 1);
        f.n = a.n;
        f.domain = AxisDomain::AngularFrequency;
        return f;
    };
    SpectralGrid g;
    g.signal = convert(wavelength_grid.signal);
    g.idler = convert(wavelength_grid.idler);
    g.validate();
    return g;
}

Axis1D axis_from_samples(const Eigen::VectorXd& coords, AxisDomain domain) {
    const int n = static_cast<int>(coords.size());
    if (n < 2) throw ConfigError("axis needs at least two samples");
    const double step = (coords[n - 1] - coords[0]) / (n - 1);
    if (!(step > 0.0)) throw ConfigError("axis samples must increase");
    for (int i = 0; i < n; ++i) {
        const double expect = coords[0] + step * i;
        if (std::abs(coords[i] - expect) > 1e-9 * std::abs(expect)) {
            std::ostringstream os;
            os << "axis samples not uniform at index " << i << ": " << coords[i]
               << " vs expected " << expect;
            throw ConfigError(os.str());
        }
    }
    return {coords[0], step, n, domain};
}

}  // namespace spdc
