#include "spdc/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

// Symmetric kernel sampled at cell centers, truncated at 7 sigma (tail mass
// ~1e-12), normalized to unit sum.
std::vector<double> gaussian_kernel(double fwhm_nm, double step_nm) {
    const double sigma = fwhm_nm / kGaussFwhm;
    const int radius = static_cast<int>(std::ceil(7.0 * sigma / step_nm));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int m = -radius; m <= radius; ++m) {
        const double t = m * step_nm / sigma;
        k[m + radius] = std::exp(-0.5 * t * t);
        sum += k[m + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// One separable pass. For output cells whose kernel support leaves the grid,
// divide by the in-range weight so edges are unbiased rather than darkened;
// interior cells see the unit-sum kernel unchanged.
void blur_axis(Eigen::MatrixXd& v, const std::vector<double>& kernel, bool along_rows) {
    const int radius = (static_cast<int>(kernel.size()) - 1) / 2;
    const int nout = along_rows ? static_cast<int>(v.cols()) : static_cast<int>(v.rows());
    const int nlines = along_rows ? static_cast<int>(v.rows()) : static_cast<int>(v.cols());
    Eigen::VectorXd line(nout), out(nout);
    for (int l = 0; l < nlines; ++l) {
        if (along_rows)
            line = v.row(l).transpose();
        else
            line = v.col(l);
        for (int i = 0; i < nout; ++i) {
            double acc = 0.0, w = 0.0;
            const int m0 = std::max(-radius, -i);
            const int m1 = std::min(radius, nout - 1 - i);
            for (int m = m0; m <= m1; ++m) {
                const double kv = kernel[m + radius];
                acc += kv * line[i + m];
                w += kv;
            }
            out[i] = acc / w;
        }
        if (along_rows)
            v.row(l) = out.transpose();
        else
            v.col(l) = out;
    }
}

}  // namespace

JointSpectrum convolve_jsi(const JointSpectrum& jsi, const FilterSpec& signal_filter,
                           const FilterSpec& idler_filter) {
    jsi.validate();
    if (jsi.kind != SpectrumKind::Jsi)
        throw ContractError("convolution is defined on intensity spectra");
    if (!jsi.grid.is_wavelength())
        throw ContractError("filters are specified in nm; convolve on the wavelength grid");
    auto check = [&](const FilterSpec& f, double step, const char* arm) {
        if (!(f.fwhm_nm > 0.0)) throw ConfigError("filter FWHM must be positive");
        if (f.fwhm_nm < 2.0 * step) {
            std::ostringstream os;
            os << arm << " filter FWHM " << f.fwhm_nm << " nm is below 2 grid steps ("
               << 2.0 * step << " nm); use a finer grid to resolve the kernel";
            throw DomainError(os.str());
        }
    };
    check(signal_filter, jsi.grid.signal.step, "signal");
    check(idler_filter, jsi.grid.idler.step, "idler");

    JointSpectrum out = jsi;
    blur_axis(out.values, gaussian_kernel(signal_filter.fwhm_nm, jsi.grid.signal.step), false);
    blur_axis(out.values, gaussian_kernel(idler_filter.fwhm_nm, jsi.grid.idler.step), true);
    normalize(out);
    return out;
}

Marginal1D marginal(const JointSpectrum& js, Arm arm) {
    js.validate();
    Marginal1D m;
    if (arm == Arm::Signal) {
        m.axis = js.grid.signal;
        m.values = js.values.rowwise().sum() * js.grid.idler.step;
    } else {
        m.axis = js.grid.idler;
        m.values = js.values.colwise().sum().transpose() * js.grid.signal.step;
    }
    return m;
}

double fwhm(const Marginal1D& m) {
    const int n = static_cast<int>(m.values.size());
    if (n < 3) throw DomainError("marginal too short for a width estimate");
    int peak = 0;
    for (int i = 1; i < n; ++i)
        if (m.values[i] > m.values[peak]) peak = i;
    const double half = m.values[peak] / 2.0;
    if (!(half > 0.0)) throw DomainError("marginal has no peak");

    auto cross = [&](int dir) {
        for (int j = peak; j + dir >= 0 && j + dir < n; j += dir) {
            const double y0 = m.values[j], y1 = m.values[j + dir];
            if ((y0 - half) * (y1 - half) <= 0.0 && y0 != y1) {
                const double t = (half - y0) / (y1 - y0);
                return m.axis.value(j) + t * dir * m.axis.step;
            }
        }
        throw DomainError(
            "half maximum not bracketed inside the grid; widen the span to measure FWHM");
    };
    const double right = cross(+1);
    const double left = cross(-1);
    return right - left;
}

double quadrature_fwhm(double fwhm_a, double fwhm_b) {
    if (fwhm_a < 0.0 || fwhm_b < 0.0) throw ContractError("widths must be non-negative");
    return std::hypot(fwhm_a, fwhm_b);
}

void MeasuredGrid::validate() const {
    grid.validate();
    if (!grid.is_wavelength()) throw ContractError("measured grids are wavelength-sampled");
    if (counts.rows() != grid.signal.n || counts.cols() != grid.idler.n)
        throw ConfigError("measured counts do not match the grid");
    if (!(dwell_s > 0.0)) throw ConfigError("dwell time must be positive");
    for (int i = 0; i < counts.rows(); ++i) {
        for (int j = 0; j < counts.cols(); ++j) {
            const double c = counts(i, j);
            if (c < 0.0 || c != std::floor(c))
                throw ConfigError("counts must be non-negative integers");
        }
    }
}

MeasurementReport analyze_measured(const MeasuredGrid& grid) {
    grid.validate();
    if (grid.counts.sum() == 0.0) throw DomainError("measured grid has no counts");

    JointSpectrum jsi;
    jsi.grid = grid.grid;
    jsi.values = grid.counts;
    jsi.kind = SpectrumKind::Jsi;
    normalize(jsi);

    MeasurementReport r;
    r.schmidt = decompose(to_angular_frequency(jsi));
    r.p_jsi = r.schmidt.purity;
    r.schmidt_number = r.schmidt.schmidt_number;
    r.fwhm_signal_nm = fwhm(marginal(jsi, Arm::Signal));
    r.fwhm_idler_nm = fwhm(marginal(jsi, Arm::Idler));
    r.peak_cps = grid.counts.maxCoeff() / grid.dwell_s;
    return r;
}

ComparisonReport compare_measurement(const CrystalConfig& cfg, double sigma_p,
                                     const MeasuredGrid& grid) {
    const MeasurementReport meas = analyze_measured(grid);
    const double lambda0 = 0.5 * (grid.grid.signal.center() + grid.grid.idler.center());
    if (grid.filters.size() != 2)
        throw ConfigError("comparison needs the two arm filters from the sidecar");

    const CrystalConfig matched =
        cfg.with_degenerate_nm(lambda0).with_poling_period(
            solve_poling_period(cfg, lambda0));
    const PumpSpec pump{lambda0 / 2.0, sigma_p};

    const int n = 256;
    const double half = default_half_span_nm(matched, pump, lambda0, 4.0);
    const SpectralGrid lgrid = make_wavelength_grid(lambda0, lambda0, half, n);
    const JointSpectrum jsi = build_jsi(matched, pump, lgrid);

    ComparisonReport r;
    r.lambda0_nm = lambda0;
    r.sigma_p = sigma_p;
    r.p_theory = decompose(build_jsi(matched, pump, make_frequency_grid(lgrid))).purity;
    r.fwhm_s_theory = fwhm(marginal(jsi, Arm::Signal));
    r.fwhm_i_theory = fwhm(marginal(jsi, Arm::Idler));

    const double pad = 2.0 * std::max(grid.filters[0].fwhm_nm, grid.filters[1].fwhm_nm);
    const SpectralGrid cgrid = make_wavelength_grid(lambda0, lambda0, half + pad, n);
    const JointSpectrum conv =
        convolve_jsi(build_jsi(matched, pump, cgrid), grid.filters[0], grid.filters[1]);
    r.p_convolved = decompose(to_angular_frequency(conv)).purity;
    r.fwhm_s_convolved = fwhm(marginal(conv, Arm::Signal));
    r.fwhm_i_convolved = fwhm(marginal(conv, Arm::Idler));

    r.p_measured = meas.p_jsi;
    r.fwhm_s_measured = meas.fwhm_signal_nm;
    r.fwhm_i_measured = meas.fwhm_idler_nm;
    r.peak_cps = meas.peak_cps;
    return r;
}

}  // namespace spdc
