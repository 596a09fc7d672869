#include "spdc/jsa.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "spdc/errors.hpp"

namespace spdc {

double PumpSpec::omega_p() const { return omega_from_lambda_um(um_from_nm(center_nm)); }

void PumpSpec::validate() const {
    if (!(center_nm > 0.0)) throw ConfigError("pump wavelength must be positive");
    if (!(sigma_rad_ps > 0.0)) throw ConfigError("pump bandwidth must be positive");
}

void JointSpectrum::validate() const {
    grid.validate();
    if (values.rows() != grid.signal.n || values.cols() != grid.idler.n)
        throw ContractError("spectrum matrix does not match its grid");
    if (kind == SpectrumKind::Jsi && (values.array() < 0.0).any())
        throw ContractError("intensity spectrum has negative cells");
}

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double pump_envelope(const PumpSpec& pump, double omega_s, double omega_i) {
    const double z = (omega_s + omega_i - pump.omega_p()) / pump.sigma_rad_ps;
    return std::exp(-0.5 * z * z);
}

double phase_matching(const CrystalConfig& cfg, double omega_s, double omega_i) {
    return sinc(delta_k(cfg, omega_s, omega_i) * cfg.length_um() / 2.0);
}

namespace {

// Omega values for each grid cell along one axis, regardless of domain.
Eigen::VectorXd omegas_of_axis(const Axis1D& a) {
    Eigen::VectorXd w(a.n);
    for (int i = 0; i < a.n; ++i) {
        w[i] = a.domain == AxisDomain::AngularFrequency
                   ? a.value(i)
                   : omega_from_lambda_um(um_from_nm(a.value(i)));
    }
    return w;
}

void check_windows(const CrystalConfig& cfg, const SpectralGrid& grid,
                   const Eigen::VectorXd& ws, const Eigen::VectorXd& wi) {
    std::ostringstream bad;
    int nbad = 0;
    auto check = [&](const SellmeierCoefficients& fit, double omega, const char* arm) {
        const double l = lambda_um_from_omega(omega);
        if (!fit.in_window(l)) {
            if (nbad < 5) bad << (nbad ? ", " : "") << arm << " " << nm_from_um(l) << " nm";
            ++nbad;
        }
    };
    for (int i = 0; i < grid.signal.n; ++i) check(cfg.signal(), ws[i], "signal");
    for (int j = 0; j < grid.idler.n; ++j) check(cfg.idler(), wi[j], "idler");
    // Pump sees w_s + w_i; extremes come from the corner sums.
    check(cfg.pump(), ws[0] + wi[0], "pump");
    check(cfg.pump(), ws[grid.signal.n - 1] + wi[grid.idler.n - 1], "pump");
    if (nbad > 0) {
        std::ostringstream os;
        os << "grid leaves dispersion validity windows at " << nbad
           << " cell(s): " << bad.str() << (nbad > 5 ? ", ..." : "");
        throw DomainError(os.str());
    }
}

JointSpectrum build(const CrystalConfig& cfg, const PumpSpec& pump,
                    const SpectralGrid& grid, SpectrumKind kind) {
    pump.validate();
    grid.validate();
    const Eigen::VectorXd ws = omegas_of_axis(grid.signal);
    const Eigen::VectorXd wi = omegas_of_axis(grid.idler);
    check_windows(cfg, grid, ws, wi);

    // Index caches: n(lambda) per distinct signal/idler omega, and the pump
    // grating constant. Pump index still varies cell to cell through w_s + w_i.
    JointSpectrum js;
    js.grid = grid;
    js.kind = kind;
    js.values.resize(grid.signal.n, grid.idler.n);
    const double g = cfg.grating_sign() * kTwoPi / cfg.poling_period_um();
    const double half_l = cfg.length_um() / 2.0;

    Eigen::VectorXd k_s(grid.signal.n), k_i(grid.idler.n);
    for (int i = 0; i < grid.signal.n; ++i)
        k_s[i] = wavevector(cfg.signal(), lambda_um_from_omega(ws[i]));
    for (int j = 0; j < grid.idler.n; ++j)
        k_i[j] = wavevector(cfg.idler(), lambda_um_from_omega(wi[j]));

    for (int i = 0; i < grid.signal.n; ++i) {
        for (int j = 0; j < grid.idler.n; ++j) {
            const double wp = ws[i] + wi[j];
            const double kp = wavevector(cfg.pump(), lambda_um_from_omega(wp));
            const double dk = kp - k_s[i] - k_i[j] - g;
            const double amp = sinc(dk * half_l) * pump_envelope(pump, ws[i], wi[j]);
            js.values(i, j) = kind == SpectrumKind::Jsa ? amp : amp * amp;
        }
    }
    normalize(js);
    return js;
}

}  // namespace

JointSpectrum build_jsa(const CrystalConfig& cfg, const PumpSpec& pump,
                        const SpectralGrid& grid) {
    return build(cfg, pump, grid, SpectrumKind::Jsa);
}

JointSpectrum build_jsi(const CrystalConfig& cfg, const PumpSpec& pump,
                        const SpectralGrid& grid) {
    return build(cfg, pump, grid, SpectrumKind::Jsi);
}

void normalize(JointSpectrum& js) {
    const double mass = js.kind == SpectrumKind::Jsa
                            ? js.values.array().square().sum() * js.grid.cell_area()
                            : js.values.sum() * js.grid.cell_area();
    if (!(mass > 0.0)) throw DomainError("spectrum has no mass, cannot normalize");
    js.values /= js.kind == SpectrumKind::Jsa ? std::sqrt(mass) : mass;
    js.normalized = true;
}

namespace {

// 1-D linear interpolation of (axis, col) at x; clamps outside the axis,
// which only happens at the band edges where the model has no mass.
double interp_axis(const Axis1D& axis, const Eigen::VectorXd& y, double x) {
    if (x <= axis.start) return y[0];
    if (x >= axis.last()) return y[axis.n - 1];
    const double t = (x - axis.start) / axis.step;
    const int i0 = static_cast<int>(t);
    const double f = t - i0;
    return y[i0] * (1.0 - f) + y[i0 + 1] * f;
}

}  // namespace

JointSpectrum to_angular_frequency(const JointSpectrum& js) {
    js.validate();
    if (!js.grid.is_wavelength())
        return js;  // already frequency-domain
    if (!js.normalized)
        throw ContractError("to_angular_frequency expects a normalized spectrum");

    const SpectralGrid fgrid = make_frequency_grid(js.grid);
    const int ns = fgrid.signal.n, ni = fgrid.idler.n;

    // Wavelength coordinates of the frequency samples.
    Eigen::VectorXd ls(ns), li(ni);
    for (int i = 0; i < ns; ++i) ls[i] = nm_from_um(lambda_um_from_omega(fgrid.signal.value(i)));
    for (int j = 0; j < ni; ++j) li[j] = nm_from_um(lambda_um_from_omega(fgrid.idler.value(j)));

    // Separable resample: idler axis first, then signal axis.
    Eigen::MatrixXd tmp(js.grid.signal.n, ni);
    for (int r = 0; r < js.grid.signal.n; ++r) {
        const Eigen::VectorXd row = js.values.row(r);
        for (int j = 0; j < ni; ++j) tmp(r, j) = interp_axis(js.grid.idler, row, li[j]);
    }
    JointSpectrum out;
    out.grid = fgrid;
    out.kind = js.kind;
    out.values.resize(ns, ni);
    for (int j = 0; j < ni; ++j) {
        const Eigen::VectorXd col = tmp.col(j);
        for (int i = 0; i < ns; ++i) out.values(i, j) = interp_axis(js.grid.signal, col, ls[i]);
    }

    // |f(w)|^2 dw = |f(l)|^2 dl requires the Jacobian dl/dw = l^2 / (2 pi c)
    // per axis (in nm per rad/ps); amplitudes take its square root.
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < ni; ++j) {
            const double jac = (ls[i] * ls[i]) * (li[j] * li[j]) /
                               (nm_from_um(kTwoPi * kSpeedOfLightUmPs) *
                                nm_from_um(kTwoPi * kSpeedOfLightUmPs));
            out.values(i, j) *= out.kind == SpectrumKind::Jsa ? std::sqrt(jac) : jac;
        }
    }
    normalize(out);
    return out;
}

MarginalSigmaOmega estimate_marginal_sigma(const CrystalConfig& cfg, const PumpSpec& pump,
                                           double lambda0_nm) {
    pump.validate();
    const double l0 = um_from_nm(lambda0_nm);
    const double ivp = inverse_group_velocity(cfg.pump(), l0 / 2.0);
    const double ts = ivp - inverse_group_velocity(cfg.signal(), l0);
    const double ti = ivp - inverse_group_velocity(cfg.idler(), l0);

    // Amplitude exponent A = g (L/2)^2 (ts vs + ti vi)^2 + (vs + vi)^2/(2 s^2)
    // with exp(-g x^2) FWHM-matched to sinc(x); intensity ~ exp(-v' H v),
    // H = 2 Hess(A). Marginal variance is (H^-1)_aa / 2.
    constexpr double kSincHalf = 1.39155737825151;  // sinc^2(x) = 1/2
    const double g = std::log(2.0) / (2.0 * kSincHalf * kSincHalf);
    const double hl = cfg.length_um() / 2.0;
    const double s2 = pump.sigma_rad_ps * pump.sigma_rad_ps;
    const double h11 = 2.0 * (g * hl * hl * ts * ts + 0.5 / s2);
    const double h22 = 2.0 * (g * hl * hl * ti * ti + 0.5 / s2);
    const double h12 = 2.0 * (g * hl * hl * ts * ti + 0.5 / s2);
    const double det = h11 * h22 - h12 * h12;
    if (!(det > 0.0))
        throw NumericalError("marginal width model degenerate (grid span estimate failed)");
    return {std::sqrt(h22 / det / 2.0), std::sqrt(h11 / det / 2.0)};
}

double default_half_span_nm(const CrystalConfig& cfg, const PumpSpec& pump,
                            double lambda0_nm, double span_widths) {
    if (!(span_widths > 0.0)) throw ConfigError("span_widths must be positive");
    const MarginalSigmaOmega s = estimate_marginal_sigma(cfg, pump, lambda0_nm);
    const double s_omega = std::max(s.signal, s.idler);
    const double l0 = um_from_nm(lambda0_nm);
    const double s_nm = nm_from_um(l0 * l0 / (kTwoPi * kSpeedOfLightUmPs) * s_omega);
    return span_widths * kGaussFwhm * s_nm;
}

}  // namespace spdc
