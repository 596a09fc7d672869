#include "spdc/dispersion.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"

namespace spdc {

CrystalConfig::CrystalConfig(SellmeierCoefficients y_fit, SellmeierCoefficients z_fit,
                             std::string pump_axis, std::string signal_axis,
                             std::string idler_axis, double length_mm,
                             double poling_period_um, double degenerate_nm,
                             double temperature_c)
    : y_fit_(std::move(y_fit)),
      z_fit_(std::move(z_fit)),
      pump_axis_(std::move(pump_axis)),
      signal_axis_(std::move(signal_axis)),
      idler_axis_(std::move(idler_axis)),
      length_um_(length_mm * 1e3),
      poling_period_um_(poling_period_um),
      degenerate_nm_(degenerate_nm),
      temperature_c_(temperature_c) {
    y_fit_.validate();
    z_fit_.validate();
    if (y_fit_.axis != "y" || z_fit_.axis != "z")
        throw ConfigError("crystal fits must be tagged with their axes (y, z)");
    for (const std::string* axis : {&pump_axis_, &signal_axis_, &idler_axis_}) {
        if (*axis != "y" && *axis != "z")
            throw ConfigError("unknown crystal axis \"" + *axis + "\" (expected y or z)");
    }
    if (signal_axis_ == idler_axis_)
        throw ConfigError("type-II cut requires signal and idler on different axes");
    if (!(length_mm > 0.0)) throw ConfigError("crystal length must be positive");
    if (!(poling_period_um_ > 0.0)) throw ConfigError("poling period must be positive");
    if (!(degenerate_nm_ > 0.0)) throw ConfigError("degenerate wavelength must be positive");

    const double m = qpm_mismatch(*this, degenerate_nm_);
    grating_sign_ = m < 0.0 ? -1 : 1;
}

const SellmeierCoefficients& CrystalConfig::fit(const std::string& axis) const {
    if (axis == "y") return y_fit_;
    if (axis == "z") return z_fit_;
    throw ConfigError("unknown crystal axis \"" + axis + "\"");
}

CrystalConfig CrystalConfig::with_poling_period(double poling_period_um) const {
    return CrystalConfig(y_fit_, z_fit_, pump_axis_, signal_axis_, idler_axis_,
                         length_mm(), poling_period_um, degenerate_nm_, temperature_c_);
}

CrystalConfig CrystalConfig::with_degenerate_nm(double degenerate_nm) const {
    return CrystalConfig(y_fit_, z_fit_, pump_axis_, signal_axis_, idler_axis_,
                         length_mm(), poling_period_um_, degenerate_nm, temperature_c_);
}

double wavevector(const SellmeierCoefficients& fit, double lambda_um) {
    return kTwoPi * fit.index(lambda_um) / lambda_um;
}

double inverse_group_velocity(const SellmeierCoefficients& fit, double lambda_um) {
    return fit.group_index(lambda_um) / kSpeedOfLightUmPs;
}

double group_velocity(const SellmeierCoefficients& fit, double lambda_um) {
    return 1.0 / inverse_group_velocity(fit, lambda_um);
}

double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i, double omega_p) {
    const double kp = wavevector(cfg.pump(), lambda_um_from_omega(omega_p));
    const double ks = wavevector(cfg.signal(), lambda_um_from_omega(omega_s));
    const double ki = wavevector(cfg.idler(), lambda_um_from_omega(omega_i));
    return kp - ks - ki - cfg.grating_sign() * kTwoPi / cfg.poling_period_um();
}

double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i) {
    return delta_k(cfg, omega_s, omega_i, omega_s + omega_i);
}

double qpm_mismatch(const CrystalConfig& cfg, double lambda0_nm) {
    const double l0 = um_from_nm(lambda0_nm);
    const double lp = l0 / 2.0;
    return wavevector(cfg.pump(), lp) - wavevector(cfg.signal(), l0) -
           wavevector(cfg.idler(), l0);
}

double solve_poling_period(const CrystalConfig& cfg, double lambda0_nm) {
    const double m = qpm_mismatch(cfg, lambda0_nm);
    if (std::abs(m) < 1e-12) {
        std::ostringstream os;
        os << "no physical poling period at " << lambda0_nm
           << " nm: wavevector mismatch vanishes (no grating needed)";
        throw DomainError(os.str());
    }
    return kTwoPi / std::abs(m);
}

double tilt_angle_from_inverse_velocities(double ivg_pump, double ivg_signal,
                                          double ivg_idler) {
    const double den = ivg_pump - ivg_idler;
    if (den == 0.0)
        throw DomainError(
            "phase-matching ridge orientation undefined: pump and idler group "
            "velocities coincide");
    return std::atan(-(ivg_pump - ivg_signal) / den) * 180.0 / kPi;
}

double tilt_angle_deg(const CrystalConfig& cfg, double lambda0_nm) {
    const double l0 = um_from_nm(lambda0_nm);
    return tilt_angle_from_inverse_velocities(
        inverse_group_velocity(cfg.pump(), l0 / 2.0),
        inverse_group_velocity(cfg.signal(), l0),
        inverse_group_velocity(cfg.idler(), l0));
}

}  // namespace spdc
