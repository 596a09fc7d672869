#pragma once

#include <string>

#include "spdc/sellmeier.hpp"

namespace spdc {

// Periodically poled crystal cut for collinear type-II downconversion. The
// three waves propagate along x; each is polarized along y or z and sees the
// corresponding index fit. Temperature is carried as metadata only (the fits
// are used as published).
class CrystalConfig {
public:
    CrystalConfig(SellmeierCoefficients y_fit, SellmeierCoefficients z_fit,
                  std::string pump_axis, std::string signal_axis, std::string idler_axis,
                  double length_mm, double poling_period_um, double degenerate_nm,
                  double temperature_c);

    // Axes are validated to "y"/"z" at construction, so lookups cannot fail
    // and the object stays trivially copyable (no self-referential pointers).
    const SellmeierCoefficients& pump() const { return fit_for(pump_axis_); }
    const SellmeierCoefficients& signal() const { return fit_for(signal_axis_); }
    const SellmeierCoefficients& idler() const { return fit_for(idler_axis_); }
    const SellmeierCoefficients& fit(const std::string& axis) const;

    double length_um() const { return length_um_; }
    double length_mm() const { return length_um_ * 1e-3; }
    double poling_period_um() const { return poling_period_um_; }
    double degenerate_nm() const { return degenerate_nm_; }
    double temperature_c() const { return temperature_c_; }
    // +1 or -1: which first-order grating vector phase-matches the process.
    // Fixed by the sign of k_p - k_s - k_i at the degenerate design point.
    int grating_sign() const { return grating_sign_; }

    // Copy with a different poling period (grating sign re-derived).
    CrystalConfig with_poling_period(double poling_period_um) const;
    CrystalConfig with_degenerate_nm(double degenerate_nm) const;

private:
    const SellmeierCoefficients& fit_for(const std::string& axis) const {
        return axis == "y" ? y_fit_ : z_fit_;
    }

    SellmeierCoefficients y_fit_, z_fit_;
    std::string pump_axis_, signal_axis_, idler_axis_;
    double length_um_;
    double poling_period_um_;
    double degenerate_nm_;
    double temperature_c_;
    int grating_sign_;
};

// k = 2 pi n(l) / l [rad/um].
double wavevector(const SellmeierCoefficients& fit, double lambda_um);

// k'(omega) = n_g / c [ps/um], analytic via dn/dl and the chain rule.
double inverse_group_velocity(const SellmeierCoefficients& fit, double lambda_um);

// 1 / k'(omega) [um/ps].
double group_velocity(const SellmeierCoefficients& fit, double lambda_um);

// Collinear first-order QPM mismatch [rad/um],
//   dk = k_p(w_p) - k_s(w_s) - k_i(w_i) - sign * 2 pi / poling_period.
// Energy conservation w_p = w_s + w_i is the caller's responsibility; the
// two-argument form enforces it.
double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i, double omega_p);
double delta_k(const CrystalConfig& cfg, double omega_s, double omega_i);

// Zero-order mismatch k_p(2 w0) - k_s(w0) - k_i(w0) at the degenerate point
// of wavelength lambda0 [rad/um]. Negative for this KTP process.
double qpm_mismatch(const CrystalConfig& cfg, double lambda0_nm);

// Poling period that nulls delta_k at degeneracy, Lambda = 2 pi / |mismatch|.
// Ignores cfg's stored period. Throws DomainError when the mismatch vanishes
// (no grating needed, period unbounded).
double solve_poling_period(const CrystalConfig& cfg, double lambda0_nm);

// Orientation of the phase-matching ridge in the (w_s, w_i) plane, degrees in
// (-90, 90), from tan(theta) = -(k'_p - k'_s)/(k'_p - k'_i) with all k'
// evaluated at the degenerate point. Throws DomainError when k'_p = k'_i
// (ridge vertical, angle undefined by this convention).
double tilt_angle_deg(const CrystalConfig& cfg, double lambda0_nm);

// Same formula on raw inverse group velocities; scale-invariant in its inputs.
double tilt_angle_from_inverse_velocities(double ivg_pump, double ivg_signal, double ivg_idler);

}  // namespace spdc
