#pragma once

namespace spdc {

// Internal unit system: lengths in um, time in ps. Wavevectors come out in
// rad/um, angular frequencies in rad/ps, group velocities in um/ps.
inline constexpr double kSpeedOfLightUmPs = 299.792458;  // exact
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double um_from_nm(double nm) { return nm * 1e-3; }
inline constexpr double nm_from_um(double um) { return um * 1e3; }

// omega [rad/ps] <-> vacuum wavelength [um]; the map is its own inverse.
inline constexpr double omega_from_lambda_um(double lambda_um) {
    return kTwoPi * kSpeedOfLightUmPs / lambda_um;
}
inline constexpr double lambda_um_from_omega(double omega) {
    return kTwoPi * kSpeedOfLightUmPs / omega;
}

// FWHM = kGaussFwhm * sigma for a Gaussian intensity profile.
inline constexpr double kGaussFwhm = 2.35482004503094938;  // 2*sqrt(2*ln2)

}  // namespace spdc
