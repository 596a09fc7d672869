#pragma once

#include <Eigen/Dense>

#include "spdc/dispersion.hpp"
#include "spdc/grid.hpp"

namespace spdc {

// Pulsed pump spectrum. sigma is the amplitude's Gaussian scale in rad/ps:
// the spectral intensity is exp(-((w - w_p)/sigma)^2), so the amplitude
// carries half the exponent. Folding the square into sigma is the classic
// silent factor-of-two mistake; keep the convention in one place (pump_envelope).
struct PumpSpec {
    double center_nm = 0.0;      // vacuum wavelength of the pump carrier
    double sigma_rad_ps = 0.0;   // > 0

    double omega_p() const;      // rad/ps
    void validate() const;
};

enum class SpectrumKind { Jsa, Jsi };

// Sampled joint spectrum. Values are real: the model's amplitude is
// sinc * Gaussian (negative side lobes allowed), the intensity its square.
// normalized means sum(value^2 for Jsa, value for Jsi) * cell_area == 1.
struct JointSpectrum {
    SpectralGrid grid;
    Eigen::MatrixXd values;   // (i, j) = (signal index, idler index)
    SpectrumKind kind = SpectrumKind::Jsi;
    bool normalized = false;

    void validate() const;
};

// Pump amplitude exp(-((w_s + w_i - w_p)/sigma)^2 / 2); peak 1 on the
// energy-conserving line.
double pump_envelope(const PumpSpec& pump, double omega_s, double omega_i);

// sinc(dk L / 2) with sinc(x) = sin(x)/x, sinc(0) = 1. Range [-0.2172..., 1].
double phase_matching(const CrystalConfig& cfg, double omega_s, double omega_i);

double sinc(double x);

// Evaluate the model on a grid (either domain) and normalize. Throws
// DomainError listing offending cells when the grid leaves the dispersion
// fits' validity windows.
JointSpectrum build_jsa(const CrystalConfig& cfg, const PumpSpec& pump,
                        const SpectralGrid& grid);
JointSpectrum build_jsi(const CrystalConfig& cfg, const PumpSpec& pump,
                        const SpectralGrid& grid);

void normalize(JointSpectrum& js);

// Resample a wavelength-domain spectrum onto the frequency grid covering the
// same band (per-axis linear interpolation; the lambda->omega Jacobian is
// applied so integrals are preserved, sqrt of it for amplitudes). Input must
// be normalized; output is renormalized.
JointSpectrum to_angular_frequency(const JointSpectrum& js);

// Gaussian-model estimate of the JSI marginal sigma in omega [rad/ps] for each
// arm: the sinc is replaced by a Gaussian with matched FWHM and the resulting
// 2x2 quadratic form inverted. Used for default grid spans.
struct MarginalSigmaOmega {
    double signal = 0.0;
    double idler = 0.0;
};
MarginalSigmaOmega estimate_marginal_sigma(const CrystalConfig& cfg, const PumpSpec& pump,
                                           double lambda0_nm);

// Default half-span in nm: span_widths * (estimated marginal FWHM in nm, max
// over arms). The same span serves both axes, keeping grids symmetric.
double default_half_span_nm(const CrystalConfig& cfg, const PumpSpec& pump,
                            double lambda0_nm, double span_widths);

}  // namespace spdc
