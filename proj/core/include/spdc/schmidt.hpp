#pragma once

#include <vector>

#include "spdc/jsa.hpp"

namespace spdc {

// Schmidt spectrum of a joint spectrum. Coefficients are L2-normalized
// singular values (sum c_j^2 = 1), so purity = sum c_j^4 and K = 1/purity.
// For intensity input this is the decomposition of the intensity kernel
// itself, the standard measured-JSI figure.
struct SchmidtResult {
    SpectrumKind kind = SpectrumKind::Jsi;
    double purity = 0.0;          // in (0, 1]
    double schmidt_number = 0.0;  // >= 1
    std::vector<double> coefficients;  // descending, truncated below 1e-12 * c1
};

// SVD route. Requires a normalized, frequency-domain spectrum (resample
// wavelength grids upstream with to_angular_frequency). Throws ContractError
// on an unnormalized or wavelength-domain input, DomainError on a spectrum
// with no mass.
SchmidtResult decompose(const JointSpectrum& js);

// SVD-free cross-check: purity as a Gram-matrix contraction,
// ||F F^T||_F^2 / ||F||_F^4. Cost grows as n^3; grids above 128 per axis are
// refused (use a coarser grid for oracle comparisons).
double purity_oracle(const JointSpectrum& js);

}  // namespace spdc
