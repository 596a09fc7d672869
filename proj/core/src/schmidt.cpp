#include "spdc/schmidt.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

void check_input(const JointSpectrum& js) {
    js.validate();
    if (js.grid.is_wavelength())
        throw ContractError(
            "Schmidt analysis needs a frequency-domain grid; resample with "
            "to_angular_frequency first");
    if (!js.normalized) throw ContractError("Schmidt analysis needs a normalized spectrum");
    if (js.values.cwiseAbs().maxCoeff() == 0.0)
        throw DomainError("spectrum is identically zero, nothing to decompose");
}

}  // namespace

SchmidtResult decompose(const JointSpectrum& js) {
    check_input(js);

    Eigen::BDCSVD<Eigen::MatrixXd> svd(js.values);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    Eigen::VectorXd s = svd.singularValues();

    // Continuum coefficients carry the cell measure; for a normalized
    // amplitude they already sum (squared) to 1. Either way the Schmidt
    // spectrum is defined L2-normalized, so divide the residual out exactly.
    s *= std::sqrt(js.grid.cell_area());
    const double norm2 = s.squaredNorm();
    if (!(norm2 > 0.0)) throw DomainError("spectrum has vanishing Schmidt spectrum");
    const Eigen::VectorXd c = s / std::sqrt(norm2);

    SchmidtResult r;
    r.kind = js.kind;
    r.purity = c.array().square().square().sum();
    r.schmidt_number = 1.0 / r.purity;
    const double cutoff = 1e-12 * c[0];
    for (int j = 0; j < c.size(); ++j) {
        if (c[j] < cutoff) break;
        r.coefficients.push_back(c[j]);
    }
    return r;
}

double purity_oracle(const JointSpectrum& js) {
    check_input(js);
    if (js.grid.signal.n > 128 || js.grid.idler.n > 128) {
        std::ostringstream os;
        os << "purity oracle is O(n^3) and limited to 128 points per axis, got "
           << js.grid.signal.n << "x" << js.grid.idler.n
           << "; rebuild the spectrum on a coarser grid";
        throw ContractError(os.str());
    }
    // purity = sum s_j^4 / (sum s_j^2)^2 = ||F F^T||_F^2 / ||F||_F^4; the
    // grid measure cancels in the ratio.
    const Eigen::MatrixXd gram = js.values * js.values.transpose();
    const double num = gram.array().square().sum();
    const double den = js.values.array().square().sum();
    if (!(den > 0.0)) throw DomainError("spectrum has no mass");
    return num / (den * den);
}

}  // namespace spdc
