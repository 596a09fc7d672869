#include "spdc/sellmeier.hpp"

#include <cmath>
#include <sstream>

#include "spdc/errors.hpp"

namespace spdc {
namespace {

double n_squared(const SellmeierCoefficients& s, double l) {
    const double l2 = l * l;
    double v = s.a - s.d * l2;
    for (std::size_t j = 0; j < s.b.size(); ++j)
        v += s.b[j] * l2 / (l2 - s.c[j]);
    return v;
}

// d(n^2)/dl; each pole term differentiates to -2 b c l / (l^2 - c)^2.
double n_squared_slope(const SellmeierCoefficients& s, double l) {
    const double l2 = l * l;
    double v = -2.0 * s.d * l;
    for (std::size_t j = 0; j < s.b.size(); ++j) {
        const double den = l2 - s.c[j];
        v += -2.0 * s.b[j] * s.c[j] * l / (den * den);
    }
    return v;
}

[[noreturn]] void throw_window(const SellmeierCoefficients& s, double l) {
    std::ostringstream os;
    os << "wavelength " << l << " um outside validity window [" << s.valid_min_um
       << ", " << s.valid_max_um << "] um of axis " << s.axis << " fit";
    throw DomainError(os.str());
}

}  // namespace

void SellmeierCoefficients::validate() const {
    if (axis != "y" && axis != "z")
        throw ConfigError("sellmeier axis must be \"y\" or \"z\", got \"" + axis + "\"");
    if (b.size() != c.size())
        throw ConfigError("sellmeier pole arrays differ in length");
    if (b.empty())
        throw ConfigError("sellmeier fit needs at least one pole term");
    if (!(valid_min_um > 0.0) || !(valid_max_um > valid_min_um))
        throw ConfigError("sellmeier validity window empty or inverted");
    // Poles inside the window make n^2 blow up; scan the window for sanity.
    const int steps = 200;
    for (int i = 0; i <= steps; ++i) {
        const double l = valid_min_um + (valid_max_um - valid_min_um) * i / steps;
        for (double cj : c) {
            if (cj > 0.0 && std::abs(l * l - cj) < 1e-12)
                throw ConfigError("sellmeier pole inside validity window");
        }
        if (n_squared(*this, l) <= 1.0)
            throw ConfigError("sellmeier fit gives n^2 <= 1 inside validity window");
    }
}

double SellmeierCoefficients::index(double lambda_um) const {
    if (!in_window(lambda_um)) throw_window(*this, lambda_um);
    return std::sqrt(n_squared(*this, lambda_um));
}

double SellmeierCoefficients::index_slope(double lambda_um) const {
    if (!in_window_interior(lambda_um)) throw_window(*this, lambda_um);
    return n_squared_slope(*this, lambda_um) / (2.0 * std::sqrt(n_squared(*this, lambda_um)));
}

double SellmeierCoefficients::group_index(double lambda_um) const {
    return index(lambda_um) - lambda_um * index_slope(lambda_um);
}

SellmeierCoefficients ktp_y_axis() {
    SellmeierCoefficients s;
    s.axis = "y";
    s.a = 2.09930;
    s.b = {0.922683};
    s.c = {0.0467695};
    s.d = 0.0138408;
    s.valid_min_um = 0.40;
    s.valid_max_um = 3.40;
    s.source = "F. Konig and F. N. C. Wong, Appl. Phys. Lett. 84, 1644 (2004)";
    return s;
}

SellmeierCoefficients ktp_z_axis() {
    SellmeierCoefficients s;
    s.axis = "z";
    s.a = 2.12725;
    s.b = {1.18431, 0.6603};
    s.c = {0.0514852, 100.00507};
    s.d = 0.00968956;
    s.valid_min_um = 0.40;
    s.valid_max_um = 3.50;
    s.source = "K. Fradkin, A. Arie, A. Skliar, and G. Rosenman, Appl. Phys. Lett. 74, 914 (1999)";
    return s;
}

}  // namespace spdc
