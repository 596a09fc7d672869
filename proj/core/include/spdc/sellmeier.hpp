#pragma once

#include <string>
#include <vector>

namespace spdc {

// One refractive-index fit for a single crystal axis,
//   n^2(l) = a + sum_j b_j l^2 / (l^2 - c_j) - d l^2,   l in um.
// Covers the common pole-expansion fits for KTP (single- and two-pole forms).
struct SellmeierCoefficients {
    std::string axis;            // "y" or "z"
    double a = 0.0;
    std::vector<double> b;       // pole strengths
    std::vector<double> c;       // pole positions, um^2
    double d = 0.0;              // lambda^2 correction
    double valid_min_um = 0.0;   // validity window, inclusive
    double valid_max_um = 0.0;
    std::string source;          // citation, metadata only

    // Throws ConfigError on structural problems (b/c size mismatch, empty
    // window, n^2 <= 0 anywhere on the window).
    void validate() const;

    bool in_window(double lambda_um) const {
        return lambda_um >= valid_min_um && lambda_um <= valid_max_um;
    }
    // True strictly inside the window; derivatives require a neighborhood.
    bool in_window_interior(double lambda_um) const {
        return lambda_um > valid_min_um && lambda_um < valid_max_um;
    }

    double index(double lambda_um) const;        // n, window-checked
    double index_slope(double lambda_um) const;  // dn/dl [1/um], interior only
    double group_index(double lambda_um) const;  // n - l dn/dl, interior only
};

// Default fits for flux-grown KTP: y axis after Konig & Wong, APL 84, 1644
// (2004); z axis after Fradkin et al., APL 74, 914 (1999).
SellmeierCoefficients ktp_y_axis();
SellmeierCoefficients ktp_z_axis();

}  // namespace spdc
