#include "spdc/scan.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "spdc/errors.hpp"

namespace spdc {

double GridOptions::half_span_for(const CrystalConfig& cfg, const PumpSpec& pump,
                                  double lambda0_nm, SpectrumKind kind) const {
    if (half_span_nm) return *half_span_nm + pad_nm;
    const double widths = kind == SpectrumKind::Jsa ? jsa_span_widths : span_widths;
    return default_half_span_nm(cfg, pump, lambda0_nm, widths) + pad_nm;
}

PointResult simulate_point(const CrystalConfig& cfg, const PumpSpec& pump,
                           const GridOptions& grid) {
    pump.validate();
    const double lambda0 = 2.0 * pump.center_nm;

    PointResult r;
    r.lambda0_nm = lambda0;
    r.poling_period_um = cfg.poling_period_um();
    r.tilt_deg = tilt_angle_deg(cfg, lambda0);

    const double half_jsi = grid.half_span_for(cfg, pump, lambda0, SpectrumKind::Jsi);
    const SpectralGrid lgrid = make_wavelength_grid(lambda0, lambda0, half_jsi, grid.n);
    r.jsi = build_jsi(cfg, pump, lgrid);
    r.fwhm_signal_nm = fwhm(marginal(r.jsi, Arm::Signal));
    r.fwhm_idler_nm = fwhm(marginal(r.jsi, Arm::Idler));
    r.p_jsi = decompose(build_jsi(cfg, pump, make_frequency_grid(lgrid))).purity;

    const double half_jsa = grid.half_span_for(cfg, pump, lambda0, SpectrumKind::Jsa);
    const SpectralGrid agrid =
        make_frequency_grid(make_wavelength_grid(lambda0, lambda0, half_jsa, grid.n));
    r.p_jsa = decompose(build_jsa(cfg, pump, agrid)).purity;
    return r;
}

namespace {

double purity_at(const CrystalConfig& cfg, double lambda0_nm, double sigma,
                 Objective objective, const GridOptions& grid) {
    const PumpSpec pump{lambda0_nm / 2.0, sigma};
    const SpectrumKind kind =
        objective == Objective::PJsi ? SpectrumKind::Jsi : SpectrumKind::Jsa;
    const double half = grid.half_span_for(cfg, pump, lambda0_nm, kind);
    const SpectralGrid fgrid =
        make_frequency_grid(make_wavelength_grid(lambda0_nm, lambda0_nm, half, grid.n));
    const JointSpectrum js = kind == SpectrumKind::Jsi ? build_jsi(cfg, pump, fgrid)
                                                       : build_jsa(cfg, pump, fgrid);
    return decompose(js).purity;
}

}  // namespace

OptimizeResult optimize_pump_bandwidth(const CrystalConfig& cfg, double lambda0_nm,
                                       Objective objective, const GridOptions& grid,
                                       int max_expansions) {
    // Width-matching guess: pump intensity HWHM equal to the sinc ridge HWHM.
    const double l0 = um_from_nm(lambda0_nm);
    const double dt = std::abs(inverse_group_velocity(cfg.signal(), l0) -
                               inverse_group_velocity(cfg.idler(), l0));
    if (!(dt > 0.0))
        throw NumericalError("group velocities equal; no bandwidth-matching guess");
    constexpr double kSincHalf = 1.39155737825151;
    const double guess = 4.0 * kSincHalf / (std::sqrt(std::log(2.0)) * cfg.length_um() * dt);

    int evals = 0;
    auto f = [&](double s) {
        ++evals;
        return purity_at(cfg, lambda0_nm, s, objective, grid);
    };

    double a = guess / 4.0, b = guess * 4.0;
    double mid = std::sqrt(a * b);
    double fa = f(a), fm = f(mid), fb = f(b);
    int tries = 0;
    while (!(fm > fa && fm > fb)) {
        if (++tries > max_expansions) {
            std::ostringstream os;
            os << "no interior purity maximum in pump-bandwidth bracket [" << a << ", " << b
               << "] rad/ps after " << max_expansions << " expansions (purity " << fa << ", "
               << fm << ", " << fb << ")";
            throw NumericalError(os.str());
        }
        a /= 2.0;
        b *= 2.0;
        mid = std::sqrt(a * b);
        fa = f(a);
        fm = f(mid);
        fb = f(b);
    }

    const double bracket_lo = a, bracket_hi = b;
    constexpr double gr = 0.6180339887498949;  // golden ratio conjugate
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-4 * 0.5 * (a + b)) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    OptimizeResult r;
    r.sigma_rad_ps = 0.5 * (a + b);
    r.purity = f(r.sigma_rad_ps);
    r.evaluations = evals;
    r.bracket_lo = bracket_lo;
    r.bracket_hi = bracket_hi;
    return r;
}

std::vector<SweepRow> wavelength_sweep(const CrystalConfig& cfg, const SweepOptions& opts) {
    if (!(opts.step_nm > 0.0) || !(opts.to_nm >= opts.from_nm))
        throw ConfigError("sweep range empty or inverted");
    if (!(opts.sigma_jsi > 0.0) || !(opts.sigma_jsa > 0.0))
        throw ConfigError("sweep needs pump bandwidths for both objectives");

    std::vector<double> lambdas;
    for (double l = opts.from_nm; l <= opts.to_nm + 1e-9; l += opts.step_nm)
        lambdas.push_back(l);
    std::vector<SweepRow> rows(lambdas.size());

    auto compute_row = [&](std::size_t idx) {
        const double lambda = lambdas[idx];
        const CrystalConfig local =
            opts.resolve_poling
                ? cfg.with_poling_period(solve_poling_period(cfg, lambda))
                : cfg;
        SweepRow row;
        row.lambda_nm = lambda;
        row.poling_um = local.poling_period_um();
        row.tilt_deg = tilt_angle_deg(local, lambda);

        const PumpSpec pump_jsi{lambda / 2.0, opts.sigma_jsi};
        const double half = opts.grid.half_span_for(local, pump_jsi, lambda, SpectrumKind::Jsi);
        const SpectralGrid lgrid = make_wavelength_grid(lambda, lambda, half, opts.grid.n);
        const JointSpectrum jsi = build_jsi(local, pump_jsi, lgrid);
        row.fwhm_s_nm = fwhm(marginal(jsi, Arm::Signal));
        row.fwhm_i_nm = fwhm(marginal(jsi, Arm::Idler));
        row.p_jsi = decompose(build_jsi(local, pump_jsi, make_frequency_grid(lgrid))).purity;

        const PumpSpec pump_jsa{lambda / 2.0, opts.sigma_jsa};
        const double half_a =
            opts.grid.half_span_for(local, pump_jsa, lambda, SpectrumKind::Jsa);
        const SpectralGrid agrid =
            make_frequency_grid(make_wavelength_grid(lambda, lambda, half_a, opts.grid.n));
        row.p_jsa = decompose(build_jsa(local, pump_jsa, agrid)).purity;
        rows[idx] = row;
    };

    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int nthreads = std::max(
        1, std::min<int>(opts.threads > 0 ? opts.threads : (hw > 0 ? hw : 1),
                         static_cast<int>(lambdas.size())));
    if (nthreads == 1) {
        for (std::size_t i = 0; i < lambdas.size(); ++i) compute_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= lambdas.size()) return;
                try {
                    compute_row(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    return rows;
}

}  // namespace spdc
