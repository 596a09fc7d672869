// Command-line front end for the spdc core library.
//
// Exit codes: 0 success; 2 usage or configuration problems; 3 physics domain
// violations (wavelengths outside fit windows, filters the grid cannot
// resolve); 4 numerical failures (optimizer bracket, API misuse).

#include <clocale>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>
#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>  // vendored single header
#endif

#include "spdc/errors.hpp"
#include "spdc/instrument.hpp"
#include "spdc/io.hpp"
#include "spdc/scan.hpp"
#include "spdc/schmidt.hpp"
#include "spdc/svg.hpp"

namespace {

using nlohmann::json;

struct GridFlags {
    std::optional<int> n;
    std::optional<double> span_widths, jsa_span_widths, pad_nm, half_span_nm;

    void attach(CLI::App* sub) {
        sub->add_option("--grid-n", n, "points per grid axis")->check(CLI::Range(16, 4096));
        sub->add_option("--span-widths", span_widths,
                        "half-span in marginal widths for intensity grids");
        sub->add_option("--jsa-span-widths", jsa_span_widths,
                        "half-span in marginal widths for amplitude grids");
        sub->add_option("--pad-nm", pad_nm, "extra half-span in nm");
        sub->add_option("--half-span-nm", half_span_nm,
                        "fixed half-span in nm, overrides the width rule");
    }
    void apply(spdc::GridOptions& g) const {
        if (n) g.n = *n;
        if (span_widths) g.span_widths = *span_widths;
        if (jsa_span_widths) g.jsa_span_widths = *jsa_span_widths;
        if (pad_nm) g.pad_nm = *pad_nm;
        if (half_span_nm) g.half_span_nm = *half_span_nm;
    }
};

spdc::SimulationConfig load(const std::string& path) {
    return path.empty() ? spdc::default_simulation_config() : spdc::load_config(path);
}

// Re-center the source: pairs degenerate at lambda0 with a freshly matched
// grating. Used wherever --resolve-poling is accepted.
spdc::CrystalConfig retarget(const spdc::CrystalConfig& c, double lambda0_nm) {
    const spdc::CrystalConfig moved = c.with_degenerate_nm(lambda0_nm);
    return moved.with_poling_period(spdc::solve_poling_period(moved, lambda0_nm));
}

std::string heat_title(const char* kind, double lambda0_nm) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s at %.1f nm", kind, lambda0_nm);
    return buf;
}

void write_json(const std::string& path, const json& j) {
    spdc::atomic_write(path, j.dump(2) + "\n");
}

struct SimulateOpts {
    std::string config;
    std::optional<double> lambda0, sigma_p;
    std::optional<std::string> optimize;
    bool resolve_poling = false;
    GridFlags grid;
    std::string csv, json_path, svg, jsa_csv, jsa_svg;
};

void run_simulate(const SimulateOpts& o) {
    spdc::SimulationConfig sim = load(o.config);
    spdc::CrystalConfig crystal = sim.crystal;
    const double lambda0 = o.lambda0 ? *o.lambda0 : crystal.degenerate_nm();
    if (o.resolve_poling) crystal = retarget(crystal, lambda0);

    spdc::PumpSpec pump = sim.pump;
    if (o.lambda0) pump.center_nm = lambda0 / 2.0;
    if (o.sigma_p) pump.sigma_rad_ps = *o.sigma_p;

    spdc::GridOptions grid = sim.grid;
    o.grid.apply(grid);

    if (o.optimize) {
        const spdc::Objective objective =
            *o.optimize == "p_jsa" ? spdc::Objective::PJsa : spdc::Objective::PJsi;
        pump.sigma_rad_ps =
            spdc::optimize_pump_bandwidth(crystal, lambda0, objective, grid).sigma_rad_ps;
    }

    const spdc::PointResult r = spdc::simulate_point(crystal, pump, grid);
    std::printf("lambda0_nm=%.3f poling_um=%.6f tilt_deg=%.3f\n", r.lambda0_nm,
                r.poling_period_um, r.tilt_deg);
    std::printf("p_jsi=%.6f p_jsa=%.6f fwhm_signal_nm=%.4f fwhm_idler_nm=%.4f\n", r.p_jsi,
                r.p_jsa, r.fwhm_signal_nm, r.fwhm_idler_nm);

    if (!o.csv.empty()) spdc::write_spectrum_csv(o.csv, r.jsi);
    if (!o.svg.empty()) spdc::write_heatmap_svg(o.svg, r.jsi, heat_title("JSI", lambda0));
    if (!o.jsa_csv.empty() || !o.jsa_svg.empty()) {
        const double half = grid.half_span_for(crystal, pump, lambda0, spdc::SpectrumKind::Jsa);
        const spdc::JointSpectrum jsa = spdc::build_jsa(
            crystal, pump, spdc::make_wavelength_grid(lambda0, lambda0, half, grid.n));
        if (!o.jsa_csv.empty()) spdc::write_spectrum_csv(o.jsa_csv, jsa);
        if (!o.jsa_svg.empty())
            spdc::write_heatmap_svg(o.jsa_svg, jsa, heat_title("|JSA|", lambda0));
    }
    if (!o.json_path.empty()) {
        write_json(o.json_path, json{{"lambda0_nm", r.lambda0_nm},
                                     {"poling_period_um", r.poling_period_um},
                                     {"tilt_deg", r.tilt_deg},
                                     {"sigma_rad_ps", pump.sigma_rad_ps},
                                     {"p_jsi", r.p_jsi},
                                     {"p_jsa", r.p_jsa},
                                     {"fwhm_signal_nm", r.fwhm_signal_nm},
                                     {"fwhm_idler_nm", r.fwhm_idler_nm}});
    }
}

struct OptimizeOpts {
    std::string config;
    std::optional<double> lambda0;
    std::string objective = "p_jsi";
    bool resolve_poling = false;
    GridFlags grid;
    std::string json_path;
};

void run_optimize(const OptimizeOpts& o) {
    spdc::SimulationConfig sim = load(o.config);
    spdc::CrystalConfig crystal = sim.crystal;
    const double lambda0 = o.lambda0 ? *o.lambda0 : crystal.degenerate_nm();
    if (o.resolve_poling) crystal = retarget(crystal, lambda0);

    spdc::GridOptions grid = sim.grid;
    o.grid.apply(grid);
    const spdc::Objective objective =
        o.objective == "p_jsa" ? spdc::Objective::PJsa : spdc::Objective::PJsi;

    const spdc::OptimizeResult r =
        spdc::optimize_pump_bandwidth(crystal, lambda0, objective, grid);
    std::printf("objective=%s lambda0_nm=%.3f sigma_rad_ps=%.6f purity=%.6f evaluations=%d\n",
                o.objective.c_str(), lambda0, r.sigma_rad_ps, r.purity, r.evaluations);

    if (!o.json_path.empty()) {
        write_json(o.json_path, json{{"objective", o.objective},
                                     {"lambda0_nm", lambda0},
                                     {"sigma_rad_ps", r.sigma_rad_ps},
                                     {"purity", r.purity},
                                     {"evaluations", r.evaluations},
                                     {"bracket_rad_ps", {r.bracket_lo, r.bracket_hi}}});
    }
}

struct SweepOpts {
    std::string config;
    double from_nm = 1460.0, to_nm = 1675.0, step_nm = 5.0;
    bool resolve_poling = false;
    std::optional<double> sigma_jsi, sigma_jsa;
    int threads = 0;
    GridFlags grid;
    std::string csv, json_path, svg;
};

void run_sweep(const SweepOpts& o) {
    spdc::SimulationConfig sim = load(o.config);
    const spdc::CrystalConfig& crystal = sim.crystal;
    spdc::GridOptions grid = sim.grid;
    o.grid.apply(grid);

    spdc::SweepOptions so;
    so.from_nm = o.from_nm;
    so.to_nm = o.to_nm;
    so.step_nm = o.step_nm;
    so.resolve_poling = o.resolve_poling;
    so.grid = grid;
    so.threads = o.threads;
    // Bandwidths default to the optimum at the design wavelength, one per
    // objective; pass --sigma-jsi/--sigma-jsa to skip the optimization.
    so.sigma_jsi = o.sigma_jsi ? *o.sigma_jsi
                               : spdc::optimize_pump_bandwidth(crystal, crystal.degenerate_nm(),
                                                               spdc::Objective::PJsi, grid)
                                     .sigma_rad_ps;
    so.sigma_jsa = o.sigma_jsa ? *o.sigma_jsa
                               : spdc::optimize_pump_bandwidth(crystal, crystal.degenerate_nm(),
                                                               spdc::Objective::PJsa, grid)
                                     .sigma_rad_ps;

    const std::vector<spdc::SweepRow> rows = spdc::wavelength_sweep(crystal, so);

    double pjsi_min = 1.0, pjsi_max = 0.0, pjsa_min = 1.0, pjsa_max = 0.0;
    for (const spdc::SweepRow& r : rows) {
        pjsi_min = std::min(pjsi_min, r.p_jsi);
        pjsi_max = std::max(pjsi_max, r.p_jsi);
        pjsa_min = std::min(pjsa_min, r.p_jsa);
        pjsa_max = std::max(pjsa_max, r.p_jsa);
    }
    std::printf("rows=%zu sigma_jsi=%.6f sigma_jsa=%.6f poling=%s\n", rows.size(),
                so.sigma_jsi, so.sigma_jsa, o.resolve_poling ? "resolved" : "fixed");
    std::printf("p_jsi=[%.6f, %.6f] p_jsa=[%.6f, %.6f]\n", pjsi_min, pjsi_max, pjsa_min,
                pjsa_max);

    if (!o.csv.empty()) spdc::write_sweep_csv(o.csv, rows);
    if (!o.svg.empty()) spdc::write_sweep_svg(o.svg, rows, "Purity across the tuning range");
    if (!o.json_path.empty()) {
        write_json(o.json_path,
                   json{{"from_nm", o.from_nm},
                        {"to_nm", o.to_nm},
                        {"step_nm", o.step_nm},
                        {"rows", rows.size()},
                        {"resolve_poling", o.resolve_poling},
                        {"sigma_jsi_rad_ps", so.sigma_jsi},
                        {"sigma_jsa_rad_ps", so.sigma_jsa},
                        {"p_jsi", {{"min", pjsi_min}, {"max", pjsi_max}}},
                        {"p_jsa", {{"min", pjsa_min}, {"max", pjsa_max}}}});
    }
}

struct ConvolveOpts {
    std::string config, input;
    std::optional<double> lambda0, sigma_p;
    bool resolve_poling = false;
    double fwhm_s = 0.0, fwhm_i = 0.0;
    GridFlags grid;
    std::string csv, json_path, svg;
};

void run_convolve(const ConvolveOpts& o) {
    spdc::SimulationConfig sim = load(o.config);
    spdc::JointSpectrum jsi;
    double lambda0 = 0.0;
    if (!o.input.empty()) {
        jsi = spdc::read_spectrum_csv(o.input, spdc::SpectrumKind::Jsi);
        lambda0 = 0.5 * (jsi.grid.signal.center() + jsi.grid.idler.center());
    } else {
        spdc::CrystalConfig crystal = sim.crystal;
        lambda0 = o.lambda0 ? *o.lambda0 : crystal.degenerate_nm();
        if (o.resolve_poling) crystal = retarget(crystal, lambda0);
        spdc::PumpSpec pump = sim.pump;
        if (o.lambda0) pump.center_nm = lambda0 / 2.0;
        if (o.sigma_p) pump.sigma_rad_ps = *o.sigma_p;
        spdc::GridOptions grid = sim.grid;
        o.grid.apply(grid);
        // Room for the blur tails, so edge renormalization stays out of the
        // populated region.
        grid.pad_nm += 2.0 * std::max(o.fwhm_s, o.fwhm_i);
        const double half = grid.half_span_for(crystal, pump, lambda0, spdc::SpectrumKind::Jsi);
        jsi = spdc::build_jsi(crystal, pump,
                              spdc::make_wavelength_grid(lambda0, lambda0, half, grid.n));
    }

    const spdc::FilterSpec f_s{jsi.grid.signal.center(), o.fwhm_s};
    const spdc::FilterSpec f_i{jsi.grid.idler.center(), o.fwhm_i};

    const double p_before = spdc::decompose(spdc::to_angular_frequency(jsi)).purity;
    const double ws_before = spdc::fwhm(spdc::marginal(jsi, spdc::Arm::Signal));
    const double wi_before = spdc::fwhm(spdc::marginal(jsi, spdc::Arm::Idler));

    const spdc::JointSpectrum conv = spdc::convolve_jsi(jsi, f_s, f_i);
    const double p_after = spdc::decompose(spdc::to_angular_frequency(conv)).purity;
    const double ws_after = spdc::fwhm(spdc::marginal(conv, spdc::Arm::Signal));
    const double wi_after = spdc::fwhm(spdc::marginal(conv, spdc::Arm::Idler));

    std::printf("filters_nm=(%.3f, %.3f)\n", o.fwhm_s, o.fwhm_i);
    std::printf("p_jsi %.6f -> %.6f\n", p_before, p_after);
    std::printf("fwhm_signal_nm %.4f -> %.4f (quadrature %.4f)\n", ws_before, ws_after,
                spdc::quadrature_fwhm(ws_before, o.fwhm_s));
    std::printf("fwhm_idler_nm %.4f -> %.4f (quadrature %.4f)\n", wi_before, wi_after,
                spdc::quadrature_fwhm(wi_before, o.fwhm_i));

    if (!o.csv.empty()) spdc::write_spectrum_csv(o.csv, conv);
    if (!o.svg.empty())
        spdc::write_heatmap_svg(o.svg, conv, heat_title("Filtered JSI", lambda0));
    if (!o.json_path.empty()) {
        write_json(
            o.json_path,
            json{{"filters_fwhm_nm", {o.fwhm_s, o.fwhm_i}},
                 {"before",
                  {{"p_jsi", p_before}, {"fwhm_signal_nm", ws_before}, {"fwhm_idler_nm", wi_before}}},
                 {"after",
                  {{"p_jsi", p_after}, {"fwhm_signal_nm", ws_after}, {"fwhm_idler_nm", wi_after}}},
                 {"quadrature_fwhm_nm",
                  {spdc::quadrature_fwhm(ws_before, o.fwhm_s),
                   spdc::quadrature_fwhm(wi_before, o.fwhm_i)}}});
    }
}

struct AnalyzeOpts {
    std::string config, counts, sidecar;
    bool compare = false;
    std::optional<double> sigma_p;
    std::string json_path, svg;
};

void run_analyze(const AnalyzeOpts& o) {
    spdc::SimulationConfig sim = load(o.config);
    const spdc::MeasuredGrid mg = spdc::read_measured(o.counts, o.sidecar);
    const spdc::MeasurementReport rep = spdc::analyze_measured(mg);
    std::printf("p_jsi=%.6f schmidt_number=%.6f fwhm_signal_nm=%.4f fwhm_idler_nm=%.4f "
                "peak_cps=%.2f\n",
                rep.p_jsi, rep.schmidt_number, rep.fwhm_signal_nm, rep.fwhm_idler_nm,
                rep.peak_cps);

    if (!o.svg.empty()) {
        spdc::JointSpectrum jsi;
        jsi.grid = mg.grid;
        jsi.values = mg.counts;
        jsi.kind = spdc::SpectrumKind::Jsi;
        spdc::normalize(jsi);
        const double lambda0 = 0.5 * (mg.grid.signal.center() + mg.grid.idler.center());
        spdc::write_heatmap_svg(o.svg, jsi, heat_title("Measured JSI", lambda0));
    }

    if (o.compare) {
        const double sigma = o.sigma_p ? *o.sigma_p : sim.pump.sigma_rad_ps;
        const spdc::ComparisonReport cr = spdc::compare_measurement(sim.crystal, sigma, mg);
        std::printf("p_jsi theory=%.6f convolved=%.6f measured=%.6f (diff %+.6f)\n",
                    cr.p_theory, cr.p_convolved, cr.p_measured,
                    cr.p_measured - cr.p_convolved);
        std::printf("fwhm_signal_nm convolved=%.4f measured=%.4f\n", cr.fwhm_s_convolved,
                    cr.fwhm_s_measured);
        std::printf("fwhm_idler_nm convolved=%.4f measured=%.4f\n", cr.fwhm_i_convolved,
                    cr.fwhm_i_measured);
        if (!o.json_path.empty()) write_json(o.json_path, json::parse(comparison_to_json(cr)));
    } else if (!o.json_path.empty()) {
        write_json(o.json_path, json::parse(report_to_json(rep, mg.filters)));
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_NUMERIC, "C");
    CLI::App app{"Joint-spectrum simulation for a periodically poled KTP pair source"};
    app.require_subcommand(1);

    std::string config_out;
    CLI::App* c_config = app.add_subcommand("config", "print the effective configuration");
    std::string config_in;
    c_config->add_option("--config", config_in, "configuration JSON")->capture_default_str();
    c_config->add_option("--out", config_out, "write to a file instead of stdout");

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "joint spectrum at one wavelength");
    c_sim->add_option("--config", sim.config, "configuration JSON");
    c_sim->add_option("--lambda0", sim.lambda0, "degenerate pair wavelength in nm");
    CLI::Option* sim_sigma =
        c_sim->add_option("--sigma-p", sim.sigma_p, "pump bandwidth in rad/ps");
    c_sim->add_option("--optimize", sim.optimize,
                      "optimize the pump bandwidth for this purity first")
        ->check(CLI::IsMember({"p_jsi", "p_jsa"}))
        ->excludes(sim_sigma);
    c_sim->add_flag("--resolve-poling", sim.resolve_poling,
                    "re-match the grating at lambda0");
    sim.grid.attach(c_sim);
    c_sim->add_option("--csv", sim.csv, "write the intensity map");
    c_sim->add_option("--json", sim.json_path, "write the summary");
    c_sim->add_option("--svg", sim.svg, "write an intensity heatmap");
    c_sim->add_option("--jsa-csv", sim.jsa_csv, "write the amplitude map");
    c_sim->add_option("--jsa-svg", sim.jsa_svg, "write an amplitude heatmap");

    OptimizeOpts opt;
    CLI::App* c_opt = app.add_subcommand("optimize", "pump bandwidth maximizing purity");
    c_opt->add_option("--config", opt.config, "configuration JSON");
    c_opt->add_option("--lambda0", opt.lambda0, "degenerate pair wavelength in nm");
    c_opt->add_option("--objective", opt.objective, "purity to maximize")
        ->check(CLI::IsMember({"p_jsi", "p_jsa"}))
        ->capture_default_str();
    c_opt->add_flag("--resolve-poling", opt.resolve_poling,
                    "re-match the grating at lambda0");
    opt.grid.attach(c_opt);
    c_opt->add_option("--json", opt.json_path, "write the result");

    SweepOpts swp;
    CLI::App* c_swp = app.add_subcommand("sweep", "purity across a wavelength range");
    c_swp->add_option("--config", swp.config, "configuration JSON");
    c_swp->add_option("--from", swp.from_nm, "first wavelength in nm")->capture_default_str();
    c_swp->add_option("--to", swp.to_nm, "last wavelength in nm")->capture_default_str();
    c_swp->add_option("--step", swp.step_nm, "step in nm")->capture_default_str();
    c_swp->add_flag("--resolve-poling", swp.resolve_poling,
                    "re-match the grating at every wavelength");
    c_swp->add_option("--sigma-jsi", swp.sigma_jsi,
                      "pump bandwidth for intensity purity in rad/ps");
    c_swp->add_option("--sigma-jsa", swp.sigma_jsa,
                      "pump bandwidth for amplitude purity in rad/ps");
    c_swp->add_option("--threads", swp.threads, "worker threads, 0 = all cores");
    swp.grid.attach(c_swp);
    c_swp->add_option("--csv", swp.csv, "write the per-wavelength table");
    c_swp->add_option("--json", swp.json_path, "write the band summary");
    c_swp->add_option("--svg", swp.svg, "write the purity chart");

    ConvolveOpts cnv;
    CLI::App* c_cnv = app.add_subcommand("convolve", "apply arm filters to an intensity map");
    c_cnv->add_option("--config", cnv.config, "configuration JSON");
    c_cnv->add_option("--input", cnv.input, "intensity CSV; omitted = simulate");
    c_cnv->add_option("--lambda0", cnv.lambda0, "degenerate pair wavelength in nm");
    c_cnv->add_option("--sigma-p", cnv.sigma_p, "pump bandwidth in rad/ps");
    c_cnv->add_flag("--resolve-poling", cnv.resolve_poling,
                    "re-match the grating at lambda0");
    c_cnv->add_option("--filter-fwhm-s", cnv.fwhm_s, "signal filter FWHM in nm")->required();
    c_cnv->add_option("--filter-fwhm-i", cnv.fwhm_i, "idler filter FWHM in nm")->required();
    cnv.grid.attach(c_cnv);
    c_cnv->add_option("--csv", cnv.csv, "write the filtered map");
    c_cnv->add_option("--json", cnv.json_path, "write before/after metrics");
    c_cnv->add_option("--svg", cnv.svg, "write a filtered heatmap");

    AnalyzeOpts ana;
    CLI::App* c_ana = app.add_subcommand("analyze", "reduce a measured count grid");
    c_ana->add_option("--config", ana.config, "configuration JSON");
    c_ana->add_option("--counts", ana.counts, "counts CSV")->required();
    c_ana->add_option("--sidecar", ana.sidecar, "dwell/filter sidecar JSON")->required();
    c_ana->add_flag("--compare", ana.compare, "add model columns for the same source");
    c_ana->add_option("--sigma-p", ana.sigma_p, "pump bandwidth for the model in rad/ps");
    c_ana->add_option("--json", ana.json_path, "write the report");
    c_ana->add_option("--svg", ana.svg, "write a measured heatmap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto guarded = [](const std::function<void()>& body) {
        try {
            body();
            return 0;
        } catch (const spdc::ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const spdc::DomainError& e) {
            std::fprintf(stderr, "domain error: %s\n", e.what());
            return 3;
        } catch (const spdc::NumericalError& e) {
            std::fprintf(stderr, "numerical error: %s\n", e.what());
            return 4;
        } catch (const spdc::ContractError& e) {
            std::fprintf(stderr, "contract error: %s\n", e.what());
            return 4;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    };

    if (c_config->parsed()) {
        return guarded([&] {
            const std::string text = spdc::config_to_json(load(config_in));
            if (config_out.empty())
                std::fputs(text.c_str(), stdout);
            else
                spdc::atomic_write(config_out, text);
        });
    }
    if (c_sim->parsed()) return guarded([&] { run_simulate(sim); });
    if (c_opt->parsed()) return guarded([&] { run_optimize(opt); });
    if (c_swp->parsed()) return guarded([&] { run_sweep(swp); });
    if (c_cnv->parsed()) return guarded([&] { run_convolve(cnv); });
    if (c_ana->parsed()) return guarded([&] { run_analyze(ana); });
    return 0;
}
