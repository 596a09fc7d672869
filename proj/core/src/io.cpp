#include "spdc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>  // vendored single header
#endif

#include "spdc/errors.hpp"

namespace spdc {

using nlohmann::json;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}
// Coordinates (nm): fixed point, sub-fm resolution. Values: 16 significant digits.
std::string fmt_coord(double v) { return fmt("%.9f", v); }
std::string fmt_value(double v) { return fmt("%.15e", v); }

json sellmeier_to_json(const SellmeierCoefficients& s) {
    return json{{"axis", s.axis},
                {"form", "pole_sum"},
                {"coefficients", {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}}},
                {"valid_um", {s.valid_min_um, s.valid_max_um}},
                {"source", s.source}};
}

SellmeierCoefficients sellmeier_from_json(const json& j) {
    SellmeierCoefficients s;
    try {
        s.axis = j.at("axis").get<std::string>();
        if (j.at("form").get<std::string>() != "pole_sum")
            throw ConfigError("unknown sellmeier form \"" +
                              j.at("form").get<std::string>() + "\" (expected pole_sum)");
        const json& c = j.at("coefficients");
        s.a = c.at("a").get<double>();
        s.b = c.at("b").get<std::vector<double>>();
        s.c = c.at("c").get<std::vector<double>>();
        s.d = c.at("d").get<double>();
        s.valid_min_um = j.at("valid_um").at(0).get<double>();
        s.valid_max_um = j.at("valid_um").at(1).get<double>();
        s.source = j.value("source", "");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad sellmeier document: ") + e.what());
    }
    s.validate();
    return s;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    return in;
}

}  // namespace

SimulationConfig default_simulation_config() {
    CrystalConfig seed(ktp_y_axis(), ktp_z_axis(), "y", "y", "z",
                       /*length_mm=*/30.0, /*poling_period_um=*/46.0,
                       /*degenerate_nm=*/1584.0, /*temperature_c=*/32.0);
    CrystalConfig crystal = seed.with_poling_period(solve_poling_period(seed, 1584.0));
    PumpSpec pump{792.0, 0.7229};
    return SimulationConfig{crystal, pump, GridOptions{}};
}

std::string config_to_json(const SimulationConfig& cfg) {
    json j;
    j["crystal"] = {
        {"length_mm", cfg.crystal.length_mm()},
        {"poling_period_um", cfg.crystal.poling_period_um()},
        {"degenerate_nm", cfg.crystal.degenerate_nm()},
        {"temperature_c", cfg.crystal.temperature_c()},
        {"axes",
         {{"pump", cfg.crystal.pump().axis},
          {"signal", cfg.crystal.signal().axis},
          {"idler", cfg.crystal.idler().axis}}},
        {"sellmeier",
         {sellmeier_to_json(cfg.crystal.fit("y")), sellmeier_to_json(cfg.crystal.fit("z"))}}};
    j["pump"] = {{"center_nm", cfg.pump.center_nm}, {"sigma_rad_ps", cfg.pump.sigma_rad_ps}};
    j["grid"] = {{"n", cfg.grid.n},
                 {"span_widths", cfg.grid.span_widths},
                 {"jsa_span_widths", cfg.grid.jsa_span_widths},
                 {"pad_nm", cfg.grid.pad_nm}};
    if (cfg.grid.half_span_nm) j["grid"]["half_span_nm"] = *cfg.grid.half_span_nm;
    return j.dump(2) + "\n";
}

SimulationConfig load_config(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config file not found: " + path.string());
    json j;
    try {
        j = json::parse(open_or_throw(path));
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
    try {
        const json& jc = j.at("crystal");
        SellmeierCoefficients y, z;
        bool have_y = false, have_z = false;
        for (const json& doc : jc.at("sellmeier")) {
            SellmeierCoefficients s = sellmeier_from_json(doc);
            if (s.axis == "y") {
                y = s;
                have_y = true;
            } else {
                z = s;
                have_z = true;
            }
        }
        if (!have_y || !have_z)
            throw ConfigError("config needs sellmeier documents for both y and z axes");
        const json& axes = jc.at("axes");
        const double degenerate_nm = jc.value("degenerate_nm", 1584.0);
        CrystalConfig crystal(y, z, axes.at("pump").get<std::string>(),
                              axes.at("signal").get<std::string>(),
                              axes.at("idler").get<std::string>(),
                              jc.at("length_mm").get<double>(),
                              jc.value("poling_period_um", 0.0) > 0.0
                                  ? jc.at("poling_period_um").get<double>()
                                  : 1.0,
                              degenerate_nm, jc.value("temperature_c", 20.0));
        if (!(jc.value("poling_period_um", 0.0) > 0.0))
            crystal = crystal.with_poling_period(solve_poling_period(crystal, degenerate_nm));

        PumpSpec pump;
        pump.center_nm = degenerate_nm / 2.0;
        if (j.contains("pump")) {
            pump.center_nm = j["pump"].value("center_nm", pump.center_nm);
            pump.sigma_rad_ps = j["pump"].value("sigma_rad_ps", 0.0);
        }

        GridOptions grid;
        if (j.contains("grid")) {
            const json& jg = j["grid"];
            grid.n = jg.value("n", grid.n);
            grid.span_widths = jg.value("span_widths", grid.span_widths);
            grid.jsa_span_widths = jg.value("jsa_span_widths", grid.jsa_span_widths);
            grid.pad_nm = jg.value("pad_nm", grid.pad_nm);
            if (jg.contains("half_span_nm")) grid.half_span_nm = jg["half_span_nm"].get<double>();
        }
        return SimulationConfig{crystal, pump, grid};
    } catch (const json::exception& e) {
        throw ConfigError("bad config " + path.string() + ": " + e.what());
    }
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << contents;
        if (!out.flush()) throw ConfigError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_spectrum_csv(const std::filesystem::path& path, const JointSpectrum& js) {
    js.validate();
    if (!js.grid.is_wavelength())
        throw ContractError("spectrum CSV is wavelength-indexed; export the nm grid");
    std::string out;
    out.reserve(static_cast<std::size_t>(js.grid.signal.n) * js.grid.idler.n * 48 + 64);
    out += "lambda_s_nm,lambda_i_nm,value\n";
    for (int i = 0; i < js.grid.signal.n; ++i) {
        const std::string ls = fmt_coord(js.grid.signal.value(i));
        for (int j = 0; j < js.grid.idler.n; ++j) {
            out += ls;
            out += ',';
            out += fmt_coord(js.grid.idler.value(j));
            out += ',';
            out += fmt_value(js.values(i, j));
            out += '\n';
        }
    }
    atomic_write(path, out);
}

namespace {

struct CsvTriples {
    Eigen::VectorXd ls, li;
    Eigen::MatrixXd values;
};

CsvTriples read_triples(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || line != "lambda_s_nm,lambda_i_nm,value")
        throw ConfigError(path.string() + ": expected header lambda_s_nm,lambda_i_nm,value");
    std::vector<double> s, i_, v;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        double a, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &a, &b, &c) != 3)
            throw ConfigError(path.string() + ": bad row at line " + std::to_string(lineno));
        s.push_back(a);
        i_.push_back(b);
        v.push_back(c);
    }
    if (s.empty()) throw ConfigError(path.string() + ": no data rows");

    // Signal is the outer index: the first block shares lambda_s and spans
    // the whole idler axis.
    std::size_t ni = 1;
    while (ni < s.size() && s[ni] == s[0]) ++ni;
    if (s.size() % ni != 0)
        throw ConfigError(path.string() + ": rows do not form a complete grid");
    const std::size_t ns = s.size() / ni;

    CsvTriples t;
    t.ls.resize(ns);
    t.li.resize(ni);
    for (std::size_t k = 0; k < ns; ++k) t.ls[k] = s[k * ni];
    for (std::size_t k = 0; k < ni; ++k) t.li[k] = i_[k];
    t.values.resize(ns, ni);
    for (std::size_t a = 0; a < ns; ++a) {
        for (std::size_t b = 0; b < ni; ++b) {
            if (s[a * ni + b] != t.ls[a] || i_[a * ni + b] != t.li[b])
                throw ConfigError(path.string() + ": grid coordinates not row-major");
            t.values(a, b) = v[a * ni + b];
        }
    }
    return t;
}

}  // namespace

JointSpectrum read_spectrum_csv(const std::filesystem::path& path, SpectrumKind kind) {
    const CsvTriples t = read_triples(path);
    JointSpectrum js;
    js.grid.signal = axis_from_samples(t.ls, AxisDomain::Wavelength);
    js.grid.idler = axis_from_samples(t.li, AxisDomain::Wavelength);
    js.values = t.values;
    js.kind = kind;
    js.validate();
    normalize(js);
    return js;
}

void write_measured(const std::filesystem::path& csv_path,
                    const std::filesystem::path& sidecar_path, const MeasuredGrid& grid) {
    grid.validate();
    std::string out = "lambda_s_nm,lambda_i_nm,value\n";
    for (int i = 0; i < grid.grid.signal.n; ++i) {
        const std::string ls = fmt_coord(grid.grid.signal.value(i));
        for (int j = 0; j < grid.grid.idler.n; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.0f", grid.counts(i, j));
            out += ls;
            out += ',';
            out += fmt_coord(grid.grid.idler.value(j));
            out += ',';
            out += buf;
            out += '\n';
        }
    }
    atomic_write(csv_path, out);

    json j;
    j["dwell_s"] = grid.dwell_s;
    j["filters"] = json::array();
    for (const FilterSpec& f : grid.filters)
        j["filters"].push_back({{"center_nm", f.center_nm}, {"fwhm_nm", f.fwhm_nm}});
    atomic_write(sidecar_path, j.dump(2) + "\n");
}

MeasuredGrid read_measured(const std::filesystem::path& csv_path,
                           const std::filesystem::path& sidecar_path) {
    const CsvTriples t = read_triples(csv_path);
    MeasuredGrid g;
    g.grid.signal = axis_from_samples(t.ls, AxisDomain::Wavelength);
    g.grid.idler = axis_from_samples(t.li, AxisDomain::Wavelength);
    g.counts = t.values;

    if (!std::filesystem::exists(sidecar_path))
        throw ConfigError("sidecar not found: " + sidecar_path.string());
    json j;
    try {
        j = json::parse(open_or_throw(sidecar_path));
        g.dwell_s = j.at("dwell_s").get<double>();
        for (const json& f : j.value("filters", json::array()))
            g.filters.push_back(
                {f.at("center_nm").get<double>(), f.at("fwhm_nm").get<double>()});
    } catch (const json::exception& e) {
        throw ConfigError("bad sidecar " + sidecar_path.string() + ": " + e.what());
    }
    g.validate();
    return g;
}

std::string schmidt_to_json(const SchmidtResult& result) {
    json j;
    j["kind"] = result.kind == SpectrumKind::Jsa ? "JSA" : "JSI";
    j["purity"] = result.purity;
    j["schmidt_number"] = result.schmidt_number;
    j["coefficients"] = result.coefficients;
    return j.dump(2) + "\n";
}

std::string report_to_json(const MeasurementReport& report,
                           const std::vector<FilterSpec>& filters) {
    json j;
    j["p_jsi"] = report.p_jsi;
    j["schmidt_number"] = report.schmidt_number;
    j["fwhm_signal_nm"] = report.fwhm_signal_nm;
    j["fwhm_idler_nm"] = report.fwhm_idler_nm;
    j["peak_cps"] = report.peak_cps;
    j["filters"] = json::array();
    for (const FilterSpec& f : filters)
        j["filters"].push_back({{"center_nm", f.center_nm}, {"fwhm_nm", f.fwhm_nm}});
    return j.dump(2) + "\n";
}

std::string comparison_to_json(const ComparisonReport& r) {
    json j;
    j["lambda0_nm"] = r.lambda0_nm;
    j["sigma_rad_ps"] = r.sigma_p;
    j["p_jsi"] = {{"theory", r.p_theory},
                  {"convolved", r.p_convolved},
                  {"measured", r.p_measured},
                  {"measured_minus_convolved", r.p_measured - r.p_convolved}};
    j["fwhm_signal_nm"] = {{"theory", r.fwhm_s_theory},
                           {"convolved", r.fwhm_s_convolved},
                           {"measured", r.fwhm_s_measured},
                           {"measured_minus_convolved", r.fwhm_s_measured - r.fwhm_s_convolved}};
    j["fwhm_idler_nm"] = {{"theory", r.fwhm_i_theory},
                          {"convolved", r.fwhm_i_convolved},
                          {"measured", r.fwhm_i_measured},
                          {"measured_minus_convolved", r.fwhm_i_measured - r.fwhm_i_convolved}};
    j["peak_cps"] = r.peak_cps;
    return j.dump(2) + "\n";
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::string out = "lambda_nm,poling_um,tilt_deg,p_jsi,p_jsa,fwhm_s_nm,fwhm_i_nm\n";
    for (const SweepRow& r : rows) {
        out += fmt_coord(r.lambda_nm);
        out += ',';
        out += fmt_value(r.poling_um);
        out += ',';
        out += fmt_value(r.tilt_deg);
        out += ',';
        out += fmt_value(r.p_jsi);
        out += ',';
        out += fmt_value(r.p_jsa);
        out += ',';
        out += fmt_value(r.fwhm_s_nm);
        out += ',';
        out += fmt_value(r.fwhm_i_nm);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) ||
        line != "lambda_nm,poling_um,tilt_deg,p_jsi,p_jsa,fwhm_s_nm,fwhm_i_nm")
        throw ConfigError(path.string() + ": bad sweep header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SweepRow r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &r.lambda_nm,
                        &r.poling_um, &r.tilt_deg, &r.p_jsi, &r.p_jsa, &r.fwhm_s_nm,
                        &r.fwhm_i_nm) != 7)
            throw ConfigError(path.string() + ": bad sweep row");
        rows.push_back(r);
    }
    return rows;
}

}  // namespace spdc
