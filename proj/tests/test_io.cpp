#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/io.hpp"
#include "test_support.hpp"

using namespace spdc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(bool(in), "cannot open " << p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& contents) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << contents;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (const std::string& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

JointSpectrum sample_jsi(int n) {
    return build_jsi(testsup::make_matched_ktp(), testsup::make_pump(),
                     make_wavelength_grid(1584.0, 1584.0, 5.0, n));
}

void check_same_fit(const SellmeierCoefficients& a, const SellmeierCoefficients& b) {
    CHECK(a.axis == b.axis);
    CHECK(a.a == b.a);
    CHECK(a.b == b.b);
    CHECK(a.c == b.c);
    CHECK(a.d == b.d);
    CHECK(a.valid_min_um == b.valid_min_um);
    CHECK(a.valid_max_um == b.valid_max_um);
}

}  // namespace

TEST_CASE("the default source is grating-matched at its design wavelength") {
    const SimulationConfig cfg = default_simulation_config();
    CHECK(std::abs(cfg.crystal.poling_period_um() - 46.146015) < 1e-3);
    CHECK(cfg.crystal.degenerate_nm() == 1584.0);
    CHECK(cfg.crystal.length_mm() == doctest::Approx(30.0));
    CHECK(cfg.crystal.grating_sign() == -1);
    CHECK(cfg.pump.center_nm == 792.0);
    CHECK(cfg.pump.sigma_rad_ps == doctest::Approx(0.7229));
    CHECK(cfg.grid.n == 256);
}

TEST_CASE("config JSON survives a round trip") {
    const fs::path dir = testsup::scratch_dir("io_config");
    SimulationConfig cfg = default_simulation_config();
    cfg.pump.sigma_rad_ps = 0.65;
    cfg.grid.n = 96;
    cfg.grid.pad_nm = 1.5;
    cfg.grid.half_span_nm = 7.25;

    const fs::path path = dir / "roundtrip.json";
    atomic_write(path, config_to_json(cfg));
    const SimulationConfig back = load_config(path);

    CHECK(back.crystal.poling_period_um() == cfg.crystal.poling_period_um());
    CHECK(back.crystal.degenerate_nm() == cfg.crystal.degenerate_nm());
    CHECK(back.crystal.temperature_c() == cfg.crystal.temperature_c());
    CHECK(back.crystal.length_mm() == doctest::Approx(cfg.crystal.length_mm()));
    CHECK(back.crystal.grating_sign() == cfg.crystal.grating_sign());
    CHECK(back.crystal.pump().axis == "y");
    CHECK(back.crystal.signal().axis == "y");
    CHECK(back.crystal.idler().axis == "z");
    check_same_fit(back.crystal.fit("y"), cfg.crystal.fit("y"));
    check_same_fit(back.crystal.fit("z"), cfg.crystal.fit("z"));
    CHECK(back.pump.center_nm == cfg.pump.center_nm);
    CHECK(back.pump.sigma_rad_ps == cfg.pump.sigma_rad_ps);
    CHECK(back.grid.n == 96);
    CHECK(back.grid.pad_nm == 1.5);
    REQUIRE(back.grid.half_span_nm.has_value());
    CHECK(*back.grid.half_span_nm == 7.25);
}

TEST_CASE("the packaged crystal file matches the built-in source") {
    const fs::path path = fs::path(SPDCSIM_DATA_DIR) / "ktp_30mm.json";
    const SimulationConfig cfg = load_config(path);
    check_same_fit(cfg.crystal.fit("y"), ktp_y_axis());
    check_same_fit(cfg.crystal.fit("z"), ktp_z_axis());
    // The file omits the poling period, so loading solves it.
    CHECK(std::abs(cfg.crystal.poling_period_um() - 46.146015) < 1e-3);
    CHECK(cfg.crystal.temperature_c() == 32.0);
    CHECK(cfg.pump.center_nm == 792.0);
    CHECK(cfg.pump.sigma_rad_ps == doctest::Approx(0.7229));
    CHECK(cfg.grid.n == 256);
}

TEST_CASE("config error reporting") {
    const fs::path dir = testsup::scratch_dir("io_config_err");

    const fs::path missing = dir / "does_not_exist.json";
    CHECK_THROWS_WITH_AS((void)load_config(missing),
                         doctest::Contains(missing.string().c_str()), ConfigError);

    const fs::path garbled = dir / "garbled.json";
    spit(garbled, "{ this is not json");
    CHECK_THROWS_WITH_AS((void)load_config(garbled), doctest::Contains("cannot parse"),
                         ConfigError);

    const fs::path one_axis = dir / "one_axis.json";
    spit(one_axis, R"({
  "crystal": {
    "length_mm": 30.0,
    "degenerate_nm": 1584.0,
    "axes": {"pump": "y", "signal": "y", "idler": "z"},
    "sellmeier": [
      {"axis": "y", "form": "pole_sum",
       "coefficients": {"a": 2.0993, "b": [0.922683], "c": [0.0467695], "d": 0.0138408},
       "valid_um": [0.4, 3.4]}
    ]
  }
})");
    CHECK_THROWS_WITH_AS((void)load_config(one_axis),
                         doctest::Contains("both y and z"), ConfigError);

    const fs::path bad_form = dir / "bad_form.json";
    std::string doc = slurp(fs::path(SPDCSIM_DATA_DIR) / "ktp_30mm.json");
    const auto at = doc.find("pole_sum");
    REQUIRE(at != std::string::npos);
    doc.replace(at, 8, "legendre");
    spit(bad_form, doc);
    CHECK_THROWS_WITH_AS((void)load_config(bad_form), doctest::Contains("pole_sum"),
                         ConfigError);
}

TEST_CASE("spectrum CSV round trip preserves the grid and values") {
    const fs::path dir = testsup::scratch_dir("io_spectrum");
    const JointSpectrum jsi = sample_jsi(64);
    const fs::path path = dir / "jsi.csv";
    write_spectrum_csv(path, jsi);

    const JointSpectrum back = read_spectrum_csv(path, SpectrumKind::Jsi);
    CHECK(back.grid.signal.n == 64);
    CHECK(back.grid.idler.n == 64);
    CHECK(std::abs(back.grid.signal.start - jsi.grid.signal.start) < 1e-9);
    CHECK(std::abs(back.grid.signal.step - jsi.grid.signal.step) < 1e-9);
    CHECK(std::abs(back.grid.idler.start - jsi.grid.idler.start) < 1e-9);
    CHECK(back.kind == SpectrumKind::Jsi);
    CHECK(back.normalized);
    CHECK((back.values - jsi.values).cwiseAbs().maxCoeff() <
          1e-12 * jsi.values.maxCoeff());
}

TEST_CASE("spectrum CSV writes are deterministic and atomic") {
    const fs::path dir = testsup::scratch_dir("io_deterministic");
    const JointSpectrum jsi = sample_jsi(32);
    write_spectrum_csv(dir / "a.csv", jsi);
    write_spectrum_csv(dir / "b.csv", jsi);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));

    for (const fs::directory_entry& e : fs::directory_iterator(dir))
        CHECK(e.path().extension() != ".tmp");
}

TEST_CASE("malformed spectrum CSVs are rejected with the failure site") {
    const fs::path dir = testsup::scratch_dir("io_malformed");
    const fs::path good = dir / "good.csv";
    write_spectrum_csv(good, sample_jsi(16));
    std::vector<std::string> lines = lines_of(slurp(good));
    REQUIRE(lines.size() == 1 + 16 * 16);

    SUBCASE("wrong header") {
        std::vector<std::string> bad = lines;
        bad[0] = "ls,li,v";
        const fs::path p = dir / "bad_header.csv";
        spit(p, join_lines(bad));
        CHECK_THROWS_WITH_AS((void)read_spectrum_csv(p, SpectrumKind::Jsi),
                             doctest::Contains("header"), ConfigError);
    }

    SUBCASE("truncated grid") {
        std::vector<std::string> bad = lines;
        bad.pop_back();
        const fs::path p = dir / "truncated.csv";
        spit(p, join_lines(bad));
        CHECK_THROWS_WITH_AS((void)read_spectrum_csv(p, SpectrumKind::Jsi),
                             doctest::Contains("complete grid"), ConfigError);
    }

    SUBCASE("unparsable row") {
        std::vector<std::string> bad = lines;
        bad.push_back("one,two,three");
        const fs::path p = dir / "bad_row.csv";
        spit(p, join_lines(bad));
        CHECK_THROWS_WITH_AS((void)read_spectrum_csv(p, SpectrumKind::Jsi),
                             doctest::Contains("bad row"), ConfigError);
    }

    SUBCASE("scrambled coordinates") {
        std::vector<std::string> bad = lines;
        std::swap(bad[1], bad[2]);
        const fs::path p = dir / "scrambled.csv";
        spit(p, join_lines(bad));
        CHECK_THROWS_WITH_AS((void)read_spectrum_csv(p, SpectrumKind::Jsi),
                             doctest::Contains("row-major"), ConfigError);
    }
}

TEST_CASE("measured grids round trip with their sidecar") {
    const fs::path dir = testsup::scratch_dir("io_measured");
    MeasuredGrid mg;
    mg.grid = make_wavelength_grid(1584.0, 1584.0, 4.0, 32);
    mg.counts.resize(32, 32);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) mg.counts(i, j) = (i * 7 + j * 3) % 11;
    mg.dwell_s = 12.5;
    mg.filters = {{1583.0, 0.56}, {1585.0, 0.53}};

    const fs::path csv = dir / "scan.csv";
    const fs::path sidecar = dir / "scan.meta.json";
    write_measured(csv, sidecar, mg);

    const MeasuredGrid back = read_measured(csv, sidecar);
    REQUIRE(back.counts.rows() == 32);
    CHECK((back.counts - mg.counts).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.dwell_s == 12.5);
    REQUIRE(back.filters.size() == 2);
    CHECK(back.filters[0].center_nm == 1583.0);
    CHECK(back.filters[0].fwhm_nm == 0.56);
    CHECK(back.filters[1].center_nm == 1585.0);
    CHECK(back.filters[1].fwhm_nm == 0.53);
    CHECK(std::abs(back.grid.signal.start - mg.grid.signal.start) < 1e-9);
    CHECK(std::abs(back.grid.idler.step - mg.grid.idler.step) < 1e-9);

    const fs::path missing = dir / "missing.meta.json";
    CHECK_THROWS_WITH_AS((void)read_measured(csv, missing),
                         doctest::Contains("sidecar"), ConfigError);
}

TEST_CASE("sweep CSV round trip") {
    const fs::path dir = testsup::scratch_dir("io_sweep");
    std::vector<SweepRow> rows(2);
    rows[0] = {1565.0, 46.167128, 44.93, 0.992134, 0.820011, 1.0828, 1.1188};
    rows[1] = {1584.0, 46.146015, 44.805008, 0.992122, 0.819163, 1.1298, 1.1260};

    const fs::path path = dir / "sweep.csv";
    write_sweep_csv(path, rows);
    const std::vector<SweepRow> back = read_sweep_csv(path);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].lambda_nm == rows[i].lambda_nm);
        CHECK(back[i].poling_um == doctest::Approx(rows[i].poling_um).epsilon(1e-12));
        CHECK(back[i].tilt_deg == doctest::Approx(rows[i].tilt_deg).epsilon(1e-12));
        CHECK(back[i].p_jsi == doctest::Approx(rows[i].p_jsi).epsilon(1e-12));
        CHECK(back[i].p_jsa == doctest::Approx(rows[i].p_jsa).epsilon(1e-12));
        CHECK(back[i].fwhm_s_nm == doctest::Approx(rows[i].fwhm_s_nm).epsilon(1e-12));
        CHECK(back[i].fwhm_i_nm == doctest::Approx(rows[i].fwhm_i_nm).epsilon(1e-12));
    }

    const fs::path bad = dir / "bad.csv";
    spit(bad, "l,p,t\n");
    CHECK_THROWS_WITH_AS((void)read_sweep_csv(bad), doctest::Contains("header"),
                         ConfigError);
}

TEST_CASE("frequency-domain spectra refuse the wavelength CSV writer") {
    const fs::path dir = testsup::scratch_dir("io_domain");
    const JointSpectrum js = to_angular_frequency(sample_jsi(32));
    CHECK_THROWS_AS(write_spectrum_csv(dir / "nope.csv", js), ContractError);
}
