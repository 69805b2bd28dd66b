#include "fermistab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "fermistab/config.hpp"

using namespace fermistab;

namespace {

std::string temp_path(const std::string& stem) {
    return (std::filesystem::temp_directory_path() / stem).string();
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

struct FileGuard {
    std::string path;
    ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("batch files round-trip bit-exactly") {
    std::mt19937_64 rng(11);
    SampleResult samples;
    samples.detectors = BitTable(130, 3);
    samples.observables = BitTable(130, 2);
    for (std::size_t s = 0; s < 130; ++s) {
        for (std::size_t j = 0; j < 3; ++j) {
            samples.detectors.set(s, j, rng() % 5 == 0);
        }
        for (std::size_t j = 0; j < 2; ++j) {
            samples.observables.set(s, j, rng() % 3 == 0);
        }
    }
    std::string path = temp_path("fermistab_batch_rt.fsb1");
    FileGuard guard{path};
    write_batch(path, samples, 1, 0xdeadbeefULL);

    BatchFile back = read_batch(path);
    CHECK(back.vqed_b_start == 1);
    CHECK(back.seed == 0xdeadbeefULL);
    REQUIRE(back.samples.detectors.num_shots() == 130);
    REQUIRE(back.samples.detectors.num_columns() == 3);
    REQUIRE(back.samples.observables.num_columns() == 2);
    CHECK(back.samples.detectors.words() == samples.detectors.words());
    CHECK(back.samples.observables.words() == samples.observables.words());
}

TEST_CASE("batch reader rejects bad magic and truncation") {
    std::string path = temp_path("fermistab_batch_bad.fsb1");
    FileGuard guard{path};
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOPE" << std::string(28, '\0');
    }
    CHECK_THROWS_AS(read_batch(path), std::runtime_error);

    SampleResult samples;
    samples.detectors = BitTable(64, 2);
    samples.observables = BitTable(64, 1);
    write_batch(path, samples, UINT32_MAX, 7);
    std::string bytes = slurp(path);
    {
        std::ofstream os(path, std::ios::binary);
        os << bytes.substr(0, bytes.size() - 5);
    }
    CHECK_THROWS_AS(read_batch(path), std::runtime_error);
    CHECK_THROWS_AS(read_batch(temp_path("fermistab_missing.fsb1")),
                    std::runtime_error);
}

TEST_CASE("csv rows round-trip through the fixed schema") {
    ResultRow row;
    row.encoding = "dk";
    row.lattice_side = 4;
    row.circuit = "full_trotter";
    row.depth = 2;
    row.readout = "occupation";
    row.mitigation = "sr";
    row.model = "sd";
    row.p = 0.001;
    row.shots = 100000;
    row.seed = 123456789;
    row.metrics.n_samp = 100000;
    row.metrics.n_discard = 25000;
    row.metrics.r_det = 0.25;
    row.metrics.n_post = 75000;
    row.metrics.r_obs_any = 0.0125;
    row.metrics.r_obs_worst = 0.004;
    row.metrics.ci_low = 0.0035;
    row.metrics.ci_high = 0.0046;

    ResultRow vrow = row;
    vrow.mitigation = "vqed";
    vrow.metrics.vqed_est = 0.98;
    vrow.metrics.vqed_var = 2.5e-05;
    vrow.metrics.excluded = true;

    std::string path = temp_path("fermistab_rows.csv");
    FileGuard guard{path};
    write_csv(path, {row, vrow});

    std::vector<ResultRow> back = read_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].encoding == "dk");
    CHECK(back[0].lattice_side == 4);
    CHECK(back[0].depth == doctest::Approx(2));
    CHECK(back[0].p == doctest::Approx(0.001));
    CHECK(back[0].metrics.n_discard == 25000);
    CHECK(back[0].metrics.r_obs_worst == doctest::Approx(0.004));
    CHECK_FALSE(back[0].metrics.excluded);
    CHECK_FALSE(back[0].metrics.vqed_est.has_value());
    CHECK(back[1].metrics.excluded);
    REQUIRE(back[1].metrics.vqed_est.has_value());
    CHECK(*back[1].metrics.vqed_est == doctest::Approx(0.98));
    CHECK(*back[1].metrics.vqed_var == doctest::Approx(2.5e-05));

    // Byte-identical on rewrite.
    std::string first = slurp(path);
    write_csv(path, {row, vrow});
    CHECK(slurp(path) == first);
}

TEST_CASE("csv reader rejects schema drift") {
    std::string path = temp_path("fermistab_bad.csv");
    FileGuard guard{path};
    {
        std::ofstream os(path);
        os << "encoding,L,extra\njw,4,1\n";
    }
    CHECK_THROWS_AS(read_csv(path), std::runtime_error);
    {
        std::ofstream os(path);
        os << csv_header() << "\njw,4,full_trotter\n";
    }
    CHECK_THROWS_AS(read_csv(path), std::runtime_error);
}

TEST_CASE("sweep svg plots curves and omits excluded points") {
    std::vector<ResultRow> rows;
    for (int enc = 0; enc < 2; ++enc) {
        for (int d = 1; d <= 3; ++d) {
            ResultRow r;
            r.encoding = enc == 0 ? "jw" : "tt";
            r.mitigation = "gp";
            r.depth = d;
            r.metrics.r_obs_worst = 0.01 * d * (enc + 1);
            r.metrics.ci_low = r.metrics.r_obs_worst * 0.8;
            r.metrics.ci_high = r.metrics.r_obs_worst * 1.2;
            r.metrics.r_det = 0.1 * d;
            rows.push_back(r);
        }
    }
    rows[5].metrics.excluded = true;  // tt at depth 3 must vanish from the plot

    std::string path = temp_path("fermistab_sweep.svg");
    FileGuard guard{path};
    write_sweep_svg(path, rows, "r_obs_worst");
    std::string svg = slurp(path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("jw+gp") != std::string::npos);
    CHECK(svg.find("tt+gp") != std::string::npos);
    CHECK(svg.find("r_obs_worst") != std::string::npos);
    // Two curves, five visible points.
    std::size_t circles = 0;
    for (std::size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1)) {
        ++circles;
    }
    CHECK(circles == 5);

    write_sweep_svg(path, rows, "r_det");
    CHECK(slurp(path).find("r_det") != std::string::npos);
    CHECK_THROWS_AS(write_sweep_svg(path, rows, "banana"), std::invalid_argument);

    // All rows excluded: still a valid document.
    for (ResultRow& r : rows) r.metrics.excluded = true;
    write_sweep_svg(path, rows, "r_obs_worst");
    CHECK(slurp(path).find("no unexcluded data") != std::string::npos);
}

TEST_CASE("sweep configs parse, validate, and expand deterministically") {
    std::string text = R"({
        "encodings": ["jw", "dk"],
        "lattice_sizes": [4],
        "circuit": "full_trotter",
        "trotter_steps": [1, 2],
        "readout": "occupation",
        "mitigations": ["gp", "sr"],
        "models": ["sd"],
        "ps": [0.001],
        "seed": 9,
        "out": "runs"
    })";
    SweepConfig cfg = parse_sweep_config(text);
    CHECK(cfg.encodings.size() == 2);
    CHECK(cfg.out == "runs");
    CHECK_FALSE(cfg.shots.has_value());

    std::vector<std::string> skipped;
    std::vector<SweepPoint> pts = expand_sweep(cfg, &skipped);
    // jw+sr is invalid at both depths; everything else survives.
    CHECK(pts.size() == 6);
    CHECK(skipped.size() == 2);
    CHECK(skipped[0].find("sr") != std::string::npos);
    for (const SweepPoint& pt : pts) CHECK(pt.shots == 100000);

    std::vector<SweepPoint> again = expand_sweep(cfg);
    REQUIRE(again.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(again[i].name == pts[i].name);
        CHECK(again[i].seed == pts[i].seed);
    }
    // Names are unique and stable.
    CHECK(pts[0].name == "jw_L4_t1_occ_gp_sd_p0.001");

    std::string table = describe_sweep(pts);
    CHECK(table.find("jw_L4_t1_occ_gp_sd_p0.001") != std::string::npos);
    CHECK(table.find("6 experiment points") != std::string::npos);
}

TEST_CASE("sweep config defaults and vqed shots") {
    std::string text = R"({
        "encodings": "dk",
        "lattice_sizes": 4,
        "circuit": "full_trotter",
        "readout": "hopping",
        "mitigations": ["sm", "vqed"],
        "ps": 0.0005
    })";
    SweepConfig cfg = parse_sweep_config(text);
    std::vector<SweepPoint> pts = expand_sweep(cfg);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].spec.mitigation == Mitigation::SM);
    CHECK(pts[0].shots == 100000);
    CHECK(pts[1].spec.mitigation == Mitigation::VQED);
    CHECK(pts[1].shots == 10000);
    CHECK(pts[0].model == "sd");

    std::string explicit_shots = R"({
        "encodings": "dk",
        "lattice_sizes": 4,
        "readout": "hopping",
        "mitigations": "vqed",
        "ps": 0.0005,
        "shots": 777
    })";
    CHECK(expand_sweep(parse_sweep_config(explicit_shots))[0].shots == 777);
}

TEST_CASE("sweep config rejects malformed inputs") {
    CHECK_THROWS_AS(parse_sweep_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config("[1,2]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config(R"({"encodings": ["jw"]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [4], "mitigations": ["gp"],
        "ps": [0.001], "banana": 1
    })"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [4], "mitigations": ["gp"],
        "ps": [2.0]
    })"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [4], "mitigations": ["gp"],
        "ps": [0.001], "models": ["depol"]
    })"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": "four", "mitigations": ["gp"],
        "ps": [0.001]
    })"),
                    std::invalid_argument);

    // Odd lattice: every combination is invalid, so expansion fails.
    SweepConfig odd = parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [3], "mitigations": ["gp"],
        "ps": [0.001]
    })");
    CHECK_THROWS_AS(expand_sweep(odd), std::invalid_argument);

    // Occupied modes outside the lattice.
    SweepConfig bad_mode = parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [2], "mitigations": ["gp"],
        "ps": [0.001], "occupied_modes": [9]
    })");
    CHECK_THROWS_AS(expand_sweep(bad_mode), std::invalid_argument);
}

TEST_CASE("occupied modes land in the prepared occupation vector") {
    SweepConfig cfg = parse_sweep_config(R"({
        "encodings": ["jw"], "lattice_sizes": [2], "mitigations": ["gp"],
        "ps": [0.001], "occupied_modes": [0, 3]
    })");
    std::vector<SweepPoint> pts = expand_sweep(cfg);
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].spec.occupation.size() == 4);
    CHECK(pts[0].spec.occupation[0] == 1);
    CHECK(pts[0].spec.occupation[1] == 0);
    CHECK(pts[0].spec.occupation[3] == 1);
}
