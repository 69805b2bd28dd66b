#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fermistab/config.hpp"
#include "fermistab/experiment.hpp"
#include "fermistab/frame.hpp"
#include "fermistab/io.hpp"
#include "fermistab/metrics.hpp"
#include "fermistab/noise.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fermistab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

std::string lower(std::string s) {
    for (char& ch : s) {
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    return s;
}

ResultRow make_row(const SweepPoint& pt, const MetricsReport& m) {
    ResultRow r;
    r.encoding = lower(encoding_name(pt.spec.encoding));
    r.lattice_side = pt.spec.lattice_side;
    r.circuit = circuit_kind_name(pt.spec.kind);
    r.depth = pt.depth;
    r.readout = readout_kind_name(pt.spec.readout);
    r.mitigation = mitigation_name(pt.spec.mitigation);
    r.model = pt.model;
    r.p = pt.p;
    r.shots = pt.shots;
    r.seed = pt.seed;
    r.metrics = m;
    return r;
}

// Metrics with the point's deterministic bootstrap seed. A VQED batch whose
// verification denominator vanishes is reported and written as excluded
// rather than aborting the whole sweep.
MetricsReport point_metrics(const SweepPoint& pt, const SampleResult& samples,
                            uint32_t vqed_b_start) {
    MetricsOptions opts;
    opts.bootstrap_seed = pt.seed;
    try {
        return compute_metrics(samples, vqed_b_start, opts);
    } catch (const std::runtime_error& err) {
        std::cerr << "warning: " << pt.name << ": " << err.what() << "\n";
        MetricsReport m = compute_metrics(samples, UINT32_MAX, opts);
        m.excluded = true;
        return m;
    }
}

json sidecar_json(const SweepPoint& pt, const ExperimentCircuit& ec) {
    json side;
    side["name"] = pt.name;
    side["encoding"] = lower(encoding_name(pt.spec.encoding));
    side["lattice_side"] = pt.spec.lattice_side;
    side["circuit"] = circuit_kind_name(pt.spec.kind);
    side["depth"] = pt.depth;
    side["readout"] = readout_kind_name(pt.spec.readout);
    side["mitigation"] = mitigation_name(pt.spec.mitigation);
    side["model"] = pt.model;
    side["p"] = pt.p;
    side["shots"] = pt.shots;
    side["seed"] = pt.seed;
    side["num_qubits"] = ec.circuit.num_qubits;
    side["num_data_qubits"] = ec.num_data_qubits;
    side["num_detectors"] = ec.detectors.size();
    side["num_observables"] = ec.observables.size();
    side["vqed_b_start"] = ec.vqed_b_start;
    side["gate_counts"] = {{"one_qubit", ec.counts.one_qubit},
                          {"two_qubit", ec.counts.two_qubit},
                          {"total", ec.counts.total()}};
    json dets = json::array();
    for (const DetectorInfo& d : ec.detectors) dets.push_back(d.label);
    side["detector_labels"] = dets;
    json obs = json::array();
    for (const ObservableInfo& o : ec.observables) obs.push_back(o.label);
    side["observable_labels"] = obs;
    return side;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    os << text;
    if (!os) throw std::runtime_error("write to '" + path.string() + "' failed");
}

struct Progress {
    std::size_t total;
    std::size_t done = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void step(const std::string& name, const std::string& detail) {
        ++done;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::cerr << "[" << done << "/" << total << "] " << name;
        if (!detail.empty()) std::cerr << "  " << detail;
        std::cerr << "  (" << ms << " ms elapsed)\n";
    }
};

int cmd_generate(const std::vector<SweepPoint>& points, const fs::path& out) {
    fs::create_directories(out);
    Progress prog{points.size()};
    for (const SweepPoint& pt : points) {
        ExperimentCircuit ec = assemble_experiment(pt.spec);
        write_text(out / (pt.name + ".circuit"), ec.circuit.to_text());
        write_text(out / (pt.name + ".json"), sidecar_json(pt, ec).dump(2) + "\n");
        std::ostringstream detail;
        detail << "gates=" << ec.counts.total() << " detectors=" << ec.detectors.size()
               << " observables=" << ec.observables.size();
        prog.step(pt.name, detail.str());
    }
    std::cout << "wrote " << points.size() << " circuit(s) to " << out.string()
              << "\n";
    return 0;
}

int cmd_sample(const std::vector<SweepPoint>& points, const fs::path& out,
               int threads) {
    Progress prog{points.size()};
    for (const SweepPoint& pt : points) {
        Circuit c = Circuit::from_text(slurp((out / (pt.name + ".circuit")).string()));
        json side = json::parse(slurp((out / (pt.name + ".json")).string()));
        uint32_t vqed_b_start = side.value("vqed_b_start", UINT32_MAX);
        Circuit noisy = apply_noise(c, ErrorModel::from_name(pt.model, pt.p));
        SampleResult samples = sample_circuit(noisy, pt.shots, pt.seed, threads);
        write_batch((out / (pt.name + ".fsb1")).string(), samples, vqed_b_start,
                    pt.seed);
        std::ostringstream detail;
        detail << "shots=" << pt.shots;
        prog.step(pt.name, detail.str());
    }
    std::cout << "wrote " << points.size() << " batch(es) to " << out.string()
              << "\n";
    return 0;
}

int cmd_analyze(const std::vector<SweepPoint>& points, const fs::path& out) {
    std::vector<ResultRow> rows;
    Progress prog{points.size()};
    for (const SweepPoint& pt : points) {
        BatchFile bf = read_batch((out / (pt.name + ".fsb1")).string());
        MetricsReport m = point_metrics(pt, bf.samples, bf.vqed_b_start);
        rows.push_back(make_row(pt, m));
        std::ostringstream detail;
        char buf[64];
        std::snprintf(buf, sizeof buf, "R_det=%.4g R_obs_worst=%.4g", m.r_det,
                      m.r_obs_worst);
        prog.step(pt.name, buf);
    }
    fs::path csv = out / "results.csv";
    write_csv(csv.string(), rows);
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
}

int cmd_sweep(const std::vector<SweepPoint>& points, const fs::path& out,
              int threads) {
    fs::create_directories(out);
    std::vector<ResultRow> rows;
    Progress prog{points.size()};
    for (const SweepPoint& pt : points) {
        ExperimentCircuit ec = assemble_experiment(pt.spec);
        Circuit noisy = apply_noise(ec.circuit, ErrorModel::from_name(pt.model, pt.p));
        SampleResult samples = sample_circuit(noisy, pt.shots, pt.seed, threads);
        MetricsReport m = point_metrics(pt, samples, ec.vqed_b_start);
        rows.push_back(make_row(pt, m));
        char buf[64];
        std::snprintf(buf, sizeof buf, "R_det=%.4g R_obs_worst=%.4g", m.r_det,
                      m.r_obs_worst);
        prog.step(pt.name, buf);
    }
    fs::path csv = out / "results.csv";
    write_csv(csv.string(), rows);
    std::cout << "wrote " << csv.string() << "\n";
    return 0;
}

int cmd_plot(const fs::path& out, const std::string& y_metric) {
    std::vector<ResultRow> rows = read_csv((out / "results.csv").string());
    fs::path svg = out / ("sweep_" + y_metric + ".svg");
    write_sweep_svg(svg.string(), rows, y_metric);
    std::cout << "wrote " << svg.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noisy Clifford benchmark circuits for fermionic encodings of the "
                 "Fermi-Hubbard model"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<uint64_t> seed_override;
    std::optional<std::size_t> shots_override;
    std::optional<std::string> out_override;
    bool explain = false;
    std::string y_metric = "r_obs_worst";

    const char* descs[] = {
        "Write circuit text and JSON sidecars for every sweep point",
        "Sample generated circuits under noise into .fsb1 batches",
        "Compute postselected metrics from batches into results.csv",
        "Generate, sample, and analyze in one pass",
        "Render results.csv as an SVG sweep plot",
    };
    const char* names[] = {"generate", "sample", "analyze", "sweep", "plot"};
    for (int i = 0; i < 5; ++i) {
        CLI::App* sub = app.add_subcommand(names[i], descs[i]);
        sub->add_option("--config", config_path, "Sweep config (JSON)")->required();
        sub->add_option("--seed", seed_override, "Override the master seed");
        sub->add_option("--shots", shots_override, "Override shots for every point");
        sub->add_option("--out", out_override, "Override the output directory");
        sub->add_flag("--explain", explain,
                      "Print the resolved experiment matrix and exit");
        if (std::string(names[i]) == "plot") {
            sub->add_option("--y", y_metric,
                            "Metric on the y axis: r_obs_worst, r_obs_any, r_det");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        SweepConfig cfg = load_sweep_config(config_path);
        if (seed_override) cfg.seed = *seed_override;
        if (out_override) cfg.out = *out_override;

        std::vector<std::string> skipped;
        std::vector<SweepPoint> points = expand_sweep(cfg, &skipped);
        if (shots_override) {
            for (SweepPoint& pt : points) pt.shots = *shots_override;
        }

        if (explain) {
            std::cout << describe_sweep(points);
            for (const std::string& s : skipped) {
                std::cout << "skipped " << s << "\n";
            }
            std::cout << "output directory: " << cfg.out << "\n";
            return 0;
        }
        for (const std::string& s : skipped) {
            std::cerr << "note: skipped " << s << "\n";
        }

        int threads = default_thread_count();
        fs::path out(cfg.out);
        if (app.got_subcommand("generate")) return cmd_generate(points, out);
        if (app.got_subcommand("sample")) return cmd_sample(points, out, threads);
        if (app.got_subcommand("analyze")) return cmd_analyze(points, out);
        if (app.got_subcommand("sweep")) return cmd_sweep(points, out, threads);
        if (app.got_subcommand("plot")) return cmd_plot(out, y_metric);
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 3;
    }
}
