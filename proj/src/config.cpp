#include "fermistab/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "fermistab/noise.hpp"
#include "fermistab/rng.hpp"

namespace fermistab {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultShots = 100000;
constexpr std::size_t kVqedDefaultShots = 10000;

// Axis keys accept either a scalar or an array.
template <typename T>
std::vector<T> as_list(const json& j, const char* key) {
    const json& v = j.at(key);
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<T>());
    } else {
        out.push_back(v.get<T>());
    }
    if (out.empty()) {
        throw std::invalid_argument(std::string("config key '") + key +
                                    "' must not be empty");
    }
    return out;
}

std::string fmt_double(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

std::string lower(std::string s) {
    for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

}  // namespace

SweepConfig parse_sweep_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& err) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") +
                                    err.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config root must be a JSON object");
    }

    static const std::set<std::string> allowed = {
        "encodings",   "lattice_sizes", "circuit",      "trotter_steps",
        "fractions",   "readout",       "hopping_color", "hopping_yy",
        "mitigations", "models",        "ps",            "shots",
        "vqed_layers", "vqed_seed",     "logical_seed",  "occupied_modes",
        "angle_eighths", "seed",        "out",
    };
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw std::invalid_argument("unknown config key '" + item.key() + "'");
        }
    }
    for (const char* req : {"encodings", "lattice_sizes", "mitigations", "ps"}) {
        if (!j.contains(req)) {
            throw std::invalid_argument(std::string("config is missing required key '") +
                                        req + "'");
        }
    }

    SweepConfig cfg;
    try {
        for (const std::string& s : as_list<std::string>(j, "encodings")) {
            cfg.encodings.push_back(encoding_from_name(s));
        }
        for (long long v : as_list<long long>(j, "lattice_sizes")) {
            if (v < 0) throw std::invalid_argument("lattice_sizes must be nonnegative");
            cfg.lattice_sizes.push_back(static_cast<std::size_t>(v));
        }
        if (j.contains("circuit")) {
            cfg.kind = circuit_kind_from_name(j.at("circuit").get<std::string>());
        }
        if (j.contains("trotter_steps")) {
            cfg.trotter_steps = as_list<int>(j, "trotter_steps");
        }
        if (j.contains("fractions")) {
            cfg.fractions = as_list<double>(j, "fractions");
        }
        if (j.contains("readout")) {
            cfg.readout = readout_kind_from_name(j.at("readout").get<std::string>());
        }
        if (j.contains("hopping_color")) {
            cfg.hopping_color = j.at("hopping_color").get<uint32_t>();
        }
        if (j.contains("hopping_yy")) cfg.hopping_yy = j.at("hopping_yy").get<bool>();
        for (const std::string& s : as_list<std::string>(j, "mitigations")) {
            cfg.mitigations.push_back(mitigation_from_name(s));
        }
        if (j.contains("models")) cfg.models = as_list<std::string>(j, "models");
        cfg.ps = as_list<double>(j, "ps");
        if (j.contains("shots")) cfg.shots = j.at("shots").get<std::size_t>();
        if (j.contains("vqed_layers")) cfg.vqed_layers = j.at("vqed_layers").get<int>();
        if (j.contains("vqed_seed")) cfg.vqed_seed = j.at("vqed_seed").get<uint64_t>();
        if (j.contains("logical_seed")) {
            cfg.logical_seed = j.at("logical_seed").get<uint64_t>();
        }
        if (j.contains("occupied_modes")) {
            cfg.occupied_modes = as_list<uint32_t>(j, "occupied_modes");
        }
        if (j.contains("angle_eighths")) {
            cfg.angle_eighths = j.at("angle_eighths").get<int>();
        }
        if (j.contains("seed")) cfg.seed = j.at("seed").get<uint64_t>();
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("config type error: ") + err.what());
    }

    for (const std::string& m : cfg.models) {
        ErrorModel::from_name(m, 0.0);  // rejects unknown model names
    }
    for (double p : cfg.ps) {
        if (p < 0.0 || p > 1.0) {
            throw std::invalid_argument("ps entries must lie in [0, 1]");
        }
    }
    return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_sweep_config(buf.str());
}

std::vector<SweepPoint> expand_sweep(const SweepConfig& cfg,
                                     std::vector<std::string>* skipped) {
    bool full = cfg.kind == CircuitKind::FullTrotter;
    const std::size_t n_depth =
        full ? cfg.trotter_steps.size() : cfg.fractions.size();

    std::vector<SweepPoint> points;
    std::set<std::string> names;
    std::size_t index = 0;
    for (Encoding enc : cfg.encodings) {
        for (std::size_t side : cfg.lattice_sizes) {
            for (std::size_t d = 0; d < n_depth; ++d) {
                for (Mitigation mit : cfg.mitigations) {
                    SweepPoint pt;
                    pt.spec.encoding = enc;
                    pt.spec.lattice_side = side;
                    pt.spec.kind = cfg.kind;
                    if (full) {
                        pt.spec.trotter_steps = cfg.trotter_steps[d];
                        pt.depth = static_cast<double>(cfg.trotter_steps[d]);
                    } else {
                        pt.spec.fraction = cfg.fractions[d];
                        pt.depth = cfg.fractions[d];
                    }
                    pt.spec.logical_seed = cfg.logical_seed;
                    pt.spec.readout = cfg.readout;
                    pt.spec.hopping_color = cfg.hopping_color;
                    pt.spec.hopping_yy = cfg.hopping_yy;
                    pt.spec.mitigation = mit;
                    pt.spec.vqed_layers = cfg.vqed_layers;
                    pt.spec.vqed_seed = cfg.vqed_seed;
                    pt.spec.angle_eighths = cfg.angle_eighths;
                    if (!cfg.occupied_modes.empty()) {
                        pt.spec.occupation.assign(side * side, 0);
                        for (uint32_t m : cfg.occupied_modes) {
                            if (m >= side * side) {
                                throw std::invalid_argument(
                                    "occupied_modes entry " + std::to_string(m) +
                                    " is outside the " + std::to_string(side * side) +
                                    "-mode lattice");
                            }
                            pt.spec.occupation[m] = 1;
                        }
                    }

                    std::ostringstream stem;
                    stem << lower(encoding_name(enc)) << "_L" << side << '_'
                         << (full ? "t" : "f") << fmt_double(pt.depth) << '_'
                         << (cfg.readout == ReadoutKind::Occupation ? "occ" : "hop")
                         << '_' << mitigation_name(mit);

                    std::string rule = spec_violation(pt.spec);
                    if (!rule.empty()) {
                        if (skipped) skipped->push_back(stem.str() + ": " + rule);
                        index += cfg.models.size() * cfg.ps.size();
                        continue;
                    }

                    for (const std::string& model : cfg.models) {
                        for (double p : cfg.ps) {
                            SweepPoint out = pt;
                            out.model = model;
                            out.p = p;
                            out.shots = cfg.shots.value_or(
                                mit == Mitigation::VQED ? kVqedDefaultShots
                                                        : kDefaultShots);
                            out.seed = make_stream(cfg.seed, index)();
                            std::ostringstream full_name;
                            full_name << stem.str() << '_' << model << "_p"
                                      << fmt_double(p);
                            out.name = full_name.str();
                            while (!names.insert(out.name).second) {
                                out.name += "_dup";
                            }
                            points.push_back(std::move(out));
                            ++index;
                        }
                    }
                }
            }
        }
    }
    if (points.empty()) {
        throw std::invalid_argument(
            "the sweep resolves to no valid experiment combinations");
    }
    return points;
}

std::string describe_sweep(const std::vector<SweepPoint>& points) {
    std::ostringstream os;
    os << "index  name                                     circuit       depth  "
          "shots    seed\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const SweepPoint& pt = points[i];
        char line[160];
        std::snprintf(line, sizeof line, "%-6zu %-40s %-13s %-6g %-8zu %llu\n", i,
                      pt.name.c_str(), circuit_kind_name(pt.spec.kind), pt.depth,
                      pt.shots, static_cast<unsigned long long>(pt.seed));
        os << line;
    }
    os << points.size() << " experiment point" << (points.size() == 1 ? "" : "s")
       << "\n";
    return os.str();
}

}  // namespace fermistab
