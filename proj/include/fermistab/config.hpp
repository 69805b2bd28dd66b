#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fermistab/experiment.hpp"

namespace fermistab {

// One resolved experiment point of a sweep.
struct SweepPoint {
    ExperimentSpec spec;
    std::string model;   // error model name ("sd" or "si")
    double p = 0.0;
    std::size_t shots = 0;
    uint64_t seed = 0;   // sampling seed for this point
    double depth = 0.0;  // x coordinate: Trotter steps or term fraction
    std::string name;    // unique file stem inside the output directory
};

// Parsed sweep configuration. Axis keys (encodings, lattice_sizes,
// trotter_steps / fractions, mitigations, models, ps) form a cross product;
// the remaining keys apply to every point.
struct SweepConfig {
    std::vector<Encoding> encodings;
    std::vector<std::size_t> lattice_sizes;
    CircuitKind kind = CircuitKind::FullTrotter;
    std::vector<int> trotter_steps = {1};
    std::vector<double> fractions = {0.5};
    ReadoutKind readout = ReadoutKind::Occupation;
    uint32_t hopping_color = 0;
    bool hopping_yy = false;
    std::vector<Mitigation> mitigations;
    std::vector<std::string> models = {"sd"};
    std::vector<double> ps;
    std::optional<std::size_t> shots;  // absent: 100000 (VQED points: 10000)
    int vqed_layers = 2;
    uint64_t vqed_seed = 1;
    uint64_t logical_seed = 1;
    std::vector<uint32_t> occupied_modes;  // prepared modes; empty = vacuum
    int angle_eighths = 3;
    uint64_t seed = 1;
    std::string out = "results";
};

// Parses a JSON config. Required keys: encodings, lattice_sizes, mitigations,
// ps. Unknown keys, wrong types, and empty axes raise std::invalid_argument
// with the offending key named.
SweepConfig parse_sweep_config(const std::string& json_text);
SweepConfig load_sweep_config(const std::string& path);

// Cross product of the axes in a fixed order (encoding, L, depth, mitigation,
// model, p), dropping invalid spec combinations. When `skipped` is non-null it
// receives one "name: rule" line per dropped combination. Throws
// std::invalid_argument if no combination is valid. Per-point sampling seeds
// derive deterministically from the master seed and the point index.
std::vector<SweepPoint> expand_sweep(const SweepConfig& cfg,
                                     std::vector<std::string>* skipped = nullptr);

// Human-readable table of the resolved matrix (for --explain).
std::string describe_sweep(const std::vector<SweepPoint>& points);

}  // namespace fermistab
