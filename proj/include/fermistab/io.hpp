#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fermistab/frame.hpp"
#include "fermistab/metrics.hpp"

namespace fermistab {

// A sampled batch as stored on disk. Layout: magic "FSB1", u64 shot count,
// u32 detector columns, u32 observable columns, u32 index of the first VQED
// verification column (UINT32_MAX when absent), u64 sampling seed, then the
// detector and observable tables as little-endian column-major 64-bit words
// ((shots + 63) / 64 words per column).
struct BatchFile {
    SampleResult samples;
    uint32_t vqed_b_start = UINT32_MAX;
    uint64_t seed = 0;
};

void write_batch(const std::string& path, const SampleResult& samples,
                 uint32_t vqed_b_start, uint64_t seed);

// Throws std::runtime_error on a missing file, bad magic, or truncation.
BatchFile read_batch(const std::string& path);

// One result row: the experiment coordinates followed by its metrics. `depth`
// is the x coordinate of a sweep (Trotter steps, or the term fraction for
// random-logical circuits).
struct ResultRow {
    std::string encoding;
    std::size_t lattice_side = 0;
    std::string circuit;
    double depth = 0.0;
    std::string readout;
    std::string mitigation;
    std::string model;
    double p = 0.0;
    std::size_t shots = 0;
    uint64_t seed = 0;
    MetricsReport metrics;
};

// Fixed schema; numeric fields are rendered with %.6g so identical inputs
// produce byte-identical files. Absent VQED fields are empty strings.
std::string csv_header();
std::string csv_line(const ResultRow& row);
void write_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Throws std::runtime_error when the header does not match csv_header() or a
// row has the wrong number of fields.
std::vector<ResultRow> read_csv(const std::string& path);

// Sweep plot: one polyline per (encoding, mitigation) pair over `depth`, with
// bootstrap error bars when plotting r_obs_worst. Rows flagged excluded are
// omitted. `y_metric` selects "r_obs_worst", "r_obs_any", or "r_det".
void write_sweep_svg(const std::string& path, const std::vector<ResultRow>& rows,
                     const std::string& y_metric);

}  // namespace fermistab
