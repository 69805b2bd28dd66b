#pragma once

#include <cstdint>
#include <vector>

#include "fermistab/circuit.hpp"

namespace fermistab {

// Dense bit matrix packed column-major: column j occupies words
// [j * words_per_column, (j+1) * words_per_column), bit s of column j lives in
// word s / 64. Bits for shots >= num_shots are padding and must be ignored.
class BitTable {
  public:
    BitTable() = default;
    BitTable(std::size_t num_shots, std::size_t num_columns);

    std::size_t num_shots() const { return num_shots_; }
    std::size_t num_columns() const { return num_columns_; }
    std::size_t words_per_column() const { return wpc_; }

    bool get(std::size_t shot, std::size_t column) const;
    void set(std::size_t shot, std::size_t column, bool v);

    uint64_t* column(std::size_t j) { return words_.data() + j * wpc_; }
    const uint64_t* column(std::size_t j) const { return words_.data() + j * wpc_; }

    std::vector<uint64_t>& words() { return words_; }
    const std::vector<uint64_t>& words() const { return words_; }

  private:
    std::size_t num_shots_ = 0;
    std::size_t num_columns_ = 0;
    std::size_t wpc_ = 0;
    std::vector<uint64_t> words_;
};

// Flip bits relative to the noise-free reference execution, sampled with a
// batched Pauli-frame simulation (64 shots per block). Blocks draw their
// randomness from independent streams keyed by (seed, block index), so results
// do not depend on the thread count.
struct SampleResult {
    BitTable detectors;
    BitTable observables;
};

SampleResult sample_circuit(const Circuit& c, std::size_t shots, uint64_t seed,
                            int num_threads = 1);

// Per-measurement flip bits (same engine, records instead of detectors).
BitTable sample_measurement_flips(const Circuit& c, std::size_t shots, uint64_t seed,
                                  int num_threads = 1);

// Thread count from FERMISTAB_THREADS, defaulting to 1 when unset or invalid.
int default_thread_count();

}  // namespace fermistab
