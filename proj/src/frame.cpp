#include "fermistab/frame.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "fermistab/rng.hpp"

namespace fermistab {

BitTable::BitTable(std::size_t num_shots, std::size_t num_columns)
    : num_shots_(num_shots),
      num_columns_(num_columns),
      wpc_((num_shots + 63) / 64),
      words_(num_columns * ((num_shots + 63) / 64), 0) {}

bool BitTable::get(std::size_t shot, std::size_t column) const {
    return (words_[column * wpc_ + shot / 64] >> (shot % 64)) & 1;
}

void BitTable::set(std::size_t shot, std::size_t column, bool v) {
    uint64_t m = uint64_t{1} << (shot % 64);
    auto& w = words_[column * wpc_ + shot / 64];
    w = v ? (w | m) : (w & ~m);
}

namespace {

// Visits each success among `trials` independent Bernoulli(p) draws, skipping
// geometrically so sparse noise costs O(hits) instead of O(trials).
template <typename F>
void for_bernoulli_hits(std::mt19937_64& rng, double p, std::size_t trials, F&& f) {
    if (p <= 0.0 || trials == 0) return;
    if (p >= 1.0) {
        for (std::size_t t = 0; t < trials; ++t) f(t);
        return;
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double denom = std::log1p(-p);
    std::size_t t = 0;
    while (true) {
        double v = 1.0 - unit(rng);  // in (0, 1]
        double skip = std::floor(std::log(v) / denom);
        if (skip >= static_cast<double>(trials)) return;
        t += static_cast<std::size_t>(skip);
        if (t >= trials) return;
        f(t);
        ++t;
    }
}

struct BlockState {
    std::vector<uint64_t> fx, fz;      // one word (64 shots) per qubit
    std::vector<uint64_t> rec;         // flip word per measurement record
    std::vector<uint64_t> det;
    std::vector<uint64_t> obs;
};

void run_block(const Circuit& c, std::mt19937_64& rng, BlockState& st) {
    std::fill(st.fx.begin(), st.fx.end(), 0);
    std::fill(st.fz.begin(), st.fz.end(), 0);
    st.rec.clear();
    st.det.clear();
    std::fill(st.obs.begin(), st.obs.end(), 0);
    std::uniform_int_distribution<int> one_of_3(1, 3);
    std::uniform_int_distribution<int> one_of_15(1, 15);

    auto& fx = st.fx;
    auto& fz = st.fz;
    for (const Instruction& ins : c.instructions) {
        const auto& tg = ins.targets;
        switch (ins.op) {
            case Op::H:
            case Op::SQRT_Y:
            case Op::SQRT_Y_DAG:
                for (uint32_t q : tg) std::swap(fx[q], fz[q]);
                break;
            case Op::S:
            case Op::S_DAG:
                for (uint32_t q : tg) fz[q] ^= fx[q];
                break;
            case Op::SQRT_X:
            case Op::SQRT_X_DAG:
                for (uint32_t q : tg) fx[q] ^= fz[q];
                break;
            case Op::X:
            case Op::Y:
            case Op::Z:
                break;
            case Op::CX:
                for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                    fx[tg[t + 1]] ^= fx[tg[t]];
                    fz[tg[t]] ^= fz[tg[t + 1]];
                }
                break;
            case Op::CZ:
                for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                    uint64_t za = fz[tg[t]] ^ fx[tg[t + 1]];
                    uint64_t zb = fz[tg[t + 1]] ^ fx[tg[t]];
                    fz[tg[t]] = za;
                    fz[tg[t + 1]] = zb;
                }
                break;
            case Op::CY:
                for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                    uint32_t a = tg[t], b = tg[t + 1];
                    uint64_t za = fz[a] ^ fx[b] ^ fz[b];
                    uint64_t xb = fx[b] ^ fx[a];
                    uint64_t zb = fz[b] ^ fx[a];
                    fz[a] = za;
                    fx[b] = xb;
                    fz[b] = zb;
                }
                break;
            case Op::SWAP:
                for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                    std::swap(fx[tg[t]], fx[tg[t + 1]]);
                    std::swap(fz[tg[t]], fz[tg[t + 1]]);
                }
                break;
            case Op::M:
                for (std::size_t t = 0; t < tg.size(); ++t) {
                    uint64_t word = fx[tg[t]];
                    if (ins.arg > 0.0) {
                        for_bernoulli_hits(rng, ins.arg, 64, [&](std::size_t s) {
                            word ^= uint64_t{1} << s;
                        });
                    }
                    st.rec.push_back(word);
                    fz[tg[t]] ^= rng();  // collapse decoheres the Z difference
                }
                break;
            case Op::R:
                for (uint32_t q : tg) {
                    fx[q] = 0;
                    fz[q] = rng();
                }
                break;
            case Op::X_ERROR:
                for (std::size_t t = 0; t < tg.size(); ++t) {
                    for_bernoulli_hits(rng, ins.arg, 64, [&](std::size_t s) {
                        fx[tg[t]] ^= uint64_t{1} << s;
                    });
                }
                break;
            case Op::DEPOLARIZE1:
                for (std::size_t t = 0; t < tg.size(); ++t) {
                    for_bernoulli_hits(rng, ins.arg, 64, [&](std::size_t s) {
                        uint64_t bit = uint64_t{1} << s;
                        int k = one_of_3(rng);
                        if (k != 3) fx[tg[t]] ^= bit;  // X or Y
                        if (k != 1) fz[tg[t]] ^= bit;  // Y or Z
                    });
                }
                break;
            case Op::DEPOLARIZE2:
                for (std::size_t t = 0; t + 1 < tg.size(); t += 2) {
                    uint32_t a = tg[t], b = tg[t + 1];
                    for_bernoulli_hits(rng, ins.arg, 64, [&](std::size_t s) {
                        uint64_t bit = uint64_t{1} << s;
                        int k = one_of_15(rng);
                        int ka = k >> 2, kb = k & 3;
                        if (ka == 1 || ka == 2) fx[a] ^= bit;
                        if (ka == 2 || ka == 3) fz[a] ^= bit;
                        if (kb == 1 || kb == 2) fx[b] ^= bit;
                        if (kb == 2 || kb == 3) fz[b] ^= bit;
                    });
                }
                break;
            case Op::DETECTOR: {
                uint64_t word = 0;
                for (uint32_t k : tg) word ^= st.rec[st.rec.size() - k];
                st.det.push_back(word);
                break;
            }
            case Op::OBSERVABLE_INCLUDE: {
                uint64_t word = 0;
                for (uint32_t k : tg) word ^= st.rec[st.rec.size() - k];
                st.obs[static_cast<std::size_t>(ins.arg)] ^= word;
                break;
            }
        }
    }
}

void sample_blocks(const Circuit& c, std::size_t shots, uint64_t seed, int num_threads,
                   BitTable* detectors, BitTable* observables, BitTable* measurements) {
    std::size_t num_blocks = (shots + 63) / 64;
    if (num_threads < 1) num_threads = 1;
    std::size_t nthreads =
        std::min<std::size_t>(static_cast<std::size_t>(num_threads), std::max<std::size_t>(num_blocks, 1));

    auto worker = [&](std::size_t first_block, std::size_t stride) {
        BlockState st;
        st.fx.resize(c.num_qubits);
        st.fz.resize(c.num_qubits);
        st.obs.resize(observables ? observables->num_columns() : c.count_observables());
        for (std::size_t b = first_block; b < num_blocks; b += stride) {
            std::mt19937_64 rng = make_stream(seed, b);
            run_block(c, rng, st);
            if (detectors) {
                for (std::size_t j = 0; j < st.det.size(); ++j) {
                    detectors->column(j)[b] = st.det[j];
                }
            }
            if (observables) {
                for (std::size_t j = 0; j < st.obs.size(); ++j) {
                    observables->column(j)[b] = st.obs[j];
                }
            }
            if (measurements) {
                for (std::size_t j = 0; j < st.rec.size(); ++j) {
                    measurements->column(j)[b] = st.rec[j];
                }
            }
        }
    };

    if (nthreads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
        for (auto& th : pool) th.join();
    }
}

}  // namespace

SampleResult sample_circuit(const Circuit& c, std::size_t shots, uint64_t seed,
                            int num_threads) {
    SampleResult out;
    out.detectors = BitTable(shots, c.count_detectors());
    out.observables = BitTable(shots, c.count_observables());
    sample_blocks(c, shots, seed, num_threads, &out.detectors, &out.observables, nullptr);
    return out;
}

BitTable sample_measurement_flips(const Circuit& c, std::size_t shots, uint64_t seed,
                                  int num_threads) {
    BitTable out(shots, c.count_measurements());
    sample_blocks(c, shots, seed, num_threads, nullptr, nullptr, &out);
    return out;
}

int default_thread_count() {
    const char* env = std::getenv("FERMISTAB_THREADS");
    if (!env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 1 || v > 1024) return 1;
    return static_cast<int>(v);
}

}  // namespace fermistab
