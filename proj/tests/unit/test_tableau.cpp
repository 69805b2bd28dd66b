#include <doctest.h>

#include <random>

#include "common/dense_oracle.hpp"
#include "fermistab/rng.hpp"
#include "fermistab/tableau.hpp"

using namespace fermistab;

namespace {

// Finds the signed Pauli equal to the dense matrix m (must exist).
PauliString pauli_from_dense(const dense::Matrix& m, std::size_t n) {
    PauliString p(n);
    for (int letters = 0; letters < 1 << (2 * n); ++letters) {
        int rest = letters;
        for (std::size_t q = 0; q < n; ++q) {
            p.set_letter(q, "IXYZ"[rest & 3]);
            rest >>= 2;
        }
        for (int phase : {0, 2}) {
            p.set_phase_exponent(phase);
            if ((dense::pauli_dense(p) - m).norm() < 1e-9) return p;
        }
    }
    throw std::runtime_error("matrix is not a signed Pauli");
}

const std::vector<Op> kOneQubitGates = {Op::H, Op::S,          Op::S_DAG,  Op::SQRT_X,
                                        Op::SQRT_X_DAG, Op::SQRT_Y, Op::SQRT_Y_DAG,
                                        Op::X, Op::Y,          Op::Z};
const std::vector<Op> kTwoQubitGates = {Op::CX, Op::CZ, Op::CY, Op::SWAP};

}  // namespace

TEST_CASE("every gate conjugates the tableau rows like its dense unitary") {
    for (Op op : kOneQubitGates) {
        CAPTURE(static_cast<int>(op));
        TableauSimulator sim(1);
        sim.apply_gate(op, 0);
        dense::Matrix u = dense::gate_dense(op);
        PauliString x(1), z(1);
        x.set_letter(0, 'X');
        z.set_letter(0, 'Z');
        CHECK(sim.destabilizers()[0] ==
              pauli_from_dense(u * dense::pauli_dense(x) * u.adjoint(), 1));
        CHECK(sim.stabilizers()[0] ==
              pauli_from_dense(u * dense::pauli_dense(z) * u.adjoint(), 1));
    }
    for (Op op : kTwoQubitGates) {
        CAPTURE(static_cast<int>(op));
        for (auto [a, b] : {std::pair<uint32_t, uint32_t>{0, 1}, {1, 0}}) {
            TableauSimulator sim(2);
            sim.apply_gate(op, a, b);
            dense::Matrix u = dense::expand(dense::gate_dense(op), {a, b}, 2);
            for (std::size_t q = 0; q < 2; ++q) {
                PauliString x = PauliString::single(2, q, 'X');
                PauliString z = PauliString::single(2, q, 'Z');
                CHECK(sim.destabilizers()[q] ==
                      pauli_from_dense(u * dense::pauli_dense(x) * u.adjoint(), 2));
                CHECK(sim.stabilizers()[q] ==
                      pauli_from_dense(u * dense::pauli_dense(z) * u.adjoint(), 2));
            }
        }
    }
}

TEST_CASE("random circuits agree with dense statevector simulation") {
    const std::size_t n = 3;
    auto rng = make_stream(21, 0);
    std::uniform_int_distribution<std::size_t> pick_1q(0, kOneQubitGates.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_2q(0, kTwoQubitGates.size() - 1);
    std::uniform_int_distribution<uint32_t> pick_q(0, n - 1);
    std::uniform_int_distribution<int> pick_kind(0, 3);

    for (int trial = 0; trial < 40; ++trial) {
        TableauSimulator sim(n, /*seed=*/trial);
        dense::DenseSim ref(n);
        for (int step = 0; step < 24; ++step) {
            switch (pick_kind(rng)) {
                case 0: {
                    Op op = kOneQubitGates[pick_1q(rng)];
                    uint32_t q = pick_q(rng);
                    sim.apply_gate(op, q);
                    ref.apply(op, {q});
                    break;
                }
                case 1: {
                    Op op = kTwoQubitGates[pick_2q(rng)];
                    uint32_t a = pick_q(rng), b = pick_q(rng);
                    if (a == b) b = (a + 1) % n;
                    sim.apply_gate(op, a, b);
                    ref.apply(op, {a, b});
                    break;
                }
                case 2: {
                    uint32_t q = pick_q(rng);
                    auto res = sim.measure_z(q);
                    double p1 = ref.prob_one(q);
                    if (res.random) {
                        CHECK(p1 == doctest::Approx(0.5));
                    } else {
                        CHECK(p1 == doctest::Approx(res.outcome ? 1.0 : 0.0));
                    }
                    ref.project(q, res.outcome);
                    break;
                }
                default: {
                    uint32_t q = pick_q(rng);
                    auto res = sim.reset(q);
                    ref.reset(q, res.outcome);
                    break;
                }
            }
        }
        // The dense state must be stabilized by every tableau stabilizer.
        for (const PauliString& s : sim.stabilizers()) {
            CHECK(ref.expectation(s).real() == doctest::Approx(1.0));
        }
        // Spot-check the expectation query on random Paulis.
        for (int probe = 0; probe < 8; ++probe) {
            PauliString p(n);
            for (std::size_t q = 0; q < n; ++q) p.set_letter(q, "IXYZ"[rng() & 3]);
            auto ev = sim.expectation(p);
            double dense_ev = ref.expectation(p).real();
            if (ev.has_value()) {
                CHECK(dense_ev == doctest::Approx(*ev));
            } else {
                CHECK(dense_ev == doctest::Approx(0.0));
            }
        }
    }
}

TEST_CASE("entangled pairs measure with perfect correlation") {
    TableauSimulator sim(2, 7);
    sim.apply_gate(Op::H, 0);
    sim.apply_gate(Op::CX, 0, 1);
    auto first = sim.measure_z(0);
    CHECK(first.random);
    auto second = sim.measure_z(1);
    CHECK(!second.random);
    CHECK(second.outcome == first.outcome);
}

TEST_CASE("forced measurements select the branch") {
    for (bool want : {false, true}) {
        TableauSimulator sim(1);
        sim.apply_gate(Op::H, 0);
        auto res = sim.measure_z(0, want);
        CHECK(res.random);
        CHECK(res.outcome == want);
        auto again = sim.measure_z(0);
        CHECK(!again.random);
        CHECK(again.outcome == want);
    }
}

TEST_CASE("run_reference forces random branches to zero and keeps deterministic values") {
    Circuit c;
    c.num_qubits = 2;
    c.append(Op::H, {0});
    c.append(Op::M, {0});        // random -> forced 0
    c.append(Op::X, {1});
    c.append(Op::M, {1});        // deterministic 1
    ReferenceRun run = run_reference(c);
    REQUIRE(run.records.size() == 2);
    CHECK(run.records[0] == false);
    CHECK(run.records[1] == true);
    REQUIRE(run.collapses.size() == 1);
    CHECK(run.collapses[0].record_index == 0);

    Circuit noisy = c;
    noisy.append(Op::X_ERROR, {0}, 0.1);
    CHECK_THROWS(run_reference(noisy));
}

TEST_CASE("propagate_frame tracks record flips through entanglers") {
    Circuit c;
    c.num_qubits = 2;
    c.append(Op::H, {0});
    c.append(Op::CX, {0, 1});
    c.append(Op::M, {0});
    c.append(Op::M, {1});

    // X on qubit 0 before the CX flips both records.
    PauliString x0 = PauliString::single(2, 0, 'X');
    auto flips = propagate_frame(c, 1, 0, x0);
    CHECK(flips == std::vector<bool>{true, true});

    // X on qubit 0 after the CX flips only the first record.
    flips = propagate_frame(c, 2, 0, x0);
    CHECK(flips == std::vector<bool>{true, false});

    // Z errors do not flip Z-basis records.
    flips = propagate_frame(c, 2, 0, PauliString::single(2, 0, 'Z'));
    CHECK(flips == std::vector<bool>{false, false});
}

TEST_CASE("collect_parity_sets resolves rec offsets to absolute indices") {
    Circuit c;
    c.num_qubits = 2;
    c.append(Op::M, {0, 1});
    c.append(Op::DETECTOR, {2});
    c.append(Op::M, {0});
    c.append(Op::DETECTOR, {1, 3});
    c.append(Op::OBSERVABLE_INCLUDE, {1}, 0);
    c.append(Op::OBSERVABLE_INCLUDE, {2}, 0);
    ParitySets sets = collect_parity_sets(c);
    REQUIRE(sets.detectors.size() == 2);
    CHECK(sets.detectors[0] == std::vector<std::size_t>{0});
    CHECK(sets.detectors[1] == std::vector<std::size_t>{2, 0});
    REQUIRE(sets.observables.size() == 1);
    CHECK(sets.observables[0] == std::vector<std::size_t>{2, 1});
}

TEST_CASE("determinism check accepts branch-independent parities") {
    // EPR pair: each record is random but their parity is fixed.
    Circuit good;
    good.num_qubits = 2;
    good.append(Op::H, {0});
    good.append(Op::CX, {0, 1});
    good.append(Op::M, {0, 1});
    good.append(Op::DETECTOR, {1, 2});
    CHECK(check_determinism(good).deterministic);

    Circuit bad = good;
    bad.append(Op::DETECTOR, {1});  // a single random record is not deterministic
    auto report = check_determinism(bad);
    CHECK(!report.deterministic);
    CHECK(!report.detail.empty());
}

TEST_CASE("determinism check sees flips caused by random resets") {
    // R collapses a |+> qubit; a later Z-basis measurement of an entangled
    // partner must not be declared deterministic if it depends on the branch.
    Circuit c;
    c.num_qubits = 2;
    c.append(Op::H, {0});
    c.append(Op::CX, {0, 1});
    c.append(Op::R, {0});        // random collapse, no record
    c.append(Op::M, {1});        // outcome depends on the reset branch
    c.append(Op::DETECTOR, {1});
    CHECK(!check_determinism(c).deterministic);

    // Measuring the pair parity before the reset stays deterministic.
    Circuit ok;
    ok.num_qubits = 2;
    ok.append(Op::H, {0});
    ok.append(Op::CX, {0, 1});
    ok.append(Op::M, {0, 1});
    ok.append(Op::R, {0});
    ok.append(Op::M, {0});
    ok.append(Op::DETECTOR, {2, 3});  // EPR parity
    ok.append(Op::DETECTOR, {1});     // reset qubit measures 0 deterministically
    CHECK(check_determinism(ok).deterministic);
}
