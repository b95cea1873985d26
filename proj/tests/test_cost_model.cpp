// Copyright 2026 The qec5 Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <random>

#include "qec5/cost_model.hpp"
#include "qec5/known_codes.hpp"
#include "reference_data.hpp"

namespace qec5 {
namespace {

Circuit reference_encoder() {
    std::string text;
    for (std::string_view line : testdata::kReferenceDecoder) {
        text += std::string(line) + "\n";
    }
    return invert_circuit(parse_circuit(text));
}

Circuit random_circuit(std::mt19937_64 &rng, size_t len) {
    auto gates = gates_on_pairs({1, 2, 3, 4, 5});
    std::uniform_int_distribution<size_t> pick(0, gates.size() - 1);
    Circuit c(len);
    for (Gate &g : c) {
        g = gates[pick(rng)];
    }
    return c;
}

void apply_primitive(StateVector &s, const Primitive &p) {
    if (p.arity() == 1) {
        s.apply_single(p.qubits[0], p.unitary);
        return;
    }
    for (uint32_t i = 0; i < StateVector::kDim; ++i) {
        auto bit = [&](int k) { return (i & StateVector::mask(p.qubits[k])) != 0; };
        bool odd = p.arity() == 2 ? bit(0) && bit(1) : bit(0) && (bit(1) != bit(2));
        if (odd) {
            s[i] = -s[i];
        }
    }
}

bool same_up_to_phase(const StateVector &a, const StateVector &b) {
    return std::abs(std::abs(a.inner(b)) - 1) < 1e-12;
}

bool equal(const StateVector &a, const StateVector &b) {
    for (uint32_t i = 0; i < StateVector::kDim; ++i) {
        if (std::abs(a[i] - b[i]) > 1e-12) {
            return false;
        }
    }
    return true;
}

TEST(CountOps, Examples) {
    OpCount empty = count_ops({});
    EXPECT_EQ(empty.total_ops, 0);
    EXPECT_EQ(empty.cnot_count, 0);
    OpCount three = count_ops({QGate::h(1), QGate::cnot(1, 2), QGate::cnot(1, 3)});
    EXPECT_EQ(three.total_ops, 3);
    EXPECT_EQ(three.cnot_count, 2);
}

TEST(CountOps, ReferenceEncoderIsNineAndSix) {
    auto merged = merge_single_qubit(schedule_asap(lift_circuit(reference_encoder())));
    OpCount n = count_ops(merged);
    EXPECT_EQ(n.total_ops, 9);
    EXPECT_EQ(n.cnot_count, 6);
}

TEST(CountOps, PermutationInsensitive) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        auto gates = lift_circuit(random_circuit(rng, 12));
        OpCount a = count_ops(gates);
        std::shuffle(gates.begin(), gates.end(), rng);
        OpCount b = count_ops(gates);
        EXPECT_EQ(a.total_ops, b.total_ops);
        EXPECT_EQ(a.cnot_count, b.cnot_count);
    }
}

TEST(Fuse, SharedControl) {
    auto fused = fuse_cnot_pairs({QGate::cnot(1, 2), QGate::cnot(1, 3)});
    ASSERT_EQ(fused.size(), 1u);
    EXPECT_EQ(fused[0].str(), "THREE(control 1; targets 2,3)");
}

TEST(Fuse, SharedTarget) {
    auto fused = fuse_cnot_pairs({QGate::cnot(1, 3), QGate::cnot(2, 3)});
    ASSERT_EQ(fused.size(), 1u);
    EXPECT_EQ(fused[0].arity(), 3);
}

TEST(Fuse, NothingToFuse) {
    EXPECT_EQ(fuse_cnot_pairs({QGate::cnot(1, 2)}).size(), 1u);
    EXPECT_EQ(fuse_cnot_pairs({QGate::cnot(1, 2), QGate::h(1), QGate::cnot(1, 3)}).size(), 3u);
    // Sharing a qubit in opposite roles is not a fusable pair.
    EXPECT_EQ(fuse_cnot_pairs({QGate::cnot(1, 2), QGate::cnot(2, 3)}).size(), 2u);
    // A gate on the third qubit in between blocks fusion.
    EXPECT_EQ(fuse_cnot_pairs({QGate::cnot(1, 2), QGate::h(3), QGate::cnot(1, 3)}).size(), 3u);
}

TEST(Fuse, UnitaryEquivalenceOnBasisStates) {
    std::mt19937_64 rng(32);
    int fusions = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto gates = merge_single_qubit(schedule_asap(lift_circuit(random_circuit(rng, 12))));
        auto fused = fuse_cnot_pairs(gates);
        for (const QGate &g : fused) {
            fusions += g.arity() == 3;
        }
        for (uint32_t b = 0; b < StateVector::kDim; ++b) {
            StateVector x = StateVector::basis(b);
            StateVector y = x;
            x.apply_all(gates);
            y.apply_all(fused);
            ASSERT_TRUE(equal(x, y)) << trial << " basis " << b;
        }
    }
    EXPECT_GT(fusions, 0);
}

TEST(Schedule, PreservesUnitaryAndMergeKeepsPhaseClass) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 100; ++trial) {
        auto lifted = lift_circuit(random_circuit(rng, 12));
        auto scheduled = schedule_asap(lifted);
        auto merged = merge_single_qubit(scheduled);
        for (uint32_t b = 0; b < StateVector::kDim; ++b) {
            StateVector x = StateVector::basis(b);
            StateVector y = x;
            StateVector z = x;
            x.apply_all(lifted);
            y.apply_all(scheduled);
            z.apply_all(merged);
            ASSERT_TRUE(equal(x, y));
            ASSERT_TRUE(same_up_to_phase(x, z));
        }
    }
}

TEST(Lowering, PrimitivesReproduceTheCircuit) {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        auto fused = fuse_cnot_pairs(merge_single_qubit(schedule_asap(lift_circuit(random_circuit(rng, 12)))));
        auto prims = lower_to_ion_trap(fused);
        StateVector psi = StateVector::basis(0);
        for (int q = 1; q <= kQubits; ++q) {
            psi.apply_single(q, hadamard_matrix());
        }
        psi.apply_single(2, q_matrix());
        StateVector x = psi;
        x.apply_all(fused);
        StateVector y = psi;
        for (const Primitive &p : prims) {
            apply_primitive(y, p);
        }
        ASSERT_TRUE(same_up_to_phase(x, y)) << trial;
    }
}

TEST(PulseCount, SingleGates) {
    EXPECT_EQ(pulse_count(std::vector<QGate>{QGate::cnot(1, 2)}), 3);
    EXPECT_EQ(pulse_count(std::vector<QGate>{QGate::h(1)}), 1);
    EXPECT_EQ(pulse_count(std::vector<QGate>{QGate::fanout(1, 2, 3)}), 4);
}

TEST(PulseCount, ReferenceEncoderCostsTwentyFour) {
    CostReport r = cost_report(reference_encoder());
    EXPECT_EQ(r.total_ops, 9);
    EXPECT_EQ(r.cnot_count, 6);
    EXPECT_EQ(r.pulse_count, 24);
    EXPECT_EQ(r.fusions, 2);
    EXPECT_EQ(r.fused_gate_list,
              (std::vector<std::string>{"CNOT 1 4", "HQ 2", "H 5", "Q 1", "THREE(control 2; targets 4,3)",
                                        "THREE(control 5; targets 2,1)", "CNOT 1 3"}));
    EXPECT_LE(r.cnot_count, r.total_ops);
    EXPECT_GE(r.pulse_count, r.total_ops);
}

TEST(PulseCount, FusionNeverIncreasesPulses) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 200; ++trial) {
        auto merged = merge_single_qubit(schedule_asap(lift_circuit(random_circuit(rng, 12))));
        auto fused = fuse_cnot_pairs(merged);
        EXPECT_LE(pulse_count(fused), pulse_count(merged));
        EXPECT_LE(pulse_count(lower_to_ion_trap(fused)), pulse_count(lower_to_ion_trap(merged)));
    }
}

TEST(PulseCount, MonotoneInEachRule) {
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 30; ++trial) {
        Circuit c = random_circuit(rng, 12);
        PulseRules base{1, 3, 4};
        int p0 = cost_report(c, base).pulse_count;
        for (int field = 0; field < 3; ++field) {
            PulseRules more = base;
            (field == 0 ? more.single_qubit : field == 1 ? more.two_qubit : more.three_qubit) += 2;
            EXPECT_GE(cost_report(c, more).pulse_count, p0);
        }
    }
    EXPECT_THROW(cost_report({}, PulseRules{0, 3, 4}), std::invalid_argument);
}

TEST(Table2, RecordedAndComputedRows) {
    auto rows = table2_report({{"Circuit 4", cost_report(reference_encoder())}});
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].name, "Circuit 1");
    EXPECT_EQ(rows[0].pulse_count, 35);
    EXPECT_FALSE(rows[1].pulse_count.has_value());
    EXPECT_EQ(rows[2].total_ops, 10);
    EXPECT_EQ(rows[2].cnot_count, 7);
    EXPECT_EQ(rows[2].pulse_count, 26);
    EXPECT_FALSE(rows[2].computed);
    EXPECT_TRUE(rows[3].computed);
    EXPECT_EQ(rows[3].total_ops, 9);
    EXPECT_EQ(rows[3].cnot_count, 6);
    EXPECT_EQ(rows[3].pulse_count, 24);
    std::string text = render_table2(rows);
    EXPECT_NE(text.find("*"), std::string::npos);
    EXPECT_NE(text.find("recorded"), std::string::npos);
}

TEST(Table2, EmptyIsHeaderOnly) {
    auto rows = table2_report({}, false);
    EXPECT_TRUE(rows.empty());
    std::string text = render_table2(rows);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
}

}  // namespace
}  // namespace qec5
