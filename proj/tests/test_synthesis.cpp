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

#include <chrono>
#include <random>
#include <set>
#include <unordered_set>

#include "qec5/known_codes.hpp"
#include "qec5/synthesis.hpp"
#include "reference_data.hpp"

namespace qec5 {
namespace {

CodeMatrix with_block(CodeMatrix m, int row_pair, int col_pair, Block2 b) {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.set(2 * row_pair - 1 + i, 2 * col_pair - 1 + j, (b >> (3 - (2 * i + j))) & 1);
        }
    }
    return m;
}

void expect_checkpoint(const StageRecord &rec, const std::array<std::array<std::string_view, 10>, 10> &want) {
    for (int r = 1; r <= kBits; ++r) {
        for (int c = 1; c <= kBits; ++c) {
            EXPECT_EQ(format_form(rec.checkpoint.at(r, c)), want[r - 1][c - 1]) << "row " << r << " col " << c;
        }
    }
}

TEST(BlockEliminate, WorkedExampleNeedsBYFirst) {
    // m_ag = ((1,0),(1,1)), m_bg = ((0,1),(0,0)).
    CodeMatrix m = with_block(CodeMatrix::identity(), 1, 3, 0b1011);
    m = with_block(m, 2, 3, 0b0100);
    BlockElimination out = block_eliminate(m, 1, 2, 3);
    EXPECT_EQ(out.gates, (Circuit{Gate::by(2), Gate::sxbx(1), Gate::bxor(1, 2)}));
    EXPECT_EQ(block_view(out.matrix, 1, 3), kBlockIdentity);
    EXPECT_EQ(block_view(out.matrix, 2, 3), 0);
}

TEST(BlockEliminate, AlreadyReducedIsEmpty) {
    EXPECT_TRUE(block_eliminate(CodeMatrix::identity(), 1, 2, 1).gates.empty());
}

TEST(BlockEliminate, AllTwentyFourBlockCombinations) {
    int combos = 0;
    for (Block2 top = 0; top < 16; ++top) {
        for (Block2 bottom = 0; bottom < 16; ++bottom) {
            if (!block_det(top) || block_det(bottom)) {
                continue;
            }
            ++combos;
            CodeMatrix m = with_block(with_block(CodeMatrix::identity(), 3, 5, top), 1, 5, bottom);
            BlockElimination out = block_eliminate(m, 3, 1, 5);
            EXPECT_EQ(circuit_matrix(out.gates) * m, out.matrix);
            EXPECT_EQ(block_view(out.matrix, 3, 5), kBlockIdentity) << int(top) << "," << int(bottom);
            EXPECT_EQ(block_view(out.matrix, 1, 5), 0) << int(top) << "," << int(bottom);
            for (const Gate &g : out.gates) {
                EXPECT_TRUE(g.touches(1) || g.touches(3));
            }
        }
    }
    EXPECT_EQ(combos, 6 * 10);
}

TEST(BlockEliminate, PreconditionNamesDeterminant) {
    CodeMatrix m = with_block(CodeMatrix::identity(), 1, 3, 0b1010);
    try {
        block_eliminate(m, 1, 2, 3);
        FAIL() << "expected SynthesisError";
    } catch (const SynthesisError &e) {
        EXPECT_NE(std::string(e.what()).find("det(m_1"), std::string::npos) << e.what();
    }
    m = with_block(CodeMatrix::identity(), 2, 3, 0b1001);
    m = with_block(m, 1, 3, 0b1001);
    try {
        block_eliminate(m, 1, 2, 3);
        FAIL() << "expected SynthesisError";
    } catch (const SynthesisError &e) {
        EXPECT_NE(std::string(e.what()).find("det(m_2"), std::string::npos) << e.what();
    }
}

TEST(Template, DefaultSeparatesSyndromes) {
    Template t = default_template();
    EXPECT_TRUE(t.fixed_rows_distinguish());
    EXPECT_EQ(parse_template(format_template(t)).measurement_rows, t.measurement_rows);
    Template bad = t;
    bad.measurement_rows[0] = 0;
    EXPECT_FALSE(bad.fixed_rows_distinguish());
}

TEST(Template, ParseErrorsCarryPosition) {
    try {
        parse_template("stages 4 2\n0011101001\n01010100z1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError &e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 9u);
    }
}

TEST(EnumerateAssignments, StageOneHasSixHundredForty) {
    auto start = std::chrono::steady_clock::now();
    auto all = enumerate_assignments(default_template());
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_EQ(all.size(), 640u);
    EXPECT_LT(seconds, 1.0);
    std::set<std::string> distinct;
    for (const Assignment &a : all) {
        distinct.insert(format_assignment(a));
    }
    EXPECT_EQ(distinct.size(), 640u);
}

TEST(EnumerateAssignments, ContainsWorkedChoice) {
    auto all = enumerate_assignments(default_template());
    Assignment first = bindings({{"a7", 1}, {"a8", 0}, {"b7", 0}, {"b8", 0}, {"c7", 0}, {"c8", 0},
                                 {"d7", 0}, {"d8", 0}, {"e7", 1}, {"e8", 0}, {"f7", 0}, {"f8", 0}});
    auto sorted = [](Assignment a) {
        std::sort(a.begin(), a.end(), [](const Binding &x, const Binding &y) { return x.var < y.var; });
        return format_assignment(a);
    };
    bool found = false;
    for (const Assignment &a : all) {
        found = found || sorted(a) == sorted(first);
    }
    EXPECT_TRUE(found);
}

TEST(EnumerateAssignments, SingularPivotGivesNothing) {
    Template t = default_template();
    // Clearing columns 7 and 8 of row 8 makes det(m_44) vanish for every assignment.
    t.measurement_rows[2] &= static_cast<uint16_t>(~0b0000001100);
    EXPECT_TRUE(enumerate_assignments(t).empty());
}

TEST(StagedReduce, ReproducesWorkedDerivation) {
    auto start = std::chrono::steady_clock::now();
    ReductionResult r = staged_reduce(default_template(), six_cnot_choices());
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    EXPECT_LT(seconds, 1.0);
    ASSERT_EQ(r.trace.stages.size(), 3u);
    EXPECT_EQ(r.trace.stages[0].pivot, 4);
    EXPECT_EQ(r.trace.stages[1].pivot, 2);
    EXPECT_EQ(r.trace.stages[2].pivot, 0);
    expect_checkpoint(r.trace.stages[0], testdata::kAfterStage1);
    expect_checkpoint(r.trace.stages[1], testdata::kAfterStage2);
    EXPECT_EQ(r.matrix, six_cnot_matrix());
    EXPECT_EQ(circuit_matrix(r.decoder()), six_cnot_matrix());
    EXPECT_TRUE(r.trace.stages[2].checkpoint.to_concrete() == CodeMatrix::identity());
    EXPECT_TRUE(r.column_ops.empty());
}

TEST(StagedReduce, WorkedPathGateCounts) {
    ReductionResult r = staged_reduce(default_template(), six_cnot_choices());
    Circuit decoder = r.decoder();
    ASSERT_EQ(decoder.size(), testdata::kReferenceDecoder.size());
    for (size_t i = 0; i < decoder.size(); ++i) {
        EXPECT_EQ(decoder[i].str(), testdata::kReferenceDecoder[i]);
    }
    EXPECT_EQ(bxor_count(decoder), 6);
    // BY and SXBX on pair 2 are adjacent; they merge into one single-qubit operation downstream.
    EXPECT_EQ(decoder.size() - bxor_count(decoder), 4u);
}

TEST(StagedReduce, StageOneBindsDerivedUnknowns) {
    ReductionResult r = staged_reduce(default_template(), six_cnot_choices());
    Assignment bound = r.trace.stages[0].bound;
    auto value = [&](const char *name) {
        int var = *parse_unknown(name);
        for (const Binding &b : bound) {
            if (b.var == var) {
                return static_cast<int>(b.value);
            }
        }
        return -1;
    };
    EXPECT_EQ(value("c8"), 0);
    EXPECT_EQ(value("e7"), 1);
}

TEST(StagedReduce, SingularPivotIsAStageOneError) {
    StageChoices choices = {bindings({{"e7", 0}})};
    try {
        staged_reduce(default_template(), choices);
        FAIL() << "expected SynthesisError";
    } catch (const SynthesisError &e) {
        EXPECT_NE(std::string(e.what()).find("stage 1"), std::string::npos) << e.what();
    }
}

TEST(StagedReduce, ReplaySoundness) {
    for (Endpoint endpoint : {Endpoint::identity, Endpoint::akin}) {
        ReductionResult r = staged_reduce(default_template(), six_cnot_choices(), endpoint);
        EXPECT_EQ(circuit_matrix(r.gates) * r.solved, r.endpoint);
        EXPECT_EQ(apply_column_ops(r.endpoint, r.column_ops), CodeMatrix::identity());
        EXPECT_EQ(circuit_matrix(r.decoder()), r.matrix);
        EXPECT_TRUE(validate_code_matrix(r.matrix).valid());
    }
}

TEST(StagedReduce, UnresolvedStageIsReported) {
    // Stage 2 still has several ways to clear its pivot column.
    auto first = enumerate_assignments(default_template()).front();
    EXPECT_THROW(staged_reduce(default_template(), {first}), SynthesisError);
}

TEST(Akin, WorkedAlternativeNormalizes) {
    CodeMatrix akin = rows_to_matrix({"1100000000", "0100000000", "0011000000", "0001000000", "0000010000",
                                      "0000100000", "0000000100", "0000001000", "0000000001", "0000000010"});
    AkinNormalization n = akin_normalize(akin);
    EXPECT_EQ(n.identity, CodeMatrix::identity());
    EXPECT_EQ(apply_column_ops(akin, n.ops), CodeMatrix::identity());
    EXPECT_EQ(n.ops.size(), 5u);
}

TEST(Akin, IdentityNeedsNoOps) {
    EXPECT_TRUE(akin_normalize(CodeMatrix::identity()).ops.empty());
}

TEST(Akin, RandomAlternativesRoundTrip) {
    std::mt19937_64 rng(500);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> pair(1, kPairs);
    std::uniform_int_distribution<int> len(0, 15);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<ColumnOp> ops(len(rng));
        for (ColumnOp &op : ops) {
            op = ColumnOp{static_cast<ColumnOp::Kind>(kind(rng)), pair(rng)};
        }
        CodeMatrix akin = apply_column_ops(CodeMatrix::identity(), ops);
        AkinNormalization n = akin_normalize(akin);
        ASSERT_EQ(n.identity, CodeMatrix::identity());
        ASSERT_EQ(apply_column_ops(akin, n.ops), CodeMatrix::identity());
    }
}

TEST(Akin, ColumnOpsPreserveMeasurementWordSet) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_int_distribution<int> pair(1, kPairs);
    auto words = [](const CodeMatrix &m) {
        std::set<uint8_t> out;
        for (int i = 0; i < kSyndromes; ++i) {
            out.insert(extract_measurement(apply_matrix(m, syndrome(i))).packed());
        }
        return out;
    };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ColumnOp> ops(6);
        for (ColumnOp &op : ops) {
            op = ColumnOp{static_cast<ColumnOp::Kind>(kind(rng)), pair(rng)};
        }
        CodeMatrix m = apply_column_ops(six_cnot_matrix(), ops);
        EXPECT_EQ(words(m), words(six_cnot_matrix()));
        EXPECT_TRUE(validate_code_matrix(m).valid());
    }
}

TEST(Akin, RejectsNonAkinMatrix) {
    EXPECT_THROW(akin_normalize(six_cnot_matrix()), SynthesisError);
}

struct RowsHash {
    size_t operator()(const std::array<uint16_t, kBits> &rows) const {
        size_t h = 0;
        for (uint16_t r : rows) {
            h = h * 1000003u ^ r;
        }
        return h;
    }
};

using Ball = std::unordered_set<std::array<uint16_t, kBits>, RowsHash>;

Ball ball(const CodeMatrix &center, int radius) {
    auto gates = gates_on_pairs({1, 2, 3, 4, 5});
    Ball seen{center.rows()};
    std::vector<std::array<uint16_t, kBits>> frontier{center.rows()};
    for (int d = 0; d < radius; ++d) {
        std::vector<std::array<uint16_t, kBits>> next;
        for (const auto &rows : frontier) {
            for (const Gate &g : gates) {
                auto moved = rows;
                apply_row_ops(moved, g);
                if (seen.insert(moved).second) {
                    next.push_back(moved);
                }
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

TEST(MeetInTheMiddle, SixCnotMatrixNeedsTenBasicGates) {
    // Every circuit of length <= 9 splits as (<= 4 gates from M) meeting (<= 5 gates from identity).
    Ball near_target = ball(six_cnot_matrix(), 4);
    Ball near_identity = ball(CodeMatrix::identity(), 5);
    size_t meets = 0;
    for (const auto &rows : near_target) {
        meets += near_identity.count(rows);
    }
    EXPECT_EQ(meets, 0u);
    // Radius 5 + 5 reaches it.
    Ball wider = ball(six_cnot_matrix(), 5);
    bool reached = false;
    for (const auto &rows : near_identity) {
        reached = reached || wider.count(rows) > 0;
    }
    EXPECT_TRUE(reached);
}

}  // namespace
}  // namespace qec5
