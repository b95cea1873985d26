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

#include "qec5/known_codes.hpp"
#include "qec5/search.hpp"

namespace qec5 {
namespace {

void expect_sound(const SearchReport &report, int budget) {
    for (const SearchHit &hit : report.hits) {
        EXPECT_LE(hit.bxor, budget);
        EXPECT_EQ(bxor_count(hit.gates), hit.bxor);
        EXPECT_EQ(circuit_matrix(hit.decoder()), hit.matrix);
        EXPECT_TRUE(validate_code_matrix(hit.matrix).valid());
    }
}

const SearchReport &budget_six() {
    static const SearchReport report = search_min_bxor(default_template(), SearchOptions{});
    return report;
}

TEST(Search, BudgetZeroIsEmpty) {
    SearchOptions options;
    options.budget = 0;
    EXPECT_TRUE(search_min_bxor(default_template(), options).hits.empty());
    EXPECT_FALSE(validate_code_matrix(CodeMatrix::identity()).valid());
}

TEST(Search, NothingBelowSixBxor) {
    SearchOptions options;
    options.budget = 5;
    EXPECT_TRUE(search_min_bxor(default_template(), options).hits.empty());
}

TEST(Search, BudgetSixFindsSixCnotMatrix) {
    const SearchReport &report = budget_six();
    ASSERT_FALSE(report.hits.empty());
    expect_sound(report, 6);
    bool found = false;
    for (const SearchHit &hit : report.hits) {
        found = found || hit.matrix == six_cnot_matrix();
    }
    EXPECT_TRUE(found);
    EXPECT_EQ(report.hits.size(), 2048u);
}

TEST(Search, HitsAreSortedAndDistinct) {
    const SearchReport &report = budget_six();
    for (size_t i = 1; i < report.hits.size(); ++i) {
        EXPECT_TRUE(detail::hit_order(report.hits[i - 1], report.hits[i])) << i;
    }
}

TEST(Search, PathsReplay) {
    const SearchReport &report = budget_six();
    for (size_t i = 0; i < report.hits.size(); i += 97) {
        const SearchHit &hit = report.hits[i];
        ReductionResult r = replay(default_template(), hit.path);
        EXPECT_EQ(r.gates, hit.gates);
        EXPECT_EQ(r.matrix, hit.matrix);
        EXPECT_EQ(circuit_matrix(r.gates) * r.solved, r.endpoint);
        EXPECT_EQ(r.trace.stages.size(), 3u);
    }
}

TEST(Search, SeededSamplingIsDeterministic) {
    SearchOptions options;
    options.seed = 42;
    options.samples = 400;
    SearchReport a = search_min_bxor(default_template(), options);
    options.jobs = 3;
    SearchReport b = search_min_bxor(default_template(), options);
    ASSERT_EQ(a.hits.size(), b.hits.size());
    for (size_t i = 0; i < a.hits.size(); ++i) {
        EXPECT_EQ(a.hits[i].gates, b.hits[i].gates);
        EXPECT_EQ(a.hits[i].matrix, b.hits[i].matrix);
    }
    expect_sound(a, 6);
}

TEST(Search, AkinEndpointHitsAreSound) {
    SearchOptions options;
    options.seed = 1;
    options.samples = 200;
    options.endpoint = Endpoint::akin;
    expect_sound(search_min_bxor(default_template(), options), 6);
}

}  // namespace
}  // namespace qec5
