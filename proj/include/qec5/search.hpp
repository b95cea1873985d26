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

#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qec5/synthesis.hpp"

namespace qec5 {

struct SearchOptions {
    int budget = 6;
    /// When set, `samples` random descents through the pivot stages replace the exhaustive walk;
    /// each descent still tries every completion of the remainder.
    std::optional<uint64_t> seed;
    uint64_t samples = 10000;
    unsigned jobs = 1;
    Endpoint endpoint = Endpoint::identity;
};

/// Everything needed to replay one branch through a Reducer.
struct SearchPath {
    StageChoices choices;
    std::vector<ClearPlan> plans;
};

struct SearchHit {
    /// Emission order, as in ReductionResult::gates.
    Circuit gates;
    CodeMatrix matrix;
    SearchPath path;
    int bxor = 0;

    Circuit decoder() const {
        return invert_circuit(gates);
    }
};

struct SearchReport {
    std::vector<SearchHit> hits;
    /// Remainder completions examined.
    uint64_t leaves = 0;
};

/// Replays a search path with the trace recorded.
inline ReductionResult replay(const Template &t, const SearchPath &path, Endpoint endpoint = Endpoint::identity) {
    Reducer r(t);
    while (!r.at_remainder()) {
        size_t s = r.stage();
        r.run_pivot_stage(s < path.choices.size() ? path.choices[s] : Assignment{},
                          s < path.plans.size() ? path.plans[s] : ClearPlan{});
    }
    r.run_remainder(r.stage() < path.choices.size() ? path.choices[r.stage()] : Assignment{}, endpoint);
    return finish_reduction(r);
}

namespace detail {

struct Branch {
    Reducer reducer;
    SearchPath path;
    int bxor = 0;
};

/// Rows of the pivot column that need clearing, with the words able to clear each by one BXOR.
/// An empty word list means the two-pair fallback sequence is used.
inline std::vector<std::pair<int, std::vector<Circuit>>> clearing_options(const Reducer &bound) {
    std::vector<std::pair<int, std::vector<Circuit>>> out;
    const int g = bound.pivot();
    for (int k : bound.open()) {
        if (k != g && block_view(bound.current(), k, g).value_or(0) != 0) {
            out.emplace_back(k, bound.clear_words(k));
        }
    }
    return out;
}

inline std::optional<Branch> try_branch(const Branch &from, const Reducer &bound, const Assignment &a,
                                        const ClearPlan &plan, int budget) {
    Branch next{bound, from.path, from.bxor};
    size_t before = next.reducer.gates().size();
    try {
        next.reducer.run_pivot_stage({}, plan);
    } catch (const SynthesisError &) {
        return std::nullopt;  // pivot rows cannot be cleared on this branch
    }
    const Circuit &all = next.reducer.gates();
    next.bxor += bxor_count(Circuit(all.begin() + static_cast<std::ptrdiff_t>(before), all.end()));
    if (next.bxor > budget) {
        return std::nullopt;
    }
    next.path.choices.push_back(a);
    next.path.plans.push_back(plan);
    return next;
}

/// All ways to run the current pivot stage: pivot-column values times clearing words.
inline std::vector<Branch> expand_pivot_stage(const Branch &from, int budget) {
    std::vector<Branch> out;
    for (const Assignment &a : from.reducer.pivot_assignments()) {
        Reducer bound = from.reducer;
        bound.bind(a);
        if (from.bxor + bound.pivot_bxor_lower_bound() > budget) {
            continue;
        }
        auto options = clearing_options(bound);
        std::vector<size_t> pick(options.size(), 0);
        while (true) {
            ClearPlan plan;
            for (size_t i = 0; i < options.size(); ++i) {
                if (!options[i].second.empty()) {
                    plan[options[i].first] = options[i].second[pick[i]];
                }
            }
            if (auto next = try_branch(from, bound, a, plan, budget)) {
                out.push_back(std::move(*next));
            }
            size_t i = 0;
            while (i < pick.size() && ++pick[i] >= options[i].second.size()) {
                pick[i++] = 0;
            }
            if (i == pick.size()) {
                break;
            }
        }
    }
    return out;
}

/// One uniformly drawn pivot-column assignment and clearing plan.
inline std::optional<Branch> sample_pivot_stage(const Branch &from, int budget, std::mt19937_64 &rng) {
    std::vector<Assignment> assignments = from.reducer.pivot_assignments();
    if (assignments.empty()) {
        return std::nullopt;
    }
    const Assignment &a = assignments[std::uniform_int_distribution<size_t>(0, assignments.size() - 1)(rng)];
    Reducer bound = from.reducer;
    bound.bind(a);
    ClearPlan plan;
    for (auto &[k, words] : clearing_options(bound)) {
        if (!words.empty()) {
            plan[k] = words[std::uniform_int_distribution<size_t>(0, words.size() - 1)(rng)];
        }
    }
    return try_branch(from, bound, a, plan, budget);
}

inline std::vector<int> bits_of(uint64_t mask) {
    std::vector<int> out;
    for (int v = 0; v < kMaxVars; ++v) {
        if ((mask >> v) & 1) {
            out.push_back(v);
        }
    }
    return out;
}

inline Assignment assignment_from(const std::vector<int> &vars, uint64_t n) {
    Assignment a;
    for (size_t i = 0; i < vars.size(); ++i) {
        a.push_back(Binding{vars[i], ((n >> i) & 1) != 0});
    }
    return a;
}

inline uint64_t ones_from(const std::vector<int> &vars, uint64_t n) {
    uint64_t ones = 0;
    for (size_t i = 0; i < vars.size(); ++i) {
        if ((n >> i) & 1) {
            ones |= uint64_t{1} << vars[i];
        }
    }
    return ones;
}

class SearchWorker {
   public:
    SearchWorker(const SearchOptions &options, const RemainderTable *table, const std::vector<uint64_t> *zero_cost)
        : options_(options), table_(table), zero_cost_states_(zero_cost) {
    }

    void walk(const Branch &b) {
        if (b.reducer.at_remainder()) {
            walk_remainder(b);
            return;
        }
        for (const Branch &next : expand_pivot_stage(b, options_.budget)) {
            walk(next);
        }
    }

    void sample(Branch b, std::mt19937_64 &rng) {
        while (!b.reducer.at_remainder()) {
            std::optional<Branch> next = sample_pivot_stage(b, options_.budget, rng);
            if (!next) {
                ++leaves;
                return;
            }
            b = std::move(*next);
        }
        walk_remainder(b);
    }

    std::vector<SearchHit> hits;
    uint64_t leaves = 0;

   private:
    /// Either tries every value of the free unknowns (Gray order), or, when the leftover budget
    /// admits fewer remainder states than that, solves for each admissible state directly.
    void walk_remainder(const Branch &b) {
        const Reducer &r = b.reducer;
        const int left = options_.budget - b.bxor;
        std::vector<int> vars = bits_of(r.current().vars());
        if (left < 0) {
            return;
        }
        if (r.open().empty() || vars.size() > 24) {
            for (uint64_t n = 0; n < (uint64_t{1} << vars.size()); ++n) {
                complete(b, vars, n);
            }
            return;
        }
        const uint64_t base = table_->pack(r.current().evaluate(0), r.open());
        std::vector<uint64_t> cols;
        for (int v : vars) {
            cols.push_back(table_->pack(r.current().evaluate(uint64_t{1} << v), r.open()) ^ base);
        }
        const std::vector<uint64_t> *cands = left == 0 ? zero_cost_states_ : nullptr;
        if (cands && cands->size() < (uint64_t{1} << vars.size())) {
            // Echelon basis of the column span, remembering which unknowns make up each vector.
            std::vector<std::pair<uint64_t, uint64_t>> basis;
            for (size_t j = 0; j < cols.size(); ++j) {
                uint64_t v = cols[j];
                uint64_t combo = uint64_t{1} << j;
                for (auto &[bv, bc] : basis) {
                    if ((v ^ bv) < v) {
                        v ^= bv;
                        combo ^= bc;
                    }
                }
                if (v) {
                    basis.emplace_back(v, combo);
                    std::sort(basis.begin(), basis.end(), std::greater<>());
                }
            }
            for (uint64_t target : *cands) {
                ++leaves;
                uint64_t v = target ^ base;
                uint64_t combo = 0;
                for (auto &[bv, bc] : basis) {
                    if ((v ^ bv) < v) {
                        v ^= bv;
                        combo ^= bc;
                    }
                }
                if (v == 0) {
                    complete(b, vars, combo, true);
                }
            }
            return;
        }
        uint64_t state = base;
        uint64_t n = 0;
        for (uint64_t step = 0;; ++step) {
            if (quick_symplectic(state)) {
                complete(b, vars, n);
            } else {
                ++leaves;
            }
            if (step + 1 == (uint64_t{1} << vars.size())) {
                break;
            }
            int j = std::countr_zero(step + 1);
            n ^= uint64_t{1} << j;
            state ^= cols[j];
        }
    }

    /// Symplectic test for a packed three-pair state.
    bool quick_symplectic(uint64_t s) const {
        if (table_->pairs() != 3) {
            return true;
        }
        std::array<uint64_t, 6> row{};
        for (int i = 0; i < 6; ++i) {
            row[i] = (s >> (6 * i)) & 0x3F;
        }
        for (int i = 0; i < 6; ++i) {
            uint64_t sw = ((row[i] & 0x2A) >> 1) | ((row[i] & 0x15) << 1);
            for (int j = i + 1; j < 6; ++j) {
                bool w = (std::popcount(sw & row[j]) & 1) != 0;
                if (w != (j == i + 1 && i % 2 == 0)) {
                    return false;
                }
            }
        }
        return true;
    }

    void complete(const Branch &b, const std::vector<int> &vars, uint64_t n, bool counted = false) {
        leaves += counted ? 0 : 1;
        const Reducer &r = b.reducer;
        CodeMatrix m = r.current().evaluate(ones_from(vars, n));
        if (!r.open().empty()) {
            auto cost = table_->cost(table_->pack(m, r.open()));
            if (!cost || b.bxor + cost->bxor > options_.budget) {
                return;
            }
        } else if (b.bxor > options_.budget || !m.is_symplectic()) {
            return;
        }
        Reducer done = r;
        Assignment last = assignment_from(vars, n);
        done.run_remainder(last, options_.endpoint, r.open().empty() ? nullptr : table_);
        ReductionResult result = finish_reduction(done);
        SearchHit hit;
        hit.gates = result.gates;
        hit.matrix = result.matrix;
        hit.path = b.path;
        hit.path.choices.push_back(std::move(last));
        hit.bxor = bxor_count(hit.gates);
        if (circuit_matrix(hit.decoder()) != hit.matrix) {
            throw std::logic_error("search produced a circuit that does not realize its matrix");
        }
        hits.push_back(std::move(hit));
    }

    const SearchOptions &options_;
    const RemainderTable *table_;
    const std::vector<uint64_t> *zero_cost_states_;
};

inline bool hit_order(const SearchHit &a, const SearchHit &b) {
    if (a.bxor != b.bxor) {
        return a.bxor < b.bxor;
    }
    if (a.gates.size() != b.gates.size()) {
        return a.gates.size() < b.gates.size();
    }
    std::string ta = format_circuit(a.decoder());
    std::string tb = format_circuit(b.decoder());
    if (ta != tb) {
        return ta < tb;
    }
    return a.matrix.rows() < b.matrix.rows();
}

}  // namespace detail

/// Circuits with at most `budget` BXOR gates reachable through the staged elimination of `t`,
/// each checked against its matrix. Duplicated (circuit, matrix) pairs are reported once.
inline SearchReport search_min_bxor(const Template &t, const SearchOptions &options = {}) {
    SearchReport report;
    if (options.budget < 0) {
        throw std::invalid_argument("budget must be non-negative");
    }
    const int open_at_end = kPairs - static_cast<int>(t.stage_order.size());
    const RemainderTable *table = open_at_end > 0 ? &RemainderTable::full(open_at_end, options.endpoint) : nullptr;
    const unsigned jobs = std::max(1u, options.jobs);
    const std::vector<uint64_t> zero_cost = table ? table->states_within(0) : std::vector<uint64_t>{};
    std::vector<detail::SearchWorker> workers;
    for (unsigned j = 0; j < jobs; ++j) {
        workers.emplace_back(options, table, &zero_cost);
    }
    detail::Branch root{Reducer(t, false), {}, 0};

    if (options.seed) {
        auto run = [&](unsigned j) {
            for (uint64_t i = j; i < options.samples; i += jobs) {
                std::seed_seq seq{static_cast<uint32_t>(*options.seed), static_cast<uint32_t>(*options.seed >> 32),
                                  static_cast<uint32_t>(i), static_cast<uint32_t>(i >> 32)};
                std::mt19937_64 rng(seq);
                workers[j].sample(root, rng);
            }
        };
        std::vector<std::thread> threads;
        for (unsigned j = 1; j < jobs; ++j) {
            threads.emplace_back(run, j);
        }
        run(0);
        for (auto &th : threads) {
            th.join();
        }
    } else {
        std::vector<detail::Branch> first = detail::expand_pivot_stage(root, options.budget);
        std::atomic<size_t> next{0};
        auto run = [&](unsigned j) {
            for (size_t i = next++; i < first.size(); i = next++) {
                workers[j].walk(first[i]);
            }
        };
        std::vector<std::thread> threads;
        for (unsigned j = 1; j < jobs; ++j) {
            threads.emplace_back(run, j);
        }
        run(0);
        for (auto &th : threads) {
            th.join();
        }
    }

    for (auto &w : workers) {
        report.leaves += w.leaves;
        for (auto &h : w.hits) {
            report.hits.push_back(std::move(h));
        }
    }
    std::sort(report.hits.begin(), report.hits.end(), detail::hit_order);
    report.hits.erase(std::unique(report.hits.begin(), report.hits.end(),
                                  [](const SearchHit &a, const SearchHit &b) {
                                      return a.gates == b.gates && a.matrix == b.matrix;
                                  }),
                      report.hits.end());
    return report;
}

}  // namespace qec5
