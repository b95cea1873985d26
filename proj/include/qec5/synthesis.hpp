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

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qec5/affine.hpp"
#include "qec5/errors.hpp"
#include "qec5/gates.hpp"
#include "qec5/gf2.hpp"
#include "qec5/template.hpp"

namespace qec5 {

/// A 2x2 block packed as (x row << 2) | y row, each row being (left bit << 1) | right bit.
using Block2 = uint8_t;

inline constexpr Block2 kBlockIdentity = 0b1001;

constexpr bool block_det(Block2 b) {
    return (((b >> 3) & (b & 1)) ^ ((b >> 2) & (b >> 1))) & 1;
}

/// The block m_{alpha beta}: rows of pair alpha, columns of pair beta.
inline Block2 block_view(const CodeMatrix &m, int alpha, int beta) {
    return static_cast<Block2>((m.at(2 * alpha - 1, 2 * beta - 1) << 3) | (m.at(2 * alpha - 1, 2 * beta) << 2) |
                               (m.at(2 * alpha, 2 * beta - 1) << 1) | m.at(2 * alpha, 2 * beta));
}

inline std::optional<Block2> block_view(const SymbolicMatrix &m, int alpha, int beta) {
    Block2 b = 0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const AffineForm &e = m.at(2 * alpha - 1 + r, 2 * beta - 1 + c);
            if (!e.is_constant()) {
                return std::nullopt;
            }
            b = static_cast<Block2>((b << 1) | e.constant_term());
        }
    }
    return b;
}

inline uint64_t block_vars(const SymbolicMatrix &m, int alpha, int beta) {
    uint64_t out = 0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out |= m.at(2 * alpha - 1 + r, 2 * beta - 1 + c).vars();
        }
    }
    return out;
}

namespace detail {

/// Lexicographically smallest among the shortest move sequences taking `start` to `target`.
/// Every move must be an involution, so distances can be measured from the target.
template <typename Apply>
std::optional<std::vector<int>> lexmin_shortest(uint32_t start, uint32_t target, uint32_t num_states, int num_moves,
                                                Apply apply) {
    std::vector<int> dist(num_states, -1);
    std::vector<uint32_t> queue{target};
    dist[target] = 0;
    for (size_t i = 0; i < queue.size(); ++i) {
        uint32_t s = queue[i];
        for (int m = 0; m < num_moves; ++m) {
            uint32_t t = apply(s, m);
            if (dist[t] < 0) {
                dist[t] = dist[s] + 1;
                queue.push_back(t);
            }
        }
    }
    if (dist[start] < 0) {
        return std::nullopt;
    }
    std::vector<int> path;
    uint32_t s = start;
    while (dist[s] > 0) {
        for (int m = 0; m < num_moves; ++m) {
            uint32_t t = apply(s, m);
            if (dist[t] == dist[s] - 1) {
                path.push_back(m);
                s = t;
                break;
            }
        }
    }
    return path;
}

/// Applies a gate acting on local pairs 1 and 2 to four 2-bit rows.
inline uint32_t apply_local_rows(uint32_t state, const Gate &g) {
    std::array<uint8_t, 4> rows{static_cast<uint8_t>((state >> 6) & 3), static_cast<uint8_t>((state >> 4) & 3),
                                static_cast<uint8_t>((state >> 2) & 3), static_cast<uint8_t>(state & 3)};
    apply_row_ops(rows, g);
    return static_cast<uint32_t>((rows[0] << 6) | (rows[1] << 4) | (rows[2] << 2) | rows[3]);
}

inline Gate relabel(const Gate &g, const std::vector<int> &pairs) {
    Gate out = g;
    out.first = static_cast<uint8_t>(pairs[g.first - 1]);
    if (g.is_bxor()) {
        out.second = static_cast<uint8_t>(pairs[g.second - 1]);
    }
    return out;
}

/// Shortest single-pair word W (on local pair 1) with W * b = I.
inline Circuit gl2_inverse_word(Block2 b) {
    static const std::array<Gate, 2> moves{Gate::by(1), Gate::sxbx(1)};
    auto path = lexmin_shortest(b, kBlockIdentity, 16, 2,
                                [](uint32_t s, int m) { return apply_local_rows(s << 4, moves[m]) >> 4; });
    if (!path) {
        throw std::invalid_argument("singular 2x2 block");
    }
    Circuit out;
    for (int m : *path) {
        out.push_back(moves[m]);
    }
    return out;
}

/// Shortest words for all six elements of GL(2, 2) on local pair 1, by length then gate order.
inline const std::vector<Circuit> &gl2_words() {
    static const std::vector<Circuit> words = [] {
        std::vector<Circuit> out;
        for (Block2 b = 0; b < 16; ++b) {
            if (block_det(b)) {
                out.push_back(gl2_inverse_word(b));
            }
        }
        std::sort(out.begin(), out.end(), [](const Circuit &x, const Circuit &y) {
            return x.size() != y.size() ? x.size() < y.size() : x < y;
        });
        return out;
    }();
    return words;
}

inline Block2 apply_word(Block2 b, const Circuit &local_word) {
    for (const Gate &g : local_word) {
        b = static_cast<Block2>(apply_local_rows(static_cast<uint32_t>(b) << 4, g) >> 4);
    }
    return b;
}

/// Open addressing map from nonzero-offset 64-bit keys to 32-bit values.
class FlatCostMap {
   public:
    explicit FlatCostMap(size_t expected) {
        size_t cap = 16;
        while (cap < expected * 2 + 16) {
            cap <<= 1;
        }
        keys_.assign(cap, 0);
        values_.assign(cap, 0);
        mask_ = cap - 1;
    }

    const uint32_t *find(uint64_t key) const {
        for (size_t i = slot(key);; i = (i + 1) & mask_) {
            if (keys_[i] == key + 1) {
                return &values_[i];
            }
            if (keys_[i] == 0) {
                return nullptr;
            }
        }
    }

    /// Returns the slot for `key` and whether it was newly created with `value`.
    std::pair<uint32_t *, bool> insert(uint64_t key, uint32_t value) {
        for (size_t i = slot(key);; i = (i + 1) & mask_) {
            if (keys_[i] == key + 1) {
                return {&values_[i], false};
            }
            if (keys_[i] == 0) {
                if (2 * (size_ + 1) > keys_.size()) {
                    grow();
                    return insert(key, value);
                }
                keys_[i] = key + 1;
                values_[i] = value;
                ++size_;
                return {&values_[i], true};
            }
        }
    }

    size_t size() const {
        return size_;
    }

    template <typename Fn>
    void for_each(Fn fn) const {
        for (size_t i = 0; i < keys_.size(); ++i) {
            if (keys_[i] != 0) {
                fn(keys_[i] - 1, values_[i]);
            }
        }
    }

   private:
    size_t slot(uint64_t k) const {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<size_t>(k) & mask_;
    }

    void grow() {
        std::vector<uint64_t> keys = std::move(keys_);
        std::vector<uint32_t> values = std::move(values_);
        keys_.assign(keys.size() * 2, 0);
        values_.assign(keys.size() * 2, 0);
        mask_ = keys_.size() - 1;
        size_ = 0;
        for (size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] != 0) {
                insert(keys[i] - 1, values[i]);
            }
        }
    }

    std::vector<uint64_t> keys_;
    std::vector<uint32_t> values_;
    size_t mask_ = 0;
    size_t size_ = 0;
};

}  // namespace detail

/// Gate sequence on pairs alpha and beta taking [m_{alpha gamma}; m_{beta gamma}] to [I; 0].
/// The sequence is a shortest one, ties broken by gate order (BY < SXBX < BXOR, then pair index).
inline Circuit eliminate_column_gates(Block2 top, Block2 bottom, int alpha, int beta) {
    if (!block_det(top)) {
        throw SynthesisError("det(m_" + std::to_string(alpha) + "gamma) = 0, expected 1");
    }
    if (block_det(bottom)) {
        throw SynthesisError("det(m_" + std::to_string(beta) + "gamma) = 1, expected 0");
    }
    std::vector<int> pairs{alpha, beta};
    std::vector<Gate> moves = gates_on_pairs(pairs);
    std::vector<int> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    // Local state: rows of the lower-numbered pair first.
    auto pack = [&](Block2 a, Block2 b) {
        return sorted[0] == alpha ? static_cast<uint32_t>((a << 4) | b) : static_cast<uint32_t>((b << 4) | a);
    };
    std::vector<Gate> local;
    for (const Gate &g : moves) {
        Gate l = g;
        l.first = static_cast<uint8_t>(g.first == sorted[0] ? 1 : 2);
        if (g.is_bxor()) {
            l.second = static_cast<uint8_t>(g.second == sorted[0] ? 1 : 2);
        }
        local.push_back(l);
    }
    auto path = detail::lexmin_shortest(pack(top, bottom), pack(kBlockIdentity, 0), 256, static_cast<int>(local.size()),
                                        [&](uint32_t s, int m) { return detail::apply_local_rows(s, local[m]); });
    if (!path) {
        throw SynthesisError("column cannot be reduced to [I; 0]");
    }
    Circuit out;
    for (int m : *path) {
        out.push_back(moves[m]);
    }
    return out;
}

struct BlockElimination {
    Circuit gates;
    CodeMatrix matrix;
};

inline BlockElimination block_eliminate(const CodeMatrix &m, int alpha, int beta, int gamma) {
    if (alpha == beta) {
        throw std::invalid_argument("block_eliminate needs two distinct pairs");
    }
    BlockElimination out;
    out.gates = eliminate_column_gates(block_view(m, alpha, gamma), block_view(m, beta, gamma), alpha, beta);
    out.matrix = circuit_matrix(out.gates) * m;
    return out;
}

enum class Endpoint { identity, akin };

/// Exact optimal solver for the last few open pairs. Distances to the endpoint set are found by
/// a bucketed Dijkstra over Sp(2k, 2), ordered by BXOR count first and total gates second. The
/// search can stop as soon as a query is settled, or run to completion for repeated lookups.
class RemainderTable {
   public:
    static constexpr uint32_t kBxorWeight = 1001;

    struct Cost {
        int bxor = 0;
        int total = 0;
    };

    RemainderTable(int pairs, Endpoint endpoint) : pairs_(pairs), dist_(64) {
        if (pairs < 1 || pairs > 3) {
            throw std::invalid_argument("remainder must span 1 to 3 pairs");
        }
        std::vector<int> local;
        for (int p = 1; p <= pairs; ++p) {
            local.push_back(p);
        }
        moves_ = gates_on_pairs(local);
        buckets_.resize(1);
        for (uint64_t t : endpoints(endpoint)) {
            dist_.insert(t, 0);
            buckets_[0].push_back(t);
        }
    }

    /// Fully expanded table shared by all callers.
    static const RemainderTable &full(int pairs, Endpoint endpoint) {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::unique_ptr<RemainderTable>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto &slot = cache[{pairs, static_cast<int>(endpoint)}];
        if (!slot) {
            slot = std::make_unique<RemainderTable>(pairs, endpoint);
            slot->expand(std::nullopt);
        }
        return *slot;
    }

    int pairs() const {
        return pairs_;
    }
    size_t size() const {
        return dist_.size();
    }
    bool complete() const {
        return next_bucket_ >= buckets_.size();
    }

    /// Packs the open-pair submatrix of `m`; row r of the submatrix occupies bits [r*2k, r*2k+2k).
    uint64_t pack(const CodeMatrix &m, const std::vector<int> &open) const {
        uint64_t state = 0;
        const int w = 2 * pairs_;
        for (int i = 0; i < pairs_; ++i) {
            for (int half = 0; half < 2; ++half) {
                uint64_t row = 0;
                for (int j = 0; j < pairs_; ++j) {
                    row = (row << 2) | (static_cast<uint64_t>(m.at(2 * open[i] - 1 + half, 2 * open[j] - 1)) << 1) |
                          m.at(2 * open[i] - 1 + half, 2 * open[j]);
                }
                state |= row << ((2 * i + half) * w);
            }
        }
        return state;
    }

    /// Expands until `state` is settled, or everything when no state is given.
    void expand(std::optional<uint64_t> state) {
        while (next_bucket_ < buckets_.size()) {
            if (state) {
                const uint32_t *d = dist_.find(*state);
                if (d && *d < next_bucket_) {
                    return;
                }
            }
            const uint32_t c = static_cast<uint32_t>(next_bucket_);
            for (size_t i = 0; i < buckets_[c].size(); ++i) {
                uint64_t s = buckets_[c][i];
                if (*dist_.find(s) != c) {
                    continue;
                }
                for (const Gate &g : moves_) {
                    uint64_t t = apply(s, g);
                    uint32_t nc = c + weight(g);
                    auto [slot, inserted] = dist_.insert(t, nc);
                    if (!inserted) {
                        if (*slot <= nc) {
                            continue;
                        }
                        *slot = nc;
                    }
                    if (buckets_.size() <= nc) {
                        buckets_.resize(nc + 1);
                    }
                    buckets_[nc].push_back(t);
                }
            }
            std::vector<uint64_t>().swap(buckets_[c]);
            ++next_bucket_;
        }
    }

    /// Requires `state` to be settled (see expand) or the table to be complete.
    std::optional<Cost> cost(uint64_t state) const {
        const uint32_t *d = dist_.find(state);
        if (!d || *d >= next_bucket_) {
            return std::nullopt;
        }
        return Cost{static_cast<int>(*d / kBxorWeight), static_cast<int>(*d / kBxorWeight + *d % kBxorWeight)};
    }

    /// Gates on local pairs 1..k, lexicographically smallest among the cheapest.
    /// Requires `state` to be settled (see expand) or the table to be complete.
    std::optional<Circuit> solve(uint64_t state) const {
        const uint32_t *d = dist_.find(state);
        if (!d || *d >= next_bucket_) {
            return std::nullopt;
        }
        Circuit out;
        uint32_t left = *d;
        while (left > 0) {
            for (const Gate &g : moves_) {
                uint64_t t = apply(state, g);
                const uint32_t *dt = dist_.find(t);
                if (dt && *dt + weight(g) == left) {
                    out.push_back(g);
                    state = t;
                    left = *dt;
                    break;
                }
            }
        }
        return out;
    }

    /// Settled states with at most `max_bxor` BXOR gates, ordered by cost then state.
    std::vector<uint64_t> states_within(int max_bxor) const {
        std::vector<std::pair<uint32_t, uint64_t>> found;
        dist_.for_each([&](uint64_t key, uint32_t d) {
            if (d < next_bucket_ && static_cast<int>(d / kBxorWeight) <= max_bxor) {
                found.emplace_back(d, key);
            }
        });
        std::sort(found.begin(), found.end());
        std::vector<uint64_t> out;
        out.reserve(found.size());
        for (auto [d, key] : found) {
            out.push_back(key);
        }
        return out;
    }

    std::optional<Circuit> solve_expanding(uint64_t state) {
        expand(state);
        return solve(state);
    }

   private:
    static uint32_t weight(const Gate &g) {
        return g.is_bxor() ? kBxorWeight : 1;
    }

    uint64_t apply(uint64_t s, const Gate &g) const {
        const int w = 2 * pairs_;
        const uint64_t mask = (uint64_t{1} << w) - 1;
        auto row = [&](int r) { return (s >> (r * w)) & mask; };
        const int x = 2 * g.first - 2;
        switch (g.kind) {
            case GateKind::BY: {
                uint64_t d = row(x) ^ row(x + 1);
                return s ^ (d << (x * w)) ^ (d << ((x + 1) * w));
            }
            case GateKind::SXBX:
                return s ^ (row(x) << ((x + 1) * w));
            case GateKind::BXOR: {
                const int xt = 2 * g.second - 2;
                return s ^ (row(xt) << (x * w)) ^ (row(x + 1) << ((xt + 1) * w));
            }
        }
        return s;
    }

    std::vector<uint64_t> endpoints(Endpoint endpoint) const {
        const int w = 2 * pairs_;
        std::vector<Block2> blocks{kBlockIdentity};
        if (endpoint == Endpoint::akin) {
            blocks.clear();
            for (Block2 b = 0; b < 16; ++b) {
                if (block_det(b)) {
                    blocks.push_back(b);
                }
            }
        }
        std::vector<uint64_t> out{0};
        for (int i = 0; i < pairs_; ++i) {
            std::vector<uint64_t> next;
            for (uint64_t s : out) {
                for (Block2 b : blocks) {
                    const int shift = 2 * (pairs_ - 1 - i);
                    uint64_t x = static_cast<uint64_t>(b >> 2) << shift;
                    uint64_t y = static_cast<uint64_t>(b & 3) << shift;
                    next.push_back(s | (x << (2 * i * w)) | (y << ((2 * i + 1) * w)));
                }
            }
            out = std::move(next);
        }
        return out;
    }

    int pairs_;
    std::vector<Gate> moves_;
    detail::FlatCostMap dist_;
    std::vector<std::vector<uint64_t>> buckets_;
    size_t next_bucket_ = 0;
};

/// A within-group column action.
struct ColumnOp {
    enum class Kind : uint8_t { swap, add_first_to_second, add_second_to_first };
    Kind kind = Kind::swap;
    int pair = 1;

    std::string str() const {
        const int a = 2 * pair - 1;
        const int b = 2 * pair;
        switch (kind) {
            case Kind::swap:
                return "swap columns " + std::to_string(a) + " " + std::to_string(b);
            case Kind::add_first_to_second:
                return "add column " + std::to_string(a) + " to " + std::to_string(b);
            case Kind::add_second_to_first:
                return "add column " + std::to_string(b) + " to " + std::to_string(a);
        }
        return "?";
    }
    bool operator==(const ColumnOp &) const = default;
};

inline CodeMatrix apply_column_op(CodeMatrix m, const ColumnOp &op) {
    const int a = 2 * op.pair - 1;
    const int b = 2 * op.pair;
    for (int r = 1; r <= kBits; ++r) {
        bool va = m.at(r, a);
        bool vb = m.at(r, b);
        switch (op.kind) {
            case ColumnOp::Kind::swap:
                m.set(r, a, vb);
                m.set(r, b, va);
                break;
            case ColumnOp::Kind::add_first_to_second:
                m.set(r, b, va ^ vb);
                break;
            case ColumnOp::Kind::add_second_to_first:
                m.set(r, a, va ^ vb);
                break;
        }
    }
    return m;
}

inline CodeMatrix apply_column_ops(CodeMatrix m, const std::vector<ColumnOp> &ops) {
    for (const ColumnOp &op : ops) {
        m = apply_column_op(m, op);
    }
    return m;
}

struct AkinNormalization {
    std::vector<ColumnOp> ops;
    CodeMatrix identity;
};

/// Column operations turning a block-diagonal matrix with invertible 2x2 blocks into the identity.
inline AkinNormalization akin_normalize(const CodeMatrix &a) {
    AkinNormalization out;
    for (int k = 1; k <= kPairs; ++k) {
        for (int j = 1; j <= kPairs; ++j) {
            Block2 b = block_view(a, k, j);
            if ((j != k && b != 0) || (j == k && !block_det(b))) {
                throw SynthesisError("matrix is not akin to the identity: block (" + std::to_string(k) + "," +
                                     std::to_string(j) + ") " + (j == k ? "is singular" : "is nonzero"));
            }
        }
        auto col_op = [](uint32_t s, int m) -> uint32_t {
            uint32_t x = (s >> 2) & 3;
            uint32_t y = s & 3;
            auto f = [m](uint32_t row) -> uint32_t {
                uint32_t l = row >> 1;
                uint32_t r = row & 1;
                switch (m) {
                    case 0:
                        return (r << 1) | l;
                    case 1:
                        return (l << 1) | (r ^ l);
                    default:
                        return ((l ^ r) << 1) | r;
                }
            };
            return (f(x) << 2) | f(y);
        };
        auto path = detail::lexmin_shortest(block_view(a, k, k), kBlockIdentity, 16, 3, col_op);
        for (int m : *path) {
            out.ops.push_back(ColumnOp{static_cast<ColumnOp::Kind>(m), k});
        }
    }
    out.identity = apply_column_ops(a, out.ops);
    return out;
}

/// Single-pair words (on local pair 1) applied to pair k before its BXOR in a pivot stage.
using ClearPlan = std::map<int, Circuit>;

struct StageRecord {
    /// Cleared pair, or 0 for the remainder stage.
    int pivot = 0;
    /// Pairs still open when the stage began.
    std::vector<int> open;
    Circuit gates;
    SymbolicMatrix checkpoint;
    Assignment bound;
};

struct EliminationTrace {
    std::vector<StageRecord> stages;
};

/// Step-by-step elimination over a template. Each pivot stage turns block (gamma, gamma) into I
/// and clears the rest of that pair's rows and columns; the remainder stage solves the last
/// open pairs exactly.
class Reducer {
   public:
    explicit Reducer(const Template &t, bool record_trace = true)
        : template_(t), current_(t.symbolic()), record_(record_trace) {
        if (t.stage_order.size() + 3 < static_cast<size_t>(kPairs)) {
            throw SynthesisError("stage order must leave at most three open pairs");
        }
        for (int p = 1; p <= kPairs; ++p) {
            open_.push_back(p);
        }
    }

    const Template &tmpl() const {
        return template_;
    }
    size_t stage() const {
        return stage_;
    }
    bool at_remainder() const {
        return !done_ && stage_ == template_.stage_order.size();
    }
    bool done() const {
        return done_;
    }
    int pivot() const {
        return template_.stage_order.at(stage_);
    }
    const std::vector<int> &open() const {
        return open_;
    }
    /// Current matrix, always reduced against the constraints gathered so far.
    const SymbolicMatrix &current() const {
        return current_;
    }
    const LinearSystem &system() const {
        return system_;
    }
    const Circuit &gates() const {
        return gates_;
    }
    const EliminationTrace &trace() const {
        return trace_;
    }
    const Assignment &stage_bindings() const {
        return stage_bindings_;
    }

    std::string stage_label() const {
        std::string out = "stage " + std::to_string(stage_ + 1);
        return at_remainder() ? out + " (remainder)" : out + " (pair " + std::to_string(pivot()) + ")";
    }

    void bind(const Assignment &a) {
        for (const Binding &b : a) {
            if (system_.bind(b.var, b.value) == LinearSystem::AddResult::inconsistent) {
                throw SynthesisError(stage_label() + ": " + unknown_name(b.var) + "=" + (b.value ? "1" : "0") +
                                     " contradicts earlier constraints");
            }
            stage_bindings_.push_back(b);
        }
        current_ = current_.reduced(system_);
    }

    uint64_t pivot_column_vars() const {
        uint64_t out = 0;
        for (int k : open_) {
            out |= block_vars(current_, k, pivot());
        }
        return out;
    }

    /// Values of the pivot-column unknowns meeting det(m_gg) = 1 and det(m_kg) = 0.
    std::vector<Assignment> pivot_assignments() const {
        std::vector<int> vars;
        uint64_t mask = pivot_column_vars();
        for (int v = 0; v < kMaxVars; ++v) {
            if ((mask >> v) & 1) {
                vars.push_back(v);
            }
        }
        const int g = pivot();
        std::vector<Assignment> out;
        for (uint64_t n = 0; n < (uint64_t{1} << vars.size()); ++n) {
            uint64_t ones = 0;
            for (size_t i = 0; i < vars.size(); ++i) {
                if ((n >> i) & 1) {
                    ones |= uint64_t{1} << vars[i];
                }
            }
            bool ok = true;
            for (int k : open_) {
                bool det = evaluated_det(k, g, ones);
                if (det != (k == g)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                Assignment a;
                for (size_t i = 0; i < vars.size(); ++i) {
                    a.push_back(Binding{vars[i], ((n >> i) & 1) != 0});
                }
                out.push_back(std::move(a));
            }
        }
        return out;
    }

    /// BXOR gates the current stage will emit, assuming a concrete pivot column.
    int pivot_bxor_lower_bound() const {
        int n = 0;
        for (int k : open_) {
            if (k != pivot() && block_view(current_, k, pivot()).value_or(0) != 0) {
                ++n;
            }
        }
        return n;
    }

    /// Words W on pair k for which W * m_kg is cleared by a single BXOR. Requires a concrete
    /// pivot column.
    std::vector<Circuit> clear_words(int k) const {
        std::vector<Circuit> out;
        Block2 b = block_view(current_, k, pivot()).value_or(0);
        for (const Circuit &w : detail::gl2_words()) {
            Block2 t = detail::apply_word(b, w);
            if (t == 0b1000 || t == 0b0001) {
                out.push_back(w);
            }
        }
        return out;
    }

    /// With a plan entry for k, that word clears row block k; otherwise m_kk^-1 is tried when
    /// concrete, then the shortest two-pair sequence.
    void run_pivot_stage(const Assignment &choices = {}, const ClearPlan &plan = {}) {
        if (at_remainder() || done_) {
            throw SynthesisError(stage_label() + ": no pivot stage left");
        }
        bind(choices);
        const int g = pivot();
        resolve_pivot_column();

        Circuit stage_gates;
        auto emit = [&](const Gate &gate) {
            apply_row_ops(current_.rows(), gate);
            stage_gates.push_back(gate);
        };
        for (const Gate &w : detail::gl2_inverse_word(*block_view(current_, g, g))) {
            emit(detail::relabel(w, {g}));
        }
        for (int k : open_) {
            if (k == g) {
                continue;
            }
            Block2 b = *block_view(current_, k, g);
            if (b == 0) {
                continue;
            }
            bool cleared = false;
            auto planned = plan.find(k);
            std::optional<Block2> d = block_view(current_, k, k);
            if (planned != plan.end() || (d && block_det(*d))) {
                Circuit word = planned != plan.end() ? planned->second : detail::gl2_inverse_word(*d);
                Block2 t = detail::apply_word(b, word);
                if (t == 0b1000 || t == 0b0001) {
                    for (const Gate &w : word) {
                        emit(detail::relabel(w, {k}));
                    }
                    emit(t == 0b1000 ? Gate::bxor(k, g) : Gate::bxor(g, k));
                    cleared = true;
                } else if (planned != plan.end()) {
                    throw SynthesisError(stage_label() + ": planned word does not clear block (" +
                                         std::to_string(k) + "," + std::to_string(g) + ")");
                }
            }
            if (!cleared) {
                for (const Gate &gate : eliminate_column_gates(*block_view(current_, g, g), b, g, k)) {
                    emit(gate);
                }
            }
        }

        for (int r = 2 * g - 1; r <= 2 * g; ++r) {
            for (int c = 1; c <= kBits; ++c) {
                if (c == 2 * g - 1 || c == 2 * g) {
                    continue;
                }
                if (system_.add(current_.at(r, c)) == LinearSystem::AddResult::inconsistent) {
                    throw SynthesisError(stage_label() + ": row " + std::to_string(r) + " column " +
                                         std::to_string(c) + " of the pivot rows cannot be cleared");
                }
            }
        }
        current_ = current_.reduced(system_);
        open_.erase(std::find(open_.begin(), open_.end(), g));
        finish_stage(g, std::move(stage_gates));
    }

    /// `table`, when given, must be complete and match the endpoint and open pair count.
    void run_remainder(const Assignment &choices = {}, Endpoint endpoint = Endpoint::identity,
                       const RemainderTable *table = nullptr) {
        if (!at_remainder()) {
            throw SynthesisError(stage_label() + ": pivot stages are not finished");
        }
        bind(choices);
        if (uint64_t left = current_.vars()) {
            throw SynthesisError(stage_label() + ": unknowns not bound: " + unknown_list(left));
        }
        Circuit stage_gates;
        if (!open_.empty()) {
            CodeMatrix m = current_.to_concrete();
            std::optional<Circuit> local;
            if (table) {
                local = table->solve(table->pack(m, open_));
            } else if (m.is_symplectic()) {
                RemainderTable fresh(static_cast<int>(open_.size()), endpoint);
                local = fresh.solve_expanding(fresh.pack(m, open_));
            }
            if (!local) {
                throw SynthesisError(stage_label() + ": remaining block is not reachable with the gate set "
                                                     "(it is not symplectic)");
            }
            for (const Gate &w : *local) {
                Gate gate = detail::relabel(w, open_);
                apply_row_ops(current_.rows(), gate);
                stage_gates.push_back(gate);
            }
        }
        std::vector<int> was_open = open_;
        open_.clear();
        finish_stage(0, std::move(stage_gates), was_open);
        done_ = true;
    }

    /// Template with every unknown replaced by its bound value.
    CodeMatrix solved_matrix() const {
        SymbolicMatrix m = template_.symbolic().reduced(system_);
        if (uint64_t left = m.vars()) {
            throw SynthesisError("unknowns not bound: " + unknown_list(left));
        }
        return m.to_concrete();
    }

   private:
    bool evaluated_det(int k, int g, uint64_t ones) const {
        auto e = [&](int r, int c) { return current_.at(2 * k - 1 + r, 2 * g - 1 + c).evaluate(ones); };
        return (e(0, 0) && e(1, 1)) != (e(0, 1) && e(1, 0));
    }

    void resolve_pivot_column() {
        const int g = pivot();
        uint64_t free = pivot_column_vars();
        if (free == 0) {
            for (int k : open_) {
                bool det = block_det(*block_view(current_, k, g));
                if (det != (k == g)) {
                    throw SynthesisError(stage_label() + ": det(m_" + std::to_string(k) + std::to_string(g) +
                                         ") = " + (det ? "1" : "0") + ", expected " + (k == g ? "1" : "0"));
                }
            }
            return;
        }
        std::vector<Assignment> options = pivot_assignments();
        if (options.empty()) {
            throw SynthesisError(stage_label() + ": no values of " + unknown_list(free) + " give det(m_" +
                                 std::to_string(g) + std::to_string(g) + ") = 1 and det(m_k" + std::to_string(g) +
                                 ") = 0");
        }
        if (options.size() > 1) {
            throw SynthesisError(stage_label() + ": " + std::to_string(options.size()) +
                                 " assignments of the pivot column remain open (" + unknown_list(free) +
                                 "); bind them");
        }
        bind(options.front());
    }

    void finish_stage(int pivot, Circuit stage_gates, std::vector<int> was_open = {}) {
        gates_.insert(gates_.end(), stage_gates.begin(), stage_gates.end());
        if (record_) {
            StageRecord rec;
            rec.pivot = pivot;
            if (pivot != 0) {
                rec.open = open_;
                rec.open.insert(std::lower_bound(rec.open.begin(), rec.open.end(), pivot), pivot);
            } else {
                rec.open = std::move(was_open);
            }
            rec.gates = std::move(stage_gates);
            rec.checkpoint = current_;
            uint64_t now = system_.determined(AffineForm::kVarMask);
            uint64_t fresh = now & ~determined_;
            for (int v = 0; v < kMaxVars; ++v) {
                if ((fresh >> v) & 1) {
                    rec.bound.push_back(Binding{v, *system_.value(v)});
                }
            }
            determined_ = now;
            trace_.stages.push_back(std::move(rec));
        }
        stage_bindings_.clear();
        ++stage_;
    }

    Template template_;
    SymbolicMatrix current_;
    LinearSystem system_;
    std::vector<int> open_;
    Circuit gates_;
    EliminationTrace trace_;
    Assignment stage_bindings_;
    uint64_t determined_ = 0;
    size_t stage_ = 0;
    bool done_ = false;
    bool record_ = true;
};

struct ReductionResult {
    /// Emission order: applying these to `solved` as row operations reaches `endpoint`.
    /// Read as a circuit this is the encoder; its inverse is the decoder realizing `matrix`.
    Circuit gates;
    /// Solved template after column normalization; equals circuit_matrix(decoder()).
    CodeMatrix matrix;
    /// Solved template before column normalization.
    CodeMatrix solved;
    CodeMatrix endpoint;
    std::vector<ColumnOp> column_ops;
    EliminationTrace trace;

    Circuit decoder() const {
        return invert_circuit(gates);
    }
    const Circuit &encoder() const {
        return gates;
    }
};

inline ReductionResult finish_reduction(const Reducer &r) {
    if (!r.done()) {
        throw SynthesisError("reduction is not finished");
    }
    ReductionResult out;
    out.gates = r.gates();
    out.solved = r.solved_matrix();
    out.endpoint = r.current().to_concrete();
    out.trace = r.trace();
    if (circuit_matrix(out.gates) * out.solved != out.endpoint) {
        throw std::logic_error("replayed gates do not reach the recorded endpoint");
    }
    AkinNormalization norm = akin_normalize(out.endpoint);
    out.column_ops = norm.ops;
    out.matrix = apply_column_ops(out.solved, norm.ops);
    ValidityReport report = validate_code_matrix(out.matrix);
    if (!report.valid()) {
        throw SynthesisError("solved matrix is not a valid code (" + std::to_string(report.collisions.size()) +
                             " colliding syndrome pairs, rank " + std::to_string(report.rank) + ")");
    }
    return out;
}

/// Runs every stage with the given per-stage choices; the last entry feeds the remainder.
inline ReductionResult staged_reduce(const Template &t, const StageChoices &choices,
                                     Endpoint endpoint = Endpoint::identity) {
    const size_t stages = t.stage_order.size() + 1;
    if (choices.size() > stages) {
        throw SynthesisError("choices given for " + std::to_string(choices.size()) + " stages, only " +
                             std::to_string(stages) + " exist");
    }
    auto at = [&](size_t s) { return s < choices.size() ? choices[s] : Assignment{}; };
    Reducer r(t);
    while (!r.at_remainder()) {
        r.run_pivot_stage(at(r.stage()));
    }
    r.run_remainder(at(r.stage()), endpoint);
    return finish_reduction(r);
}

/// Pivot-column assignments of stage `stage` (1-based), earlier stages run with `prior`.
inline std::vector<Assignment> enumerate_assignments(const Template &t, size_t stage = 1,
                                                     const StageChoices &prior = {}) {
    if (stage < 1 || stage > t.stage_order.size()) {
        throw std::invalid_argument("stage must name a pivot stage");
    }
    Reducer r(t, false);
    while (r.stage() + 1 < stage) {
        r.run_pivot_stage(r.stage() < prior.size() ? prior[r.stage()] : Assignment{});
    }
    return r.pivot_assignments();
}

}  // namespace qec5
