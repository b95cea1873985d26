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
#include <array>
#include <compare>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qec5/errors.hpp"
#include "qec5/gf2.hpp"

namespace qec5 {

/// Declaration order is the tie-break order used by the synthesis searches.
enum class GateKind : uint8_t { BY, SXBX, BXOR };

/// One of the three basic bilateral operations, acting on 1-based pair indices.
///
///   BXOR(s, t): (x_s, y_s)(x_t, y_t) -> (x_s ^ x_t, y_s)(x_t, y_s ^ y_t)
///   BY(p):      (x, y) -> (y, x)
///   SXBX(p):    (x, y) -> (x, x ^ y)
struct Gate {
    GateKind kind = GateKind::BY;
    uint8_t first = 1;   // the pair, or the BXOR source
    uint8_t second = 0;  // the BXOR target, 0 otherwise

    static constexpr Gate by(int pair) {
        return Gate{GateKind::BY, static_cast<uint8_t>(pair), 0};
    }
    static constexpr Gate sxbx(int pair) {
        return Gate{GateKind::SXBX, static_cast<uint8_t>(pair), 0};
    }
    static constexpr Gate bxor(int source, int target) {
        return Gate{GateKind::BXOR, static_cast<uint8_t>(source), static_cast<uint8_t>(target)};
    }

    constexpr bool is_bxor() const {
        return kind == GateKind::BXOR;
    }
    constexpr bool touches(int pair) const {
        return first == pair || (is_bxor() && second == pair);
    }
    constexpr bool disjoint(const Gate &other) const {
        return !other.touches(first) && !(is_bxor() && other.touches(second));
    }

    /// Throws std::invalid_argument if indices are out of range or a BXOR targets its source.
    void check() const;

    std::string str() const {
        switch (kind) {
            case GateKind::BY:
                return "BY " + std::to_string(first);
            case GateKind::SXBX:
                return "SXBX " + std::to_string(first);
            case GateKind::BXOR:
                return "BXOR " + std::to_string(first) + " " + std::to_string(second);
        }
        return "?";
    }

    constexpr auto operator<=>(const Gate &) const = default;
};

using Circuit = std::vector<Gate>;

inline void Gate::check() const {
    auto in_range = [](int p) { return p >= 1 && p <= kPairs; };
    if (!in_range(first) || (is_bxor() && !in_range(second)) || (!is_bxor() && second != 0)) {
        throw std::invalid_argument("gate pair index out of range: " + str());
    }
    if (is_bxor() && first == second) {
        throw std::invalid_argument("BXOR source equals target: " + str());
    }
}

/// Applies a gate as elementary row operations on any 10-row container whose rows support ^=.
/// Rows are indexed 0..9; pair p owns rows 2p-2 (phase) and 2p-1 (amplitude).
template <typename Rows>
constexpr void apply_row_ops(Rows &rows, const Gate &g) {
    const int x = 2 * g.first - 2;
    switch (g.kind) {
        case GateKind::BY:
            std::swap(rows[x], rows[x + 1]);
            break;
        case GateKind::SXBX:
            rows[x + 1] ^= rows[x];
            break;
        case GateKind::BXOR: {
            const int xt = 2 * g.second - 2;
            rows[x] ^= rows[xt];
            rows[xt + 1] ^= rows[x + 1];
            break;
        }
    }
}

inline CodeMatrix gate_matrix(const Gate &g) {
    g.check();
    std::array<uint16_t, kBits> rows = CodeMatrix::identity().rows();
    apply_row_ops(rows, g);
    return CodeMatrix(rows);
}

/// The first gate of the list is applied first, so it is the rightmost factor.
inline CodeMatrix circuit_matrix(const Circuit &c) {
    std::array<uint16_t, kBits> rows = CodeMatrix::identity().rows();
    for (const Gate &g : c) {
        g.check();
        apply_row_ops(rows, g);
    }
    return CodeMatrix(rows);
}

/// Every basic gate is an involution, so the inverse is the reversed list.
inline Circuit invert_circuit(const Circuit &c) {
    return Circuit(c.rbegin(), c.rend());
}

inline int bxor_count(const Circuit &c) {
    return static_cast<int>(std::count_if(c.begin(), c.end(), [](const Gate &g) { return g.is_bxor(); }));
}

/// All gates touching only the listed pairs, in tie-break order (kind, then pair indices).
inline std::vector<Gate> gates_on_pairs(std::vector<int> pairs) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<Gate> out;
    for (int p : pairs) {
        out.push_back(Gate::by(p));
    }
    for (int p : pairs) {
        out.push_back(Gate::sxbx(p));
    }
    for (int s : pairs) {
        for (int t : pairs) {
            if (s != t) {
                out.push_back(Gate::bxor(s, t));
            }
        }
    }
    return out;
}

/// One gate per line; '#' starts a comment.
inline std::string format_circuit(const Circuit &c) {
    std::string out;
    for (const Gate &g : c) {
        out += g.str();
        out.push_back('\n');
    }
    return out;
}

inline Circuit parse_circuit(std::string_view text) {
    Circuit out;
    size_t line_number = 0;
    while (!text.empty()) {
        ++line_number;
        size_t end = text.find('\n');
        std::string line(text.substr(0, end));
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream in(line);
        std::string name;
        if (!(in >> name)) {
            continue;
        }
        int a = 0;
        int b = 0;
        Gate g;
        if (name == "BXOR") {
            if (!(in >> a >> b)) {
                throw ParseError("BXOR needs source and target pairs", line_number, 1);
            }
            g = Gate::bxor(a, b);
        } else if (name == "BY" || name == "SXBX") {
            if (!(in >> a)) {
                throw ParseError(name + " needs a pair index", line_number, 1);
            }
            g = name == "BY" ? Gate::by(a) : Gate::sxbx(a);
        } else {
            throw ParseError("unknown gate '" + name + "'", line_number, line.find(name) + 1);
        }
        std::string extra;
        if (in >> extra) {
            throw ParseError("trailing text '" + extra + "'", line_number, line.find(extra) + 1);
        }
        if (a < 1 || a > kPairs || b < 0 || b > kPairs || (g.is_bxor() && (b < 1 || a == b))) {
            throw ParseError("invalid pair index in '" + g.str() + "'", line_number, 1);
        }
        out.push_back(g);
    }
    return out;
}

}  // namespace qec5
