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

#include <optional>
#include <string>
#include <vector>

#include "qec5/gf2.hpp"
#include "qec5/template.hpp"

namespace qec5 {

inline CodeMatrix rows_to_matrix(const std::array<const char *, kBits> &rows) {
    std::array<uint16_t, kBits> out{};
    for (int r = 0; r < kBits; ++r) {
        out[r] = detail::parse_bit_line(rows[r], kBits, r + 1);
    }
    return CodeMatrix(out);
}

/// The six-CNOT code matrix.
inline CodeMatrix six_cnot_matrix() {
    return rows_to_matrix({"1000101000", "1100100001", "0001000001", "0011101001", "0000100000", "0101010001",
                           "0000001000", "1101100100", "0000000001", "1010100010"});
}

/// Code matrix of the Braunstein-Smolin encoder.
inline CodeMatrix braunstein_smolin_matrix() {
    return rows_to_matrix({"1010100000", "0101010000", "0010100000", "0111100001", "1010001000", "1011011000",
                           "0000001000", "0001010101", "0010101010", "0010101011"});
}

/// Measurement rows shared by the six-CNOT code, stages 4 then 2.
inline Template default_template() {
    return Template::from_matrix(six_cnot_matrix());
}

inline Assignment bindings(std::initializer_list<std::pair<const char *, int>> items) {
    Assignment out;
    for (auto [name, value] : items) {
        out.push_back(Binding{*parse_unknown(name), value != 0});
    }
    return out;
}

/// Choices that lead the default template to the six-CNOT code.
inline StageChoices six_cnot_choices() {
    StageChoices out(3);
    out[0] = bindings({{"a7", 1}, {"b7", 0}, {"a8", 0}, {"b8", 0}, {"c7", 0}, {"d7", 0}, {"d8", 0},
                       {"e8", 0}, {"f7", 0}, {"f8", 0}, {"b1", 1}, {"b2", 1}, {"b3", 0}, {"b4", 0},
                       {"b5", 1}, {"b6", 0}, {"b9", 0}, {"b10", 1}, {"c1", 0}, {"c2", 0}, {"c3", 0},
                       {"c4", 1}, {"c5", 0}, {"c6", 0}, {"c9", 0}, {"c10", 1}, {"e1", 0}, {"e2", 0},
                       {"e3", 0}, {"e4", 0}, {"e5", 0}, {"e6", 0}, {"e9", 0}, {"e10", 0}});
    out[1] = bindings({{"d1", 0}, {"f1", 0}, {"d2", 0}, {"f2", 0}, {"d3", 0}, {"d4", 0}, {"f3", 0},
                       {"f4", 0}, {"d5", 1}, {"d6", 0}, {"f5", 0}, {"f6", 0}, {"d9", 0}, {"f9", 0},
                       {"d10", 0}, {"f10", 1}, {"a3", 0}, {"a4", 0}});
    out[2] = bindings({{"a1", 1}, {"a2", 0}, {"a5", 1}, {"a6", 0}, {"a9", 0}, {"a10", 0}});
    return out;
}

/// Costs reported for earlier five-qubit encoders; not recomputed here.
struct LiteratureCost {
    std::string name;
    int total_ops = 0;
    int cnots = 0;
    std::optional<int> pulses;
};

inline std::vector<LiteratureCost> literature_costs() {
    return {{"Circuit 1", 12, 7, 35}, {"Circuit 2", 11, 6, std::nullopt}, {"Circuit 3", 10, 7, 26}};
}

}  // namespace qec5
