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
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qec5/affine.hpp"
#include "qec5/errors.hpp"
#include "qec5/gf2.hpp"

namespace qec5 {

/// Rows left open in a template, and the letter naming each row's unknowns.
inline constexpr std::array<int, 6> kUnknownRows{1, 2, 3, 5, 7, 9};
inline constexpr std::array<char, 6> kUnknownLetters{'a', 'b', 'c', 'd', 'e', 'f'};
/// Rows fixed by the measurement layout (amplitude rows of pairs 2..5).
inline constexpr std::array<int, 4> kMeasurementRows{4, 6, 8, 10};

/// Variable id of unknown `letter`<col>, e.g. a7.
constexpr int unknown_var(char letter, int col) {
    return (letter - 'a') * 10 + (col - 1);
}

constexpr int unknown_row(int var) {
    return kUnknownRows[var / 10];
}

constexpr int unknown_col(int var) {
    return var % 10 + 1;
}

inline std::string unknown_name(int var) {
    return std::string(1, kUnknownLetters[var / 10]) + std::to_string(var % 10 + 1);
}

inline std::optional<int> parse_unknown(std::string_view name) {
    if (name.size() < 2 || name.size() > 3 || name[0] < 'a' || name[0] > 'f') {
        return std::nullopt;
    }
    int col = 0;
    for (char ch : name.substr(1)) {
        if (ch < '0' || ch > '9') {
            return std::nullopt;
        }
        col = col * 10 + (ch - '0');
    }
    if (col < 1 || col > kBits || (name.size() == 3 && name[1] == '0')) {
        return std::nullopt;
    }
    return unknown_var(name[0], col);
}

/// "0", "1", or a sum of unknown names such as "a1+c3+1".
inline std::string format_form(const AffineForm &f) {
    if (f.is_constant()) {
        return f.constant_term() ? "1" : "0";
    }
    std::string out;
    for (int v = 0; v < kMaxVars; ++v) {
        if (f.has(v)) {
            out += (out.empty() ? "" : "+") + unknown_name(v);
        }
    }
    return f.constant_term() ? out + "+1" : out;
}

inline std::string unknown_list(uint64_t vars) {
    std::string out;
    for (int v = 0; v < kMaxVars; ++v) {
        if ((vars >> v) & 1) {
            if (!out.empty()) {
                out += ", ";
            }
            out += unknown_name(v);
        }
    }
    return out;
}

struct Binding {
    int var = 0;
    bool value = false;

    bool operator==(const Binding &) const = default;
    auto operator<=>(const Binding &) const = default;
};

using Assignment = std::vector<Binding>;

inline std::string format_assignment(const Assignment &a) {
    std::string out;
    for (const Binding &b : a) {
        if (!out.empty()) {
            out.push_back(' ');
        }
        out += unknown_name(b.var) + "=" + (b.value ? "1" : "0");
    }
    return out;
}

/// Choices consumed stage by stage; entry s is bound at the start of stage s (0-based),
/// the last stage being the remainder.
using StageChoices = std::vector<Assignment>;

/// A code matrix with rows 4, 6, 8, 10 fixed and the remaining rows unknown.
struct Template {
    std::array<uint16_t, 4> measurement_rows{};
    /// Pairs cleared one at a time before the remainder is solved exactly.
    std::vector<int> stage_order{4, 2};

    /// Measurement word of syndrome i, computable from the fixed rows alone.
    MeasurementWord measurement(int i) const {
        Codeword10 e = syndrome(i);
        uint8_t v = 0;
        for (uint16_t row : measurement_rows) {
            v = static_cast<uint8_t>((v << 1) | (std::popcount(static_cast<unsigned>(row & e.packed())) & 1));
        }
        return MeasurementWord(v);
    }

    bool fixed_rows_distinguish() const {
        uint32_t seen = 0;
        for (int i = 0; i < kSyndromes; ++i) {
            uint32_t bit = uint32_t{1} << measurement(i).packed();
            if (seen & bit) {
                return false;
            }
            seen |= bit;
        }
        return true;
    }

    SymbolicMatrix symbolic() const {
        SymbolicMatrix m;
        for (size_t i = 0; i < kMeasurementRows.size(); ++i) {
            for (int c = 1; c <= kBits; ++c) {
                m.at(kMeasurementRows[i], c) = AffineForm::constant((measurement_rows[i] >> (kBits - c)) & 1);
            }
        }
        for (size_t i = 0; i < kUnknownRows.size(); ++i) {
            for (int c = 1; c <= kBits; ++c) {
                m.at(kUnknownRows[i], c) = AffineForm::variable(unknown_var(kUnknownLetters[i], c));
            }
        }
        return m;
    }

    static Template from_matrix(const CodeMatrix &m) {
        Template t;
        for (size_t i = 0; i < kMeasurementRows.size(); ++i) {
            t.measurement_rows[i] = m.row(kMeasurementRows[i]);
        }
        return t;
    }

    bool operator==(const Template &) const = default;
};

/// Text form:
///
///   stages 4 2
///   0011101001   # row 4
///   0101010001   # row 6
///   1101100100   # row 8
///   1010100010   # row 10
///
/// The stages line is optional and defaults to "stages 4 2".
inline Template parse_template(std::string_view text) {
    Template t;
    auto lines = detail::content_lines(text);
    size_t next = 0;
    if (!lines.empty()) {
        std::string line(lines[0].second);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream in(line);
        std::string word;
        in >> word;
        if (word == "stages") {
            t.stage_order.clear();
            std::string tok;
            uint32_t used = 0;
            while (in >> tok) {
                if (tok.size() != 1 || tok[0] < '1' || tok[0] > '5') {
                    throw ParseError("stage pair must be 1..5, got '" + tok + "'", lines[0].first,
                                     line.find(tok) + 1);
                }
                int p = tok[0] - '0';
                if (used & (1u << p)) {
                    throw ParseError("stage pair " + tok + " repeated", lines[0].first, line.find(tok) + 1);
                }
                used |= 1u << p;
                t.stage_order.push_back(p);
            }
            if (t.stage_order.size() < 2) {
                throw ParseError("at least two pivot stages are needed to leave three pairs", lines[0].first, 1);
            }
            next = 1;
        }
    }
    size_t count = lines.size() - next;
    for (size_t i = 0; i < count && i < 4; ++i) {
        std::string line(lines[next + i].second);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        t.measurement_rows[i] = detail::parse_bit_line(line, kBits, lines[next + i].first);
    }
    if (count != 4) {
        size_t where = count > 4 ? lines[next + 4].first : (lines.empty() ? 1 : lines.back().first + 1);
        throw ParseError("expected 4 fixed rows, found " + std::to_string(count), where, 1);
    }
    return t;
}

inline std::string format_template(const Template &t) {
    std::string out = "stages";
    for (int p : t.stage_order) {
        out += " " + std::to_string(p);
    }
    out.push_back('\n');
    for (uint16_t row : t.measurement_rows) {
        for (int c = 1; c <= kBits; ++c) {
            out.push_back(((row >> (kBits - c)) & 1) ? '1' : '0');
        }
        out.push_back('\n');
    }
    return out;
}

/// One line per stage: "<stage> name=bit name=bit ...", stages numbered from 1.
inline StageChoices parse_stage_choices(std::string_view text) {
    StageChoices out;
    for (auto [line_number, raw] : detail::content_lines(text)) {
        std::string line(raw);
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream in(line);
        int stage = 0;
        if (!(in >> stage) || stage < 1 || stage > kPairs) {
            throw ParseError("line must start with a stage number 1..5", line_number, 1);
        }
        if (out.size() < static_cast<size_t>(stage)) {
            out.resize(stage);
        }
        std::string tok;
        while (in >> tok) {
            auto eq = tok.find('=');
            std::optional<int> var = eq == std::string::npos ? std::nullopt : parse_unknown(tok.substr(0, eq));
            std::string value = eq == std::string::npos ? "" : tok.substr(eq + 1);
            if (!var || (value != "0" && value != "1")) {
                throw ParseError("expected name=0 or name=1, got '" + tok + "'", line_number, line.find(tok) + 1);
            }
            out[stage - 1].push_back(Binding{*var, value == "1"});
        }
    }
    return out;
}

inline std::string format_stage_choices(const StageChoices &choices) {
    std::string out;
    for (size_t s = 0; s < choices.size(); ++s) {
        out += std::to_string(s + 1);
        if (!choices[s].empty()) {
            out += " " + format_assignment(choices[s]);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace qec5
