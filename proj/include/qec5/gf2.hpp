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
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qec5/errors.hpp"

namespace qec5 {

inline constexpr int kPairs = 5;
inline constexpr int kBits = 2 * kPairs;
inline constexpr int kSyndromes = 16;

/// Two-bit label of a Bell pair or single-qubit Pauli. (0,0) is Phi+ / identity.
struct PairLabel {
    bool phase = false;
    bool amplitude = false;

    constexpr uint8_t code() const {
        return static_cast<uint8_t>((phase ? 2 : 0) | (amplitude ? 1 : 0));
    }
    static constexpr PairLabel from_code(uint8_t c) {
        return PairLabel{(c & 2) != 0, (c & 1) != 0};
    }
    constexpr bool operator==(const PairLabel &) const = default;
};

/// Single-qubit Pauli; the enumerator value is the (phase, amplitude) label code.
enum class Pauli : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

constexpr Pauli to_pauli(PairLabel label) {
    return static_cast<Pauli>(label.code());
}

constexpr PairLabel to_label(Pauli p) {
    return PairLabel::from_code(static_cast<uint8_t>(p));
}

constexpr std::string_view pauli_name(Pauli p) {
    switch (p) {
        case Pauli::I:
            return "I";
        case Pauli::X:
            return "X";
        case Pauli::Z:
            return "Z";
        case Pauli::Y:
            return "Y";
    }
    return "?";
}

/// Ten-bit codeword of five (phase, amplitude) pairs.
///
/// Positions are 1-based from the left: position 2k-1 is the phase bit of pair k and
/// position 2k its amplitude bit. The packed integer reads the same way, so position 1
/// is the most significant of the ten bits.
class Codeword10 {
   public:
    constexpr Codeword10() = default;
    constexpr explicit Codeword10(uint16_t packed) : bits_(static_cast<uint16_t>(packed & 0x3FF)) {
    }

    static Codeword10 parse(std::string_view text);

    constexpr uint16_t packed() const {
        return bits_;
    }
    constexpr bool bit(int position) const {
        return ((bits_ >> (kBits - position)) & 1) != 0;
    }
    constexpr void set_bit(int position, bool value) {
        uint16_t mask = static_cast<uint16_t>(1u << (kBits - position));
        bits_ = value ? static_cast<uint16_t>(bits_ | mask) : static_cast<uint16_t>(bits_ & ~mask);
    }
    constexpr PairLabel pair(int k) const {
        return PairLabel{bit(2 * k - 1), bit(2 * k)};
    }
    constexpr void set_pair(int k, PairLabel label) {
        set_bit(2 * k - 1, label.phase);
        set_bit(2 * k, label.amplitude);
    }
    constexpr bool is_zero() const {
        return bits_ == 0;
    }

    /// Space-separated pairs, e.g. "11 00 00 01 01".
    std::string str() const {
        std::string out;
        for (int p = 1; p <= kBits; ++p) {
            out.push_back(bit(p) ? '1' : '0');
            if (p % 2 == 0 && p != kBits) {
                out.push_back(' ');
            }
        }
        return out;
    }

    constexpr Codeword10 operator^(Codeword10 other) const {
        return Codeword10(static_cast<uint16_t>(bits_ ^ other.bits_));
    }
    constexpr Codeword10 &operator^=(Codeword10 other) {
        bits_ ^= other.bits_;
        return *this;
    }
    constexpr bool operator==(const Codeword10 &) const = default;

   private:
    uint16_t bits_ = 0;
};

/// Four measured low bits, ordered as pairs 2, 3, 4, 5 (pair 2 is the leftmost bit).
class MeasurementWord {
   public:
    constexpr MeasurementWord() = default;
    constexpr explicit MeasurementWord(uint8_t packed) : bits_(static_cast<uint8_t>(packed & 0xF)) {
    }

    constexpr uint8_t packed() const {
        return bits_;
    }
    std::string str() const {
        std::string out;
        for (int i = 3; i >= 0; --i) {
            out.push_back(((bits_ >> i) & 1) ? '1' : '0');
        }
        return out;
    }
    constexpr MeasurementWord operator^(MeasurementWord other) const {
        return MeasurementWord(static_cast<uint8_t>(bits_ ^ other.bits_));
    }
    constexpr bool operator==(const MeasurementWord &) const = default;

   private:
    uint8_t bits_ = 0;
};

/// 10x10 matrix over GF(2) acting on column codewords: w = M e.
/// Row r is packed like a Codeword10, so column c sits at position c of the row.
class CodeMatrix {
   public:
    constexpr CodeMatrix() = default;
    constexpr explicit CodeMatrix(const std::array<uint16_t, kBits> &rows) : rows_(rows) {
        for (auto &r : rows_) {
            r &= 0x3FF;
        }
    }

    static constexpr CodeMatrix identity() {
        CodeMatrix m;
        for (int r = 1; r <= kBits; ++r) {
            m.set(r, r, true);
        }
        return m;
    }

    constexpr bool at(int row, int col) const {
        return ((rows_[row - 1] >> (kBits - col)) & 1) != 0;
    }
    constexpr void set(int row, int col, bool value) {
        uint16_t mask = static_cast<uint16_t>(1u << (kBits - col));
        uint16_t &r = rows_[row - 1];
        r = value ? static_cast<uint16_t>(r | mask) : static_cast<uint16_t>(r & ~mask);
    }
    constexpr uint16_t row(int r) const {
        return rows_[r - 1];
    }
    constexpr uint16_t &row(int r) {
        return rows_[r - 1];
    }
    constexpr const std::array<uint16_t, kBits> &rows() const {
        return rows_;
    }

    constexpr Codeword10 column(int col) const {
        Codeword10 out;
        for (int r = 1; r <= kBits; ++r) {
            out.set_bit(r, at(r, col));
        }
        return out;
    }

    constexpr Codeword10 operator*(Codeword10 e) const {
        Codeword10 out;
        for (int r = 1; r <= kBits; ++r) {
            out.set_bit(r, (std::popcount(static_cast<unsigned>(rows_[r - 1] & e.packed())) & 1) != 0);
        }
        return out;
    }

    constexpr CodeMatrix operator*(const CodeMatrix &rhs) const {
        CodeMatrix out;
        for (int r = 1; r <= kBits; ++r) {
            uint16_t acc = 0;
            for (int c = 1; c <= kBits; ++c) {
                if (at(r, c)) {
                    acc ^= rhs.row(c);
                }
            }
            out.row(r) = acc;
        }
        return out;
    }

    constexpr bool operator==(const CodeMatrix &) const = default;

    int rank() const {
        std::array<uint16_t, kBits> work = rows_;
        int rank = 0;
        for (int bit = kBits - 1; bit >= 0; --bit) {
            uint16_t mask = static_cast<uint16_t>(1u << bit);
            auto pivot = std::find_if(work.begin() + rank, work.end(), [&](uint16_t r) { return (r & mask) != 0; });
            if (pivot == work.end()) {
                continue;
            }
            std::swap(*pivot, work[rank]);
            for (int r = 0; r < kBits; ++r) {
                if (r != rank && (work[r] & mask)) {
                    work[r] ^= work[rank];
                }
            }
            ++rank;
        }
        return rank;
    }

    /// Preserves the pairwise symplectic form (phase x amplitude), i.e. the matrix is the
    /// conjugation action of some Clifford circuit on Pauli labels.
    bool is_symplectic() const {
        auto form = [](uint16_t u, uint16_t v) {
            // Swap phase/amplitude bits of v, then parity of the overlap.
            uint16_t swapped = static_cast<uint16_t>(((v & 0x2AA) >> 1) | ((v & 0x155) << 1));
            return (std::popcount(static_cast<unsigned>(u & swapped)) & 1) != 0;
        };
        for (int i = 1; i <= kBits; ++i) {
            for (int j = i; j <= kBits; ++j) {
                bool expected = (i != j) && ((i - 1) / 2 == (j - 1) / 2);
                if (form(column(i).packed(), column(j).packed()) != expected) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Ten lines of ten '0'/'1' characters.
    std::string str() const {
        std::string out;
        for (int r = 1; r <= kBits; ++r) {
            for (int c = 1; c <= kBits; ++c) {
                out.push_back(at(r, c) ? '1' : '0');
            }
            out.push_back('\n');
        }
        return out;
    }

   private:
    std::array<uint16_t, kBits> rows_{};
};

/// Syndrome codeword e^(i), i = 0..15. e^(3k-2) flips the phase bit of pair k,
/// e^(3k-1) its amplitude bit, e^(3k) both.
constexpr Codeword10 syndrome(int index) {
    Codeword10 e;
    if (index <= 0) {
        return e;
    }
    int k = (index + 2) / 3;
    int kind = index - 3 * (k - 1);
    e.set_pair(k, PairLabel{kind != 2, kind != 1});
    return e;
}

/// Pair group k = ceil(i / 3) of a syndrome index; 0 for the error-free syndrome.
constexpr int syndrome_group(int index) {
    return (index + 2) / 3;
}

inline std::array<Codeword10, kSyndromes> enumerate_syndromes() {
    std::array<Codeword10, kSyndromes> out{};
    for (int i = 0; i < kSyndromes; ++i) {
        out[i] = syndrome(i);
    }
    return out;
}

constexpr Codeword10 apply_matrix(const CodeMatrix &m, Codeword10 e) {
    return m * e;
}

/// Low (amplitude) bits of pairs 2..5.
constexpr MeasurementWord extract_measurement(Codeword10 w) {
    return MeasurementWord(static_cast<uint8_t>((w.bit(4) << 3) | (w.bit(6) << 2) | (w.bit(8) << 1) | w.bit(10)));
}

/// The residual error on pair 1, which is also its own correction.
constexpr Pauli extract_recovery(Codeword10 w) {
    return to_pauli(w.pair(1));
}

struct ValidityReport {
    bool distinct = false;
    bool full_rank = false;
    bool group_relations = false;
    bool symplectic = false;
    int rank = 0;
    /// Syndrome index pairs (i < j) with equal measurement words.
    std::vector<std::pair<int, int>> collisions;

    bool valid() const {
        return distinct && full_rank;
    }
};

inline ValidityReport validate_code_matrix(const CodeMatrix &m) {
    ValidityReport report;
    std::array<MeasurementWord, kSyndromes> v{};
    std::array<Codeword10, kSyndromes> w{};
    for (int i = 0; i < kSyndromes; ++i) {
        w[i] = apply_matrix(m, syndrome(i));
        v[i] = extract_measurement(w[i]);
    }
    for (int i = 0; i < kSyndromes; ++i) {
        for (int j = i + 1; j < kSyndromes; ++j) {
            if (v[i] == v[j]) {
                report.collisions.emplace_back(i, j);
            }
        }
    }
    report.distinct = report.collisions.empty();
    report.rank = m.rank();
    report.full_rank = report.rank == kBits;
    report.group_relations = w[0].is_zero();
    for (int k = 1; k <= kPairs; ++k) {
        report.group_relations = report.group_relations && (w[3 * k - 2] ^ w[3 * k - 1]) == w[3 * k] &&
                                 (v[3 * k - 2] ^ v[3 * k - 1]) == v[3 * k];
    }
    report.symplectic = m.is_symplectic();
    return report;
}

namespace detail {

inline bool is_comment_or_blank(std::string_view line) {
    auto first = line.find_first_not_of(" \t\r");
    return first == std::string_view::npos || line[first] == '#';
}

/// Reads exactly `width` bits from a line, skipping spaces/tabs.
inline uint16_t parse_bit_line(std::string_view line, int width, size_t line_number) {
    uint16_t bits = 0;
    int count = 0;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (ch == ' ' || ch == '\t' || ch == '\r') {
            continue;
        }
        if (ch != '0' && ch != '1') {
            throw ParseError(std::string("unexpected character '") + ch + "'", line_number, i + 1);
        }
        if (count == width) {
            throw ParseError("more than " + std::to_string(width) + " bits", line_number, i + 1);
        }
        bits = static_cast<uint16_t>((bits << 1) | (ch == '1'));
        ++count;
    }
    if (count != width) {
        throw ParseError("expected " + std::to_string(width) + " bits, found " + std::to_string(count), line_number,
                         line.size() + 1);
    }
    return bits;
}

inline std::vector<std::pair<size_t, std::string_view>> content_lines(std::string_view text) {
    std::vector<std::pair<size_t, std::string_view>> out;
    size_t line_number = 0;
    while (!text.empty()) {
        ++line_number;
        size_t end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        if (!is_comment_or_blank(line)) {
            out.emplace_back(line_number, line);
        }
    }
    return out;
}

}  // namespace detail

inline Codeword10 Codeword10::parse(std::string_view text) {
    return Codeword10(detail::parse_bit_line(text, kBits, 1));
}

/// Ten rows of ten bits; blank lines and '#' comments are ignored.
inline CodeMatrix parse_code_matrix(std::string_view text) {
    auto lines = detail::content_lines(text);
    std::array<uint16_t, kBits> rows{};
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i == static_cast<size_t>(kBits)) {
            throw ParseError("more than 10 matrix rows", lines[i].first, 1);
        }
        rows[i] = detail::parse_bit_line(lines[i].second, kBits, lines[i].first);
    }
    if (lines.size() != static_cast<size_t>(kBits)) {
        size_t last = lines.empty() ? 1 : lines.back().first + 1;
        throw ParseError("expected 10 matrix rows, found " + std::to_string(lines.size()), last, 1);
    }
    return CodeMatrix(rows);
}

}  // namespace qec5
