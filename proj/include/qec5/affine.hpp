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
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qec5/gf2.hpp"

namespace qec5 {

/// Upper bound on the number of named unknowns in a symbolic matrix.
inline constexpr int kMaxVars = 60;

/// c ^ x_i ^ x_j ^ ... over GF(2): one bit per variable plus a constant bit.
class AffineForm {
   public:
    static constexpr uint64_t kConstantBit = uint64_t{1} << 63;
    static constexpr uint64_t kVarMask = (uint64_t{1} << kMaxVars) - 1;

    constexpr AffineForm() = default;

    static constexpr AffineForm constant(bool value) {
        return AffineForm(value ? kConstantBit : 0);
    }
    static constexpr AffineForm variable(int var) {
        return AffineForm(uint64_t{1} << var);
    }
    static constexpr AffineForm from_raw(uint64_t raw) {
        return AffineForm(raw);
    }

    constexpr uint64_t raw() const {
        return bits_;
    }
    constexpr uint64_t vars() const {
        return bits_ & kVarMask;
    }
    constexpr bool is_constant() const {
        return vars() == 0;
    }
    constexpr bool constant_term() const {
        return (bits_ & kConstantBit) != 0;
    }
    constexpr bool has(int var) const {
        return ((bits_ >> var) & 1) != 0;
    }

    /// Value under a full assignment given as a bitmask of the variables set to 1.
    constexpr bool evaluate(uint64_t ones) const {
        return constant_term() ^ ((std::popcount(vars() & ones) & 1) != 0);
    }

    constexpr AffineForm operator^(AffineForm o) const {
        return AffineForm(bits_ ^ o.bits_);
    }
    constexpr AffineForm &operator^=(AffineForm o) {
        bits_ ^= o.bits_;
        return *this;
    }
    constexpr bool operator==(const AffineForm &) const = default;

   private:
    constexpr explicit AffineForm(uint64_t bits) : bits_(bits) {
    }
    uint64_t bits_ = 0;
};

/// Homogeneous constraints form = 0, kept in reduced row echelon form so that reducing a
/// form against the system is a single pass over its pivot variables.
class LinearSystem {
   public:
    enum class AddResult { added, redundant, inconsistent };

    AffineForm reduce(AffineForm f) const {
        uint64_t hits = f.vars() & pivots_;
        while (hits) {
            int v = std::countr_zero(hits);
            hits &= hits - 1;
            f ^= rows_[v];
        }
        return f;
    }

    /// Adds the constraint `f = 0`. On inconsistency the system is left unchanged.
    AddResult add(AffineForm f) {
        AffineForm g = reduce(f);
        if (g.is_constant()) {
            return g.constant_term() ? AddResult::inconsistent : AddResult::redundant;
        }
        int pivot = std::countr_zero(g.vars());
        uint64_t others = pivots_;
        while (others) {
            int q = std::countr_zero(others);
            others &= others - 1;
            if (rows_[q].has(pivot)) {
                rows_[q] ^= g;
            }
        }
        rows_[pivot] = g;
        pivots_ |= uint64_t{1} << pivot;
        return AddResult::added;
    }

    AddResult bind(int var, bool value) {
        return add(AffineForm::variable(var) ^ AffineForm::constant(value));
    }

    std::optional<bool> value(int var) const {
        AffineForm r = reduce(AffineForm::variable(var));
        if (!r.is_constant()) {
            return std::nullopt;
        }
        return r.constant_term();
    }

    /// Variables (within `universe`) whose value is fixed by the system.
    uint64_t determined(uint64_t universe) const {
        uint64_t out = 0;
        uint64_t rest = universe & pivots_;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            if ((rows_[v].vars() & ~(uint64_t{1} << v)) == 0) {
                out |= uint64_t{1} << v;
            }
        }
        return out;
    }

    uint64_t pivots() const {
        return pivots_;
    }

   private:
    std::array<AffineForm, kMaxVars> rows_{};
    uint64_t pivots_ = 0;
};

struct SymbolicRow {
    std::array<AffineForm, kBits> entries{};

    SymbolicRow &operator^=(const SymbolicRow &o) {
        for (int c = 0; c < kBits; ++c) {
            entries[c] ^= o.entries[c];
        }
        return *this;
    }
    bool operator==(const SymbolicRow &) const = default;
};

/// A 10x10 matrix whose entries are affine forms in the template unknowns.
class SymbolicMatrix {
   public:
    SymbolicMatrix() = default;
    explicit SymbolicMatrix(const CodeMatrix &m) {
        for (int r = 1; r <= kBits; ++r) {
            for (int c = 1; c <= kBits; ++c) {
                at(r, c) = AffineForm::constant(m.at(r, c));
            }
        }
    }

    AffineForm &at(int row, int col) {
        return rows_[row - 1].entries[col - 1];
    }
    const AffineForm &at(int row, int col) const {
        return rows_[row - 1].entries[col - 1];
    }
    std::array<SymbolicRow, kBits> &rows() {
        return rows_;
    }
    const std::array<SymbolicRow, kBits> &rows() const {
        return rows_;
    }

    SymbolicMatrix reduced(const LinearSystem &system) const {
        SymbolicMatrix out = *this;
        for (auto &row : out.rows_) {
            for (auto &e : row.entries) {
                e = system.reduce(e);
            }
        }
        return out;
    }

    uint64_t vars() const {
        uint64_t out = 0;
        for (const auto &row : rows_) {
            for (const auto &e : row.entries) {
                out |= e.vars();
            }
        }
        return out;
    }

    bool is_constant() const {
        return vars() == 0;
    }

    /// Requires is_constant().
    CodeMatrix to_concrete() const {
        CodeMatrix m;
        for (int r = 1; r <= kBits; ++r) {
            for (int c = 1; c <= kBits; ++c) {
                m.set(r, c, at(r, c).constant_term());
            }
        }
        return m;
    }

    CodeMatrix evaluate(uint64_t ones) const {
        CodeMatrix m;
        for (int r = 1; r <= kBits; ++r) {
            for (int c = 1; c <= kBits; ++c) {
                m.set(r, c, at(r, c).evaluate(ones));
            }
        }
        return m;
    }

    bool operator==(const SymbolicMatrix &) const = default;

   private:
    std::array<SymbolicRow, kBits> rows_{};
};

}  // namespace qec5
