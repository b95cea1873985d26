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
#include <cmath>
#include <string>
#include <vector>

#include "qec5/errors.hpp"
#include "qec5/gates.hpp"
#include "qec5/gf2.hpp"
#include "qec5/quantum.hpp"

namespace qec5 {

/// Measurement word -> Pauli correction on qubit 1.
class RecoveryTable {
   public:
    static RecoveryTable from_matrix(const CodeMatrix &m) {
        ValidityReport report = validate_code_matrix(m);
        if (!report.valid()) {
            throw SimulationError("matrix is not a valid code: " + std::to_string(report.collisions.size()) +
                                  " colliding syndrome pairs, rank " + std::to_string(report.rank));
        }
        RecoveryTable t;
        for (int i = 0; i < kSyndromes; ++i) {
            Codeword10 w = apply_matrix(m, syndrome(i));
            t.table_[extract_measurement(w).packed()] = extract_recovery(w);
        }
        return t;
    }

    Pauli operator[](MeasurementWord v) const {
        return table_[v.packed()];
    }

   private:
    std::array<Pauli, kSyndromes> table_{};
};

struct QeccOutcome {
    MeasurementWord v;
    Pauli recovery = Pauli::I;
    double fidelity = 0;
    /// Probability of the observed ancilla string.
    double ancilla_probability = 0;
};

inline constexpr double kDeterminismTolerance = 1e-10;

/// Encodes alpha|0> + beta|1> with the inverse of `decoder`, applies syndrome `index`, decodes,
/// projects the ancillas (qubits 2..5) onto their outcome and corrects qubit 1.
inline QeccOutcome run_qecc(const Circuit &decoder, int index, Complex alpha, Complex beta) {
    if (index < 0 || index >= kSyndromes) {
        throw std::invalid_argument("syndrome index must be 0..15");
    }
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1) > 1e-9) {
        throw std::invalid_argument("|alpha|^2 + |beta|^2 must be 1");
    }
    RecoveryTable table = RecoveryTable::from_matrix(circuit_matrix(decoder));

    StateVector psi = StateVector::logical(alpha, beta);
    psi.apply_all(lift_circuit(invert_circuit(decoder)));
    Codeword10 e = syndrome(index);
    for (int q = 1; q <= kQubits; ++q) {
        if (Pauli p = to_pauli(e.pair(q)); p != Pauli::I) {
            psi.apply_single(q, pauli_matrix(p));
        }
    }
    psi.apply_all(lift_circuit(decoder));

    std::array<double, kSyndromes> prob{};
    for (uint32_t i = 0; i < StateVector::kDim; ++i) {
        prob[i & 0xF] += std::norm(psi[i]);
    }
    uint32_t best = 0;
    for (uint32_t v = 1; v < kSyndromes; ++v) {
        if (prob[v] > prob[best]) {
            best = v;
        }
    }
    if (prob[best] < 1 - kDeterminismTolerance) {
        throw SimulationError("invalid code/circuit pair: ancilla outcome " + MeasurementWord(best).str() +
                              " has probability " + std::to_string(prob[best]));
    }

    QeccOutcome out;
    out.v = MeasurementWord(static_cast<uint8_t>(best));
    out.ancilla_probability = prob[best];
    out.recovery = table[out.v];
    StateVector projected;
    projected[0] = 0;
    for (uint32_t i = 0; i < StateVector::kDim; ++i) {
        if ((i & 0xF) == best) {
            projected[i] = psi[i] / std::sqrt(prob[best]);
        }
    }
    projected.apply_single(1, pauli_matrix(out.recovery));

    StateVector expected;
    expected[0] = 0;
    expected[best] = alpha;
    expected[StateVector::mask(1) | best] = beta;
    out.fidelity = std::norm(expected.inner(projected));
    return out;
}

namespace detail {

inline Pauli compose(bool x, bool z) {
    return x ? (z ? Pauli::Y : Pauli::X) : (z ? Pauli::Z : Pauli::I);
}
inline bool has_x(Pauli p) {
    return p == Pauli::X || p == Pauli::Y;
}
inline bool has_z(Pauli p) {
    return p == Pauli::Z || p == Pauli::Y;
}

}  // namespace detail

/// Conjugates the Pauli word labeled by `e` through the lifted decoder, ignoring signs.
inline Codeword10 pauli_propagate(const Circuit &c, Codeword10 e) {
    std::array<Pauli, kQubits + 1> word{};
    for (int q = 1; q <= kQubits; ++q) {
        word[q] = to_pauli(e.pair(q));
    }
    for (const QGate &g : lift_circuit(c)) {
        Pauli &p = word[g.a];
        switch (g.kind) {
            case QKind::H:
                // X <-> Z
                p = detail::compose(detail::has_z(p), detail::has_x(p));
                break;
            case QKind::Q:
                // Y <-> Z, X fixed
                p = p == Pauli::Y ? Pauli::Z : p == Pauli::Z ? Pauli::Y : p;
                break;
            case QKind::CNOT: {
                Pauli &t = word[g.b];
                // X on the control spreads to the target, Z on the target spreads to the control.
                bool cx = detail::has_x(p);
                bool cz = detail::has_z(p) != detail::has_z(t);
                bool tx = detail::has_x(t) != detail::has_x(p);
                bool tz = detail::has_z(t);
                p = detail::compose(cx, cz);
                t = detail::compose(tx, tz);
                break;
            }
            default:
                break;
        }
    }
    Codeword10 out;
    for (int q = 1; q <= kQubits; ++q) {
        out.set_pair(q, to_label(word[q]));
    }
    return out;
}

}  // namespace qec5
