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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qec5/gates.hpp"
#include "qec5/gf2.hpp"

namespace qec5 {

inline constexpr int kQubits = kPairs;

using Complex = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<Complex, 4>;

inline Mat2 mat_mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 mat_identity() {
    return {1, 0, 0, 1};
}

/// True when m = c * I for some complex c.
inline bool is_scalar(const Mat2 &m, double tol = 1e-12) {
    return std::abs(m[1]) < tol && std::abs(m[2]) < tol && std::abs(m[0] - m[3]) < tol;
}

inline Mat2 pauli_matrix(Pauli p) {
    const Complex i(0, 1);
    switch (p) {
        case Pauli::I:
            return {1, 0, 0, 1};
        case Pauli::X:
            return {0, 1, 1, 0};
        case Pauli::Z:
            return {1, 0, 0, -1};
        case Pauli::Y:
            return {0, -i, i, 0};
    }
    return mat_identity();
}

/// (sigma_x + sigma_z) / sqrt 2
inline Mat2 hadamard_matrix() {
    const double s = 1 / std::sqrt(2.0);
    return {s, s, s, -s};
}

/// (sigma_y + sigma_z) / sqrt 2
inline Mat2 q_matrix() {
    const double s = 1 / std::sqrt(2.0);
    return {s, Complex(0, -s), Complex(0, s), -s};
}

enum class QKind : uint8_t {
    H,
    Q,
    CNOT,
    PAULI,
    /// Product of H and Q factors on one qubit; `word` lists them as written, so "HQ" applies Q first.
    SINGLE,
    /// Two CNOTs sharing control `a`, targets `b` and `c`.
    FANOUT,
    /// Two CNOTs sharing target `c`, controls `a` and `b`.
    FANIN,
};

/// A gate on qubits 1..5.
struct QGate {
    QKind kind = QKind::H;
    uint8_t a = 1;
    uint8_t b = 0;
    uint8_t c = 0;
    Pauli pauli = Pauli::I;
    std::string word;

    static QGate h(int q) {
        return QGate{QKind::H, static_cast<uint8_t>(q), 0, 0, Pauli::I, {}};
    }
    static QGate q(int q) {
        return QGate{QKind::Q, static_cast<uint8_t>(q), 0, 0, Pauli::I, {}};
    }
    static QGate cnot(int control, int target) {
        return QGate{QKind::CNOT, static_cast<uint8_t>(control), static_cast<uint8_t>(target), 0, Pauli::I, {}};
    }
    static QGate pauli_op(int q, Pauli p) {
        return QGate{QKind::PAULI, static_cast<uint8_t>(q), 0, 0, p, {}};
    }
    static QGate single(int q, std::string word) {
        return QGate{QKind::SINGLE, static_cast<uint8_t>(q), 0, 0, Pauli::I, std::move(word)};
    }
    static QGate fanout(int control, int t1, int t2) {
        return QGate{QKind::FANOUT, static_cast<uint8_t>(control), static_cast<uint8_t>(t1), static_cast<uint8_t>(t2), Pauli::I, {}};
    }
    static QGate fanin(int c1, int c2, int target) {
        return QGate{QKind::FANIN, static_cast<uint8_t>(c1), static_cast<uint8_t>(c2), static_cast<uint8_t>(target), Pauli::I, {}};
    }

    int arity() const {
        switch (kind) {
            case QKind::CNOT:
                return 2;
            case QKind::FANOUT:
            case QKind::FANIN:
                return 3;
            default:
                return 1;
        }
    }

    std::vector<int> qubits() const {
        switch (arity()) {
            case 1:
                return {a};
            case 2:
                return {a, b};
            default:
                return {a, b, c};
        }
    }

    bool touches(int qubit) const {
        for (int q : qubits()) {
            if (q == qubit) {
                return true;
            }
        }
        return false;
    }

    /// Unitary of a one-qubit gate.
    Mat2 unitary() const {
        switch (kind) {
            case QKind::H:
                return hadamard_matrix();
            case QKind::Q:
                return q_matrix();
            case QKind::PAULI:
                return pauli_matrix(pauli);
            case QKind::SINGLE: {
                Mat2 m = mat_identity();
                for (char f : word) {
                    m = mat_mul(m, f == 'H' ? hadamard_matrix() : q_matrix());
                }
                return m;
            }
            default:
                throw std::logic_error("unitary() needs a one-qubit gate");
        }
    }

    std::string str() const {
        const std::string sa = std::to_string(a);
        const std::string sb = std::to_string(b);
        const std::string sc = std::to_string(c);
        switch (kind) {
            case QKind::H:
                return "H " + sa;
            case QKind::Q:
                return "Q " + sa;
            case QKind::CNOT:
                return "CNOT " + sa + " " + sb;
            case QKind::PAULI:
                return std::string(pauli_name(pauli)) + " " + sa;
            case QKind::SINGLE:
                return word + " " + sa;
            case QKind::FANOUT:
                return "THREE(control " + sa + "; targets " + sb + "," + sc + ")";
            case QKind::FANIN:
                return "THREE(controls " + sa + "," + sb + "; target " + sc + ")";
        }
        return "?";
    }

    bool operator==(const QGate &) const = default;
};

/// BY -> H, SXBX -> Q, BXOR(s, t) -> CNOT(s, t), order kept.
inline std::vector<QGate> lift_circuit(const Circuit &c) {
    std::vector<QGate> out;
    out.reserve(c.size());
    for (const Gate &g : c) {
        g.check();
        switch (g.kind) {
            case GateKind::BY:
                out.push_back(QGate::h(g.first));
                break;
            case GateKind::SXBX:
                out.push_back(QGate::q(g.first));
                break;
            case GateKind::BXOR:
                out.push_back(QGate::cnot(g.first, g.second));
                break;
        }
    }
    return out;
}

/// 32 amplitudes, qubit 1 the most significant bit of the basis index.
class StateVector {
   public:
    static constexpr int kDim = 1 << kQubits;

    StateVector() {
        amps_[0] = 1;
    }

    static StateVector basis(uint32_t index) {
        StateVector s;
        s.amps_[0] = 0;
        s.amps_[index] = 1;
        return s;
    }

    /// alpha|0> + beta|1> on qubit 1, the rest |0000>.
    static StateVector logical(Complex alpha, Complex beta) {
        StateVector s;
        s.amps_[0] = alpha;
        s.amps_[mask(1)] = beta;
        return s;
    }

    static constexpr uint32_t mask(int qubit) {
        return uint32_t{1} << (kQubits - qubit);
    }

    Complex &operator[](uint32_t i) {
        return amps_[i];
    }
    const Complex &operator[](uint32_t i) const {
        return amps_[i];
    }

    void apply_single(int qubit, const Mat2 &u) {
        const uint32_t m = mask(qubit);
        for (uint32_t i = 0; i < kDim; ++i) {
            if (i & m) {
                continue;
            }
            Complex a0 = amps_[i];
            Complex a1 = amps_[i | m];
            amps_[i] = u[0] * a0 + u[1] * a1;
            amps_[i | m] = u[2] * a0 + u[3] * a1;
        }
    }

    void apply_cnot(int control, int target) {
        const uint32_t mc = mask(control);
        const uint32_t mt = mask(target);
        for (uint32_t i = 0; i < kDim; ++i) {
            if ((i & mc) && !(i & mt)) {
                std::swap(amps_[i], amps_[i | mt]);
            }
        }
    }

    void apply(const QGate &g) {
        switch (g.kind) {
            case QKind::CNOT:
                apply_cnot(g.a, g.b);
                break;
            case QKind::FANOUT:
                apply_cnot(g.a, g.b);
                apply_cnot(g.a, g.c);
                break;
            case QKind::FANIN:
                apply_cnot(g.a, g.c);
                apply_cnot(g.b, g.c);
                break;
            default:
                apply_single(g.a, g.unitary());
                break;
        }
    }

    void apply_all(const std::vector<QGate> &gates) {
        for (const QGate &g : gates) {
            apply(g);
        }
    }

    double norm_squared() const {
        double n = 0;
        for (const Complex &a : amps_) {
            n += std::norm(a);
        }
        return n;
    }

    Complex inner(const StateVector &other) const {
        Complex s = 0;
        for (int i = 0; i < kDim; ++i) {
            s += std::conj(amps_[i]) * other.amps_[i];
        }
        return s;
    }

   private:
    std::array<Complex, kDim> amps_{};
};

}  // namespace qec5
