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
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qec5/gates.hpp"
#include "qec5/known_codes.hpp"
#include "qec5/quantum.hpp"

namespace qec5 {

struct PulseRules {
    int single_qubit = 1;
    int two_qubit = 3;
    int three_qubit = 4;

    void check() const {
        if (single_qubit < 1 || two_qubit < 1 || three_qubit < 1) {
            throw std::invalid_argument("pulse costs must be positive");
        }
    }

    int for_arity(int arity) const {
        return arity == 1 ? single_qubit : arity == 2 ? two_qubit : three_qubit;
    }
};

struct OpCount {
    int total_ops = 0;
    int cnot_count = 0;
};

/// A fused gate counts as two CNOTs.
inline OpCount count_ops(const std::vector<QGate> &gates) {
    OpCount out;
    out.total_ops = static_cast<int>(gates.size());
    for (const QGate &g : gates) {
        out.cnot_count += g.kind == QKind::CNOT ? 1 : g.arity() == 3 ? 2 : 0;
    }
    return out;
}

/// Stable reordering by earliest layer: each gate runs one layer after the last gate sharing a qubit.
inline std::vector<QGate> schedule_asap(const std::vector<QGate> &gates) {
    std::array<int, kQubits + 1> busy{};
    std::vector<std::pair<int, size_t>> order;
    for (size_t i = 0; i < gates.size(); ++i) {
        int layer = 0;
        for (int q : gates[i].qubits()) {
            layer = std::max(layer, busy[q]);
        }
        for (int q : gates[i].qubits()) {
            busy[q] = layer + 1;
        }
        order.emplace_back(layer, i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto &x, const auto &y) { return x.first < y.first; });
    std::vector<QGate> out;
    for (auto [layer, i] : order) {
        out.push_back(gates[i]);
    }
    return out;
}

namespace detail {

inline bool is_hq(const QGate &g) {
    return g.kind == QKind::H || g.kind == QKind::Q || g.kind == QKind::SINGLE;
}

inline std::string hq_word(const QGate &g) {
    return g.kind == QKind::H ? "H" : g.kind == QKind::Q ? "Q" : g.word;
}

}  // namespace detail

/// Joins consecutive H/Q gates on the same qubit into one operation; products equal to the
/// identity up to phase disappear.
inline std::vector<QGate> merge_single_qubit(const std::vector<QGate> &gates) {
    std::vector<std::optional<QGate>> slots;
    std::array<std::optional<size_t>, kQubits + 1> last{};
    for (const QGate &g : gates) {
        if (detail::is_hq(g) && last[g.a] && slots[*last[g.a]] && detail::is_hq(*slots[*last[g.a]])) {
            auto &prev = slots[*last[g.a]];
            QGate merged = QGate::single(g.a, detail::hq_word(g) + detail::hq_word(*prev));
            if (is_scalar(merged.unitary())) {
                prev.reset();
                last[g.a].reset();
            } else {
                prev = merged;
            }
            continue;
        }
        slots.push_back(g);
        for (int q : g.qubits()) {
            last[q] = slots.size() - 1;
        }
    }
    std::vector<QGate> out;
    for (auto &s : slots) {
        if (s) {
            out.push_back(std::move(*s));
        }
    }
    return out;
}

/// Greedy left-to-right: a CNOT fuses with the next gate touching its qubits when that gate is a
/// CNOT sharing its control or its target, and nothing in between touches the third qubit.
inline std::vector<QGate> fuse_cnot_pairs(const std::vector<QGate> &gates) {
    std::vector<QGate> out;
    std::vector<bool> used(gates.size(), false);
    for (size_t i = 0; i < gates.size(); ++i) {
        if (used[i]) {
            continue;
        }
        const QGate &g = gates[i];
        if (g.kind != QKind::CNOT) {
            out.push_back(g);
            continue;
        }
        std::optional<QGate> fused;
        for (size_t j = i + 1; j < gates.size(); ++j) {
            const QGate &h = gates[j];
            if (used[j] || !(h.touches(g.a) || h.touches(g.b))) {
                continue;
            }
            if (h.kind == QKind::CNOT) {
                int third = -1;
                if (h.a == g.a && h.b != g.b && h.b != g.a) {
                    third = h.b;
                } else if (h.b == g.b && h.a != g.a && h.a != g.b) {
                    third = h.a;
                }
                bool clear = third > 0;
                for (size_t k = i + 1; clear && k < j; ++k) {
                    clear = used[k] || !gates[k].touches(third);
                }
                if (clear) {
                    fused = h.a == g.a ? QGate::fanout(g.a, g.b, h.b) : QGate::fanin(g.a, h.a, g.b);
                    used[j] = true;
                }
            }
            break;
        }
        out.push_back(fused ? *fused : g);
    }
    return out;
}

/// Native ion-trap operation: a rotation on one qubit or a phase gate on two or three qubits.
struct Primitive {
    /// "R", "CZ" or "CZZ".
    std::string name;
    std::vector<int> qubits;
    Mat2 unitary = mat_identity();

    int arity() const {
        return static_cast<int>(qubits.size());
    }

    std::string str() const {
        std::string out = name + "(";
        for (size_t i = 0; i < qubits.size(); ++i) {
            out += (i ? "," : "") + std::to_string(qubits[i]);
        }
        return out + ")";
    }
};

/// CNOT(c, t) = H_t CZ(c, t) H_t, and a fused pair becomes one three-qubit phase gate between
/// target rotations. Rotations on the same qubit with no phase gate between them are combined,
/// and combinations equal to the identity up to phase are dropped.
inline std::vector<Primitive> lower_to_ion_trap(const std::vector<QGate> &gates) {
    std::vector<Primitive> raw;
    auto rot = [&](int q, const Mat2 &u) { raw.push_back(Primitive{"R", {q}, u}); };
    const Mat2 h = hadamard_matrix();
    for (const QGate &g : gates) {
        switch (g.kind) {
            case QKind::CNOT:
                rot(g.b, h);
                raw.push_back(Primitive{"CZ", {g.a, g.b}});
                rot(g.b, h);
                break;
            case QKind::FANOUT:
                rot(g.b, h);
                rot(g.c, h);
                raw.push_back(Primitive{"CZZ", {g.a, g.b, g.c}});
                rot(g.b, h);
                rot(g.c, h);
                break;
            case QKind::FANIN:
                rot(g.c, h);
                raw.push_back(Primitive{"CZZ", {g.c, g.a, g.b}});
                rot(g.c, h);
                break;
            default:
                rot(g.a, g.unitary());
                break;
        }
    }

    std::vector<Primitive> out;
    std::array<std::optional<Mat2>, kQubits + 1> pending{};
    auto flush = [&](int q) {
        if (pending[q] && !is_scalar(*pending[q], 1e-9)) {
            out.push_back(Primitive{"R", {q}, *pending[q]});
        }
        pending[q].reset();
    };
    for (const Primitive &p : raw) {
        if (p.arity() == 1) {
            int q = p.qubits[0];
            pending[q] = mat_mul(p.unitary, pending[q].value_or(mat_identity()));
            continue;
        }
        for (int q : p.qubits) {
            flush(q);
        }
        out.push_back(p);
    }
    for (int q = 1; q <= kQubits; ++q) {
        flush(q);
    }
    return out;
}

inline int pulse_count(const std::vector<QGate> &gates, const PulseRules &rules = {}) {
    int n = 0;
    for (const QGate &g : gates) {
        n += rules.for_arity(g.arity());
    }
    return n;
}

inline int pulse_count(const std::vector<Primitive> &prims, const PulseRules &rules = {}) {
    int n = 0;
    for (const Primitive &p : prims) {
        n += rules.for_arity(p.arity());
    }
    return n;
}

struct CostReport {
    int total_ops = 0;
    int cnot_count = 0;
    int pulse_count = 0;
    int fusions = 0;
    /// Operations after scheduling, merging and fusion.
    std::vector<std::string> fused_gate_list;
    std::vector<std::string> primitives;
};

/// Cost of a bit-level circuit run as a quantum circuit (pass the encoder for encoder costs).
inline CostReport cost_report(const Circuit &c, const PulseRules &rules = {}) {
    rules.check();
    std::vector<QGate> merged = merge_single_qubit(schedule_asap(lift_circuit(c)));
    OpCount n = count_ops(merged);
    std::vector<QGate> fused = fuse_cnot_pairs(merged);
    std::vector<Primitive> prims = lower_to_ion_trap(fused);
    CostReport out;
    out.total_ops = n.total_ops;
    out.cnot_count = n.cnot_count;
    out.pulse_count = pulse_count(prims, rules);
    for (const QGate &g : fused) {
        out.fusions += g.arity() == 3;
        out.fused_gate_list.push_back(g.str());
    }
    for (const Primitive &p : prims) {
        out.primitives.push_back(p.str());
    }
    return out;
}

struct Table2Row {
    std::string name;
    std::optional<int> total_ops;
    std::optional<int> cnot_count;
    std::optional<int> pulse_count;
    /// False for figures taken from the literature.
    bool computed = false;
};

inline std::vector<Table2Row> table2_report(const std::vector<std::pair<std::string, CostReport>> &computed,
                                            bool with_literature = true) {
    std::vector<Table2Row> rows;
    if (with_literature) {
        for (const LiteratureCost &l : literature_costs()) {
            rows.push_back(Table2Row{l.name, l.total_ops, l.cnots, l.pulses, false});
        }
    }
    for (const auto &[name, report] : computed) {
        rows.push_back(Table2Row{name, report.total_ops, report.cnot_count, report.pulse_count, true});
    }
    return rows;
}

inline std::string render_table2(const std::vector<Table2Row> &rows) {
    auto cell = [](const std::optional<int> &v) { return v ? std::to_string(*v) : std::string("*"); };
    std::ostringstream out;
    auto line = [&](const std::string &a, const std::string &b, const std::string &c, const std::string &d,
                    const std::string &e) {
        out << a << std::string(a.size() < 12 ? 12 - a.size() : 1, ' ') << b
            << std::string(b.size() < 8 ? 8 - b.size() : 1, ' ') << c
            << std::string(c.size() < 8 ? 8 - c.size() : 1, ' ') << d
            << std::string(d.size() < 8 ? 8 - d.size() : 1, ' ') << e << "\n";
    };
    line("circuit", "ops", "cnots", "pulses", "source");
    for (const Table2Row &r : rows) {
        line(r.name, cell(r.total_ops), cell(r.cnot_count), cell(r.pulse_count),
             r.computed ? "computed" : "recorded");
    }
    return out.str();
}

}  // namespace qec5
