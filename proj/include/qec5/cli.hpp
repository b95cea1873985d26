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

#include <cmath>
#include <complex>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qec5/cost_model.hpp"
#include "qec5/errors.hpp"
#include "qec5/gates.hpp"
#include "qec5/gf2.hpp"
#include "qec5/known_codes.hpp"
#include "qec5/qecc_sim.hpp"
#include "qec5/search.hpp"
#include "qec5/synthesis.hpp"
#include "qec5/template.hpp"

namespace qec5::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kDomainFailure = 1, kInputError = 2 };

/// Bad command-line input or unreadable file.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw InputError("cannot write " + path);
    }
}

/// Accepts "0.6", "0.8i", "-i", "0.6+0.8i", "0.6-0.8i" and "(0.6,0.8)".
inline Complex parse_complex(const std::string &text) {
    std::string s;
    for (char ch : text) {
        if (ch != ' ') {
            s.push_back(ch);
        }
    }
    auto number = [&](const std::string &part) -> double {
        if (part.empty() || part == "+") {
            return 1;
        }
        if (part == "-") {
            return -1;
        }
        size_t used = 0;
        double v = std::stod(part, &used);
        if (used != part.size()) {
            throw std::invalid_argument(part);
        }
        return v;
    };
    try {
        if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
            auto comma = s.find(',');
            if (comma == std::string::npos) {
                throw std::invalid_argument(s);
            }
            return {number(s.substr(1, comma - 1)), number(s.substr(comma + 1, s.size() - comma - 2))};
        }
        if (!s.empty() && s.back() == 'i') {
            std::string body = s.substr(0, s.size() - 1);
            size_t split = std::string::npos;
            for (size_t i = body.size(); i-- > 1;) {
                if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                    split = i;
                    break;
                }
            }
            if (split == std::string::npos) {
                return {0, number(body)};
            }
            return {number(body.substr(0, split)), number(body.substr(split))};
        }
        return {number(s), 0};
    } catch (const std::exception &) {
        throw InputError("not a complex number: '" + text + "'");
    }
}

inline PulseRules parse_rules(const std::string &text) {
    PulseRules r;
    char c1 = 0;
    char c2 = 0;
    std::istringstream in(text);
    std::string rest;
    if (!(in >> r.single_qubit >> c1 >> r.two_qubit >> c2 >> r.three_qubit) || c1 != ',' || c2 != ',' ||
        (in >> rest)) {
        throw InputError("--rules expects three integers s,t,th");
    }
    try {
        r.check();
    } catch (const std::invalid_argument &e) {
        throw InputError(e.what());
    }
    return r;
}

inline Json matrix_rows_json(const CodeMatrix &m) {
    Json rows = Json::array();
    for (int r = 1; r <= kBits; ++r) {
        std::string row;
        for (int c = 1; c <= kBits; ++c) {
            row.push_back(m.at(r, c) ? '1' : '0');
        }
        rows.push_back(row);
    }
    return rows;
}

inline Json circuit_json(const Circuit &c) {
    Json out = Json::array();
    for (const Gate &g : c) {
        out.push_back(g.str());
    }
    return out;
}

/// One JSON object per stage.
inline std::string trace_jsonl(const EliminationTrace &trace) {
    std::string out;
    for (size_t s = 0; s < trace.stages.size(); ++s) {
        const StageRecord &rec = trace.stages[s];
        Json j;
        j["stage"] = s + 1;
        j["pivot"] = rec.pivot == 0 ? Json(nullptr) : Json(rec.pivot);
        j["open"] = rec.open;
        j["gates"] = circuit_json(rec.gates);
        Json rows = Json::array();
        for (int r = 1; r <= kBits; ++r) {
            Json row = Json::array();
            for (int c = 1; c <= kBits; ++c) {
                row.push_back(format_form(rec.checkpoint.at(r, c)));
            }
            rows.push_back(row);
        }
        j["checkpoint"] = rows;
        Json bound = Json::object();
        for (const Binding &b : rec.bound) {
            bound[unknown_name(b.var)] = b.value ? 1 : 0;
        }
        j["bound"] = bound;
        out += j.dump() + "\n";
    }
    return out;
}

inline Json cost_json(const CostReport &r) {
    Json j;
    j["total_ops"] = r.total_ops;
    j["cnot_count"] = r.cnot_count;
    j["pulse_count"] = r.pulse_count;
    j["fusions"] = r.fusions;
    j["fused_gate_list"] = r.fused_gate_list;
    j["primitives"] = r.primitives;
    return j;
}

inline std::string table1_text(const CodeMatrix &m) {
    std::ostringstream out;
    out << "i   e                w                v     U3\n";
    for (int i = 0; i < kSyndromes; ++i) {
        Codeword10 e = syndrome(i);
        Codeword10 w = apply_matrix(m, e);
        std::string idx = std::to_string(i);
        out << idx << std::string(4 - idx.size(), ' ') << e.str() << "   " << w.str() << "   "
            << extract_measurement(w).str() << "  " << pauli_name(extract_recovery(w)) << "\n";
    }
    return out.str();
}

inline Json table1_json(const CodeMatrix &m) {
    Json rows = Json::array();
    for (int i = 0; i < kSyndromes; ++i) {
        Codeword10 w = apply_matrix(m, syndrome(i));
        rows.push_back(Json{{"i", i},
                            {"e", syndrome(i).str()},
                            {"w", w.str()},
                            {"v", extract_measurement(w).str()},
                            {"u3", std::string(pauli_name(extract_recovery(w)))}});
    }
    return rows;
}

inline Json validity_json(const ValidityReport &r) {
    Json collisions = Json::array();
    for (auto [i, j] : r.collisions) {
        collisions.push_back({i, j});
    }
    return Json{{"valid", r.valid()},     {"distinct", r.distinct},     {"full_rank", r.full_rank},
                {"rank", r.rank},         {"symplectic", r.symplectic}, {"group_relations", r.group_relations},
                {"collisions", collisions}};
}

inline std::string collision_text(const CodeMatrix &m, const ValidityReport &r) {
    std::ostringstream out;
    std::map<std::string, std::vector<int>> classes;
    for (int i = 0; i < kSyndromes; ++i) {
        classes[extract_measurement(apply_matrix(m, syndrome(i))).str()].push_back(i);
    }
    out << "invalid code matrix: rank " << r.rank << ", " << r.collisions.size() << " colliding syndrome pairs\n";
    for (const auto &[v, members] : classes) {
        if (members.size() < 2) {
            continue;
        }
        out << "  v=" << v << ": syndromes";
        for (int i : members) {
            out << " " << i;
        }
        out << "\n";
    }
    return out.str();
}

inline CodeMatrix load_matrix(const std::string &path) {
    return parse_code_matrix(read_file(path));
}

inline Circuit load_circuit(const std::string &path) {
    return parse_circuit(read_file(path));
}

/// The reference decoder obtained from the default template and its worked choices.
inline Circuit reference_decoder() {
    return staged_reduce(default_template(), six_cnot_choices()).decoder();
}

inline int cmd_matrix_listing(const CodeMatrix &m, bool json, std::ostream &out) {
    ValidityReport r = validate_code_matrix(m);
    if (json) {
        Json j = validity_json(r);
        j["table"] = table1_json(m);
        out << j.dump(2) << "\n";
    } else if (r.valid()) {
        out << table1_text(m);
    } else {
        out << collision_text(m, r);
    }
    return r.valid() ? kOk : kDomainFailure;
}

struct VerifyCircuitOutcome {
    bool valid = false;
    bool matches_matrix = true;
    bool propagation_agrees = true;
    double min_fidelity = 1;
};

inline int cmd_verify_circuit(const Circuit &decoder, const std::optional<CodeMatrix> &expected, bool json,
                              std::ostream &out) {
    CodeMatrix m = circuit_matrix(decoder);
    ValidityReport r = validate_code_matrix(m);
    VerifyCircuitOutcome o;
    o.valid = r.valid();
    o.matches_matrix = !expected || *expected == m;
    for (uint16_t x = 0; x < (1u << kBits); ++x) {
        o.propagation_agrees = o.propagation_agrees && pauli_propagate(decoder, Codeword10(x)) == m * Codeword10(x);
    }
    std::vector<Json> runs;
    if (o.valid) {
        const Complex alpha(0.6, 0);
        const Complex beta(0, 0.8);
        for (int i = 0; i < kSyndromes; ++i) {
            try {
                QeccOutcome q = run_qecc(decoder, i, alpha, beta);
                o.min_fidelity = std::min(o.min_fidelity, q.fidelity);
            } catch (const SimulationError &) {
                o.min_fidelity = 0;
            }
        }
    } else {
        o.min_fidelity = 0;
    }
    bool ok = o.valid && o.matches_matrix && o.propagation_agrees && o.min_fidelity >= 1 - kDeterminismTolerance;
    if (json) {
        Json j{{"ok", ok},
               {"gates", decoder.size()},
               {"bxor", bxor_count(decoder)},
               {"matrix", matrix_rows_json(m)},
               {"validity", validity_json(r)},
               {"matches_matrix", o.matches_matrix},
               {"propagation_agrees", o.propagation_agrees},
               {"min_fidelity", o.min_fidelity}};
        out << j.dump(2) << "\n";
    } else {
        out << "gates: " << decoder.size() << " (" << bxor_count(decoder) << " BXOR)\n";
        out << "matrix:\n" << m.str();
        out << "valid code: " << (o.valid ? "yes" : "no") << "\n";
        if (expected) {
            out << "matches given matrix: " << (o.matches_matrix ? "yes" : "no") << "\n";
        }
        out << "pauli propagation agrees: " << (o.propagation_agrees ? "yes" : "no") << "\n";
        out << "min fidelity over 16 syndromes: " << o.min_fidelity << "\n";
        if (!o.valid) {
            out << collision_text(m, r);
        }
    }
    return ok ? kOk : kDomainFailure;
}

struct SynthesizeArgs {
    std::optional<std::string> template_path;
    std::optional<std::string> choices_path;
    std::optional<std::string> out_prefix;
    int budget = 6;
    std::optional<uint64_t> seed;
    uint64_t samples = 2000;
    bool exhaustive = false;
    unsigned jobs = 1;
    std::string endpoint = "identity";
    bool json = false;
};

inline int cmd_synthesize(const SynthesizeArgs &a, std::ostream &out, std::ostream &err) {
    Template t = a.template_path ? parse_template(read_file(*a.template_path)) : default_template();
    if (!t.fixed_rows_distinguish()) {
        err << "template rows do not separate the 16 syndromes\n";
        return kDomainFailure;
    }
    Endpoint endpoint = a.endpoint == "akin" ? Endpoint::akin : Endpoint::identity;
    ReductionResult result;
    size_t hits = 1;
    if (a.choices_path) {
        try {
            result = staged_reduce(t, parse_stage_choices(read_file(*a.choices_path)), endpoint);
        } catch (const SynthesisError &e) {
            err << e.what() << "\n";
            return kDomainFailure;
        }
    } else {
        SearchOptions options;
        options.budget = a.budget;
        options.jobs = a.jobs;
        options.endpoint = endpoint;
        if (a.seed && !a.exhaustive) {
            options.seed = a.seed;
            options.samples = a.samples;
        }
        SearchReport report = search_min_bxor(t, options);
        hits = report.hits.size();
        if (report.hits.empty()) {
            err << "no circuit with at most " << a.budget << " BXOR gates found\n";
            return kDomainFailure;
        }
        result = replay(t, report.hits.front().path, endpoint);
    }
    Circuit decoder = result.decoder();
    CostReport cost = cost_report(result.encoder());
    std::string circuit_text = format_circuit(decoder);
    std::string matrix_text = result.matrix.str();
    std::string trace_text = trace_jsonl(result.trace);
    if (a.out_prefix) {
        write_file(*a.out_prefix + ".circuit", circuit_text);
        write_file(*a.out_prefix + ".matrix", matrix_text);
        write_file(*a.out_prefix + ".trace.jsonl", trace_text);
    }
    if (a.json) {
        Json j{{"circuit", circuit_json(decoder)},
               {"gates", decoder.size()},
               {"bxor", bxor_count(decoder)},
               {"matrix", matrix_rows_json(result.matrix)},
               {"candidates", hits},
               {"cost", cost_json(cost)}};
        out << j.dump(2) << "\n";
    } else {
        out << "# decoder (" << decoder.size() << " gates, " << bxor_count(decoder) << " BXOR; " << hits
            << " candidate(s))\n"
            << circuit_text << "# matrix\n"
            << matrix_text << "# encoder cost\n"
            << "total_ops " << cost.total_ops << "\ncnot_count " << cost.cnot_count << "\npulse_count "
            << cost.pulse_count << "\n";
    }
    return kOk;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Five-pair bilateral code synthesis and verification"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    SynthesizeArgs syn;
    std::string tpl;
    std::string choices;
    std::string prefix;
    uint64_t seed = 0;
    auto *synthesize = app.add_subcommand("synthesize", "search or derive a circuit for a template");
    synthesize->add_option("template", tpl, "template file (default: built-in)");
    synthesize->add_option("--budget", syn.budget, "maximum BXOR count")->check(CLI::NonNegativeNumber);
    auto *seed_opt = synthesize->add_option("--seed", seed, "random descents with this seed");
    synthesize->add_option("--samples", syn.samples, "number of random descents")->check(CLI::PositiveNumber);
    synthesize->add_flag("--exhaustive", syn.exhaustive, "walk every branch (default unless --seed)");
    auto *choices_opt = synthesize->add_option("--choices", choices, "per-stage choices file; skips the search");
    synthesize->add_option("--jobs", syn.jobs, "worker threads")->check(CLI::PositiveNumber);
    synthesize->add_option("--endpoint", syn.endpoint, "identity or akin")
        ->check(CLI::IsMember({"identity", "akin"}));
    synthesize->add_option("--out", prefix, "write PREFIX.circuit, PREFIX.matrix, PREFIX.trace.jsonl");
    synthesize->add_flag("--json", syn.json, "machine-readable output");

    std::string matrix_path;
    bool json = false;
    auto *verify_matrix = app.add_subcommand("verify-matrix", "check a code matrix and list its syndrome table");
    verify_matrix->add_option("matrix", matrix_path, "matrix file")->required();
    verify_matrix->add_flag("--json", json, "machine-readable output");

    std::string circuit_path;
    std::string expected_path;
    auto *verify_circuit = app.add_subcommand("verify-circuit", "check a decoder circuit end to end");
    verify_circuit->add_option("circuit", circuit_path, "decoder circuit file")->required();
    verify_circuit->add_option("--matrix", expected_path, "matrix the circuit must realize");
    verify_circuit->add_flag("--json", json, "machine-readable output");

    int index = 0;
    std::string alpha_text = "0.7071067811865476";
    std::string beta_text = "0.7071067811865476";
    auto *simulate = app.add_subcommand("simulate", "encode, corrupt, decode and correct one qubit");
    simulate->add_option("circuit", circuit_path, "decoder circuit file")->required();
    simulate->add_option("index", index, "syndrome index 0..15")->required()->check(CLI::Range(0, 15));
    simulate->add_option("--alpha", alpha_text, "amplitude of |0>, e.g. 0.6 or 0.6+0.8i");
    simulate->add_option("--beta", beta_text, "amplitude of |1>");

    std::string rules_text = "1,3,4";
    bool as_decoder = false;
    auto *cost = app.add_subcommand("cost", "operation, CNOT and laser-pulse counts of the encoder");
    cost->add_option("circuit", circuit_path, "decoder circuit file")->required();
    cost->add_option("--rules", rules_text, "pulses per single, two- and three-qubit operation");
    cost->add_flag("--decoder", as_decoder, "cost the circuit as written instead of its inverse");

    auto *table1 = app.add_subcommand("table1", "syndrome table of a matrix (default: six-CNOT code)");
    table1->add_option("matrix", matrix_path, "matrix file");
    table1->add_flag("--json", json, "machine-readable output");

    auto *table2 = app.add_subcommand("table2", "cost comparison with recorded circuits");
    table2->add_option("circuit", circuit_path, "decoder circuit file (default: six-CNOT circuit)");
    table2->add_option("--rules", rules_text, "pulses per single, two- and three-qubit operation");
    table2->add_flag("--json", json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*synthesize) {
            if (!tpl.empty()) {
                syn.template_path = tpl;
            }
            if (*choices_opt) {
                syn.choices_path = choices;
            }
            if (!prefix.empty()) {
                syn.out_prefix = prefix;
            }
            if (*seed_opt) {
                syn.seed = seed;
            }
            return cmd_synthesize(syn, out, err);
        }
        if (*verify_matrix) {
            return cmd_matrix_listing(load_matrix(matrix_path), json, out);
        }
        if (*verify_circuit) {
            std::optional<CodeMatrix> expected;
            if (!expected_path.empty()) {
                expected = load_matrix(expected_path);
            }
            return cmd_verify_circuit(load_circuit(circuit_path), expected, json, out);
        }
        if (*simulate) {
            Circuit decoder = load_circuit(circuit_path);
            Complex alpha = parse_complex(alpha_text);
            Complex beta = parse_complex(beta_text);
            if (std::abs(std::norm(alpha) + std::norm(beta) - 1) > 1e-9) {
                throw InputError("|alpha|^2 + |beta|^2 must be 1");
            }
            QeccOutcome q = run_qecc(decoder, index, alpha, beta);
            Json j{{"v", q.v.str()}, {"recovery", std::string(pauli_name(q.recovery))}, {"fidelity", q.fidelity}};
            out << j.dump() << "\n";
            return kOk;
        }
        if (*cost) {
            Circuit decoder = load_circuit(circuit_path);
            CostReport r = cost_report(as_decoder ? decoder : invert_circuit(decoder), parse_rules(rules_text));
            out << cost_json(r).dump(2) << "\n";
            return kOk;
        }
        if (*table1) {
            return cmd_matrix_listing(matrix_path.empty() ? six_cnot_matrix() : load_matrix(matrix_path), json, out);
        }
        if (*table2) {
            Circuit decoder = circuit_path.empty() ? reference_decoder() : load_circuit(circuit_path);
            auto rows = table2_report({{"Circuit 4", cost_report(invert_circuit(decoder), parse_rules(rules_text))}});
            if (json) {
                Json arr = Json::array();
                for (const Table2Row &r : rows) {
                    auto opt = [](const std::optional<int> &v) { return v ? Json(*v) : Json(nullptr); };
                    arr.push_back(Json{{"name", r.name},
                                       {"total_ops", opt(r.total_ops)},
                                       {"cnot_count", opt(r.cnot_count)},
                                       {"pulse_count", opt(r.pulse_count)},
                                       {"computed", r.computed}});
                }
                out << arr.dump(2) << "\n";
            } else {
                out << render_table2(rows);
            }
            return kOk;
        }
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const InputError &e) {
        err << e.what() << "\n";
        return kInputError;
    } catch (const SimulationError &e) {
        err << e.what() << "\n";
        return kDomainFailure;
    } catch (const SynthesisError &e) {
        err << e.what() << "\n";
        return kDomainFailure;
    }
    return kInputError;
}

}  // namespace qec5::cli
