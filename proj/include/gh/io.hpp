#pragma once

// JSON and CSV formats. The schemas are frozen in docs/formats.md.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gh/cone.hpp"
#include "gh/correspondence.hpp"
#include "gh/embed.hpp"
#include "gh/error.hpp"
#include "gh/generic.hpp"
#include "gh/ghdist.hpp"
#include "gh/metric_space.hpp"
#include "gh/stability.hpp"

namespace gh::io {

using json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot write " + path);
    out << text;
}

/// Parses JSON text, turning syntax errors into StructuralError with a line:column location.
inline json parse_json(const std::string& text, const std::string& origin = "<input>") {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw StructuralError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                              ": malformed JSON: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Spaces

inline json to_json(const FiniteMetricSpace& s) {
    json j;
    j["n"] = s.size();
    if (!s.labels().empty()) j["labels"] = s.labels();
    j["d"] = s.rows();
    return j;
}

/// Builds a space from {"n", "labels"?, "d"} and validates it.
inline FiniteMetricSpace space_from_json(const json& j, const Tolerances& tol = {}, const std::string& origin = "<input>") {
    if (!j.is_object()) throw StructuralError(origin + ": expected a JSON object with \"n\" and \"d\"");
    if (!j.contains("d") || !j["d"].is_array()) throw StructuralError(origin + ": missing array field \"d\"");
    const auto& d = j["d"];
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (!d[i].is_array()) throw StructuralError(origin + ": d[" + std::to_string(i) + "] is not an array");
        std::vector<double> row;
        for (std::size_t k = 0; k < d[i].size(); ++k) {
            if (!d[i][k].is_number())
                throw StructuralError(origin + ": d[" + std::to_string(i) + "][" + std::to_string(k) +
                                      "] is not a number");
            row.push_back(d[i][k].get<double>());
        }
        rows.push_back(std::move(row));
    }
    if (j.contains("n")) {
        if (!j["n"].is_number_integer() || j["n"].get<long long>() != static_cast<long long>(rows.size()))
            throw StructuralError(origin + ": \"n\" does not match the number of rows of \"d\"");
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array()) throw StructuralError(origin + ": \"labels\" must be an array of strings");
        for (const auto& l : j["labels"]) {
            if (!l.is_string()) throw StructuralError(origin + ": \"labels\" must be an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    auto space = FiniteMetricSpace::from_rows(rows, std::move(labels));
    const auto verdict = validate(space, tol);
    if (!verdict.valid()) throw DomainError(origin + ": not a metric: " + verdict.describe());
    return space;
}

/// Headerless square matrix, one row per line, comma separated.
inline FiniteMetricSpace space_from_csv(const std::string& text, const Tolerances& tol = {},
                                        const std::string& origin = "<input>") {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t col = 1, start = 0;
        for (;;) {
            const std::size_t comma = line.find(',', start);
            std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            const auto b = cell.find_first_not_of(" \t");
            const auto e = cell.find_last_not_of(" \t");
            cell = b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (cell.empty() || used != cell.size())
                throw StructuralError(origin + ":" + std::to_string(lineno) + ":" + std::to_string(col) +
                                      ": not a number: '" + cell + "'");
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
            ++col;
        }
        rows.push_back(std::move(row));
    }
    auto space = FiniteMetricSpace::from_rows(rows);
    const auto verdict = validate(space, tol);
    if (!verdict.valid()) throw DomainError(origin + ": not a metric: " + verdict.describe());
    return space;
}

inline std::string to_csv(const FiniteMetricSpace& s) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) os << (j ? "," : "") << s(i, j);
        os << '\n';
    }
    return os.str();
}

/// Loads a space from a .csv file or a JSON file (any other extension).
inline FiniteMetricSpace load_space(const std::string& path, const Tolerances& tol = {}) {
    const std::string text = read_file(path);
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    return csv ? space_from_csv(text, tol, path) : space_from_json(parse_json(text, path), tol, path);
}

// ---------------------------------------------------------------------------
// Correspondences and distance vectors

inline json to_json(const Relation& r) {
    json pairs = json::array();
    for (auto [i, j] : r.pairs()) pairs.push_back({i, j});
    return {{"p", r.p()}, {"q", r.q()}, {"pairs", pairs}};
}

inline json to_json(const Correspondence& c) { return to_json(c.relation()); }

inline Relation relation_from_json(const json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("pairs"))
        throw StructuralError("correspondence JSON needs \"p\", \"q\" and \"pairs\"");
    Relation r(j["p"].get<std::size_t>(), j["q"].get<std::size_t>());
    for (const auto& pr : j["pairs"]) {
        if (!pr.is_array() || pr.size() != 2) throw StructuralError("each pair must be [i, j]");
        r.insert(pr[0].get<std::size_t>(), pr[1].get<std::size_t>());
    }
    return r;
}

inline Correspondence correspondence_from_json(const json& j) { return Correspondence(relation_from_json(j)); }

inline json to_json(const DistanceVector& v) { return {{"n", v.n}, {"v", v.v}}; }

inline DistanceVector distance_vector_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("v"))
        throw StructuralError("distance vector JSON needs \"n\" and \"v\"");
    return DistanceVector(j["n"].get<std::size_t>(), j["v"].get<std::vector<double>>());
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const GenericityReport& r) {
    json j;
    j["n"] = r.n;
    j["diam"] = r.diam;
    j["s"] = r.s;
    j["s_witness"] = r.s_witness;
    j["t"] = r.t;
    j["t_witness"] = r.t_witness;
    j["e_computed"] = r.e.has_value();
    j["e"] = r.e ? json(*r.e) : json(nullptr);
    j["e_witness"] = r.e_witness;
    j["is_generic"] = r.is_generic;
    return j;
}

inline json to_json(const GhResult& g, bool with_witness) {
    json j;
    j["distance"] = g.distance;
    j["distortion"] = g.distortion;
    j["nodes_explored"] = g.nodes_explored;
    j["method"] = to_string(g.method);
    j["witness"] = with_witness ? to_json(g.optimal) : json(nullptr);
    return j;
}

inline json to_json(const VerificationReport& r) {
    json cx = json::array();
    for (const auto& c : r.counterexamples) {
        json e{{"sample", c.sample}, {"a", to_json(c.a)}, {"lhs", c.lhs}, {"rhs", c.rhs},
               {"deviation", c.deviation}, {"note", c.note}};
        if (c.b.n) e["b"] = to_json(c.b);
        cx.push_back(std::move(e));
    }
    return {{"kind", r.kind},       {"pass", r.pass},   {"max_deviation", r.max_deviation},
            {"samples", r.samples}, {"probes", r.probes}, {"epsilon", r.epsilon},
            {"seed", r.seed},       {"anchor", to_json(r.anchor)}, {"counterexamples", cx}};
}

inline json to_json(const CanonicalPartition& p) {
    json j{{"pass", true},
           {"epsilon", p.epsilon},
           {"blocks", p.blocks},
           {"witness", to_json(p.witness)},
           {"witness_distortion", p.witness_distortion},
           {"uniqueness_checked", p.uniqueness_checked},
           {"correspondences_below", p.correspondences_below}};
    j["unique_correspondence"] = p.unique_correspondence ? json(*p.unique_correspondence) : json(nullptr);
    return j;
}

inline json to_json(const EmbedReport& r) {
    auto rows = [](const std::vector<EmbedReport::Row>& v) {
        json a = json::array();
        for (const auto& x : v)
            a.push_back({{"i", x.i}, {"j", x.j}, {"target", x.target}, {"achieved", x.achieved},
                         {"deviation", x.deviation}});
        return a;
    };
    json j{{"status", r.status}, {"message", r.message}};
    if (r.status == "error") return j;
    j["max_dev"] = r.max_dev;
    j["tolerance"] = r.tolerance;
    j["epsilon"] = r.epsilon;
    j["diam"] = r.diam;
    j["lambda"] = r.lambda;
    j["seed"] = r.seed;
    j["anchor"] = to_json(r.anchor);
    j["table"] = rows(r.table);
    j["offending"] = rows(r.offending);
    return j;
}

}  // namespace gh::io
