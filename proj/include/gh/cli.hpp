#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gh/gh.hpp"
#include "gh/io.hpp"

namespace gh::cli {

using json = nlohmann::json;

enum class Format { json, csv, pretty };

struct RunConfig {
    Tolerances tol;
    SolverLimits limits;
    std::optional<std::uint64_t> seed;
    Format format = Format::json;
};

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2 };

inline Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "pretty") return Format::pretty;
    throw DomainError("unknown format '" + s + "' (expected json, csv or pretty)");
}

/// Reads {"tolerances": {"metric", "eq"}, "budgets": {"gh_max_points",
/// "e_search_max_points"}, "seed", "format"}; absent keys keep `base`.
inline RunConfig merge_config_file(RunConfig base, const json& j) {
    if (!j.is_object()) throw StructuralError("config must be a JSON object");
    try {
        if (j.contains("tolerances")) {
            const auto& t = j["tolerances"];
            if (t.contains("metric")) base.tol.metric = t["metric"].get<double>();
            if (t.contains("eq")) base.tol.eq = t["eq"].get<double>();
        }
        if (j.contains("budgets")) {
            const auto& b = j["budgets"];
            if (b.contains("gh_max_points")) base.limits.gh_max_points = b["gh_max_points"].get<std::size_t>();
            if (b.contains("e_search_max_points"))
                base.limits.e_search_max_points = b["e_search_max_points"].get<std::size_t>();
        }
        if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("format")) base.format = parse_format(j["format"].get<std::string>());
    } catch (const json::exception& e) {
        throw StructuralError(std::string("config: ") + e.what());
    }
    return base;
}

inline void check_config(const RunConfig& c) {
    if (!(c.tol.metric > 0.0) || !(c.tol.eq > 0.0)) throw DomainError("tolerances must be positive");
    if (c.limits.gh_max_points < 1 || c.limits.e_search_max_points < 1) throw DomainError("budgets must be >= 1");
}

namespace detail {

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

// Top-level scalar fields as one CSV header line plus one value line.
inline void write_scalar_csv(std::ostream& out, const json& j) {
    std::vector<std::string> keys, vals;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.value().is_primitive()) {
            keys.push_back(it.key());
            vals.push_back(scalar_text(it.value()));
        }
    for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << keys[k];
    out << '\n';
    for (std::size_t k = 0; k < vals.size(); ++k) out << (k ? "," : "") << vals[k];
    out << '\n';
}

inline void write_pretty(std::ostream& out, const json& j, const std::string& indent = "") {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (v.is_object()) {
            out << indent << it.key() << ":\n";
            write_pretty(out, v, indent + "  ");
        } else {
            out << indent << it.key() << ": " << (v.is_primitive() ? scalar_text(v) : v.dump()) << '\n';
        }
    }
}

inline void emit(std::ostream& out, const RunConfig& cfg, const json& j, const FiniteMetricSpace* space = nullptr) {
    switch (cfg.format) {
        case Format::json:
            out << j.dump(2) << '\n';
            break;
        case Format::csv:
            if (space)
                out << io::to_csv(*space);
            else
                write_scalar_csv(out, j);
            break;
        case Format::pretty:
            write_pretty(out, j);
            break;
    }
}

inline std::uint64_t choose_seed(const RunConfig& cfg) {
    if (cfg.seed) return *cfg.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

inline std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(tok, &used);
            if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw DomainError("--sizes expects positive integers separated by commas, got '" + s + "'");
        }
    }
    return out;
}

}  // namespace detail

/// Entry point shared by the `gh` executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Gromov-Hausdorff distances between finite metric spaces"};
    app.name("gh");
    app.require_subcommand(1);

    std::string config_path, format_flag;
    double tol_metric = 0, tol_eq = 0;
    std::size_t max_points = 0, e_budget = 0;
    std::uint64_t seed_flag = 0;
    auto* o_config = app.add_option("--config", config_path, "JSON config file; flags override it");
    auto* o_tm = app.add_option("--tol-metric", tol_metric, "triangle slack");
    auto* o_te = app.add_option("--tol-eq", tol_eq, "equality tolerance");
    auto* o_mp = app.add_option("--max-points", max_points, "per-side budget of the exact GH solver");
    auto* o_eb = app.add_option("--e-budget", e_budget, "largest space whose e(X) is searched");
    auto* o_seed = app.add_option("--seed", seed_flag, "random seed");
    auto* o_fmt = app.add_option("--format", format_flag, "json | csv | pretty");
    for (auto* o : {o_config, o_tm, o_te, o_mp, o_eb, o_seed, o_fmt}) o->configurable(false);
    app.fallthrough();

    // dist
    auto* c_dist = app.add_subcommand("dist", "GH distance between two spaces");
    std::string dist_a, dist_b, dist_method = "star";
    bool emit_witness = false;
    c_dist->add_option("A", dist_a)->required();
    c_dist->add_option("B", dist_b)->required();
    c_dist->add_option("--method", dist_method, "oracle | star")->check(CLI::IsMember({"oracle", "star"}));
    c_dist->add_flag("--emit-witness", emit_witness, "include the optimal correspondence");

    // generic
    auto* c_gen = app.add_subcommand("generic", "generate a generic space");
    std::string gen_kind = "perturbed", gen_out;
    std::size_t gen_n = 0;
    double gen_eps = 0.1, gen_amp = 1.0 / 3;
    c_gen->add_option("--kind", gen_kind)->check(CLI::IsMember({"perturbed", "shramov"}));
    c_gen->add_option("--n", gen_n, "points (perturbed) or base size m (shramov)")->required();
    c_gen->add_option("--eps", gen_eps, "edge excess for shramov");
    c_gen->add_option("--amplitude", gen_amp, "perturbation amplitude in (0, 1/3]");
    c_gen->add_option("--out", gen_out, "directory for space.json and report.json");

    // characteristics
    auto* c_char = app.add_subcommand("characteristics", "s, t, e of a space");
    std::string char_x;
    c_char->add_option("X", char_x)->required();

    // geodesic
    auto* c_geo = app.add_subcommand("geodesic", "point of the shortest curve through an optimal correspondence");
    std::string geo_a, geo_b, geo_r;
    double geo_t = 0.5;
    c_geo->add_option("A", geo_a)->required();
    c_geo->add_option("B", geo_b)->required();
    c_geo->add_option("--t", geo_t, "curve parameter in [0, 1]");
    c_geo->add_option("--correspondence", geo_r, "optimal correspondence JSON (default: solver witness)");

    // verify
    auto* c_ver = app.add_subcommand("verify", "theorem harnesses");
    c_ver->require_subcommand(1);
    std::string ver_anchor, part_x, part_sizes;
    std::size_t ver_samples = 100;
    double ver_eps = 0, part_delta = 0;
    auto add_common = [&](CLI::App* c) {
        c->add_option("--anchor", ver_anchor, "generic anchor M")->required();
        return c->add_option("--eps", ver_eps, "override the automatic epsilon");
    };
    auto* c_li = c_ver->add_subcommand("local-isometry", "d_GH(pi a, pi b) = |ab| near rho_M");
    auto* o_li_eps = add_common(c_li);
    c_li->add_option("--samples", ver_samples);
    auto* c_in = c_ver->add_subcommand("interior", "the epsilon-ball lies inside the cone");
    auto* o_in_eps = add_common(c_in);
    c_in->add_option("--samples", ver_samples);
    auto* c_pa = c_ver->add_subcommand("partition", "canonical partition of a space near M");
    auto* o_pa_eps = add_common(c_pa);
    auto* o_px = c_pa->add_option("--x", part_x, "space X close to M (default: a random blow-up of M)");
    c_pa->add_option("--sizes", part_sizes, "blow-up cluster sizes, e.g. 2,1,3");
    auto* o_pd = c_pa->add_option("--delta", part_delta, "blow-up cluster diameter");

    // embed
    auto* c_emb = app.add_subcommand("embed", "isometric copy of X among n-point spaces");
    std::string emb_x, emb_out;
    c_emb->add_option("X", emb_x)->required();
    c_emb->add_option("--out", emb_out, "directory for anchor, images and report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "gh: " << e.what() << '\n';
        return kUsage;
    }

    RunConfig cfg;
    try {
        if (o_config->count()) cfg = merge_config_file(cfg, io::parse_json(io::read_file(config_path), config_path));
        if (o_tm->count()) cfg.tol.metric = tol_metric;
        if (o_te->count()) cfg.tol.eq = tol_eq;
        if (o_mp->count()) cfg.limits.gh_max_points = max_points;
        if (o_eb->count()) cfg.limits.e_search_max_points = e_budget;
        if (o_seed->count()) cfg.seed = seed_flag;
        if (o_fmt->count()) cfg.format = parse_format(format_flag);
        check_config(cfg);

        const auto& tol = cfg.tol;
        const auto& lim = cfg.limits;
        auto opt_eps = [&](CLI::Option* o) { return o->count() ? std::optional<double>(ver_eps) : std::nullopt; };

        if (c_dist->parsed()) {
            const auto a = io::load_space(dist_a, tol);
            const auto b = io::load_space(dist_b, tol);
            const auto g = dist_method == "oracle" ? gh_oracle(a, b) : gh_exact(a, b, lim);
            detail::emit(out, cfg, io::to_json(g, emit_witness));
            return kOk;
        }

        if (c_gen->parsed()) {
            const std::uint64_t seed = detail::choose_seed(cfg);
            json j{{"kind", gen_kind}, {"seed", seed}};
            FiniteMetricSpace space;
            GenericityReport rep;
            if (gen_kind == "perturbed") {
                auto g = perturbed_generic(gen_n, seed, gen_amp, lim.e_search_max_points, tol);
                j["attempts"] = g.attempts;
                space = std::move(g.space);
                rep = std::move(g.report);
            } else {
                auto s = shramov_space(gen_n, gen_eps, lim.e_search_max_points, tol);
                j["base_size"] = gen_n;
                j["eps"] = gen_eps;
                space = std::move(s.space);
                rep = std::move(s.report);
            }
            j["space"] = io::to_json(space);
            j["report"] = io::to_json(rep);
            if (!gen_out.empty()) {
                std::filesystem::create_directories(gen_out);
                io::write_file(gen_out + "/space.json", j["space"].dump(2) + "\n");
                io::write_file(gen_out + "/report.json", j["report"].dump(2) + "\n");
            }
            detail::emit(out, cfg, j, &space);
            return kOk;
        }

        if (c_char->parsed()) {
            const auto x = io::load_space(char_x, tol);
            detail::emit(out, cfg, io::to_json(characteristics(x, lim.e_search_max_points, tol)));
            return kOk;
        }

        if (c_geo->parsed()) {
            const auto a = io::load_space(geo_a, tol);
            const auto b = io::load_space(geo_b, tol);
            const auto r = geo_r.empty() ? gh_exact(a, b, lim).optimal
                                         : io::correspondence_from_json(io::parse_json(io::read_file(geo_r), geo_r));
            const auto pt = geodesic_point(a, b, r, geo_t, lim, tol);
            json j{{"t", geo_t}, {"correspondence", io::to_json(r)}, {"space", io::to_json(pt)}};
            detail::emit(out, cfg, j, &pt);
            return kOk;
        }

        if (c_ver->parsed()) {
            const auto m = io::load_space(ver_anchor, tol);
            const std::uint64_t seed = detail::choose_seed(cfg);
            if (c_li->parsed() || c_in->parsed()) {
                const auto rep = c_li->parsed()
                                     ? verify_local_isometry(m, ver_samples, seed, opt_eps(o_li_eps), lim, tol)
                                     : verify_interiority(m, ver_samples, seed, opt_eps(o_in_eps), lim, tol);
                detail::emit(out, cfg, io::to_json(rep));
                return rep.pass ? kOk : kVerificationFailed;
            }
            // partition
            const auto rep = characteristics(m, lim.e_search_max_points, tol);
            if (!rep.e) throw DomainError("anchor exceeds the e-search budget");
            const double eps = o_pa_eps->count() ? ver_eps : local_isometry_epsilon(rep);
            json j{{"kind", "partition"}, {"seed", seed}, {"epsilon", eps}, {"samples", 1}};
            FiniteMetricSpace x;
            if (o_px->count()) {
                x = io::load_space(part_x, tol);
            } else {
                auto sizes = detail::parse_sizes(part_sizes);
                if (part_sizes.empty()) {
                    sizes.assign(m.size(), 1);
                    for (std::size_t i = 0; i < m.size() && m.size() + i < lim.gh_max_points; ++i) sizes[i] = 2;
                }
                const double delta = o_pd->count() ? part_delta : eps / 2;
                x = blow_up(m, sizes, delta, seed, tol).space;
                j["x"] = io::to_json(x);
            }
            try {
                const auto cp = canonical_partition(m, x, eps, lim, tol);
                j["pass"] = true;
                j["max_deviation"] = 0.0;
                j["counterexamples"] = json::array();
                j["partition"] = io::to_json(cp);
                detail::emit(out, cfg, j);
                return kOk;
            } catch (const TheoremViolation& v) {
                j["pass"] = false;
                j["max_deviation"] = nullptr;
                j["counterexamples"] = json::array({{{"note", v.what()}}});
                detail::emit(out, cfg, j);
                return kVerificationFailed;
            }
        }

        if (c_emb->parsed()) {
            const auto x = io::load_space(emb_x, tol);
            const std::uint64_t seed = detail::choose_seed(cfg);
            const auto r = embed(x, seed, lim, tol);
            const auto rep = embed_report(r, tol);
            const json jr = io::to_json(rep);
            if (!emb_out.empty()) {
                std::filesystem::create_directories(emb_out);
                io::write_file(emb_out + "/anchor.json", io::to_json(r.anchor.generated.space).dump(2) + "\n");
                for (std::size_t i = 0; i < r.images.size(); ++i)
                    io::write_file(emb_out + "/image_" + std::to_string(i) + ".json",
                                   io::to_json(r.images[i]).dump(2) + "\n");
                io::write_file(emb_out + "/report.json", jr.dump(2) + "\n");
            }
            if (cfg.format == Format::pretty)
                out << to_text(rep);
            else
                detail::emit(out, cfg, jr);
            return rep.status == "isometric" ? kOk : kVerificationFailed;
        }
    } catch (const TheoremViolation& e) {
        json j{{"pass", false}, {"error", e.what()}};
        if (!e.payload().empty()) j["counterexample"] = json::parse(e.payload(), nullptr, false);
        out << j.dump(2) << '\n';
        return kVerificationFailed;
    } catch (const ConsistencyError& e) {
        err << "gh: internal consistency failure: " << e.what() << '\n';
        return kVerificationFailed;
    } catch (const Error& e) {
        err << "gh: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        err << "gh: malformed input: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "gh: " << e.what() << '\n';
        return kUsage;
    }
    err << "gh: no subcommand\n";
    return kUsage;
}

}  // namespace gh::cli
