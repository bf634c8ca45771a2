// Command-line entry point: file parsing, dispatch to the library modules,
// and deterministic JSON reports on stdout (human summaries on stderr).
// Exit codes: 0 all checks pass, 1 verified counterexample/violation,
// 2 input or usage error.
#include "cubicalc/cubhomology.hpp"
#include "cubicalc/cubset.hpp"
#include "cubicalc/geomcurv.hpp"
#include "cubicalc/kan.hpp"
#include "cubicalc/levelset.hpp"
#include "cubicalc/specseq.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace cubicalc;

namespace {

constexpr const char* kVersion = "cubicalc 1.0.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Run {
    json report;
    int exit_code = 0;

    Run(const std::string& command, std::uint64_t seed) {
        report["command"] = command;
        report["tool_version"] = kVersion;
        report["seed"] = seed;
        report["inputs"] = json::array();
    }
    void add_input(const std::string& path, const std::string& contents) {
        report["inputs"].push_back({{"path", path}, {"digest", fnv1a(contents)}});
    }
    void verdict(bool ok, const std::string& pass_text, const std::string& fail_text) {
        report["verdict"] = ok ? pass_text : fail_text;
        if (!ok) exit_code = 1;
    }
    int finish() {
        std::cout << report.dump(2) << "\n";
        std::cerr << report["command"].get<std::string>() << ": " << report["verdict"].get<std::string>() << "\n";
        return exit_code;
    }
};

json point_json(const expr::Point& p) {
    json j;
    j["x"] = p.x;
    j["t"] = p.t;
    return j;
}

// ---- specseq input formats ---------------------------------------------------------

spseq::FilteredComplex parse_filtered_complex_json(const json& j) {
    spseq::FilteredComplex fc;
    fc.levels = j.at("levels").get<int>();
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    fc.total.dims = dims;
    fc.total.boundary.resize(dims.size());
    for (size_t n = 1; n < dims.size(); ++n) {
        zlin::IntMatrix b(dims[n - 1], dims[n]);
        auto key = std::to_string(n);
        if (j.at("boundary").contains(key)) {
            auto rows = j.at("boundary").at(key);
            if (int(rows.size()) != dims[n - 1]) throw std::invalid_argument("boundary " + key + " row count");
            for (int r = 0; r < dims[n - 1]; ++r)
                for (int c = 0; c < dims[n]; ++c) b(r, c) = rows.at(r).at(c).get<long>();
        }
        fc.total.boundary[n] = std::move(b);
    }
    fc.level = j.at("level").get<std::vector<std::vector<int>>>();
    if (auto bad = fc.validate()) throw std::invalid_argument("filtered complex: " + *bad);
    return fc;
}

spseq::GroupCouple parse_group_couple_json(const json& j) {
    spseq::GroupCouple c;
    c.pmax = j.at("window").at("pmax").get<int>();
    c.qmin = j.at("window").at("qmin").get<int>();
    c.qmax = j.at("window").at("qmax").get<int>();
    c.report_pmax = j.at("window").value("report_pmax", std::max(0, c.pmax - 1));
    c.report_qmax = j.at("window").value("report_qmax", std::max(0, c.qmax - 1));
    auto parse_matrix = [](const json& rows, int nrows, int ncols) {
        zlin::IntMatrix m(nrows, ncols);
        if (int(rows.size()) != nrows) throw std::invalid_argument("matrix row count mismatch");
        for (int r = 0; r < nrows; ++r)
            for (int cc = 0; cc < ncols; ++cc) m(r, cc) = rows.at(r).at(cc).get<long>();
        return m;
    };
    auto parse_nodes = [&](const char* key, std::map<spseq::PQ, zlin::FgAbelianGroup>& dst) {
        for (const auto& n : j.value(key, json::array())) {
            int ngens = n.at("ngens").get<int>();
            auto rel = n.value("relations", json::array());
            int nrel = int(rel.size() ? rel.at(0).size() : 0);
            zlin::IntMatrix r(ngens, nrel);
            if (!rel.empty()) r = parse_matrix(rel, ngens, nrel);
            dst[{n.at("p").get<int>(), n.at("q").get<int>()}] = zlin::FgAbelianGroup(ngens, r);
        }
    };
    parse_nodes("D", c.D);
    parse_nodes("E", c.E);
    auto dim_of = [&](const std::map<spseq::PQ, zlin::FgAbelianGroup>& nodes, int p, int q) {
        auto it = nodes.find({p, q});
        return it == nodes.end() ? 0 : it->second.ngens();
    };
    auto parse_maps = [&](const char* key, std::map<spseq::PQ, zlin::IntMatrix>& dst,
                          const std::function<std::pair<int, int>(int, int)>& shape) {
        for (const auto& m : j.value(key, json::array())) {
            int p = m.at("p").get<int>(), q = m.at("q").get<int>();
            auto [nrows, ncols] = shape(p, q);
            dst[{p, q}] = parse_matrix(m.at("matrix"), nrows, ncols);
        }
    };
    parse_maps("i", c.i, [&](int p, int q) { return std::make_pair(dim_of(c.D, p + 1, q - 1), dim_of(c.D, p, q)); });
    parse_maps("j", c.j, [&](int p, int q) { return std::make_pair(dim_of(c.E, p, q), dim_of(c.D, p, q)); });
    parse_maps("k", c.k, [&](int p, int q) { return std::make_pair(dim_of(c.D, p - 1, q), dim_of(c.E, p, q)); });
    return c;
}

spseq::TableCouple parse_table_couple_json(const json& j) {
    spseq::TableCouple c;
    c.pmax = j.at("window").at("pmax").get<int>();
    c.qmin = j.at("window").at("qmin").get<int>();
    c.qmax = j.at("window").at("qmax").get<int>();
    auto parse_node = [](const json& n) {
        spseq::TableNode node;
        std::string kind = n.at("kind").get<std::string>();
        node.kind = kind == "pointed_set"    ? spseq::NodeKind::PointedSet
                    : kind == "monoid"       ? spseq::NodeKind::Monoid
                    : kind == "abelian_group" ? spseq::NodeKind::AbelianGroup
                                              : spseq::NodeKind::Zero;
        node.names = n.at("names").get<std::vector<std::string>>();
        node.basepoint = n.value("basepoint", 0);
        if (n.contains("op")) node.op = n.at("op").get<std::vector<std::vector<int>>>();
        return node;
    };
    for (const auto& n : j.value("D", json::array())) c.D[{n.at("p").get<int>(), n.at("q").get<int>()}] = parse_node(n);
    for (const auto& n : j.value("E", json::array())) c.E[{n.at("p").get<int>(), n.at("q").get<int>()}] = parse_node(n);
    auto parse_maps = [&](const char* key, std::map<spseq::PQ, std::vector<int>>& dst) {
        for (const auto& m : j.value(key, json::array()))
            dst[{m.at("p").get<int>(), m.at("q").get<int>()}] = m.at("map").get<std::vector<int>>();
    };
    parse_maps("i", c.i);
    parse_maps("j", c.j);
    parse_maps("k", c.k);
    return c;
}

json check_report_json(const spseq::CheckReport& rep) {
    json j;
    j["ok"] = rep.ok();
    j["failures"] = rep.failures;
    j["notes"] = rep.notes;
    return j;
}

// ---- subcommand bodies ----------------------------------------------------------------

int cmd_validate(const std::string& input, int max_dim, std::uint64_t seed) {
    Run run("validate", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    cub::ParsedFile pf = cub::parse_cubical_file(text, max_dim);
    json sets = json::array();
    bool ok = true;
    for (auto& [name, set] : pf.sets) {
        auto bad = set.validate();
        ok = ok && bad.empty();
        sets.push_back({{"name", name},
                        {"generators", set.num_generators()},
                        {"violations", bad},
                        {"nondegenerate_counts", set.nondegenerate_counts()},
                        {"euler_characteristic", set.euler_characteristic()}});
    }
    json maps = json::array();
    for (size_t m = 0; m < pf.maps.size(); ++m) {
        cub::CubicalMap f = cub::build_map(pf, m);
        auto bad = cub::validate_map(f);
        ok = ok && bad.empty();
        maps.push_back({{"name", pf.maps[m].name}, {"violations", bad}});
    }
    run.report["sets"] = sets;
    run.report["maps"] = maps;
    run.verdict(ok, "valid", "violations found");
    return run.finish();
}

int cmd_kan(const std::string& input, int max_dim, bool contractible, std::uint64_t seed) {
    Run run(contractible ? "contractible" : "kan", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    cub::ParsedFile pf = cub::parse_cubical_file(text, std::max(max_dim + 1, 3));
    const cub::CubicalSet& x = pf.only_set();
    if (auto bad = x.validate(); !bad.empty()) throw std::invalid_argument("input set invalid: " + bad.front());
    kan::KanVerdict v = contractible ? kan::is_contractible(x, max_dim) : kan::is_kan(x, max_dim);
    run.report["up_to"] = v.checked_up_to;
    run.report["counterexample"] = v.counterexample;
    run.verdict(v.ok, (contractible ? std::string("contractible up to ") : std::string("kan up to ")) + std::to_string(max_dim),
                "counterexample found");
    return run.finish();
}

int cmd_fibration(const std::string& input, int max_dim, std::uint64_t seed) {
    Run run("fibration", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    cub::ParsedFile pf = cub::parse_cubical_file(text, std::max(max_dim + 1, 3));
    if (pf.maps.empty()) throw std::invalid_argument("no map declared in input");
    cub::CubicalMap f = cub::build_map(pf, 0);
    if (auto bad = cub::validate_map(f); !bad.empty()) throw std::invalid_argument("map invalid: " + bad.front());
    kan::KanVerdict v = kan::is_kan_fibration(f, max_dim);
    run.report["up_to"] = v.checked_up_to;
    run.report["counterexample"] = v.counterexample;
    run.verdict(v.ok, "kan fibration up to " + std::to_string(max_dim), "counterexample found");
    return run.finish();
}

int cmd_pi0(const std::string& input, int max_dim, std::uint64_t seed) {
    Run run("pi0", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    cub::ParsedFile pf = cub::parse_cubical_file(text, std::max(max_dim, 1));
    const cub::CubicalSet& x = pf.only_set();
    auto classes = kan::pi0(x);
    json cls = json::array();
    for (auto& c : classes) {
        json names = json::array();
        for (auto g : c) names.push_back(x.generator(g).name);
        cls.push_back(names);
    }
    run.report["classes"] = cls;
    run.report["count"] = classes.size();
    run.verdict(true, std::to_string(classes.size()) + " path components", "");
    return run.finish();
}

int cmd_pi(const std::string& input, const std::string& base, int n, int max_dim, std::uint64_t seed) {
    Run run("pi", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    int trunc = std::max(max_dim, n + 2);
    cub::ParsedFile pf = cub::parse_cubical_file(text, trunc);
    const cub::CubicalSet& x = pf.only_set();
    auto bp = x.find_generator(base);
    if (!bp) throw std::invalid_argument("basepoint generator not found: " + base);
    kan::KanVerdict cert = kan::is_kan(x, n + 1);
    run.report["kan_up_to"] = cert.checked_up_to;
    if (!cert.ok) {
        run.report["counterexample"] = cert.counterexample;
        run.verdict(false, "", "input is not Kan up to n+1");
        return run.finish();
    }
    kan::GroupTable g = kan::pi_n(x, *bp, n, cert);
    run.report["order"] = g.table.size();
    run.report["identity"] = g.identity;
    run.report["table"] = g.table.op;
    json reps = json::array();
    for (auto& r : g.reps) reps.push_back(x.cube_str(r));
    run.report["representatives"] = reps;
    run.verdict(true, "group of order " + std::to_string(g.table.size()), "");
    return run.finish();
}

int cmd_homology(const std::string& input, int max_dim, std::uint64_t seed) {
    Run run("homology", seed);
    std::string text = read_file(input);
    run.add_input(input, text);
    cub::ParsedFile pf = cub::parse_cubical_file(text, max_dim);
    const cub::CubicalSet& x = pf.only_set();
    if (auto bad = x.validate(); !bad.empty()) throw std::invalid_argument("input set invalid: " + bad.front());
    zlin::ChainComplex c = zlin::cubical_chain_complex(x);
    std::string why;
    if (!c.is_complex(&why)) throw std::invalid_argument(why);
    json groups = json::array();
    for (int d = 0; d <= c.top_dim(); ++d) groups.push_back(zlin::homology(c, d).describe());
    run.report["homology"] = groups;
    run.report["euler_characteristic"] = x.euler_characteristic();
    run.verdict(true, "computed", "");
    return run.finish();
}

int cmd_product(const std::string& input, const std::string& with, int max_dim, std::uint64_t seed) {
    Run run("product", seed);
    std::string ta = read_file(input), tb = read_file(with);
    run.add_input(input, ta);
    run.add_input(with, tb);
    cub::ParsedFile pa = cub::parse_cubical_file(ta, max_dim);
    cub::ParsedFile pb = cub::parse_cubical_file(tb, max_dim);
    cub::CubicalSet p = cub::reduced_product(pa.only_set(), pb.only_set(), max_dim);
    auto bad = p.validate();
    run.report["nondegenerate_counts"] = p.nondegenerate_counts();
    run.report["euler_characteristic"] = p.euler_characteristic();
    run.report["violations"] = bad;
    run.verdict(bad.empty(), "product computed", "product face tables invalid");
    return run.finish();
}

int cmd_specseq(const std::string& input, const std::string& couple_path, int pages, std::uint64_t seed) {
    Run run("specseq", seed);
    if (!input.empty()) {
        std::string text = read_file(input);
        run.add_input(input, text);
        spseq::FilteredComplex fc = parse_filtered_complex_json(json::parse(text));
        spseq::GroupCouple c = spseq::build_filtration_couple(fc);
        json checks;
        checks["validate"] = check_report_json(spseq::validate_group_couple(c));
        checks["differentials"] = check_report_json(spseq::group_differential_checks(c, pages));
        json steps = json::array();
        for (int r = 1; r <= pages; ++r) steps.push_back(check_report_json(spseq::group_homology_step_check(c, r)));
        checks["homology_steps"] = steps;
        checks["convergence"] = check_report_json(spseq::group_convergence_check(c));
        auto stab = spseq::detect_stabilization(c, c.r_cap());
        checks["stabilization_detected"] = stab.all_detected;
        run.report["checks"] = checks;
        json einf = json::array();
        for (int p = 0; p <= c.report_pmax; ++p)
            for (int q = 1; q <= c.report_qmax; ++q) {
                auto itb = stab.b_stable_at.find(spseq::PQ{p, q});
                if (itb == stab.b_stable_at.end()) continue;
                auto grp = zlin::subgroup_quotient(c.Z_r(p, q, p + 1), c.B_r(p, q, itb->second), c.nodeE(p, q).relations());
                if (!grp.is_trivial()) einf.push_back({{"p", p}, {"q", q}, {"group", grp.describe()}});
            }
        run.report["E_infinity"] = einf;
        bool ok = checks["validate"]["ok"].get<bool>() && checks["differentials"]["ok"].get<bool>() &&
                  checks["convergence"]["ok"].get<bool>() && stab.all_detected;
        for (const auto& s : checks["homology_steps"]) ok = ok && s["ok"].get<bool>();
        run.verdict(ok, "all spectral sequence checks pass", "spectral sequence check failed");
    } else {
        std::string text = read_file(couple_path);
        run.add_input(couple_path, text);
        json parsed = json::parse(text);
        std::string engine = parsed.value("engine", "tables");
        json checks;
        bool ok = false;
        if (engine == "groups") {
            spseq::GroupCouple c = parse_group_couple_json(parsed);
            checks["validate"] = check_report_json(spseq::validate_group_couple(c));
            checks["differentials"] = check_report_json(spseq::group_differential_checks(c, pages));
            json steps = json::array();
            for (int r = 1; r <= pages; ++r) steps.push_back(check_report_json(spseq::group_homology_step_check(c, r)));
            checks["homology_steps"] = steps;
            checks["convergence"] = check_report_json(spseq::group_convergence_check(c));
            ok = checks["validate"]["ok"].get<bool>() && checks["differentials"]["ok"].get<bool>() &&
                 checks["convergence"]["ok"].get<bool>();
            for (const auto& s : checks["homology_steps"]) ok = ok && s["ok"].get<bool>();
        } else {
            spseq::TableCouple c = parse_table_couple_json(parsed);
            checks["validate"] = check_report_json(spseq::validate_table_couple(c));
            checks["differentials"] = check_report_json(spseq::table_differential_checks(c, pages));
            ok = checks["validate"]["ok"].get<bool>() && checks["differentials"]["ok"].get<bool>();
        }
        run.report["engine"] = engine;
        run.report["checks"] = checks;
        run.verdict(ok, "all couple checks pass", "couple check failed");
    }
    return run.finish();
}

int cmd_curvature(const std::string& family, int samples, double tol, bool parallel, std::uint64_t seed_override,
                  bool seed_given) {
    std::string text = read_file(family);
    geom::MetricFamily fam = geom::parse_metric_family(text);
    if (seed_given) fam.seed = seed_override;
    Run run("curvature", fam.seed);
    run.add_input(family, text);
    geom::CurvatureReport rep = geom::curvature_check(fam, samples, parallel);
    run.report["samples"] = rep.samples;
    run.report["max_abs_err"] = rep.max_abs_err;
    run.report["max_rel_err"] = rep.max_rel_err;
    json rows = json::array();
    for (auto& r : rep.rows)
        rows.push_back({{"where", point_json(r.where)},
                        {"formula", r.formula},
                        {"oracle", r.oracle},
                        {"abs_err", r.abs_err},
                        {"rel_err", r.rel_err}});
    run.report["rows"] = rows;
    json issues = json::array();
    for (auto& i : rep.issues) issues.push_back({{"what", i.what}, {"where", point_json(i.where)}});
    run.report["issues"] = issues;
    run.verdict(rep.ok(tol), "formula matches oracle", "tolerance exceeded");
    return run.finish();
}

int cmd_suspension(const std::string& family, int samples, const std::string& mode, bool parallel,
                   std::uint64_t seed_override, bool seed_given) {
    std::string text = read_file(family);
    geom::MetricFamily fam = geom::parse_metric_family(text);
    if (seed_given) fam.seed = seed_override;
    Run run("suspension", fam.seed);
    run.add_input(family, text);
    geom::SlownessMode m = mode == "chapter7" ? geom::SlownessMode::Chapter7 : geom::SlownessMode::Eighth;
    geom::SuspensionReport rep = geom::suspension_check(fam, samples, m, parallel);
    run.report["mode"] = mode;
    run.report["samples"] = rep.samples;
    run.report["accepted"] = rep.accepted;
    run.report["rejected_nonpsc"] = rep.rejected_nonpsc;
    run.report["predicate_failures"] = rep.predicate_failures;
    run.report["max_identity_residual"] = rep.max_identity_residual;
    run.report["min_margin"] = rep.min_margin;
    json issues = json::array();
    for (auto& i : rep.issues) issues.push_back({{"what", i.what}, {"where", point_json(i.where)}});
    run.report["issues"] = issues;
    bool ok = rep.issues.empty() && rep.max_identity_residual < 1e-6;
    run.verdict(ok, "suspension identity and bound hold", "suspension check failed");
    return run.finish();
}

int cmd_rescale(const std::string& family, int samples, bool parallel, std::uint64_t seed_override, bool seed_given) {
    std::string text = read_file(family);
    geom::MetricFamily fam = geom::parse_metric_family(text);
    if (seed_given) fam.seed = seed_override;
    Run run("rescale", fam.seed);
    run.add_input(family, text);
    geom::RescaleReport rep = geom::rescaling_check(fam, {1, 2, 4, 8}, samples, parallel);
    run.report["r_values"] = rep.r_values;
    run.report["max_abs_scal"] = rep.max_abs_scal;
    run.report["max_identity_err"] = rep.max_identity_err;
    run.report["fitted_exponent"] = rep.fitted_exponent;
    run.report["f_time_only"] = rep.f_time_only;
    if (rep.f_time_only) run.report["slice_decay_exponent"] = rep.slice_decay_exponent;
    bool ok = rep.issues.empty() && rep.max_identity_err < 1e-5 && rep.fitted_exponent > -2.2 && rep.fitted_exponent < -1.8;
    run.verdict(ok, "rescaling identity and decay hold", "rescaling check failed");
    return run.finish();
}

int cmd_errterm(const std::string& family, int samples, bool parallel, std::uint64_t seed_override, bool seed_given) {
    std::string text = read_file(family);
    geom::MetricFamily fam = geom::parse_metric_family(text);
    if (seed_given) fam.seed = seed_override;
    Run run("errterm", fam.seed);
    run.add_input(family, text);
    geom::ErrorTermReport rep = geom::error_term_check(fam, samples, parallel);
    run.report["samples"] = rep.samples;
    run.report["accepted"] = rep.accepted;
    run.report["rejected"] = rep.rejected;
    run.report["max_ratio"] = rep.max_ratio;
    run.verdict(rep.issues.empty(), "error-term bound holds on accepted samples", "error-term bound violated");
    return run.finish();
}

int cmd_pregauge(int dim, int pairs, std::uint64_t seed, double tol) {
    Run run("pregauge", seed);
    geom::PregaugeReport rep = geom::pre_gauge_check(dim, pairs, seed, tol);
    run.report["dim"] = dim;
    run.report["pairs"] = rep.pairs;
    run.report["max_residual"] = rep.max_residual;
    run.report["failures"] = rep.failures;
    run.verdict(rep.failures.empty(), "pre-gauge postconditions hold", "postcondition violated");
    return run.finish();
}

int cmd_angle(const std::string& profile, double big_r, double radius, int samples, std::uint64_t seed, double tol) {
    Run run("angle", seed);
    geom::KappaProfile prof = profile == "circle"   ? geom::kappa_circle(radius)
                              : profile == "square" ? geom::kappa_smoothed_square()
                                                    : geom::kappa_straight();
    geom::AngleReport rep = geom::angle_chart_check(prof, big_r, samples, seed);
    run.report["profile"] = prof.name;
    run.report["R"] = big_r;
    run.report["samples"] = rep.samples;
    run.report["max_entry_err"] = rep.max_entry_err;
    json issues = json::array();
    for (auto& i : rep.issues) issues.push_back(i.what);
    run.report["issues"] = issues;
    run.verdict(rep.issues.empty() && rep.max_entry_err < tol, "pullback matches the closed form", "entry error exceeds tolerance");
    return run.finish();
}

int cmd_dice(int n, double rho, int samples, std::uint64_t seed) {
    Run run("dice", seed);
    lvl::DiceConfig cfg;
    cfg.n = n;
    cfg.rho = rho;
    lvl::ScanReport rep = lvl::property_scan(cfg, samples, seed);
    run.report["n"] = n;
    run.report["rho"] = rho;
    run.report["located"] = rep.located;
    run.report["gradient_zero"] = rep.gradient_zero;
    run.report["support_violations"] = rep.support_violations;
    run.report["cuboid_violations"] = rep.cuboid_violations;
    run.report["cuboid_level_hits"] = rep.cuboid_level_hits;
    run.report["dice_critical_bad"] = rep.dice_critical_bad;
    run.report["issues"] = rep.issues;
    run.verdict(rep.ok(), "all scanned properties hold", "scan found violations");
    return run.finish();
}

int cmd_flow(int n, double rho, int trajectories, double step, std::uint64_t seed) {
    Run run("flow", seed);
    lvl::DiceConfig cfg;
    cfg.n = n;
    cfg.rho = rho;
    lvl::FlowReport rep = lvl::flow_decomposition_check(cfg, trajectories, step, seed);
    run.report["n"] = n;
    run.report["rho"] = rho;
    run.report["trajectories"] = rep.trajectories;
    run.report["max_level_err"] = rep.max_level_err;
    run.report["max_orthogonality"] = rep.max_orthogonality;
    run.report["max_dt_coeff_err"] = rep.max_dt_coeff_err;
    run.report["max_farfield_err"] = rep.max_farfield_err;
    run.report["farfield_trajectories"] = rep.farfield_trajectories;
    run.report["issues"] = rep.issues;
    bool ok = rep.issues.empty() && rep.max_level_err < 1e-5 && rep.max_orthogonality < 1e-4 &&
              rep.max_dt_coeff_err < 1e-4 && rep.max_farfield_err < 1e-8;
    run.verdict(ok, "flow decomposition verified", "flow check failed");
    return run.finish();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cubical set calculus, spectral sequences, and curvature verification"};
    app.require_subcommand(1);

    std::string input, with, family, couple, base = "v", mode = "eighth", profile = "circle", parallel = "off";
    int max_dim = 3, nval = 2, pages = 4, samples = 100;
    double tol = 1e-5, rho = 21.0, step = 0.005, big_r = 2.0, radius = 3.0;
    std::uint64_t seed = 1;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed)->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--parallel", parallel)->check(CLI::IsMember({"on", "off"}));
    };

    auto* validate = app.add_subcommand("validate", "check cubical identities of a set file");
    validate->add_option("--input", input)->required();
    validate->add_option("--max-dim", max_dim);
    add_common(validate);

    auto* kan_cmd = app.add_subcommand("kan", "horn-filling verdict");
    kan_cmd->add_option("--input", input)->required();
    kan_cmd->add_option("--max-dim", max_dim);
    add_common(kan_cmd);

    auto* contr = app.add_subcommand("contractible", "sphere-filling verdict");
    contr->add_option("--input", input)->required();
    contr->add_option("--max-dim", max_dim);
    add_common(contr);

    auto* fib = app.add_subcommand("fibration", "horn-lifting verdict for a map");
    fib->add_option("--input", input)->required();
    fib->add_option("--max-dim", max_dim);
    add_common(fib);

    auto* pi0_cmd = app.add_subcommand("pi0", "path components");
    pi0_cmd->add_option("--input", input)->required();
    pi0_cmd->add_option("--max-dim", max_dim);
    add_common(pi0_cmd);

    auto* pi_cmd = app.add_subcommand("pi", "homotopy group table at a basepoint");
    pi_cmd->add_option("--input", input)->required();
    pi_cmd->add_option("--base", base);
    pi_cmd->add_option("--n", nval);
    pi_cmd->add_option("--max-dim", max_dim);
    add_common(pi_cmd);

    auto* hom = app.add_subcommand("homology", "integral homology of the normalized complex");
    hom->add_option("--input", input)->required();
    hom->add_option("--max-dim", max_dim);
    add_common(hom);

    auto* prod = app.add_subcommand("product", "reduced product of two sets");
    prod->add_option("--input", input)->required();
    prod->add_option("--with", with)->required();
    prod->add_option("--max-dim", max_dim);
    add_common(prod);

    auto* ss = app.add_subcommand("specseq", "exact-couple spectral sequence checks");
    ss->add_option("--input", input);
    ss->add_option("--couple", couple);
    ss->add_option("--pages", pages);
    add_common(ss);

    auto* curv = app.add_subcommand("curvature", "warped formula vs finite-difference oracle");
    curv->add_option("--family", family)->required();
    curv->add_option("--samples", samples);
    curv->add_option("--tol", tol);
    add_common(curv);

    auto* susp = app.add_subcommand("suspension", "suspension identity and psc bound");
    susp->add_option("--family", family)->required();
    susp->add_option("--samples", samples);
    susp->add_option("--mode", mode)->check(CLI::IsMember({"eighth", "chapter7"}));
    add_common(susp);

    auto* resc = app.add_subcommand("rescale", "rescaling identity and decay");
    resc->add_option("--family", family)->required();
    resc->add_option("--samples", samples);
    add_common(resc);

    auto* errt = app.add_subcommand("errterm", "error-term operator norm bound");
    errt->add_option("--family", family)->required();
    errt->add_option("--samples", samples);
    add_common(errt);

    auto* preg = app.add_subcommand("pregauge", "pre-gauge postconditions on random pairs");
    preg->add_option("--n", nval);
    preg->add_option("--samples", samples);
    preg->add_option("--tol", tol);
    add_common(preg);

    auto* ang = app.add_subcommand("angle", "angle-rotation pullback chart");
    ang->add_option("--profile", profile)->check(CLI::IsMember({"straight", "circle", "square"}));
    ang->add_option("--R", big_r);
    ang->add_option("--radius", radius);
    ang->add_option("--samples", samples);
    ang->add_option("--tol", tol);
    add_common(ang);

    auto* dice_cmd = app.add_subcommand("dice", "sampled dice-function properties");
    dice_cmd->add_option("--n", nval);
    dice_cmd->add_option("--rho", rho);
    dice_cmd->add_option("--samples", samples);
    add_common(dice_cmd);

    auto* flow_cmd = app.add_subcommand("flow", "gradient-flow decomposition");
    flow_cmd->add_option("--n", nval);
    flow_cmd->add_option("--rho", rho);
    flow_cmd->add_option("--samples", samples);
    flow_cmd->add_option("--step", step);
    add_common(flow_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    bool par = parallel == "on";
    try {
        if (validate->parsed()) return cmd_validate(input, max_dim, seed);
        if (kan_cmd->parsed()) return cmd_kan(input, max_dim, false, seed);
        if (contr->parsed()) return cmd_kan(input, max_dim, true, seed);
        if (fib->parsed()) return cmd_fibration(input, max_dim, seed);
        if (pi0_cmd->parsed()) return cmd_pi0(input, max_dim, seed);
        if (pi_cmd->parsed()) return cmd_pi(input, base, nval, max_dim, seed);
        if (hom->parsed()) return cmd_homology(input, max_dim, seed);
        if (prod->parsed()) return cmd_product(input, with, max_dim, seed);
        if (ss->parsed()) {
            if (input.empty() == couple.empty())
                throw std::invalid_argument("specseq needs exactly one of --input (filtered complex) or --couple");
            return cmd_specseq(input, couple, pages, seed);
        }
        if (curv->parsed()) return cmd_curvature(family, samples, tol, par, seed, seed_given);
        if (susp->parsed()) return cmd_suspension(family, samples, mode, par, seed, seed_given);
        if (resc->parsed()) return cmd_rescale(family, samples, par, seed, seed_given);
        if (errt->parsed()) return cmd_errterm(family, samples, par, seed, seed_given);
        if (preg->parsed()) return cmd_pregauge(nval, samples, seed, tol);
        if (ang->parsed()) return cmd_angle(profile, big_r, radius, samples, seed, tol);
        if (dice_cmd->parsed()) return cmd_dice(nval, rho, samples, seed);
        if (flow_cmd->parsed()) return cmd_flow(nval, rho, samples, step, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
