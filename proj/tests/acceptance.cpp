// Acceptance suite: every criterion prints one PASS/FAIL line with its
// runtime; the process exits nonzero if any criterion fails.
#include "cubicalc/boxcat.hpp"
#include "cubicalc/cubhomology.hpp"
#include "cubicalc/cubset.hpp"
#include "cubicalc/geomcurv.hpp"
#include "cubicalc/kan.hpp"
#include "cubicalc/levelset.hpp"
#include "cubicalc/specseq.hpp"

#include "fixture_util.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace cubicalc;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

template <class F>
void criterion(int index, const std::string& label, double budget_seconds, F&& body) {
    g_notes.clear();
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
        ok = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_budget = secs < budget_seconds;
    std::printf("%s criterion %d: %s (%.2fs, budget %.0fs)\n", ok && in_budget ? "PASS" : "FAIL", index, label.c_str(),
                secs, budget_seconds);
    if (!error.empty()) std::printf("      exception: %s\n", error.c_str());
    for (const auto& n : g_notes) std::printf("      %s\n", n.c_str());
    if (!(ok && in_budget)) ++g_failures;
}

bool expect(bool cond, const std::string& what) {
    if (!cond) note("failed: " + what);
    return cond;
}

// ---- criterion 1: box and cubical identities -------------------------------------

bool criterion1() {
    bool ok = true;
    for (int n = 0; n <= 4; ++n)
        for (int m = 0; m <= 4; ++m)
            ok &= expect(box::enumerate_hom(n, m).size() == box::hom_count_closed_form(n, m),
                         "hom count (" + std::to_string(n) + "," + std::to_string(m) + ")");
    for (int n = 0; n <= 4; ++n) ok &= expect(cub::standard_cube(n).validate().empty(), "cube identities n=" + std::to_string(n));
    for (int n = 1; n <= 4; ++n)
        ok &= expect(cub::boundary_sphere(n).validate().empty(), "sphere identities n=" + std::to_string(n));
    for (int n = 1; n <= 4; ++n)
        for (int i = 1; i <= n; ++i)
            for (int sign : {-1, 1})
                ok &= expect(cub::horn_complex(n, i, sign).validate().empty(), "horn identities n=" + std::to_string(n));

    std::mt19937 rng(1234);
    for (int t = 0; t < 1000; ++t) {
        int n = std::uniform_int_distribution<int>(0, 4)(rng);
        int m = std::uniform_int_distribution<int>(0, 4)(rng);
        int k = std::uniform_int_distribution<int>(0, 4)(rng);
        auto hn = box::enumerate_hom(n, m);
        auto hm = box::enumerate_hom(m, k);
        const auto& f = hn[std::uniform_int_distribution<size_t>(0, hn.size() - 1)(rng)];
        const auto& g = hm[std::uniform_int_distribution<size_t>(0, hm.size() - 1)(rng)];
        box::BoxMorphism gf = box::compose(g, f);
        std::vector<double> x(n);
        for (double& v : x) v = std::uniform_real_distribution<double>(-1, 1)(rng);
        ok &= expect(box::apply_geometric(gf, x) == box::apply_geometric(g, box::apply_geometric(f, x)),
                     "functoriality of a random composite");
        auto w = box::to_word(gf);
        ok &= expect(box::normalize_word(gf.dom_dim, w) == gf, "normal form idempotent");
    }
    return ok;
}

// ---- criterion 2: reduced product ------------------------------------------------

bool criterion2() {
    bool ok = true;
    for (int m = 0; m <= 4; ++m)
        for (int n = 0; m + n <= 4; ++n) {
            auto bad = cub::check_cube_product_iso(m, n);
            ok &= expect(bad.empty(), "cube product iso " + std::to_string(m) + "+" + std::to_string(n));
        }
    return ok;
}

// ---- criterion 3: homology --------------------------------------------------------

bool criterion3() {
    bool ok = true;
    for (int n = 0; n <= 4; ++n) {
        cub::CubicalSet q = cub::standard_cube(n);
        zlin::ChainComplex c = zlin::cubical_chain_complex(q);
        std::string why;
        ok &= expect(c.is_complex(&why), "d o d = 0 on the cube: " + why);
        ok &= expect(zlin::homology(c, 0).describe() == "Z", "H_0(cube)");
        for (int d = 1; d <= c.top_dim(); ++d) ok &= expect(zlin::homology(c, d).is_trivial(), "H_+(cube)");
        ok &= expect(zlin::euler_characteristic_from_homology(c) == q.euler_characteristic(), "chi(cube)");
    }
    for (int n = 1; n <= 4; ++n) {
        cub::CubicalSet s = cub::boundary_sphere(n);
        zlin::ChainComplex c = zlin::cubical_chain_complex(s);
        std::string why;
        ok &= expect(c.is_complex(&why), "d o d = 0 on the sphere: " + why);
        if (n == 1) {
            ok &= expect(zlin::homology(c, 0).describe() == "Z^2", "H_0(two points)");
        } else {
            ok &= expect(zlin::homology(c, 0).describe() == "Z", "H_0(sphere)");
            for (int d = 1; d < n - 1; ++d) ok &= expect(zlin::homology(c, d).is_trivial(), "middle homology of sphere");
            ok &= expect(zlin::homology(c, n - 1).describe() == "Z", "top homology of sphere");
        }
        ok &= expect(zlin::euler_characteristic_from_homology(c) == s.euler_characteristic(), "chi(sphere)");
    }
    cub::CubicalSet s2 = cub::boundary_sphere(2);
    cub::CubicalSet torus = cub::reduced_product(s2, s2, 4);
    zlin::ChainComplex tc = zlin::cubical_chain_complex(torus);
    std::string why;
    ok &= expect(tc.is_complex(&why), "d o d = 0 on the torus");
    ok &= expect(zlin::homology(tc, 0).describe() == "Z", "H_0(torus)");
    ok &= expect(zlin::homology(tc, 1).describe() == "Z^2", "H_1(torus)");
    ok &= expect(zlin::homology(tc, 2).describe() == "Z", "H_2(torus)");
    ok &= expect(zlin::euler_characteristic_from_homology(tc) == torus.euler_characteristic(), "chi(torus)");
    return ok;
}

// ---- criterion 4: the Kan engine ---------------------------------------------------

bool criterion4() {
    bool ok = true;
    cub::CubicalSet two(4);
    two.add_generator("a", 0);
    two.add_generator("b", 0);
    ok &= expect(kan::is_kan(two, 3).ok, "two-point set Kan up to 3");

    cub::CubicalSet circle(4);
    {
        cub::GenId v = circle.add_generator("v", 0);
        cub::GenId e = circle.add_generator("e", 1);
        circle.set_face(e, 1, -1, cub::Cube{v, {}});
        circle.set_face(e, 1, +1, cub::Cube{v, {}});
    }
    kan::KanVerdict cv = kan::is_kan(circle, 2);
    ok &= expect(!cv.ok && cv.counterexample.find("n=2") != std::string::npos, "circle refuted with a dim-2 horn");
    note("circle counterexample: " + cv.counterexample);

    cub::CubicalSet pt(4);
    pt.add_generator("v", 0);
    for (const cub::CubicalSet* x : {&two, &circle, &pt}) {
        kan::KanVerdict contractible = kan::is_contractible(*x, 2);
        if (contractible.ok) ok &= expect(kan::is_kan(*x, 2).ok, "contractible implies Kan");
    }
    ok &= expect(kan::is_contractible(pt, 3).ok, "point is combinatorially contractible");

    tab::MonoidTable z2 = tab::MonoidTable::cyclic(2);
    cub::CubicalSet bg = kan::build_BG(z2, 2);
    ok &= expect(bg.validate().empty(), "B(Z/2) identities");
    kan::KanVerdict cert = kan::is_kan(bg, 2);
    ok &= expect(cert.ok, "B(Z/2) is Kan up to 2");
    kan::GroupTable pi1 = kan::pi_n(bg, 0, 1, cert);
    ok &= expect(pi1.table.size() == 2, "pi_1(B(Z/2)) has two elements");
    ok &= expect(!pi1.table.check_monoid().has_value(), "group axioms verified");
    ok &= expect(tab::monoid_isomorphic(pi1.table, z2), "pi_1 table is Z/2");
    kan::GroupTable pi1r = kan::pi_n(bg, 0, 1, cert, true);
    ok &= expect(tab::monoid_isomorphic(pi1r.table, pi1.table), "stable under reversed enumeration order");
    return ok;
}

// ---- criterion 5: the spectral sequence ---------------------------------------------

bool criterion5() {
    bool ok = true;
    std::mt19937 rng(20240);
    for (int t = 0; t < 20; ++t) {
        spseq::FilteredComplex fc = testutil::random_filtered_complex(rng, 3, 8, 4);
        spseq::GroupCouple c = spseq::build_filtration_couple(fc);
        auto val = spseq::validate_group_couple(c);
        for (auto& m : val.failures) note(m);
        ok &= expect(val.ok(), "validate_couple on random complex " + std::to_string(t));
        auto dchecks = spseq::group_differential_checks(c, 4);
        for (auto& m : dchecks.failures) note(m);
        ok &= expect(dchecks.ok(), "differential identities on complex " + std::to_string(t));
        for (int r = 1; r <= 4; ++r) {
            auto h = spseq::group_homology_step_check(c, r);
            for (auto& m : h.failures) note(m);
            ok &= expect(h.ok(), "homology step r=" + std::to_string(r));
        }
        auto conv = spseq::group_convergence_check(c);
        for (auto& m : conv.failures) note(m);
        ok &= expect(conv.ok(), "convergence on complex " + std::to_string(t));
    }
    // The monoid homomorphism theorem by exhaustive congruence closure.
    tab::MonoidTable mx = tab::MonoidTable::max_monoid(2);
    tab::MonoidTable m = tab::MonoidTable::direct_product(tab::MonoidTable::cyclic(2), mx);
    auto rep = spseq::monoid_hom_theorem_check(mx, m, tab::MonoidTable::cyclic(2), {0, 1}, {0, 0, 1, 1});
    for (auto& s : rep.failures) note(s);
    ok &= expect(rep.ok(), "monoid homomorphism theorem fixture");
    return ok;
}

// ---- criterion 6: curvature ----------------------------------------------------------

std::string fixture_path(const std::string& name) {
    return std::string(CUBICALC_FIXTURES) + "/" + name;
}

geom::MetricFamily load_family(const std::string& name) {
    std::ifstream in(fixture_path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return geom::parse_metric_family(ss.str());
}

bool criterion6() {
    bool ok = true;
    for (const char* name : {"flat.met", "hyperbolic.met", "sphere_family.met"}) {
        geom::MetricFamily fam = load_family(name);
        geom::CurvatureReport rep = geom::curvature_check(fam, 100);
        ok &= expect(rep.issues.empty() && rep.max_rel_err < 1e-5,
                     std::string(name) + " formula vs oracle (max rel err " + std::to_string(rep.max_rel_err) + ")");
    }
    {
        geom::MetricFamily fam = load_family("hyperbolic.met");
        geom::RescaleReport rep = geom::rescaling_check(fam, {1, 2, 4, 8}, 40);
        ok &= expect(rep.max_identity_err < 1e-5, "rescaling identity");
        ok &= expect(rep.fitted_exponent > -2.2 && rep.fitted_exponent < -1.8,
                     "decay exponent " + std::to_string(rep.fitted_exponent));
        double ratio = rep.max_abs_scal[3] / rep.max_abs_scal[2];
        ok &= expect(ratio > 0.24 && ratio < 0.26, "decay ratio R=8/R=4 in [0.24, 0.26]");
    }
    {
        geom::MetricFamily fam = load_family("sphere_family.met");
        geom::SuspensionReport rep = geom::suspension_check(fam, 100, geom::SlownessMode::Eighth);
        ok &= expect(rep.max_identity_residual < 1e-6, "suspension identity residual");
        ok &= expect(rep.predicate_failures == 0 && rep.rejected_nonpsc == 0, "slowness predicate holds");
        ok &= expect(rep.issues.empty() && rep.min_margin > 0, "scal(susp g) > 7/8 scal(g)");
        geom::ErrorTermReport err = geom::error_term_check(fam, 100);
        ok &= expect(err.accepted == 100 && err.issues.empty() && err.max_ratio < 1.0, "error-term bound");
    }
    {
        geom::PregaugeReport rep = geom::pre_gauge_check(4, 200, 77, 1e-9);
        ok &= expect(rep.failures.empty(), "pre-gauge postconditions over 200 pairs");
    }
    {
        geom::AngleReport straight = geom::angle_chart_check(geom::kappa_straight(), 1.0, 60, 3);
        ok &= expect(straight.max_entry_err < 1e-9, "straight-line chart exact");
        geom::AngleReport circle = geom::angle_chart_check(geom::kappa_circle(3.0), 2.0, 80, 4);
        ok &= expect(circle.issues.empty() && circle.max_entry_err < 1e-5, "polar-coordinate circle case");
        geom::AngleReport square = geom::angle_chart_check(geom::kappa_smoothed_square(), 4.0, 80, 5);
        ok &= expect(square.issues.empty() && square.max_entry_err < 1e-5, "smoothed-square profile");
    }
    return ok;
}

// ---- criterion 7: dice and flow --------------------------------------------------------

bool criterion7() {
    bool ok = true;
    for (int n : {2, 3}) {
        lvl::DiceConfig cfg;
        cfg.n = n;
        cfg.rho = 21.0;
        lvl::ScanReport rep = lvl::property_scan(cfg, 10000, 2026);
        for (auto& m : rep.issues) note(m);
        ok &= expect(rep.ok(), "property scan n=" + std::to_string(n));
        ok &= expect(rep.located > 1000, "enough level-set points located (n=" + std::to_string(n) + ")");
    }
    lvl::DiceConfig cfg;
    cfg.n = 2;
    cfg.rho = 21.0;
    lvl::FlowReport rep = lvl::flow_decomposition_check(cfg, 50, 0.005, 31);
    for (auto& m : rep.issues) note(m);
    ok &= expect(rep.trajectories == 50, "50 trajectories integrated");
    ok &= expect(rep.issues.empty(), "no trajectory left the domain");
    ok &= expect(rep.max_level_err < 1e-5, "level preservation " + std::to_string(rep.max_level_err));
    ok &= expect(rep.max_orthogonality < 1e-4, "orthogonality " + std::to_string(rep.max_orthogonality));
    ok &= expect(rep.max_dt_coeff_err < 1e-4, "dt^2 coefficient " + std::to_string(rep.max_dt_coeff_err));
    ok &= expect(rep.farfield_trajectories > 0 && rep.max_farfield_err < 1e-8,
                 "far-field translation " + std::to_string(rep.max_farfield_err));
    return ok;
}

// ---- criterion 8: CLI determinism --------------------------------------------------------

bool run_to_file(const std::string& cmd, const std::string& out) {
    std::string full = std::string(CUBICALC_CLI) + " " + cmd + " > " + out + " 2>/dev/null";
    int rc = std::system(full.c_str());
    return rc != -1;
}

bool files_equal(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    std::ostringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    return sa.str() == sb.str() && !sa.str().empty();
}

bool criterion8() {
    bool ok = true;
    std::string fx = CUBICALC_FIXTURES;
    std::vector<std::pair<std::string, std::string>> cases = {
        {"validate", "validate --input " + fx + "/boundary_square.cub"},
        {"kan", "kan --input " + fx + "/two_points.cub --max-dim 3"},
        {"contractible", "contractible --input " + fx + "/two_points.cub --max-dim 2"},
        {"fibration", "fibration --input " + fx + "/identity_fibration.cub --max-dim 2"},
        {"pi0", "pi0 --input " + fx + "/two_points.cub"},
        {"pi", "pi --input " + fx + "/circle.cub --base v --n 1"},
        {"pi-bg", "pi --input " + fx + "/bg_z2.cub --base g0 --n 1"},
        {"homology", "homology --input " + fx + "/boundary_square.cub"},
        {"product", "product --input " + fx + "/boundary_square.cub --with " + fx + "/boundary_square.cub --max-dim 4"},
        {"specseq", "specseq --input " + fx + "/skeletal.json"},
        {"specseq-couple", "specseq --couple " + fx + "/z2_couple.json"},
        {"specseq-groups", "specseq --couple " + fx + "/group_couple.json"},
        {"curvature", "curvature --family " + fx + "/warped_mixed.met --samples 40"},
        {"suspension", "suspension --family " + fx + "/sphere_family.met --samples 40"},
        {"rescale", "rescale --family " + fx + "/hyperbolic.met --samples 15"},
        {"errterm", "errterm --family " + fx + "/sphere_family.met --samples 40"},
        {"pregauge", "pregauge --n 3 --samples 50 --seed 5 --tol 1e-9"},
        {"angle", "angle --profile circle --R 2 --radius 3 --samples 40 --seed 5"},
        {"dice", "dice --n 2 --rho 21 --samples 400 --seed 9"},
        {"flow", "flow --n 2 --rho 21 --samples 6 --step 0.005 --seed 9"},
    };
    for (auto& [name, cmd] : cases) {
        std::string a = "/tmp/cubicalc_det_a.json", b = "/tmp/cubicalc_det_b.json", c = "/tmp/cubicalc_det_c.json";
        ok &= expect(run_to_file(cmd, a), name + " run 1");
        ok &= expect(run_to_file(cmd, b), name + " run 2");
        ok &= expect(files_equal(a, b), name + " byte-reproducible");
        // Sample-driven commands must also agree across parallel modes.
        if (cmd.find("--family") != std::string::npos || name == "dice" || name == "flow") {
            ok &= expect(run_to_file(cmd + " --parallel on", c), name + " parallel run");
            ok &= expect(files_equal(a, c), name + " parallel-independent");
        }
    }
    return ok;
}

}  // namespace

int main() {
    criterion(1, "box and cubical identities, hom counts", 10, criterion1);
    criterion(2, "reduced product isomorphism", 5, criterion2);
    criterion(3, "homology fixtures", 10, criterion3);
    criterion(4, "Kan engine and pi_1(B(Z/2))", 60, criterion4);
    criterion(5, "exact-couple spectral sequence", 60, criterion5);
    criterion(6, "curvature, suspension, pre-gauge, angle chart", 120, criterion6);
    criterion(7, "dice properties and flow decomposition", 120, criterion7);
    criterion(8, "CLI determinism", 60, criterion8);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria pass\n");
    return 0;
}
