#include "cubicalc/geomcurv.hpp"

#include <doctest.h>

#include <random>

using namespace cubicalc;
using namespace cubicalc::geom;

namespace {

MetricFamily flat_family() {
    return parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "1"
h[2][2] = "1"
f = "1"
domain x1 in [-1, 1]
domain x2 in [-1, 1]
domain t1 in [-1, 1]
margin = 0.1
seed = 11
)fam");
}

// h(t) = e^{2t} (dx1^2 + dx2^2), f = 1: hyperbolic 3-space, scal = -6.
MetricFamily hyperbolic_family() {
    return parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "exp(2*t1)"
h[2][2] = "exp(2*t1)"
f = "1"
domain x1 in [-1, 1]
domain x2 in [-1, 1]
domain t1 in [-0.5, 0.5]
margin = 0.1
seed = 12
)fam");
}

// Slowly breathing round 2-sphere (stereographic chart), f = 1.
MetricFamily sphere_family() {
    return parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "(1 + 0.01*sin(t1))^2 * 4/(1 + x1^2 + x2^2)^2"
h[2][2] = "(1 + 0.01*sin(t1))^2 * 4/(1 + x1^2 + x2^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [0, 3]
margin = 0.05
seed = 13
)fam");
}

// A deliberately messy family: x-dependent f and off-diagonal slice entries.
MetricFamily messy_family() {
    return parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "1 + 0.3*x2^2 + 0.1*sin(t1)"
h[1][2] = "0.2*x1*x2"
h[2][2] = "1 + 0.25*x1^2 + 0.1*cos(t1)*x2^2"
f = "1 + 0.2*x1^2 + 0.1*t1^2"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [-0.8, 0.8]
margin = 0.1
seed = 14
)fam");
}

// g(t) = t^2 * round metric on S^1: the suspension is the flat annulus.
MetricFamily annulus_family() {
    return parse_metric_family(R"fam(
d = 1
n = 1
h[1][1] = "t1^2 * 4/(1 + x1^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain t1 in [1, 2]
margin = 0.1
seed = 15
)fam");
}

}  // namespace

TEST_CASE("euclidean metric has zero curvature through both pipelines") {
    MetricFamily fam = flat_family();
    for (int s = 0; s < 10; ++s) {
        Point p = fam.sample(s);
        CHECK(std::abs(scal_direct(fam.total_chart(), p)) < 1e-7);
        CHECK(std::abs(scal_chart_dual(fam.total_chart(), p)) < 1e-12);
        CHECK(std::abs(scal_warped(fam, p)) < 1e-12);
    }
}

TEST_CASE("round sphere chart: scal = 2/r^2 from the finite-difference oracle") {
    for (double r : {1.0, 2.0}) {
        ChartMetric m;
        m.dim = 2;
        std::string ee = "4*" + std::to_string(r * r * r * r) + "/(" + std::to_string(r * r) + " + x1^2 + x2^2)^2";
        m.entry = {{expr::parse(ee), expr::make_num(0.0)}, {expr::make_num(0.0), expr::parse(ee)}};
        m.vars = {{'x', 1}, {'x', 2}};
        Point p;
        p.x = {0.3, -0.2};
        CHECK(scal_direct(m, p) == doctest::Approx(2.0 / (r * r)).epsilon(1e-5));
        CHECK(scal_chart_dual(m, p) == doctest::Approx(2.0 / (r * r)).epsilon(1e-10));
    }
}

TEST_CASE("hyperbolic family: scal = -6 and formula matches oracle") {
    MetricFamily fam = hyperbolic_family();
    for (int s = 0; s < 10; ++s) {
        Point p = fam.sample(s);
        CHECK(scal_warped(fam, p) == doctest::Approx(-6.0).epsilon(1e-9));
    }
    CurvatureReport rep = curvature_check(fam, 40);
    CHECK(rep.issues.empty());
    CHECK(rep.max_rel_err < 1e-5);
}

TEST_CASE("formula vs oracle on all fixtures, including x-dependent warping") {
    for (auto make : {&flat_family, &hyperbolic_family, &sphere_family, &messy_family}) {
        MetricFamily fam = make();
        CurvatureReport rep = curvature_check(fam, 60);
        CHECK(rep.issues.empty());
        CHECK(rep.max_rel_err < 1e-5);
    }
}

TEST_CASE("parallel evaluation is byte-identical") {
    MetricFamily fam = messy_family();
    CurvatureReport a = curvature_check(fam, 32, false);
    CurvatureReport b = curvature_check(fam, 32, true);
    CHECK(a.max_abs_err == b.max_abs_err);
    CHECK(a.max_rel_err == b.max_rel_err);
}

TEST_CASE("warped component identities against the coordinate oracle") {
    MetricFamily fam = messy_family();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> comp(-1.0, 1.0);
    for (int s = 0; s < 12; ++s) {
        Point p = fam.sample(100 + s);
        Eigen::VectorXd X(2), Y(2), U(2), V(2);
        for (auto* v : {&X, &Y, &U, &V})
            for (int a = 0; a < 2; ++a) (*v)(a) = comp(rng);
        WarpedComponents wc = warped_components(fam, p, X, Y, U, V);
        CHECK(std::abs(wc.weingarten - wc.weingarten_oracle) < 2e-6 * (1 + std::abs(wc.weingarten)));
        CHECK(std::abs(wc.curv_I - wc.curv_I_oracle) < 2e-5 * (1 + std::abs(wc.curv_I)));
        CHECK(std::abs(wc.curv_II - wc.curv_II_oracle) < 2e-5 * (1 + std::abs(wc.curv_II)));
        CHECK(std::abs(wc.curv_III - wc.curv_III_oracle) < 2e-5 * (1 + std::abs(wc.curv_III)));
    }
}

TEST_CASE("rescaling: exact identity, pointwise -6/R^2, and decay law") {
    MetricFamily fam = hyperbolic_family();
    RescaleReport rep = rescaling_check(fam, {1, 2, 4, 8}, 25);
    CHECK(rep.issues.empty());
    CHECK(rep.max_identity_err < 1e-9);
    CHECK(rep.fitted_exponent == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(rep.max_abs_scal[3] / rep.max_abs_scal[2] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rep.f_time_only);
    CHECK(rep.slice_decay_exponent > -2.2);
    CHECK(rep.slice_decay_exponent < -1.8);

    // Flat family: every rescaling is flat.
    RescaleReport flat = rescaling_check(flat_family(), {1, 2, 4, 8}, 10);
    for (double v : flat.max_abs_scal) CHECK(v < 1e-10);

    // Generic fixture with an x-dependent slice: identity still exact.
    RescaleReport messy = rescaling_check(messy_family(), {1, 2, 4, 8}, 15);
    CHECK(messy.max_identity_err < 1e-9);
    CHECK(messy.fitted_exponent > -2.2);
    CHECK(messy.fitted_exponent < -1.8);
}

TEST_CASE("suspension: constant family is exact and predicate trivial") {
    MetricFamily fam = parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "4/(1 + x1^2 + x2^2)^2"
h[2][2] = "4/(1 + x1^2 + x2^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [0, 1]
margin = 0.1
seed = 16
)fam");
    SuspensionReport rep = suspension_check(fam, 25, SlownessMode::Eighth);
    CHECK(rep.issues.empty());
    CHECK(rep.accepted == 25);
    CHECK(rep.max_identity_residual < 1e-10);
    CHECK(rep.min_margin > 0);
}

TEST_CASE("suspension: breathing sphere satisfies the 7/8 bound in both modes") {
    MetricFamily fam = sphere_family();
    for (SlownessMode mode : {SlownessMode::Eighth, SlownessMode::Chapter7}) {
        SuspensionReport rep = suspension_check(fam, 40, mode);
        CHECK(rep.issues.empty());
        CHECK(rep.predicate_failures == 0);
        CHECK(rep.rejected_nonpsc == 0);
        CHECK(rep.accepted == 40);
        CHECK(rep.max_identity_residual < 1e-6);
        CHECK(rep.min_margin > 0);
    }
}

TEST_CASE("suspension of the annulus curve is flat and every sample is rejected") {
    MetricFamily fam = annulus_family();
    SuspensionReport rep = suspension_check(fam, 25, SlownessMode::Eighth);
    // scal(S^1) = 0, so the predicate never accepts; the identity still gives
    // scal(susp) = 0 (the euclidean annulus).
    CHECK(rep.accepted == 0);
    CHECK(rep.rejected_nonpsc == 25);
    CHECK(rep.max_identity_residual < 1e-8);
    for (int s = 0; s < 8; ++s) {
        Point p = fam.sample(s);
        CHECK(std::abs(scal_chart_dual(fam.suspension_chart(), p)) < 1e-9);
        CHECK(std::abs(scal_direct(fam.suspension_chart(), p)) < 1e-5);
    }
}

TEST_CASE("error term: constant family vanishes, sphere bound holds, fast family refused") {
    MetricFamily constant = parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "4/(1 + x1^2 + x2^2)^2"
h[2][2] = "4/(1 + x1^2 + x2^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [0, 1]
margin = 0.1
seed = 17
)fam");
    ErrorTermReport rep = error_term_check(constant, 20);
    CHECK(rep.accepted == 20);
    CHECK(rep.max_ratio == 0.0);

    ErrorTermReport sph = error_term_check(sphere_family(), 40);
    CHECK(sph.accepted == 40);
    CHECK(sph.issues.empty());
    CHECK(sph.max_ratio < 1.0);
    CHECK(sph.max_ratio > 0.0);

    // Scaled-up oscillation violates the slowness predicate: samples must be
    // refused rather than asserted.
    MetricFamily fast = parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "(1 + 0.5*sin(4*t1))^2 * 4/(1 + x1^2 + x2^2)^2"
h[2][2] = "(1 + 0.5*sin(4*t1))^2 * 4/(1 + x1^2 + x2^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [0, 3]
margin = 0.05
seed = 18
)fam");
    ErrorTermReport fr = error_term_check(fast, 40);
    CHECK(fr.rejected > 0);
    CHECK(fr.issues.empty());
}

TEST_CASE("pre-gauge: pinned cases and random postconditions") {
    Eigen::MatrixXd h0 = Eigen::MatrixXd::Identity(3, 3);
    CHECK((pre_gauge(h0, h0) - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
    CHECK((pre_gauge(h0, 4.0 * h0) - 2.0 * Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-13);

    PregaugeReport rep = pre_gauge_check(4, 200, 99, 1e-9);
    for (auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.failures.empty());
    CHECK(rep.pairs == 200);
}

TEST_CASE("angle chart: straight line, circle, and smoothed square") {
    AngleReport straight = angle_chart_check(kappa_straight(), 1.0, 50, 5);
    CHECK(straight.max_entry_err < 1e-9);

    // kappa = 1/rho reproduces polar coordinates of the plane.
    AngleReport circle = angle_chart_check(kappa_circle(3.0), 2.0, 60, 6);
    CHECK(circle.issues.empty());
    CHECK(circle.max_entry_err < 1e-6);

    AngleReport square = angle_chart_check(kappa_smoothed_square(), 4.0, 60, 7);
    CHECK(square.issues.empty());
    CHECK(square.max_entry_err < 1e-5);
}

TEST_CASE("metric family parser errors") {
    CHECK_THROWS(parse_metric_family("n = 1\nh[1][1] = \"1\"\n"));
    CHECK_THROWS(parse_metric_family("d = 1\nn = 1\nh[1][1] = \"1\"\n"));  // missing domains
    CHECK_THROWS(parse_metric_family("d = 1\nn = 1\nh[2][1] = \"1\"\ndomain x1 in [0,1]\ndomain t1 in [0,1]\n"));
    MetricFamily ok = parse_metric_family("d = 1\nn = 1\nh[1][1] = \"1\"\ndomain x1 in [0,1]\ndomain t1 in [0,1]\n");
    CHECK(ok.d == 1);
}

TEST_CASE("constant family: warped scalar equals the slice scalar exactly") {
    MetricFamily fam = parse_metric_family(R"fam(
d = 2
n = 1
h[1][1] = "4/(1 + x1^2 + x2^2)^2"
h[2][2] = "4/(1 + x1^2 + x2^2)^2"
f = "1"
domain x1 in [-0.8, 0.8]
domain x2 in [-0.8, 0.8]
domain t1 in [0, 1]
margin = 0.1
seed = 19
)fam");
    for (int s = 0; s < 15; ++s) {
        Point p = fam.sample(s);
        double slice = scal_chart_dual(fam.slice_chart(), p);
        CHECK(scal_warped(fam, p) == doctest::Approx(slice).epsilon(1e-13));
        CHECK(slice == doctest::Approx(2.0).epsilon(1e-10));  // unit round sphere
    }
}
