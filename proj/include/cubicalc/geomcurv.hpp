// Numeric verification of chart-local curvature: scalar curvature of a metric
// chart through two independent derivative pipelines (central finite
// differences as the oracle, forward-mode duals as the formula path), the
// warped-product closed formula, rescaling and suspension checks, the error
// term bound, the pre-gauge map, and the angle-rotation chart metric.
#ifndef CUBICALC_GEOMCURV_HPP
#define CUBICALC_GEOMCURV_HPP

#include "cubicalc/expr.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cubicalc::geom {

using expr::ExprPtr;
using expr::Point;
using expr::VarRef;

// A metric chart: symmetric entries over an ordered list of chart variables;
// any other variables in the expressions are frozen parameters of the chart.
struct ChartMetric {
    int dim = 0;
    std::vector<std::vector<ExprPtr>> entry;  // dim x dim, symmetric
    std::vector<VarRef> vars;                 // chart coordinates, size dim

    Eigen::MatrixXd value(const Point& p) const;
};

// Derivative data of the metric at a point: g, dg[k], ddg[k][l].
struct MetricJet {
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    std::vector<std::vector<Eigen::MatrixXd>> ddg;
};

MetricJet jet_fd(const ChartMetric& m, const Point& p, double h1 = 1e-4, double h2 = 1e-3);
MetricJet jet_dual(const ChartMetric& m, const Point& p);

// Christoffel symbols Gamma[k](i,j) from a jet (the coordinate formula
// 2 Gamma_ij^k = sum_a g^{ka} (d_j g_ia + d_i g_aj - d_a g_ij)).
std::vector<Eigen::MatrixXd> christoffel(const MetricJet& jet);
// Lowered curvature tensor R[a][b][c][d] = <R(e_a, e_b) e_c, e_d>.
std::vector<std::vector<Eigen::MatrixXd>> riemann_lowered(const MetricJet& jet);
double scalar_curvature(const MetricJet& jet);

// The finite-difference oracle and the dual-number formula path.
double scal_direct(const ChartMetric& m, const Point& p, double h1 = 1e-4, double h2 = 1e-3);
double scal_chart_dual(const ChartMetric& m, const Point& p);

// ---- metric families -------------------------------------------------------------

struct Interval {
    double lo = 0, hi = 1;
};

struct MetricFamily {
    int d = 0;  // chart dimension
    int n = 1;  // parameter count
    std::vector<std::vector<ExprPtr>> h;  // d x d symmetric entries over x1..xd, t1..tn
    ExprPtr f;                            // warping function (strictly positive)
    std::vector<Interval> x_dom, t_dom;
    double margin = 0.05;
    std::uint64_t seed = 1;

    ChartMetric slice_chart() const;                    // h as a chart in x1..xd
    ChartMetric total_chart() const;                    // h + f^2 dt^2 over x1..xd, t1 (n = 1 only)
    ChartMetric suspension_chart() const;               // h + sum dt_j^2 over all vars (f = 1)
    Point sample(std::uint64_t index) const;            // deterministic in-domain sample
    std::optional<std::string> check_at(const Point& p) const;  // PD of h, positivity of f
};

MetricFamily parse_metric_family(const std::string& text);

// ---- reports ----------------------------------------------------------------------

struct SampleIssue {
    std::string what;
    Point where;
};

struct CurvatureSample {
    Point where;
    double formula = 0, oracle = 0, abs_err = 0, rel_err = 0;
};

struct CurvatureReport {
    int samples = 0;
    double max_abs_err = 0, max_rel_err = 0;
    std::vector<CurvatureSample> rows;
    std::vector<SampleIssue> issues;
    bool ok(double tol) const { return issues.empty() && max_rel_err < tol; }
};

// |scal_warped - scal_direct| / (1 + |scal_direct|) over seeded samples.
CurvatureReport curvature_check(const MetricFamily& fam, int samples, bool parallel = false);

double scal_warped(const MetricFamily& fam, const Point& p);

struct WarpedComponents {
    double weingarten = 0, weingarten_oracle = 0;
    double curv_I = 0, curv_I_oracle = 0;
    double curv_II = 0, curv_II_oracle = 0;
    double curv_III = 0, curv_III_oracle = 0;
    double max_err() const;
};

// Formula vs finite-difference oracle for the Weingarten map and the three
// curvature-component identities, on supplied slice-tangent vectors.
WarpedComponents warped_components(const MetricFamily& fam, const Point& p, const Eigen::VectorXd& X,
                                   const Eigen::VectorXd& Y, const Eigen::VectorXd& U, const Eigen::VectorXd& V);

struct RescaleReport {
    std::vector<double> r_values;
    std::vector<double> max_abs_scal;      // per R
    double max_identity_err = 0;           // | scal_R(x,Rt) - R^-2 scal(x,t) |
    double fitted_exponent = 0;            // log-log slope of max_abs_scal
    double max_slicewise_err_r8 = 0;       // f(t)-only mode, at the largest R
    double slice_decay_exponent = 0;       // exponent of that error, when applicable
    bool f_time_only = false;
    std::vector<SampleIssue> issues;
};

RescaleReport rescaling_check(const MetricFamily& fam, const std::vector<double>& r_values, int samples,
                              bool parallel = false);

enum class SlownessMode { Eighth, Chapter7 };

struct SuspensionReport {
    int samples = 0, accepted = 0, rejected_nonpsc = 0, predicate_failures = 0;
    double max_identity_residual = 0;
    double min_margin = 0;  // min over accepted of scal_susp - bound*scal_slice
    std::vector<SampleIssue> issues;
};

SuspensionReport suspension_check(const MetricFamily& fam, int samples, SlownessMode mode, bool parallel = false);

struct ErrorTermReport {
    int samples = 0, accepted = 0, rejected = 0;
    double max_ratio = 0;  // max over accepted of err2 / (scal/64)
    std::vector<SampleIssue> issues;
};

ErrorTermReport error_term_check(const MetricFamily& fam, int samples, bool parallel = false);

// ---- pre-gauge ---------------------------------------------------------------------

// The positive square root of H0^{-1} H that is self-adjoint for H0.
Eigen::MatrixXd pre_gauge(const Eigen::MatrixXd& h0, const Eigen::MatrixXd& h);

struct PregaugeReport {
    int pairs = 0;
    double max_residual = 0;  // worst postcondition residual across all pairs
    std::vector<std::string> failures;
};

// Isometry, double self-adjointness, positivity, inverse law, and naturality
// over seeded random positive-definite pairs with condition number <= 1e4.
PregaugeReport pre_gauge_check(int dim, int pairs, std::uint64_t seed, double tol);

// ---- angle-rotation chart ------------------------------------------------------------

struct KappaProfile {
    std::string name;
    std::function<double(double)> kappa;
};

KappaProfile kappa_straight();
KappaProfile kappa_circle(double radius);
KappaProfile kappa_smoothed_square(double corner_sharpness = 8.0);

struct AngleReport {
    int samples = 0;
    double max_entry_err = 0;
    std::vector<SampleIssue> issues;
};

// Builds gamma_R by arc-length integration, forms Xi_R(r, phi) = gamma_R(phi)
// + r v_R(phi), pulls back the euclidean metric by finite differences, and
// compares to dr^2 + (1 + r kappa_R(phi))^2 dphi^2.
AngleReport angle_chart_check(const KappaProfile& profile, double R, int samples, std::uint64_t seed,
                              double r_max = 2.0, double phi_max = 3.0);

}  // namespace cubicalc::geom

#endif
