#include "cubicalc/geomcurv.hpp"

#include "cubicalc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cubicalc::geom {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd ChartMetric::value(const Point& p) const {
    MatrixXd g(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) g(a, b) = expr::eval(entry[a][b], p);
    return g;
}

namespace {

double& point_slot(Point& p, const VarRef& v) { return v.family == 'x' ? p.x[v.index - 1] : p.t[v.index - 1]; }

}  // namespace

MetricJet jet_fd(const ChartMetric& m, const Point& p, double h1, double h2) {
    const int d = m.dim;
    MetricJet jet;
    jet.g = m.value(p);
    jet.dg.assign(d, MatrixXd(d, d));
    jet.ddg.assign(d, std::vector<MatrixXd>(d, MatrixXd(d, d)));
    Point q = p;
    for (int k = 0; k < d; ++k) {
        double& slot = point_slot(q, m.vars[k]);
        double saved = slot;
        slot = saved + h1;
        MatrixXd up = m.value(q);
        slot = saved - h1;
        MatrixXd dn = m.value(q);
        slot = saved;
        jet.dg[k] = (up - dn) / (2 * h1);
    }
    for (int k = 0; k < d; ++k) {
        // Pure second derivative.
        double& sk = point_slot(q, m.vars[k]);
        double saved_k = sk;
        MatrixXd c = m.value(q);
        sk = saved_k + h2;
        MatrixXd up = m.value(q);
        sk = saved_k - h2;
        MatrixXd dn = m.value(q);
        sk = saved_k;
        jet.ddg[k][k] = (up - 2 * c + dn) / (h2 * h2);
        // Mixed second derivatives.
        for (int l = k + 1; l < d; ++l) {
            double& sl = point_slot(q, m.vars[l]);
            double saved_l = sl;
            MatrixXd vv[2][2];
            for (int i : {0, 1})
                for (int j : {0, 1}) {
                    sk = saved_k + (i ? h2 : -h2);
                    sl = saved_l + (j ? h2 : -h2);
                    vv[i][j] = m.value(q);
                }
            sk = saved_k;
            sl = saved_l;
            jet.ddg[k][l] = (vv[1][1] - vv[1][0] - vv[0][1] + vv[0][0]) / (4 * h2 * h2);
            jet.ddg[l][k] = jet.ddg[k][l];
        }
    }
    return jet;
}

MetricJet jet_dual(const ChartMetric& m, const Point& p) {
    const int d = m.dim;
    MetricJet jet;
    jet.g = MatrixXd(d, d);
    jet.dg.assign(d, MatrixXd(d, d));
    jet.ddg.assign(d, std::vector<MatrixXd>(d, MatrixXd(d, d)));
    for (int k = 0; k < d; ++k)
        for (int l = k; l < d; ++l) {
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) {
                    expr::Dual2 v = expr::eval_dual(m.entry[a][b], p, m.vars[k], m.vars[l]);
                    if (k == 0 && l == 0) jet.g(a, b) = jet.g(b, a) = v.v;
                    if (l == k) jet.dg[k](a, b) = jet.dg[k](b, a) = v.da;
                    jet.ddg[k][l](a, b) = jet.ddg[k][l](b, a) = v.dab;
                }
            jet.ddg[l][k] = jet.ddg[k][l];
        }
    return jet;
}

std::vector<MatrixXd> christoffel(const MetricJet& jet) {
    const int d = jet.g.rows();
    MatrixXd ginv = jet.g.inverse();
    std::vector<MatrixXd> gam(d, MatrixXd(d, d));
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0;
                for (int a = 0; a < d; ++a) s += ginv(k, a) * (jet.dg[j](i, a) + jet.dg[i](a, j) - jet.dg[a](i, j));
                gam[k](i, j) = 0.5 * s;
            }
    return gam;
}

std::vector<std::vector<MatrixXd>> riemann_lowered(const MetricJet& jet) {
    const int d = jet.g.rows();
    MatrixXd ginv = jet.g.inverse();
    std::vector<MatrixXd> gam = christoffel(jet);

    // d_mu Gamma^k_{ij} from the jet: derivative of the inverse metric plus
    // second derivatives of the metric.
    auto dgamma = [&](int mu, int k, int i, int j) {
        double s = 0;
        for (int a = 0; a < d; ++a) {
            double dginv_ka = 0;
            for (int u = 0; u < d; ++u)
                for (int v = 0; v < d; ++v) dginv_ka -= ginv(k, u) * jet.dg[mu](u, v) * ginv(v, a);
            s += dginv_ka * (jet.dg[j](i, a) + jet.dg[i](a, j) - jet.dg[a](i, j));
            s += ginv(k, a) * (jet.ddg[mu][j](i, a) + jet.ddg[mu][i](a, j) - jet.ddg[mu][a](i, j));
        }
        return 0.5 * s;
    };

    // R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
    //                      + Gamma^rho_{mu lam} Gamma^lam_{nu sigma} - Gamma^rho_{nu lam} Gamma^lam_{mu sigma}
    std::vector<std::vector<MatrixXd>> low(d, std::vector<MatrixXd>(d, MatrixXd::Zero(d, d)));
    for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu)
            for (int sg = 0; sg < d; ++sg) {
                for (int rho = 0; rho < d; ++rho) {
                    double up = dgamma(mu, rho, nu, sg) - dgamma(nu, rho, mu, sg);
                    for (int lam = 0; lam < d; ++lam)
                        up += gam[rho](mu, lam) * gam[lam](nu, sg) - gam[rho](nu, lam) * gam[lam](mu, sg);
                    // <R(e_mu, e_nu) e_sigma, e_beta> = g_{beta rho} R^rho_{sigma mu nu}
                    for (int beta = 0; beta < d; ++beta) low[mu][nu](sg, beta) += jet.g(beta, rho) * up;
                }
            }
    return low;
}

double scalar_curvature(const MetricJet& jet) {
    const int d = jet.g.rows();
    MatrixXd ginv = jet.g.inverse();
    auto low = riemann_lowered(jet);
    // Ric_{sigma nu} = R^mu_{sigma mu nu} = g^{mu beta} <R(e_mu, e_nu) e_sigma, e_beta>
    MatrixXd ric = MatrixXd::Zero(d, d);
    for (int sg = 0; sg < d; ++sg)
        for (int nu = 0; nu < d; ++nu) {
            double s = 0;
            for (int mu = 0; mu < d; ++mu)
                for (int beta = 0; beta < d; ++beta) s += ginv(mu, beta) * low[mu][nu](sg, beta);
            ric(sg, nu) = s;
        }
    double scal = 0;
    for (int sg = 0; sg < d; ++sg)
        for (int nu = 0; nu < d; ++nu) scal += ginv(sg, nu) * ric(sg, nu);
    return scal;
}

double scal_direct(const ChartMetric& m, const Point& p, double h1, double h2) {
    return scalar_curvature(jet_fd(m, p, h1, h2));
}

double scal_chart_dual(const ChartMetric& m, const Point& p) { return scalar_curvature(jet_dual(m, p)); }

// ---- metric families ------------------------------------------------------------

ChartMetric MetricFamily::slice_chart() const {
    ChartMetric m;
    m.dim = d;
    m.entry = h;
    for (int a = 1; a <= d; ++a) m.vars.push_back(VarRef{'x', a});
    return m;
}

ChartMetric MetricFamily::total_chart() const {
    if (n != 1) throw std::invalid_argument("total_chart requires a one-parameter family");
    ChartMetric m;
    m.dim = d + 1;
    m.entry.assign(d + 1, std::vector<ExprPtr>(d + 1, expr::make_num(0.0)));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m.entry[a][b] = h[a][b];
    m.entry[d][d] = expr::make_bin(expr::Expr::Mul, f, f);
    for (int a = 1; a <= d; ++a) m.vars.push_back(VarRef{'x', a});
    m.vars.push_back(VarRef{'t', 1});
    return m;
}

ChartMetric MetricFamily::suspension_chart() const {
    ChartMetric m;
    m.dim = d + n;
    m.entry.assign(d + n, std::vector<ExprPtr>(d + n, expr::make_num(0.0)));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) m.entry[a][b] = h[a][b];
    for (int j = 0; j < n; ++j) m.entry[d + j][d + j] = expr::make_num(1.0);
    for (int a = 1; a <= d; ++a) m.vars.push_back(VarRef{'x', a});
    for (int j = 1; j <= n; ++j) m.vars.push_back(VarRef{'t', j});
    return m;
}

Point MetricFamily::sample(std::uint64_t index) const {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + (index + 1) * 0xbf58476d1ce4e5b9ull);
    auto draw = [&](const Interval& iv) {
        double width = iv.hi - iv.lo;
        double m = std::min(margin * width, 0.45 * width);
        std::uniform_real_distribution<double> dist(iv.lo + m, iv.hi - m);
        return dist(rng);
    };
    Point p;
    for (const Interval& iv : x_dom) p.x.push_back(draw(iv));
    for (const Interval& iv : t_dom) p.t.push_back(draw(iv));
    return p;
}

std::optional<std::string> MetricFamily::check_at(const Point& p) const {
    MatrixXd g = slice_chart().value(p);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    if (es.eigenvalues().minCoeff() <= 0) return "slice metric not positive definite";
    if (expr::eval(f, p) <= 0) return "warping function not positive";
    return std::nullopt;
}

MetricFamily parse_metric_family(const std::string& text) {
    MetricFamily fam;
    fam.f = expr::make_num(1.0);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_d = false;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("metric family line " + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string stripped;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c)) || !stripped.empty()) stripped.push_back(c);
        while (!stripped.empty() && std::isspace(static_cast<unsigned char>(stripped.back()))) stripped.pop_back();
        if (stripped.empty()) continue;

        auto eq = stripped.find('=');
        auto quoted = [&](const std::string& rhs) {
            auto a = rhs.find('"');
            auto b = rhs.rfind('"');
            if (a == std::string::npos || b <= a) fail("expected a quoted expression");
            return rhs.substr(a + 1, b - a - 1);
        };
        if (stripped.rfind("domain", 0) == 0) {
            // domain x1 in [a, b]
            std::istringstream ls(stripped.substr(6));
            std::string var, kw;
            ls >> var >> kw;
            if (kw != "in") fail("domain VAR in [a,b]");
            std::string rest;
            std::getline(ls, rest);
            double lo, hi;
            if (sscanf(rest.c_str(), " [ %lf , %lf ]", &lo, &hi) != 2) fail("domain bounds");
            if (var.size() < 2 || (var[0] != 'x' && var[0] != 't')) fail("domain variable must be x<i> or t<i>");
            int idx = std::stoi(var.substr(1));
            auto& doms = var[0] == 'x' ? fam.x_dom : fam.t_dom;
            if (int(doms.size()) < idx) doms.resize(idx);
            doms[idx - 1] = Interval{lo, hi};
            continue;
        }
        if (eq == std::string::npos) fail("expected '='");
        std::string key = stripped.substr(0, eq);
        while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
        std::string rhs = stripped.substr(eq + 1);

        if (key == "d") {
            fam.d = std::stoi(rhs);
            have_d = true;
            fam.h.assign(fam.d, std::vector<ExprPtr>(fam.d, expr::make_num(0.0)));
        } else if (key == "n") {
            fam.n = std::stoi(rhs);
        } else if (key == "margin") {
            fam.margin = std::stod(rhs);
        } else if (key == "seed") {
            fam.seed = std::stoull(rhs);
        } else if (key == "f") {
            fam.f = expr::parse(quoted(rhs));
        } else if (key.rfind("h[", 0) == 0) {
            if (!have_d) fail("declare d before metric entries");
            int a = 0, b = 0;
            if (sscanf(key.c_str(), "h[%d][%d]", &a, &b) != 2) fail("bad entry key");
            if (a < 1 || a > fam.d || b < 1 || b > fam.d) fail("entry index out of range");
            ExprPtr e = expr::parse(quoted(rhs));
            fam.h[a - 1][b - 1] = e;
            fam.h[b - 1][a - 1] = e;
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_d) throw std::invalid_argument("metric family: missing d");
    if (int(fam.x_dom.size()) != fam.d) throw std::invalid_argument("metric family: need a domain for every x variable");
    if (int(fam.t_dom.size()) != fam.n) throw std::invalid_argument("metric family: need a domain for every t variable");
    return fam;
}

// ---- the warped-product formula ----------------------------------------------------

namespace {

// Laplace-Beltrami (trace of the Hessian) of f on the slice, dual derivatives.
double slice_laplacian(const MetricFamily& fam, const Point& p, const MetricJet& slice_jet) {
    const int d = fam.d;
    MatrixXd ginv = slice_jet.g.inverse();
    std::vector<MatrixXd> gam = christoffel(slice_jet);
    VectorXd df(d);
    MatrixXd hess(d, d);
    for (int a = 0; a < d; ++a) df(a) = expr::d1(fam.f, VarRef{'x', a + 1}, p);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double v = expr::d2(fam.f, VarRef{'x', a + 1}, VarRef{'x', b + 1}, p);
            for (int cidx = 0; cidx < d; ++cidx) v -= gam[cidx](a, b) * df(cidx);
            hess(a, b) = v;
        }
    return (ginv * hess).trace();
}

MatrixXd t_derivative(const MetricFamily& fam, const Point& p, int j) {
    MatrixXd m(fam.d, fam.d);
    for (int a = 0; a < fam.d; ++a)
        for (int b = 0; b < fam.d; ++b) m(a, b) = expr::d1(fam.h[a][b], VarRef{'t', j}, p);
    return m;
}

MatrixXd t_second_derivative(const MetricFamily& fam, const Point& p, int j) {
    MatrixXd m(fam.d, fam.d);
    for (int a = 0; a < fam.d; ++a)
        for (int b = 0; b < fam.d; ++b) m(a, b) = expr::d2(fam.h[a][b], VarRef{'t', j}, VarRef{'t', j}, p);
    return m;
}

}  // namespace

double scal_warped(const MetricFamily& fam, const Point& p) {
    if (fam.n != 1) throw std::invalid_argument("scal_warped is for one-parameter families");
    MetricJet slice_jet = jet_dual(fam.slice_chart(), p);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(slice_jet.g);
    if (es.eigenvalues().minCoeff() <= 0) throw expr::DomainError("slice metric not positive definite");

    double scal_h = scalar_curvature(slice_jet);
    MatrixXd ginv = slice_jet.g.inverse();
    MatrixXd hdot = t_derivative(fam, p, 1);
    MatrixXd hddot = t_second_derivative(fam, p, 1);
    MatrixXd hop = ginv * hdot;
    double t1 = hop.trace();
    double t2 = (hop * hop).trace();
    double s2 = (ginv * hddot).trace();
    double fv = expr::eval(fam.f, p);
    double fdot = expr::d1(fam.f, VarRef{'t', 1}, p);
    double lap = slice_laplacian(fam, p, slice_jet);

    return scal_h + (0.75 * t2 - 0.25 * t1 * t1 - s2 + fdot / fv * t1) / (fv * fv) - 2.0 * lap / fv;
}

CurvatureReport curvature_check(const MetricFamily& fam, int samples, bool parallel) {
    CurvatureReport rep;
    rep.samples = samples;
    rep.rows.assign(samples, CurvatureSample{});
    std::vector<std::string> issue(samples);
    ChartMetric total = fam.total_chart();
    par_for(samples, parallel, [&](int idx) {
        CurvatureSample& row = rep.rows[idx];
        row.where = fam.sample(std::uint64_t(idx));
        if (auto bad = fam.check_at(row.where)) {
            issue[idx] = *bad;
            return;
        }
        row.oracle = scal_direct(total, row.where);
        row.formula = scal_warped(fam, row.where);
        row.abs_err = std::abs(row.formula - row.oracle);
        row.rel_err = row.abs_err / (1.0 + std::abs(row.oracle));
    });
    for (int idx = 0; idx < samples; ++idx) {
        if (!issue[idx].empty()) rep.issues.push_back({issue[idx], rep.rows[idx].where});
        rep.max_abs_err = std::max(rep.max_abs_err, rep.rows[idx].abs_err);
        rep.max_rel_err = std::max(rep.max_rel_err, rep.rows[idx].rel_err);
    }
    return rep;
}

// ---- warped components ---------------------------------------------------------------

double WarpedComponents::max_err() const {
    return std::max({std::abs(weingarten - weingarten_oracle), std::abs(curv_I - curv_I_oracle),
                     std::abs(curv_II - curv_II_oracle), std::abs(curv_III - curv_III_oracle)});
}

WarpedComponents warped_components(const MetricFamily& fam, const Point& p, const VectorXd& X, const VectorXd& Y,
                                   const VectorXd& U, const VectorXd& V) {
    const int d = fam.d;
    WarpedComponents out;
    MetricJet slice_jet = jet_dual(fam.slice_chart(), p);
    MatrixXd ginv = slice_jet.g.inverse();
    std::vector<MatrixXd> gam = christoffel(slice_jet);
    MatrixXd hdot = t_derivative(fam, p, 1);
    MatrixXd hddot = t_second_derivative(fam, p, 1);
    MatrixXd hop = ginv * hdot;
    double fv = expr::eval(fam.f, p);
    double fdot = expr::d1(fam.f, VarRef{'t', 1}, p);
    VectorXd df(d);
    for (int a = 0; a < d; ++a) df(a) = expr::d1(fam.f, VarRef{'x', a + 1}, p);

    auto bil = [&](const MatrixXd& m, const VectorXd& v, const VectorXd& w) { return double(v.transpose() * m * w); };

    // Weingarten: <W(X), Y> = -1/2 f^{-1} hdot(X, Y).
    out.weingarten = -0.5 / fv * bil(hdot, X, Y);

    // Slice curvature tensor for the Gauss-type identity.
    auto slice_low = riemann_lowered(slice_jet);
    auto rm = [&](const VectorXd& a, const VectorXd& b, const VectorXd& cc, const VectorXd& dd,
                  const std::vector<std::vector<MatrixXd>>& low) {
        double s = 0;
        int dim = int(a.size());
        for (int i = 0; i < dim; ++i)
            for (int jj = 0; jj < dim; ++jj)
                for (int kk = 0; kk < dim; ++kk)
                    for (int ll = 0; ll < dim; ++ll) s += a(i) * b(jj) * cc(kk) * dd(ll) * low[i][jj](kk, ll);
        return s;
    };
    out.curv_I = rm(U, V, X, Y, slice_low) +
                 0.25 / (fv * fv) * (bil(hdot, U, X) * bil(hdot, V, Y) - bil(hdot, U, Y) * bil(hdot, V, X));

    // Covariant derivative of hdot on the slice.
    auto nabla_hdot = [&](const VectorXd& a, const VectorXd& b, const VectorXd& u) {
        double s = 0;
        for (int i = 0; i < d; ++i)
            for (int jj = 0; jj < d; ++jj)
                for (int kk = 0; kk < d; ++kk) {
                    double term = expr::d2(fam.h[jj][kk], VarRef{'x', i + 1}, VarRef{'t', 1}, p);
                    for (int cc = 0; cc < d; ++cc)
                        term -= gam[cc](i, jj) * hdot(cc, kk) + gam[cc](i, kk) * hdot(jj, cc);
                    s += a(i) * b(jj) * u(kk) * term;
                }
        return s;
    };
    out.curv_II = -0.5 / fv * (nabla_hdot(X, Y, U) - nabla_hdot(Y, X, U)) +
                  0.5 / (fv * fv) * (df.dot(X) * bil(hdot, Y, U) - df.dot(Y) * bil(hdot, X, U));

    // Corrected radial identity: no X(f) Y(f) term.
    MatrixXd hess(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            double v = expr::d2(fam.f, VarRef{'x', a + 1}, VarRef{'x', b + 1}, p);
            for (int cc = 0; cc < d; ++cc) v -= gam[cc](a, b) * df(cc);
            hess(a, b) = v;
        }
    out.curv_III = 0.5 / (fv * fv) * (fdot / fv * bil(hdot, X, Y) - bil(hddot, X, Y) + 0.5 * bil(hdot * hop, X, Y)) -
                   bil(hess, X, Y) / fv;

    // Finite-difference oracle on the total chart.
    ChartMetric total = fam.total_chart();
    MetricJet total_jet = jet_fd(total, p);
    auto total_low = riemann_lowered(total_jet);
    auto lift = [&](const VectorXd& v) {
        VectorXd w = VectorXd::Zero(d + 1);
        w.head(d) = v;
        return w;
    };
    VectorXd nu = VectorXd::Zero(d + 1);
    nu(d) = 1.0 / fv;
    out.curv_I_oracle = rm(lift(U), lift(V), lift(X), lift(Y), total_low);
    out.curv_II_oracle = rm(lift(X), lift(Y), lift(U), nu, total_low);
    out.curv_III_oracle = rm(lift(X), nu, nu, lift(Y), total_low);

    // <W(X), Y> = -<nabla_X nu, Y>.  With nu = f^{-1} e_t and Y tangent to the
    // slice, only the slice components f^{-1} Gamma^b_{a t} contribute (the e_t
    // component of nabla nu is g-orthogonal to Y).
    std::vector<MatrixXd> total_gam = christoffel(total_jet);
    double w_or = 0;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c2 = 0; c2 < d; ++c2) w_or += -X(a) * (total_gam[b](a, d) / fv) * slice_jet.g(b, c2) * Y(c2);
    out.weingarten_oracle = w_or;
    return out;
}

// ---- rescaling ------------------------------------------------------------------------

namespace {

MetricFamily rescaled_family(const MetricFamily& fam, double R, bool scale_h) {
    MetricFamily out = fam;
    for (int a = 0; a < fam.d; ++a)
        for (int b = 0; b < fam.d; ++b) {
            ExprPtr e = expr::scale_time_var(fam.h[a][b], 1, R);
            out.h[a][b] = scale_h ? expr::multiply_by(e, R * R) : e;
        }
    out.f = expr::scale_time_var(fam.f, 1, R);
    out.t_dom[0] = Interval{fam.t_dom[0].lo * R, fam.t_dom[0].hi * R};
    return out;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (size_t t = 0; t < xs.size(); ++t) {
        mx += xs[t];
        my += ys[t];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double num = 0, den = 0;
    for (size_t t = 0; t < xs.size(); ++t) {
        num += (xs[t] - mx) * (ys[t] - my);
        den += (xs[t] - mx) * (xs[t] - mx);
    }
    return num / den;
}

bool f_depends_only_on_t(const MetricFamily& fam) {
    // Probe: numeric dependence test on a hash of sample points.
    for (int s = 0; s < 8; ++s) {
        Point p = fam.sample(1000 + s);
        for (int a = 1; a <= fam.d; ++a)
            if (std::abs(expr::d1(fam.f, VarRef{'x', a}, p)) > 1e-13) return false;
    }
    return true;
}

}  // namespace

RescaleReport rescaling_check(const MetricFamily& fam, const std::vector<double>& r_values, int samples, bool parallel) {
    RescaleReport rep;
    rep.r_values = r_values;
    rep.f_time_only = f_depends_only_on_t(fam);

    std::vector<double> slice_err_per_r;
    for (double R : r_values) {
        MetricFamily famR = rescaled_family(fam, R, true);
        std::vector<double> max_abs(samples, 0), ident(samples, 0);
        par_for(samples, parallel, [&](int idx) {
            Point base = fam.sample(std::uint64_t(idx));
            Point scaled = base;
            scaled.t[0] *= R;
            double sR = scal_warped(famR, scaled);
            double s1 = scal_warped(fam, base);
            ident[idx] = std::abs(sR - s1 / (R * R));
            max_abs[idx] = std::abs(sR);
        });
        double mx = 0;
        for (double v : max_abs) mx = std::max(mx, v);
        for (double v : ident) rep.max_identity_err = std::max(rep.max_identity_err, v);
        rep.max_abs_scal.push_back(mx);

        if (rep.f_time_only) {
            // scal(_R h + _R f^2 dt^2) - _R scal(h) -> 0 at rate R^{-2}.
            MetricFamily famR2 = rescaled_family(fam, R, false);
            std::vector<double> diff(samples, 0);
            par_for(samples, parallel, [&](int idx) {
                Point base = fam.sample(std::uint64_t(idx));
                Point scaled = base;
                scaled.t[0] *= R;
                double sR = scal_warped(famR2, scaled);
                double sh = scal_chart_dual(fam.slice_chart(), base);
                diff[idx] = std::abs(sR - sh);
            });
            double md = 0;
            for (double v : diff) md = std::max(md, v);
            slice_err_per_r.push_back(md);
        }
    }

    std::vector<double> lx, ly;
    bool all_tiny = true;
    for (size_t t = 0; t < r_values.size(); ++t) {
        if (rep.max_abs_scal[t] > 1e-9) all_tiny = false;
        lx.push_back(std::log(r_values[t]));
        ly.push_back(std::log(std::max(rep.max_abs_scal[t], 1e-300)));
    }
    rep.fitted_exponent = all_tiny ? -2.0 : fit_slope(lx, ly);  // flat families scale trivially

    if (rep.f_time_only && !slice_err_per_r.empty()) {
        rep.max_slicewise_err_r8 = slice_err_per_r.back();
        bool tiny = true;
        std::vector<double> ld;
        for (double v : slice_err_per_r) {
            if (v > 1e-9) tiny = false;
            ld.push_back(std::log(std::max(v, 1e-300)));
        }
        rep.slice_decay_exponent = tiny ? -2.0 : fit_slope(lx, ld);
    }
    return rep;
}

// ---- suspension and error term ----------------------------------------------------------

SuspensionReport suspension_check(const MetricFamily& fam, int samples, SlownessMode mode, bool parallel) {
    for (int s = 0; s < 4; ++s) {
        Point p = fam.sample(5000 + s);
        if (std::abs(expr::eval(fam.f, p) - 1.0) > 1e-12)
            throw std::invalid_argument("suspension_check requires f = 1");
    }
    SuspensionReport rep;
    rep.samples = samples;
    rep.min_margin = std::numeric_limits<double>::infinity();
    ChartMetric slice = fam.slice_chart();
    ChartMetric susp = fam.suspension_chart();

    struct Row {
        double residual = 0, margin = 0;
        int status = 0;  // 0 accepted, 1 nonpsc, 2 predicate failure
        std::string issue;
    };
    std::vector<Row> rows(samples);
    std::vector<Point> pts(samples);

    par_for(samples, parallel, [&](int idx) {
        Point p = fam.sample(std::uint64_t(idx));
        pts[idx] = p;
        Row& row = rows[idx];
        MetricJet slice_jet = jet_dual(slice, p);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(slice_jet.g);
        if (es.eigenvalues().minCoeff() <= 0) {
            row.status = 1;
            row.issue = "slice metric not positive definite";
            return;
        }
        double scal_g = scalar_curvature(slice_jet);
        MatrixXd ginv = slice_jet.g.inverse();
        double sum_terms = 0, predicate_lhs = 0;
        for (int jj = 1; jj <= fam.n; ++jj) {
            MatrixXd dj = t_derivative(fam, p, jj);
            MatrixXd ddj = t_second_derivative(fam, p, jj);
            MatrixXd a = ginv * dj;
            double tr_a = a.trace();
            double tr_a2 = (a * a).trace();
            double tr_dd = (ginv * ddj).trace();
            sum_terms += 0.75 * tr_a2 - 0.25 * tr_a * tr_a - tr_dd;
            predicate_lhs += std::abs(tr_a2) + std::abs(tr_dd) + tr_a * tr_a;
        }
        double scal_susp = scal_chart_dual(susp, p);
        row.residual = std::abs(scal_susp - scal_g - sum_terms);

        if (scal_g <= 0) {
            row.status = 1;
            row.issue = "scal(g) <= 0 at sample";
            return;
        }
        bool predicate = mode == SlownessMode::Eighth ? predicate_lhs < scal_g / 8.0
                                                      : (1.0 + fam.d) * predicate_lhs < scal_g;
        if (!predicate) {
            row.status = 2;
            return;
        }
        double bound = mode == SlownessMode::Eighth ? 7.0 / 8.0 : double(fam.d) / (1.0 + fam.d);
        row.margin = scal_susp - bound * scal_g;
        if (row.margin <= 0) row.issue = "scal(susp g) fails the lower bound";
    });

    for (int idx = 0; idx < samples; ++idx) {
        const Row& row = rows[idx];
        rep.max_identity_residual = std::max(rep.max_identity_residual, row.residual);
        if (row.status == 1) {
            ++rep.rejected_nonpsc;
            continue;
        }
        if (row.status == 2) {
            ++rep.predicate_failures;
            continue;
        }
        ++rep.accepted;
        rep.min_margin = std::min(rep.min_margin, row.margin);
        if (!row.issue.empty()) rep.issues.push_back({row.issue, pts[idx]});
    }
    if (rep.accepted == 0) rep.min_margin = 0;
    return rep;
}

ErrorTermReport error_term_check(const MetricFamily& fam, int samples, bool parallel) {
    ErrorTermReport rep;
    rep.samples = samples;
    ChartMetric slice = fam.slice_chart();
    std::vector<double> ratio(samples, -1.0);
    std::vector<std::string> issue(samples);
    std::vector<Point> pts(samples);
    par_for(samples, parallel, [&](int idx) {
        Point p = fam.sample(std::uint64_t(idx));
        pts[idx] = p;
        MetricJet slice_jet = jet_dual(slice, p);
        double scal_g = scalar_curvature(slice_jet);
        MatrixXd ginv = slice_jet.g.inverse();
        double predicate_lhs = 0, err2 = 0;
        for (int jj = 1; jj <= fam.n; ++jj) {
            MatrixXd dj = t_derivative(fam, p, jj);
            MatrixXd ddj = t_second_derivative(fam, p, jj);
            MatrixXd a = ginv * dj;
            double tr_a = a.trace();
            predicate_lhs += std::abs((a * a).trace()) + std::abs((ginv * ddj).trace()) + tr_a * tr_a;
            err2 += tr_a * tr_a;
        }
        err2 *= 2.0 / 16.0;
        if (scal_g <= 0 || predicate_lhs >= scal_g / 8.0) return;  // rejected: precondition fails
        ratio[idx] = err2 / (scal_g / 64.0);
        if (ratio[idx] >= 1.0) issue[idx] = "error-term bound violated";
    });
    for (int idx = 0; idx < samples; ++idx) {
        if (ratio[idx] < 0) {
            ++rep.rejected;
            continue;
        }
        ++rep.accepted;
        rep.max_ratio = std::max(rep.max_ratio, ratio[idx]);
        if (!issue[idx].empty()) rep.issues.push_back({issue[idx], pts[idx]});
    }
    return rep;
}

// ---- pre-gauge -----------------------------------------------------------------------------

Eigen::MatrixXd pre_gauge(const MatrixXd& h0, const MatrixXd& h) {
    const int n = int(h0.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es0(h0);
    if (es0.eigenvalues().minCoeff() <= 0) throw std::invalid_argument("pre_gauge: h0 not positive definite");
    Eigen::SelfAdjointEigenSolver<MatrixXd> esh(h);
    if (esh.eigenvalues().minCoeff() <= 0) throw std::invalid_argument("pre_gauge: h not positive definite");

    MatrixXd rt = es0.operatorSqrt();
    MatrixXd rti = es0.operatorInverseSqrt();
    MatrixXd a = rti * h * rti;
    a = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> esa(a);
    MatrixXd s = esa.operatorSqrt();
    MatrixXd tau = rti * s * rt;
    (void)n;
    return tau;
}

PregaugeReport pre_gauge_check(int dim, int pairs, std::uint64_t seed, double tol) {
    PregaugeReport rep;
    rep.pairs = pairs;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> logl(-2.0, 2.0);  // eigenvalues in [1e-2, 1e2]: condition <= 1e4

    auto random_orthogonal = [&]() {
        MatrixXd m(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) m(a, b) = gauss(rng);
        Eigen::HouseholderQR<MatrixXd> qr(m);
        return MatrixXd(qr.householderQ());
    };
    auto random_pd = [&]() {
        MatrixXd q = random_orthogonal();
        VectorXd lam(dim);
        for (int a = 0; a < dim; ++a) lam(a) = std::pow(10.0, logl(rng));
        return MatrixXd(q * lam.asDiagonal() * q.transpose());
    };

    for (int t = 0; t < pairs; ++t) {
        MatrixXd h0 = random_pd(), h = random_pd();
        MatrixXd tau = pre_gauge(h0, h);
        double scale = 1.0 + h.norm() + h0.norm();
        auto record = [&](const char* what, double res) {
            rep.max_residual = std::max(rep.max_residual, res);
            if (res >= tol) rep.failures.push_back(std::string(what) + " residual " + std::to_string(res));
        };
        record("isometry (tau^T h0 tau = h)", (tau.transpose() * h0 * tau - h).norm() / scale);
        record("h0 tau symmetric", (h0 * tau - tau.transpose() * h0).norm() / scale);
        record("h tau symmetric", (h * tau - tau.transpose() * h).norm() / scale);
        Eigen::SelfAdjointEigenSolver<MatrixXd> est(0.5 * (h0 * tau + tau.transpose() * h0));
        if (est.eigenvalues().minCoeff() <= 0) rep.failures.push_back("tau not positive definite (w.r.t. h0)");
        record("inverse law", (pre_gauge(h, h0) * tau - MatrixXd::Identity(dim, dim)).norm());

        // Naturality under pullback by a random invertible map.
        MatrixXd a = random_orthogonal() + 0.1 * MatrixXd::Identity(dim, dim);
        MatrixXd lhs = pre_gauge(a.transpose() * h0 * a, a.transpose() * h * a);
        MatrixXd rhs = a.inverse() * tau * a;
        record("naturality", (lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    return rep;
}

// ---- angle-rotation chart --------------------------------------------------------------------

KappaProfile kappa_straight() { return {"straight", [](double) { return 0.0; }}; }

KappaProfile kappa_circle(double radius) {
    return {"circle", [radius](double) { return 1.0 / radius; }};
}

KappaProfile kappa_smoothed_square(double corner_sharpness) {
    // Nonnegative bumps at regularly spaced corners along arclength.
    double s = corner_sharpness;
    return {"square", [s](double phi) {
                double total = 0;
                for (int corner = -2; corner <= 6; ++corner) {
                    double u = (phi - 1.3 * corner) * s;
                    total += s * 0.39269908169872414 * std::exp(-u * u);  // each bump turns ~ pi/8 sqrt(pi)
                }
                return total;
            }};
}

namespace {

// Composite Gauss-Legendre on [0, y] with smooth integrands.
template <class F>
double integrate(F&& f, double y) {
    static const double gl_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                   0.9061798459386640};
    static const double gl_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                   0.2369268850561891};
    if (y == 0) return 0;
    double sign = y > 0 ? 1.0 : -1.0;
    double len = std::abs(y);
    int panels = std::max(1, int(std::ceil(len / 0.05)));
    double hp = len / panels;
    double total = 0;
    for (int t = 0; t < panels; ++t) {
        double mid = (t + 0.5) * hp;
        for (int u = 0; u < 5; ++u) total += gl_w[u] * f(sign * (mid + 0.5 * hp * gl_x[u]));
        // weights sum to 2 over [-1,1]; scale below
    }
    return sign * total * hp / 2.0;
}

}  // namespace

AngleReport angle_chart_check(const KappaProfile& profile, double R, int samples, std::uint64_t seed, double r_max,
                              double phi_max) {
    AngleReport rep;
    rep.samples = samples;
    auto theta = [&](double y) { return M_PI / 2.0 + integrate(profile.kappa, y); };
    auto gamma = [&](double y) {
        // gamma(y) = e1 + int_0^y (cos theta, sin theta)
        double gx = 1.0 + integrate([&](double u) { return std::cos(theta(u)); }, y);
        double gy = integrate([&](double u) { return std::sin(theta(u)); }, y);
        return std::pair<double, double>(gx, gy);
    };
    auto xi = [&](double r, double phi) {
        double y = phi / R;
        auto [gx, gy] = gamma(y);
        double th = theta(y);
        double vx = std::sin(th), vy = -std::cos(th);
        return std::pair<double, double>(R * gx + r * vx, R * gy + r * vy);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rdist(0.0, r_max), pdist(0.0, phi_max);
    const double h = 1e-5;
    for (int t = 0; t < samples; ++t) {
        double r = rdist(rng), phi = pdist(rng);
        double kap = profile.kappa(phi / R) / R;
        if (1.0 + r * kap <= 0) {
            rep.issues.push_back({"degenerate frame: 1 + r kappa <= 0", Point{{r}, {phi}}});
            continue;
        }
        auto [xp, yp] = xi(r + h, phi);
        auto [xm, ym] = xi(r - h, phi);
        auto [pxp, pyp] = xi(r, phi + h);
        auto [pxm, pym] = xi(r, phi - h);
        double jr[2] = {(xp - xm) / (2 * h), (yp - ym) / (2 * h)};
        double jp[2] = {(pxp - pxm) / (2 * h), (pyp - pym) / (2 * h)};
        double g11 = jr[0] * jr[0] + jr[1] * jr[1];
        double g12 = jr[0] * jp[0] + jr[1] * jp[1];
        double g22 = jp[0] * jp[0] + jp[1] * jp[1];
        double want22 = (1.0 + r * kap) * (1.0 + r * kap);
        double err = std::max({std::abs(g11 - 1.0), std::abs(g12), std::abs(g22 - want22)});
        rep.max_entry_err = std::max(rep.max_entry_err, err);
    }
    return rep;
}

}  // namespace cubicalc::geom
