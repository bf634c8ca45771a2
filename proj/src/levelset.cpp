#include "cubicalc/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cubicalc::lvl {

namespace {

// Smoothstep built from q(u) = exp(-1/u): 0 on u <= 0, 1 on u >= 1.
struct Theta {
    double v = 0, d1 = 0, d2 = 0;
};

Theta theta(double u) {
    if (u <= 0) return {0, 0, 0};
    if (u >= 1) return {1, 0, 0};
    double q = std::exp(-1.0 / u);
    double qb = std::exp(-1.0 / (1.0 - u));
    double qp = q / (u * u);
    double qbp = qb / ((1.0 - u) * (1.0 - u));  // derivative of q at 1-u
    double qpp = q * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
    double qbpp = qb * (1.0 / std::pow(1.0 - u, 4) - 2.0 / std::pow(1.0 - u, 3));
    double N = q, D = q + qb;
    double Np = qp, Dp = qp - qbp;
    double Npp = qpp, Dpp = qpp + qbpp;
    Theta t;
    t.v = N / D;
    t.d1 = (Np * D - N * Dp) / (D * D);
    t.d2 = (Npp * D - N * Dpp) / (D * D) - 2.0 * Dp * (Np * D - N * Dp) / (D * D * D);
    return t;
}

constexpr double kGlX[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
constexpr double kGlW[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                            0.2369268850561891};

template <class F>
double gl5(F&& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double total = 0;
    for (int u = 0; u < 5; ++u) total += kGlW[u] * f(mid + half * kGlX[u]);
    return total * half;
}

// Cumulative integral of a smooth profile on [0,1] over a fixed grid; the
// evaluation adds a short Gauss-Legendre tail inside the current cell, so the
// result is smooth in the upper limit.
struct CumulativeProfile {
    static constexpr int kCells = 1024;
    std::vector<double> cum;
    double (*f)(double);

    explicit CumulativeProfile(double (*fn)(double)) : cum(kCells + 1, 0.0), f(fn) {
        for (int t = 0; t < kCells; ++t)
            cum[t + 1] = cum[t] + gl5(f, double(t) / kCells, double(t + 1) / kCells);
    }
    double value(double y) const {
        if (y <= 0) return 0;
        if (y >= 1) return cum[kCells];
        int cell = std::min(int(y * kCells), kCells - 1);
        return cum[cell] + gl5(f, double(cell) / kCells, y);
    }
};

}  // namespace

// aux'(s) = theta((s - (rho-2)) / 2): the ramp of the derivative is symmetric
// about rho-1, which forces aux(rho) = 1.
double aux_d1(double rho, double s) { return theta((s - (rho - 2.0)) / 2.0).v; }
double aux_d2(double rho, double s) { return theta((s - (rho - 2.0)) / 2.0).d1 / 2.0; }

namespace {
double theta_value(double u) { return theta(u).v; }
const CumulativeProfile& theta_cumulative() {
    static const CumulativeProfile profile(theta_value);
    return profile;
}
}  // namespace

double aux(double rho, double s) {
    if (s <= rho - 2.0) return 0.0;
    if (s >= rho) return s - (rho - 1.0);
    return 2.0 * theta_cumulative().value((s - (rho - 2.0)) / 2.0);
}

Dual2 aux(double rho, const Dual2& s) { return expr::chain(s, aux(rho, s.v), aux_d1(rho, s.v), aux_d2(rho, s.v)); }

// chi' is a plateau of height 1/(1 - ramp) with smooth ramps of width 0.15,
// scaled into [rho-3, rho-2]; the maximal slope stays below 1.2.
namespace {

constexpr double kChiRamp = 0.15;

double chi_prime_raw(double u) { return theta(u / kChiRamp).v * theta((1.0 - u) / kChiRamp).v; }

const CumulativeProfile& chi_cumulative() {
    static const CumulativeProfile profile(chi_prime_raw);
    return profile;
}
double chi_norm() { return chi_cumulative().value(1.0); }

double chi_prime_raw_d1(double u) {
    return theta(u / kChiRamp).d1 / kChiRamp * theta((1.0 - u) / kChiRamp).v -
           theta(u / kChiRamp).v * theta((1.0 - u) / kChiRamp).d1 / kChiRamp;
}

}  // namespace

double chi(double rho, double s) {
    double u = s - (rho - 3.0);
    if (u <= 0) return 0.0;
    if (u >= 1) return 1.0;
    return chi_cumulative().value(u) / chi_norm();
}

double chi_d1(double rho, double s) {
    double u = s - (rho - 3.0);
    if (u <= 0 || u >= 1) return 0.0;
    return chi_prime_raw(u) / chi_norm();
}

Dual2 chi(double rho, const Dual2& s) {
    double u = s.v - (rho - 3.0);
    double dd = (u <= 0 || u >= 1) ? 0.0 : chi_prime_raw_d1(u) / chi_norm();
    return expr::chain(s, chi(rho, s.v), chi_d1(rho, s.v), dd);
}

namespace {

double value_of(double x) { return x; }
double value_of(const Dual2& x) { return x.v; }

// aux(rho, |x|): smooth everywhere aux' vanishes near |x|, which covers x = 0.
double aux_abs(double rho, double x) { return aux(rho, std::abs(x)); }
Dual2 aux_abs(double rho, const Dual2& x) {
    double a = std::abs(x.v);
    if (x.v == 0.0) {
        if (a >= rho - 2.0) throw expr::DomainError("aux(|x|) not differentiable here");
        return Dual2{0.0};
    }
    double sgn = x.v > 0 ? 1.0 : -1.0;
    return expr::chain(x, aux(rho, a), sgn * aux_d1(rho, a), aux_d2(rho, a));
}

template <class S>
S dice_impl(int n, double rho, std::span<const S> x) {
    S total{0.0};
    for (int j = 0; j < n; ++j) total = total + aux_abs(rho, x[j]);
    return total;
}

// dice^o(x1, x2) = 3 - dice(x1, x2 - (2 rho + 1)) on (-eps, rho+1] x [rho, rho+4].
template <class S>
S dice_o(double rho, const S& x1, const S& x2) {
    return S{3.0} - (aux_abs(rho, x1) + aux_abs(rho, x2 - S{2.0 * rho + 1.0}));
}

template <class S>
std::optional<S> dfun_impl(const DiceConfig& cfg, const S& x1, const S& x2, std::string* branch) {
    const double rho = cfg.rho;
    const double eps = cfg.eps_of();
    double v1 = value_of(x1), v2 = value_of(x2);
    auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };

    bool q1 = (in(v1, -eps, rho) && in(v2, rho, rho + 1.0)) || (in(v1, rho - 2.0, rho + 1.0) && in(v2, rho, rho + 4.0));
    bool q2 = (in(v1, -eps, rho) && in(v2, -(rho + 1.0), -rho)) ||
              (in(v1, rho - 2.0, rho + 1.0) && in(v2, -(rho + 4.0), -rho));
    if (q1) {
        if (branch) *branch = "o";
        return dice_o(rho, x1, x2);
    }
    if (q2) {
        if (branch) *branch = "u";
        return dice_o(rho, x1, S{0.0} - x2);
    }
    if (v1 < eps) {
        if (branch) *branch = "l";
        return aux_abs(rho, x1) + aux_abs(rho, x2);
    }
    if (in(v1, rho, rho + 1.0) && std::abs(v2) > rho + 3.0) {
        if (branch) *branch = "lin";
        return S{2.0} - (x1 - S{rho});
    }
    if (branch) *branch = "";
    return std::nullopt;
}

template <class S>
S tilde_dice_impl(int nm1, double rho, std::span<const S> x) {
    // phi = dice_{n-1, rho-2} + (rho - 3); blend with C |x|^2 through chi(phi).
    S phi = dice_impl<S>(nm1, rho - 2.0, x) + S{rho - 3.0};
    double cinv = double(nm1) * (rho - 2.0) * (rho - 2.0) / (rho - 3.0) * 1.01;
    double c = 1.0 / cinv;
    S norm2{0.0};
    for (int j = 0; j < nm1; ++j) norm2 = norm2 + x[j] * x[j];
    S ch = chi(rho, phi);
    return phi * ch + (S{1.0} - ch) * S{c} * norm2;
}

}  // namespace

double dice(int n, double rho, std::span<const double> x) { return dice_impl<double>(n, rho, x); }
Dual2 dice(int n, double rho, std::span<const Dual2> x) { return dice_impl<Dual2>(n, rho, x); }

std::optional<double> dfun(const DiceConfig& cfg, double x1, double x2) {
    return dfun_impl<double>(cfg, x1, x2, nullptr);
}
std::optional<Dual2> dfun(const DiceConfig& cfg, const Dual2& x1, const Dual2& x2) {
    return dfun_impl<Dual2>(cfg, x1, x2, nullptr);
}

std::string dfun_branch(const DiceConfig& cfg, double x1, double x2) {
    std::string b;
    dfun_impl<double>(cfg, x1, x2, &b);
    return b;
}

double tilde_dice(int nm1, double rho, std::span<const double> x) { return tilde_dice_impl<double>(nm1, rho, x); }
Dual2 tilde_dice(int nm1, double rho, std::span<const Dual2> x) { return tilde_dice_impl<Dual2>(nm1, rho, x); }

std::optional<double> frak_d(const DiceConfig& cfg, std::span<const double> x) {
    std::vector<double> rest(x.begin() + 1, x.end());
    double td = tilde_dice(cfg.n - 1, cfg.rho, std::span<const double>(rest));
    return dfun(cfg, x[0], td);
}

std::optional<Dual2> frak_d(const DiceConfig& cfg, std::span<const Dual2> x) {
    std::vector<Dual2> rest(x.begin() + 1, x.end());
    Dual2 td = tilde_dice(cfg.n - 1, cfg.rho, std::span<const Dual2>(rest));
    return dfun(cfg, x[0], td);
}

std::optional<std::vector<double>> frak_d_gradient(const DiceConfig& cfg, std::span<const double> x) {
    std::vector<double> grad(cfg.n);
    for (int j = 0; j < cfg.n; ++j) {
        std::vector<Dual2> xv(cfg.n);
        for (int t = 0; t < cfg.n; ++t) xv[t] = Dual2::seed(x[t], t == j ? 1.0 : 0.0, 0.0);
        auto v = frak_d(cfg, std::span<const Dual2>(xv));
        if (!v) return std::nullopt;
        grad[j] = v->da;
    }
    return grad;
}

// ----- sampled property scans ---------------------------------------------------

namespace {

std::optional<std::vector<double>> locate_on_level(const DiceConfig& cfg, std::mt19937_64& rng, double level,
                                                   std::vector<double>* direction_out = nullptr) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> u(cfg.n);
    double norm = 0;
    for (double& v : u) {
        v = gauss(rng);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm < 1e-12) return std::nullopt;
    for (double& v : u) v /= norm;
    if (direction_out) *direction_out = u;

    auto at = [&](double s) {
        std::vector<double> p(cfg.n);
        for (int t = 0; t < cfg.n; ++t) p[t] = s * u[t];
        return p;
    };
    double prev_s = 0.0;
    auto prev_v = frak_d(cfg, std::span<const double>(at(0.0)));
    if (!prev_v) return std::nullopt;
    const double step = 0.2;
    for (double s = step; s <= 3.0 * cfg.rho; s += step) {
        auto cur_v = frak_d(cfg, std::span<const double>(at(s)));
        if (!cur_v) return std::nullopt;  // ray left the domain before reaching the level
        if ((*prev_v - level) * (*cur_v - level) <= 0.0) {
            double lo = prev_s, hi = s;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                double mid = 0.5 * (lo + hi);
                auto mv = frak_d(cfg, std::span<const double>(at(mid)));
                if (!mv) return std::nullopt;
                if ((*prev_v - level) * (*mv - level) <= 0.0)
                    hi = mid;
                else
                    lo = mid;
            }
            return at(0.5 * (lo + hi));
        }
        prev_s = s;
        prev_v = cur_v;
    }
    return std::nullopt;
}

}  // namespace

ScanReport property_scan(const DiceConfig& cfg, int samples, std::uint64_t seed) {
    ScanReport rep;
    const double rho = cfg.rho;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> level_dist(1.0, 2.0);
    auto witness = [](std::span<const double> x) {
        std::string s = " at (";
        char buf[32];
        for (size_t t = 0; t < x.size(); ++t) {
            snprintf(buf, sizeof buf, "%.6g", x[t]);
            s += (t ? std::string(", ") : std::string()) + buf;
        }
        return s + ")";
    };

    for (int s = 0; s < samples; ++s) {
        double level = level_dist(rng);
        auto pt = locate_on_level(cfg, rng, level);
        if (!pt) continue;
        ++rep.located;
        auto grad = frak_d_gradient(cfg, std::span<const double>(*pt));
        if (!grad) continue;
        double gn = 0;
        for (double v : *grad) gn += v * v;
        gn = std::sqrt(gn);
        if (gn <= 1e-9) {
            ++rep.gradient_zero;
            rep.issues.push_back("vanishing gradient on a mid-range level set" + witness(*pt));
        }
        for (int j = 0; j < cfg.n; ++j)
            if (std::abs((*grad)[j]) > 1e-9 && std::abs((*pt)[j]) <= rho - 4.0) {
                ++rep.support_violations;
                rep.issues.push_back("d_" + std::to_string(j + 1) + " nonzero with |x_j| <= rho-4" + witness(*pt));
            }
        bool in_cuboid = (*pt)[0] >= -(rho - 4.0);
        for (int j = 1; j < cfg.n; ++j) in_cuboid = in_cuboid && std::abs((*pt)[j]) <= rho - 4.0;
        if (in_cuboid) {
            ++rep.cuboid_violations;
            rep.issues.push_back("level-set point inside the half-cuboid" + witness(*pt));
        }
    }

    // (c') direct cuboid probes: frak_d must avoid [1,2] there.
    std::uniform_real_distribution<double> inside(-(rho - 4.0), rho - 4.0);
    std::uniform_real_distribution<double> x1_range(-(rho - 4.0), rho + 6.0);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> p(cfg.n);
        p[0] = x1_range(rng);
        for (int j = 1; j < cfg.n; ++j) p[j] = inside(rng);
        ++rep.cuboid_probes;
        auto v = frak_d(cfg, std::span<const double>(p));
        if (v && *v >= 1.0 && *v <= 2.0) {
            ++rep.cuboid_level_hits;
            rep.issues.push_back("frak_d hits [1,2] inside the half-cuboid" + witness(p));
        }
    }

    // (d) sampled critical points of dice must have value outside (0, inf).
    std::uniform_real_distribution<double> wide(-(rho + 4.0), rho + 4.0);
    for (int s = 0; s < samples; ++s) {
        std::vector<double> p(cfg.n);
        for (double& v : p) v = wide(rng);
        bool on_axis = false;
        for (double v : p) on_axis = on_axis || std::abs(v) < 1e-8;
        if (on_axis) continue;  // |x_j| is not differentiable there
        double gn = 0;
        for (int j = 0; j < cfg.n; ++j) {
            std::vector<Dual2> xv(cfg.n);
            for (int t2 = 0; t2 < cfg.n; ++t2) xv[t2] = Dual2::seed(p[t2], t2 == j ? 1.0 : 0.0, 0.0);
            gn += std::pow(dice(cfg.n, rho, std::span<const Dual2>(xv)).da, 2);
        }
        ++rep.dice_critical_samples;
        if (std::sqrt(gn) <= 1e-9) {
            // Near the ramp foot aux <= 0.1 aux', so a gradient this small
            // forces the value below n * 1e-9; anything larger is a genuine
            // critical point with positive value.
            double v = dice(cfg.n, rho, std::span<const double>(p));
            if (v > cfg.n * 1e-9) {
                ++rep.dice_critical_bad;
                rep.issues.push_back("critical point of dice with positive value" + witness(p));
            }
        }
    }
    return rep;
}

// ----- gradient flow -------------------------------------------------------------

namespace {

std::optional<std::vector<double>> flow_field(const DiceConfig& cfg, const std::vector<double>& p) {
    auto grad = frak_d_gradient(cfg, std::span<const double>(p));
    if (!grad) return std::nullopt;
    double g2 = 0;
    for (double v : *grad) g2 += v * v;
    if (g2 < 1e-18) return std::nullopt;
    for (double& v : *grad) v /= g2;
    return grad;
}

// One RK4 step of dPhi/dt = grad/|grad|^2.
std::optional<std::vector<double>> rk4_step(const DiceConfig& cfg, const std::vector<double>& p, double h) {
    auto add = [](const std::vector<double>& a, const std::vector<double>& b, double s) {
        std::vector<double> r(a.size());
        for (size_t t = 0; t < a.size(); ++t) r[t] = a[t] + s * b[t];
        return r;
    };
    auto k1 = flow_field(cfg, p);
    if (!k1) return std::nullopt;
    auto k2 = flow_field(cfg, add(p, *k1, h / 2));
    if (!k2) return std::nullopt;
    auto k3 = flow_field(cfg, add(p, *k2, h / 2));
    if (!k3) return std::nullopt;
    auto k4 = flow_field(cfg, add(p, *k3, h));
    if (!k4) return std::nullopt;
    std::vector<double> r(p.size());
    for (size_t t = 0; t < p.size(); ++t) r[t] = p[t] + h / 6.0 * ((*k1)[t] + 2 * (*k2)[t] + 2 * (*k3)[t] + (*k4)[t]);
    return r;
}

}  // namespace

FlowReport flow_decomposition_check(const DiceConfig& cfg, int trajectories, double ode_step, std::uint64_t seed) {
    FlowReport rep;
    std::mt19937_64 rng(seed);
    const double rho = cfg.rho;
    int attempts = 0;

    while (rep.trajectories < trajectories && attempts < 60 * trajectories) {
        ++attempts;
        auto start = locate_on_level(cfg, rng, 1.9);
        if (!start) continue;
        ++rep.trajectories;

        for (double target : {1.0, 2.0}) {
            double dir = target > 1.9 ? 1.0 : -1.0;
            double h = dir * ode_step;
            std::vector<double> p = *start;
            double t = 1.9;
            bool left_domain = false;
            std::vector<std::vector<double>> checkpoints;
            std::vector<double> checkpoint_t;
            int steps = int(std::round(std::abs(target - 1.9) / ode_step));
            for (int st = 0; st < steps; ++st) {
                auto nx = rk4_step(cfg, p, h);
                if (!nx) {
                    left_domain = true;
                    break;
                }
                p = *nx;
                t += h;
                if (st % 25 == 24) {
                    checkpoints.push_back(p);
                    checkpoint_t.push_back(t);
                }
            }
            if (left_domain) {
                rep.issues.push_back("trajectory left the domain");
                continue;
            }
            checkpoints.push_back(p);
            checkpoint_t.push_back(t);

            for (size_t cidx = 0; cidx < checkpoints.size(); ++cidx) {
                const std::vector<double>& q = checkpoints[cidx];
                auto val = frak_d(cfg, std::span<const double>(q));
                if (!val) continue;
                rep.max_level_err = std::max(rep.max_level_err, std::abs(*val - checkpoint_t[cidx]));

                // dt^2 coefficient: |dPhi/dt|^2 = |grad|^{-2}, with the velocity
                // estimated by a short finite-difference re-integration.
                auto vfield = flow_field(cfg, q);
                auto fwd = rk4_step(cfg, q, 1e-3);
                auto bwd = rk4_step(cfg, q, -1e-3);
                if (vfield && fwd && bwd) {
                    double v2 = 0, gradnorm2 = 0;
                    auto grad = frak_d_gradient(cfg, std::span<const double>(q));
                    for (size_t tt = 0; tt < q.size(); ++tt) {
                        double vel = ((*fwd)[tt] - (*bwd)[tt]) / 2e-3;
                        v2 += vel * vel;
                        gradnorm2 += (*grad)[tt] * (*grad)[tt];
                    }
                    rep.max_dt_coeff_err = std::max(rep.max_dt_coeff_err, std::abs(v2 - 1.0 / gradnorm2));

                    // Orthogonality to finite-difference level-set tangents.
                    double vn = std::sqrt(v2);
                    std::vector<double> vhat(q.size());
                    for (size_t tt = 0; tt < q.size(); ++tt) vhat[tt] = ((*fwd)[tt] - (*bwd)[tt]) / 2e-3 / vn;
                    for (int axis = 0; axis < cfg.n; ++axis) {
                        // Direction orthogonal to the flow: e_axis - (e_axis . vhat) vhat.
                        std::vector<double> w(q.size(), 0.0);
                        w[axis] = 1.0;
                        double dot = vhat[axis];
                        for (size_t tt = 0; tt < q.size(); ++tt) w[tt] -= dot * vhat[tt];
                        double wn = 0;
                        for (double vv : w) wn += vv * vv;
                        if (wn < 1e-6) continue;
                        wn = std::sqrt(wn);
                        double delta = 1e-4;
                        // Project q + delta w back onto the level set along vhat by bisection.
                        std::vector<double> y(q.size());
                        for (size_t tt = 0; tt < q.size(); ++tt) y[tt] = q[tt] + delta * w[tt] / wn;
                        auto yval = frak_d(cfg, std::span<const double>(y));
                        if (!yval) continue;
                        double lo = -2e-4, hi = 2e-4;
                        auto shift_val = [&](double s) -> std::optional<double> {
                            std::vector<double> z(q.size());
                            for (size_t tt = 0; tt < q.size(); ++tt) z[tt] = y[tt] + s * vhat[tt];
                            return frak_d(cfg, std::span<const double>(z));
                        };
                        auto flo = shift_val(lo), fhi = shift_val(hi);
                        if (!flo || !fhi || (*flo - *val) * (*fhi - *val) > 0) continue;
                        for (int it = 0; it < 60; ++it) {
                            double mid = 0.5 * (lo + hi);
                            auto fm = shift_val(mid);
                            if (!fm) break;
                            if ((*flo - *val) * (*fm - *val) <= 0)
                                hi = mid;
                            else {
                                lo = mid;
                                flo = fm;
                            }
                        }
                        double s_star = 0.5 * (lo + hi);
                        std::vector<double> tangent(q.size());
                        double tn = 0;
                        for (size_t tt = 0; tt < q.size(); ++tt) {
                            tangent[tt] = delta * w[tt] / wn + s_star * vhat[tt];
                            tn += tangent[tt] * tangent[tt];
                        }
                        tn = std::sqrt(tn);
                        double cosang = 0;
                        for (size_t tt = 0; tt < q.size(); ++tt) cosang += tangent[tt] / tn * vhat[tt];
                        rep.max_orthogonality = std::max(rep.max_orthogonality, std::abs(cosang));
                    }
                }
            }
        }
    }

    // Far-field translation: start on the decomposed region (tilde_dice > rho + 3)
    // where frak_d(x) = 2 - (x1 - rho) and the flow is the -e1 translation.
    for (int t = 0; t < 8; ++t) {
        std::vector<double> p(cfg.n, 0.0);
        p[1] = rho + 6.0 + t;  // tilde_dice of the rest is |x_2| here
        p[0] = rho + 0.1;      // frak_d = 2 - (x1 - rho) = 1.9
        auto v = frak_d(cfg, std::span<const double>(p));
        if (!v || std::abs(*v - 1.9) > 1e-12) {
            rep.issues.push_back("far-field start point not on the 1.9 level");
            continue;
        }
        ++rep.farfield_trajectories;
        for (double target : {1.0, 2.0}) {
            double dir = target > 1.9 ? 1.0 : -1.0;
            std::vector<double> q = p;
            int steps = int(std::round(std::abs(target - 1.9) / ode_step));
            bool ok = true;
            for (int st = 0; st < steps && ok; ++st) {
                auto nx = rk4_step(cfg, q, dir * ode_step);
                if (!nx) ok = false;
                else q = *nx;
            }
            if (!ok) {
                rep.issues.push_back("far-field trajectory left the domain");
                continue;
            }
            double err = std::abs(q[0] - (p[0] - (target - 1.9)));
            for (int j = 1; j < cfg.n; ++j) err = std::max(err, std::abs(q[j] - p[j]));
            rep.max_farfield_err = std::max(rep.max_farfield_err, err);
        }
    }
    return rep;
}

}  // namespace cubicalc::lvl
