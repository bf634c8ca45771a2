// The dice functions and their assembled level-set machinery: aux (a smooth
// convex ramp with prescribed zero set and linear tail), the coordinate sum
// dice, the merged two-variable branch function, the radial extension, the
// composite on R^n, sampled verification of the regular-value and support
// properties, and the normalized gradient-flow decomposition.
#ifndef CUBICALC_LEVELSET_HPP
#define CUBICALC_LEVELSET_HPP

#include "cubicalc/expr.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cubicalc::lvl {

using expr::Dual2;

struct DiceConfig {
    int n = 2;           // ambient dimension, n >= 2
    double rho = 21.0;   // > 5
    double eps = -1.0;   // branch cut for the merged function; defaults to (rho-2)/4
    double eps_of() const { return eps > 0 ? eps : (rho - 2) / 4.0; }
};

// Smooth ramp: aux(s) = 0 for s <= rho-2, aux(s) = s - (rho-1) for s >= rho,
// convex in between, aux(rho) = 1.
double aux(double rho, double s);
double aux_d1(double rho, double s);
double aux_d2(double rho, double s);
Dual2 aux(double rho, const Dual2& s);

// Cutoff for the radial extension: 0 on (-inf, rho-3], 1 on [rho-2, inf),
// monotone with slope <= 1.2.
double chi(double rho, double s);
double chi_d1(double rho, double s);
Dual2 chi(double rho, const Dual2& s);

template <class S>
S dice(int n, double rho, std::span<const S> x);
double dice(int n, double rho, std::span<const double> x);
Dual2 dice(int n, double rho, std::span<const Dual2> x);

// The merged branch function on its piecewise domain; nullopt outside.
std::optional<double> dfun(const DiceConfig& cfg, double x1, double x2);
std::optional<Dual2> dfun(const DiceConfig& cfg, const Dual2& x1, const Dual2& x2);
// Which branch covers the point: "o", "u", "l", "lin", or empty.
std::string dfun_branch(const DiceConfig& cfg, double x1, double x2);

double tilde_dice(int nm1, double rho, std::span<const double> x);
Dual2 tilde_dice(int nm1, double rho, std::span<const Dual2> x);

std::optional<double> frak_d(const DiceConfig& cfg, std::span<const double> x);
std::optional<Dual2> frak_d(const DiceConfig& cfg, std::span<const Dual2> x);

// Gradient of frak_d by dual evaluation; nullopt outside the domain.
std::optional<std::vector<double>> frak_d_gradient(const DiceConfig& cfg, std::span<const double> x);

struct ScanReport {
    int located = 0;          // level-set points found by ray bisection
    int gradient_zero = 0;    // (a) violations: vanishing gradient on the [1,2] levels
    int support_violations = 0;   // (b) violations: d_j != 0 but |x_j| <= rho-4
    int cuboid_violations = 0;    // (c) located points inside the half-cuboid
    int cuboid_probes = 0;        // direct samples of the cuboid
    int cuboid_level_hits = 0;    // (c') cuboid samples with frak_d in [1,2]
    int dice_critical_samples = 0;
    int dice_critical_bad = 0;    // (d) critical points of dice with positive value
    std::vector<std::string> issues;
    bool ok() const { return gradient_zero + support_violations + cuboid_violations + cuboid_level_hits + dice_critical_bad == 0; }
};

ScanReport property_scan(const DiceConfig& cfg, int samples, std::uint64_t seed);

struct FlowReport {
    int trajectories = 0;
    double max_level_err = 0;       // |frak_d(Phi_t) - t|
    double max_orthogonality = 0;   // |cos angle(flow, FD tangent)|
    double max_dt_coeff_err = 0;    // | |dPhi/dt|^2 - |grad|^{-2} |
    double max_farfield_err = 0;    // translation law in the decomposed region
    int farfield_trajectories = 0;
    std::vector<std::string> issues;
};

FlowReport flow_decomposition_check(const DiceConfig& cfg, int trajectories, double ode_step, std::uint64_t seed);

}  // namespace cubicalc::lvl

#endif
