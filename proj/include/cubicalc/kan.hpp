// Horn enumeration and filling, Kan/contractibility/fibration verdicts,
// combinatorial homotopy, homotopy groups via canonical horn fillers,
// homotopy fibers, mapping path sets, and a classifying-space builder.
#ifndef CUBICALC_KAN_HPP
#define CUBICALC_KAN_HPP

#include "cubicalc/cubset.hpp"
#include "cubicalc/tables.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cubicalc::kan {

using cub::Cube;
using cub::CubicalMap;
using cub::CubicalSet;
using cub::GenId;

// slot index for (j, omega): 2*(j-1) + (omega > 0)
inline int slot_of(int j, int omega) { return 2 * (j - 1) + (omega > 0); }

struct HornInstance {
    int n = 0;
    int open_j = 1;
    int open_omega = 1;
    std::vector<Cube> slots;  // 2n entries; the open slot is ignored

    bool is_open(int j, int omega) const { return j == open_j && omega == open_omega; }
};

struct SphereInstance {
    int n = 0;
    std::vector<Cube> slots;  // 2n entries, all meaningful
};

// nullopt if compatible; otherwise a description of the violated pair.
std::optional<std::string> horn_compatibility_violation(const CubicalSet& x, const HornInstance& h);
std::optional<std::string> sphere_compatibility_violation(const CubicalSet& x, const SphereInstance& s);

// First n-cube in deterministic enumeration order whose faces match; nullopt
// if none.  Throws std::invalid_argument on incompatible horns.
std::optional<Cube> find_filler(const CubicalSet& x, const HornInstance& h, bool reversed_order = false);
std::optional<Cube> find_sphere_filler(const CubicalSet& x, const SphereInstance& s);

struct KanVerdict {
    bool ok = false;
    int checked_up_to = 0;
    std::string counterexample;  // empty when ok
};

// Enumerates all horn (resp. sphere) instances in dimensions 1..up_to.
KanVerdict is_kan(const CubicalSet& x, int up_to);
KanVerdict is_contractible(const CubicalSet& x, int up_to);
KanVerdict is_kan_fibration(const CubicalMap& f, int up_to);

// Element homotopy: all faces agree and a witness h exists with
// d_1^- h = a, d_1^+ h = b, d_i^eps h = s_1 d_{i-1}^eps a for i >= 2.
bool homotopic(const CubicalSet& x, const Cube& a, const Cube& b);

// Path components of the vertices (generated equivalence relation).
std::vector<std::vector<GenId>> pi0(const CubicalSet& x);

// n-fold loops at the basepoint: cubes whose faces are all the degenerate basepoint.
std::vector<Cube> loops(const CubicalSet& x, GenId basepoint, int n);

struct GroupTable {
    std::vector<Cube> reps;                // one representative per class
    tab::MonoidTable table;                // verified group table
    int identity = 0;
    std::vector<int> inverse;
};

// Homotopy group table at the basepoint; requires a Kan certificate up to n+1.
// Verifies the group axioms and representative independence, throwing
// std::runtime_error on any failure.
GroupTable pi_n(const CubicalSet& x, GenId basepoint, int n, const KanVerdict& certificate,
                bool reversed_order = false);

// P_n(X) = X_{n+1} with index-shifted connecting maps, materialized.
CubicalSet mapping_path_set(const CubicalSet& x, int trunc);

// hofib_n = {(a, k) in X_n x K_{n+1} : d_1^+ k = f(a), d_1^- k = basepoint}.
CubicalSet homotopy_fiber(const CubicalMap& f, GenId basepoint, int trunc);

// Classifying space fixture: E_n = maps {+-1}^n -> G, B = E / diagonal action.
CubicalSet build_BG(const tab::MonoidTable& group, int up_to);

}  // namespace cubicalc::kan

#endif
