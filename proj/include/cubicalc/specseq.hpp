// The generalized exact couple and its spectral sequence: bigraded systems
// D, E with maps i (1,-1), j (0,0), k (-1,0), pages Z^r, B^r, E^r = Z^r/B^r,
// differentials d^r = j o (i^{r-1})^{-1} o k, stabilization detection, and
// convergence to the colimit row.  Two payload engines: presented abelian
// groups (exact integer arithmetic) and finite tables (pointed sets, monoids,
// groups by operation table).
#ifndef CUBICALC_SPECSEQ_HPP
#define CUBICALC_SPECSEQ_HPP

#include "cubicalc/tables.hpp"
#include "cubicalc/zlinalg.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cubicalc::spseq {

struct PQ {
    int p = 0, q = 0;
    auto operator<=>(const PQ&) const = default;
};

struct CheckReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    bool ok() const { return failures.empty(); }
};

// ---------- presented-abelian-group engine -----------------------------------

// Nodes live at p in [0, pmax], q in [qmin, qmax]; everything outside is the
// zero group.  Maps are integer matrices between ambient presentations and
// are keyed by their domain:
//   i[(p,q)] : D(p,q) -> D(p+1,q-1),  j[(p,q)] : D(p,q) -> E(p,q),
//   k[(p,q)] : E(p,q) -> D(p-1,q).
class GroupCouple {
public:
    int pmax = 0, qmin = 0, qmax = 0;
    // Region the reports and pages run over (subset of the stored support).
    int report_pmax = 0, report_qmax = 0;

    std::map<PQ, zlin::FgAbelianGroup> D, E;
    std::map<PQ, zlin::IntMatrix> i, j, k;

    // Largest page index the stored support can answer for the report region:
    // Z stabilizes by r = p+1 and B by r = q+2, so this cap is always enough.
    int r_cap() const { return std::max(report_pmax + 2, report_qmax + 3); }

    const zlin::FgAbelianGroup& nodeD(int p, int q) const;
    const zlin::FgAbelianGroup& nodeE(int p, int q) const;
    zlin::IntMatrix mapI(int p, int q) const;
    zlin::IntMatrix mapJ(int p, int q) const;
    zlin::IntMatrix mapK(int p, int q) const;
    // i^r starting at (p,q); r = 0 gives the identity.
    zlin::IntMatrix i_composite(int p, int q, int r) const;

    // Subgroups of E(p,q) (generator matrices over the ambient presentation).
    zlin::IntMatrix Z_r(int p, int q, int r) const;
    zlin::IntMatrix B_r(int p, int q, int r) const;
};

struct GroupPage {
    int r = 1;
    std::map<PQ, zlin::IntMatrix> Z, B;
    std::map<PQ, zlin::FgAbelianGroup> E;  // only for q >= 1
};

struct GroupDifferential {
    PQ from, to;
    int r = 1;
    zlin::IntMatrix z_gens;   // generators of Z^r(from)
    zlin::IntMatrix on_gens;  // their images in the ambient of E(to), one column per generator
};

CheckReport validate_group_couple(const GroupCouple& c);
GroupPage group_page(const GroupCouple& c, int r);
GroupDifferential group_differential(const GroupCouple& c, int r, int p, int q);

// d^1 = j o k, ker d^r = Z^{r+1}, im d^r = B^{r+1}/B^r, d o d = 0, and the
// chain 0 = B^1 <= B^2 <= ... <= Z^2 <= Z^1 = E, all recomputed both ways.
CheckReport group_differential_checks(const GroupCouple& c, int rmax);

// E^{r+1} = ker d^r / im d^r at every (p,q) with q >= 1, by invariant factors.
CheckReport group_homology_step_check(const GroupCouple& c, int r);

// Z^infty/B^infty = F_{p,q}/F_{p-1,q+1} for p+q >= 2 via the induced map,
// with F_{p,q} = im[i^{q+1} : D(p,q) -> D(p+q+1,-1)].
CheckReport group_convergence_check(const GroupCouple& c);

struct StabilizationReport {
    std::map<PQ, int> z_stable_at, b_stable_at;  // first r with X^r = X^{r+1} = ... up to the cap
    int r_cap = 0;
    bool all_detected = true;
};
StabilizationReport detect_stabilization(const GroupCouple& c, int r_cap);

// ---------- filtered complexes -------------------------------------------------

struct FilteredComplex {
    zlin::ChainComplex total;
    std::vector<std::vector<int>> level;  // level[n][i] in [0, levels)
    int levels = 1;

    std::optional<std::string> validate() const;  // boundary respects the filtration
    zlin::ChainComplex subcomplex(int p) const;   // F_p
    std::vector<std::vector<int>> sub_index(int p) const;  // basis indices of F_p per degree
};

// The standard exact couple D(p,q) = H_{p+q}(F_p), E(p,q) = H_{p+q}(F_p/F_{p-1}).
GroupCouple build_filtration_couple(const FilteredComplex& fc);

// ---------- finite-table engine -------------------------------------------------

enum class NodeKind { Zero, PointedSet, Monoid, AbelianGroup };

struct TableNode {
    NodeKind kind = NodeKind::Zero;
    std::vector<std::string> names = {"*"};
    int basepoint = 0;
    std::vector<std::vector<int>> op;  // empty unless Monoid/AbelianGroup

    int size() const { return int(names.size()); }
    bool has_op() const { return !op.empty(); }
    static TableNode zero();
    static TableNode from_monoid(const tab::MonoidTable& m, NodeKind kind);
};

class TableCouple {
public:
    int pmax = 0, qmin = 0, qmax = 0;

    std::map<PQ, TableNode> D, E;
    std::map<PQ, std::vector<int>> i, j, k;  // elementwise maps, keyed by domain

    const TableNode& nodeD(int p, int q) const;
    const TableNode& nodeE(int p, int q) const;
    std::vector<int> mapI(int p, int q) const;
    std::vector<int> mapJ(int p, int q) const;
    std::vector<int> mapK(int p, int q) const;
    std::vector<int> i_image(int p, int q, int r) const;      // image of i^r as a sorted element set
    std::vector<int> i_kernel_set(int p, int q, int r) const; // kernel of i^r as a sorted element set

    std::vector<int> Z_r(int p, int q, int r) const;  // sorted element subsets of E(p,q)
    std::vector<int> B_r(int p, int q, int r) const;
};

CheckReport validate_table_couple(const TableCouple& c);

struct TablePage {
    int r = 1;
    std::map<PQ, std::vector<int>> Z, B;
    // For q >= 1: classes of Z^r under translation by B^r (left cosets).
    std::map<PQ, std::vector<std::vector<int>>> E_classes;
};
TablePage table_page(const TableCouple& c, int r);

// Differentials on table couples with exhaustive representative verification.
CheckReport table_differential_checks(const TableCouple& c, int rmax);

// ---------- the monoid homomorphism theorem -----------------------------------

// 0 -> L -f-> M -g-> A -> 0 of abelian monoids with A a group: M/f(L) is a
// group and g induces an isomorphism.  Verified by congruence closure.
CheckReport monoid_hom_theorem_check(const tab::MonoidTable& L, const tab::MonoidTable& M,
                                     const tab::MonoidTable& A, const std::vector<int>& f,
                                     const std::vector<int>& g);

}  // namespace cubicalc::spseq

#endif
