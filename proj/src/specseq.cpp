#include "cubicalc/specseq.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cubicalc::spseq {

using zlin::FgAbelianGroup;
using zlin::IntMatrix;

namespace {

std::string pq_str(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

const FgAbelianGroup& zero_group() {
    static const FgAbelianGroup z;
    return z;
}

}  // namespace

// ---------- GroupCouple access --------------------------------------------------

const FgAbelianGroup& GroupCouple::nodeD(int p, int q) const {
    auto it = D.find(PQ{p, q});
    return it == D.end() ? zero_group() : it->second;
}

const FgAbelianGroup& GroupCouple::nodeE(int p, int q) const {
    auto it = E.find(PQ{p, q});
    return it == E.end() ? zero_group() : it->second;
}

IntMatrix GroupCouple::mapI(int p, int q) const {
    auto it = i.find(PQ{p, q});
    if (it != i.end()) return it->second;
    return IntMatrix(nodeD(p + 1, q - 1).ngens(), nodeD(p, q).ngens());
}

IntMatrix GroupCouple::mapJ(int p, int q) const {
    auto it = j.find(PQ{p, q});
    if (it != j.end()) return it->second;
    return IntMatrix(nodeE(p, q).ngens(), nodeD(p, q).ngens());
}

IntMatrix GroupCouple::mapK(int p, int q) const {
    auto it = k.find(PQ{p, q});
    if (it != k.end()) return it->second;
    return IntMatrix(nodeD(p - 1, q).ngens(), nodeE(p, q).ngens());
}

IntMatrix GroupCouple::i_composite(int p, int q, int r) const {
    IntMatrix m = IntMatrix::identity(nodeD(p, q).ngens());
    for (int t = 0; t < r; ++t) m = mapI(p + t, q - t) * m;
    return m;
}

IntMatrix GroupCouple::Z_r(int p, int q, int r) const {
    // k^{-1}(im[i^{r-1} : D(p-r, q+r-1) -> D(p-1, q)])
    IntMatrix image = i_composite(p - r, q + r - 1, r - 1);
    IntMatrix pre = zlin::subgroup_preimage(mapK(p, q), image, nodeD(p - 1, q).relations());
    return zlin::lattice_basis(pre.hcat(nodeE(p, q).relations()));
}

IntMatrix GroupCouple::B_r(int p, int q, int r) const {
    // j(ker[i^{r-1} : D(p,q) -> D(p+r-1, q-r+1)])
    IntMatrix composite = i_composite(p, q, r - 1);
    IntMatrix ker = zlin::map_kernel(composite, nodeD(p + r - 1, q - r + 1).relations());
    return zlin::lattice_basis((mapJ(p, q) * ker).hcat(IntMatrix(nodeE(p, q).ngens(), 0)));
}

// ---------- validation ------------------------------------------------------------

namespace {

bool map_well_defined(const IntMatrix& f, const IntMatrix& rel_dom, const IntMatrix& rel_cod) {
    if (rel_dom.cols() == 0) return true;
    return zlin::subgroup_leq(f * rel_dom, IntMatrix(f.rows(), 0), rel_cod);
}

}  // namespace

CheckReport validate_group_couple(const GroupCouple& c) {
    CheckReport rep;
    // First-quadrant requirements on stored nodes.
    for (const auto& [pq, node] : c.E)
        if ((pq.p < 0 || pq.q < 0) && !node.is_trivial())
            rep.failures.push_back("E" + pq_str(pq.p, pq.q) + " must vanish");
    for (const auto& [pq, node] : c.D)
        if (pq.p < 0 && !node.is_trivial()) rep.failures.push_back("D" + pq_str(pq.p, pq.q) + " must vanish");

    for (int p = 0; p + 1 <= c.pmax; ++p)
        for (int q = c.qmin + 1; q + 1 <= c.qmax; ++q) {
            const FgAbelianGroup& dn = c.nodeD(p, q);
            const FgAbelianGroup& en = c.nodeE(p, q);
            IntMatrix iin = c.mapI(p - 1, q + 1);  // into D(p,q)
            IntMatrix jn = c.mapJ(p, q);
            IntMatrix kn = c.mapK(p, q);
            IntMatrix kin = c.mapK(p + 1, q);  // into D(p,q)
            IntMatrix in = c.mapI(p, q);

            if (!map_well_defined(in, dn.relations(), c.nodeD(p + 1, q - 1).relations()))
                rep.failures.push_back("i" + pq_str(p, q) + " not well-defined");
            if (!map_well_defined(jn, dn.relations(), en.relations()))
                rep.failures.push_back("j" + pq_str(p, q) + " not well-defined");
            if (!map_well_defined(kn, en.relations(), c.nodeD(p - 1, q).relations()))
                rep.failures.push_back("k" + pq_str(p, q) + " not well-defined");

            // Exactness at D(p,q): im i = ker j.
            IntMatrix im_i = zlin::lattice_basis(iin.hcat(dn.relations()));
            IntMatrix ker_j = zlin::map_kernel(jn, en.relations());
            if (!zlin::subgroup_equal(im_i, ker_j, dn.relations()))
                rep.failures.push_back("exactness (i,j) fails at D" + pq_str(p, q));
            // Exactness at E(p,q): im j = ker k.
            IntMatrix im_j = zlin::lattice_basis(jn.hcat(en.relations()));
            IntMatrix ker_k = zlin::map_kernel(kn, c.nodeD(p - 1, q).relations());
            if (!zlin::subgroup_equal(im_j, ker_k, en.relations()))
                rep.failures.push_back("exactness (j,k) fails at E" + pq_str(p, q));
            // Exactness at D(p,q): im k = ker i.
            IntMatrix im_k = zlin::lattice_basis(kin.hcat(dn.relations()));
            IntMatrix ker_i = zlin::map_kernel(in, c.nodeD(p + 1, q - 1).relations());
            if (!zlin::subgroup_equal(im_k, ker_i, dn.relations()))
                rep.failures.push_back("exactness (k,i) fails at D" + pq_str(p, q));
        }
    return rep;
}

// ---------- pages and differentials ----------------------------------------------

GroupPage group_page(const GroupCouple& c, int r) {
    if (r < 1) throw std::invalid_argument("page index must be >= 1");
    GroupPage page;
    page.r = r;
    for (int p = 0; p <= c.report_pmax; ++p)
        for (int q = 0; q <= c.report_qmax; ++q) {
            IntMatrix z = c.Z_r(p, q, r);
            IntMatrix b = c.B_r(p, q, r);
            if (q >= 1) page.E[PQ{p, q}] = zlin::subgroup_quotient(z, b, c.nodeE(p, q).relations());
            page.Z[PQ{p, q}] = std::move(z);
            page.B[PQ{p, q}] = std::move(b);
        }
    return page;
}

GroupDifferential group_differential(const GroupCouple& c, int r, int p, int q) {
    if (r < 1 || q < 0) throw std::invalid_argument("differential needs r >= 1, q >= 0");
    GroupDifferential d;
    d.r = r;
    d.from = PQ{p, q};
    d.to = PQ{p - r, q + r - 1};
    d.z_gens = c.Z_r(p, q, r);
    IntMatrix composite = c.i_composite(p - r, q + r - 1, r - 1);  // into D(p-1, q)
    const IntMatrix relD = c.nodeD(p - 1, q).relations();
    IntMatrix kz = c.mapK(p, q) * d.z_gens;
    auto sol = zlin::solve(composite.hcat(relD), kz);
    if (!sol) throw std::logic_error("k-image not inside im i^{r-1} at " + pq_str(p, q));
    IntMatrix x = sol->row_slice(0, composite.cols());
    d.on_gens = c.mapJ(p - r, q + r - 1) * x;
    return d;
}

CheckReport group_differential_checks(const GroupCouple& c, int rmax) {
    CheckReport rep;
    for (int p = 0; p <= c.report_pmax; ++p)
        for (int q = 0; q <= c.report_qmax; ++q) {
            const IntMatrix relE = c.nodeE(p, q).relations();
            // The chain of inclusions 0 = B^1 <= B^2 <= ... <= Z^2 <= Z^1 = E.
            if (!zlin::subgroup_leq(c.B_r(p, q, 1), IntMatrix(c.nodeE(p, q).ngens(), 0), relE))
                rep.failures.push_back("B^1 nonzero at " + pq_str(p, q));
            if (!zlin::subgroup_equal(c.Z_r(p, q, 1), IntMatrix::identity(c.nodeE(p, q).ngens()), relE))
                rep.failures.push_back("Z^1 != E at " + pq_str(p, q));
            for (int r = 1; r < rmax; ++r) {
                if (!zlin::subgroup_leq(c.B_r(p, q, r), c.B_r(p, q, r + 1), relE))
                    rep.failures.push_back("B^" + std::to_string(r) + " not inside B^" + std::to_string(r + 1) + " at " + pq_str(p, q));
                if (!zlin::subgroup_leq(c.Z_r(p, q, r + 1), c.Z_r(p, q, r), relE))
                    rep.failures.push_back("Z^" + std::to_string(r + 1) + " not inside Z^" + std::to_string(r) + " at " + pq_str(p, q));
            }
            if (!zlin::subgroup_leq(c.B_r(p, q, rmax), c.Z_r(p, q, rmax), relE))
                rep.failures.push_back("B^rmax not inside Z^rmax at " + pq_str(p, q));

            for (int r = 1; r <= rmax; ++r) {
                GroupDifferential d = group_differential(c, r, p, q);
                const IntMatrix relT = c.nodeE(d.to.p, d.to.q).relations();

                if (r == 1) {
                    // d^1 = j o k exactly (modulo the target relations).
                    IntMatrix direct = c.mapJ(p - 1, q) * (c.mapK(p, q) * d.z_gens);
                    IntMatrix diff = direct - d.on_gens;
                    for (int col = 0; col < diff.cols(); ++col)
                        if (!c.nodeE(p - 1, q).element_is_zero(diff.col(col))) {
                            rep.failures.push_back("d^1 != j o k at " + pq_str(p, q));
                            break;
                        }
                }

                // ker d^r = Z^{r+1}: solve for all z in Z^r with d^r z in B^r(target).
                {
                    IntMatrix kz_map = c.mapK(p, q) * d.z_gens;                       // rows: ambient D(p-1,q)
                    IntMatrix comp = c.i_composite(p - r, q + r - 1, r - 1);          // D(p-r,q+r-1) -> D(p-1,q)
                    IntMatrix relD = c.nodeD(p - 1, q).relations();
                    IntMatrix jt = c.mapJ(d.to.p, d.to.q);                            // D(p-r,q+r-1) -> E(target)
                    IntMatrix bt = c.B_r(d.to.p, d.to.q, r);
                    int rows1 = kz_map.rows(), rows2 = jt.rows();
                    int na = d.z_gens.cols(), ny = comp.cols(), nc1 = relD.cols(), nb = bt.cols(), nc2 = relT.cols();
                    IntMatrix big(rows1 + rows2, na + ny + nc1 + nb + nc2);
                    for (int rr = 0; rr < rows1; ++rr) {
                        for (int cc = 0; cc < na; ++cc) big(rr, cc) = kz_map(rr, cc);
                        for (int cc = 0; cc < ny; ++cc) big(rr, na + cc) = -comp(rr, cc);
                        for (int cc = 0; cc < nc1; ++cc) big(rr, na + ny + cc) = -relD(rr, cc);
                    }
                    for (int rr = 0; rr < rows2; ++rr) {
                        for (int cc = 0; cc < ny; ++cc) big(rows1 + rr, na + cc) = jt(rr, cc);
                        for (int cc = 0; cc < nb; ++cc) big(rows1 + rr, na + ny + nc1 + cc) = -bt(rr, cc);
                        for (int cc = 0; cc < nc2; ++cc) big(rows1 + rr, na + ny + nc1 + nb + cc) = -relT(rr, cc);
                    }
                    IntMatrix ker = zlin::kernel_basis(big).row_slice(0, na);
                    IntMatrix ker_sub = zlin::lattice_basis((d.z_gens * ker).hcat(c.nodeE(p, q).relations()));
                    if (!zlin::subgroup_equal(ker_sub, c.Z_r(p, q, r + 1), relE))
                        rep.failures.push_back("ker d^" + std::to_string(r) + " != Z^" + std::to_string(r + 1) + " at " + pq_str(p, q));
                }

                // im d^r together with B^r(target) equals B^{r+1}(target).
                IntMatrix im_with_b = zlin::lattice_basis(d.on_gens.hcat(c.B_r(d.to.p, d.to.q, r)));
                if (!zlin::subgroup_equal(im_with_b, c.B_r(d.to.p, d.to.q, r + 1), relT))
                    rep.failures.push_back("im d^" + std::to_string(r) + " != B^" + std::to_string(r + 1) + "/B^" + std::to_string(r) + " at " + pq_str(p, q));

                // d o d = 0: the image lies in ker d^r(target) = Z^{r+1}(target).
                if (!zlin::subgroup_leq(d.on_gens, c.Z_r(d.to.p, d.to.q, r + 1), relT))
                    rep.failures.push_back("d^r o d^r != 0 out of " + pq_str(p, q));
            }
        }
    return rep;
}

CheckReport group_homology_step_check(const GroupCouple& c, int r) {
    CheckReport rep;
    for (int p = 0; p <= c.report_pmax; ++p)
        for (int q = 1; q <= c.report_qmax; ++q) {
            const IntMatrix relE = c.nodeE(p, q).relations();
            // E^{r+1} directly.
            FgAbelianGroup direct = zlin::subgroup_quotient(c.Z_r(p, q, r + 1), c.B_r(p, q, r + 1), relE);
            // ker d^r at (p,q) = Z^{r+1} (validated elsewhere); im of the incoming
            // differential from (p+r, q-r+1).
            IntMatrix incoming(c.nodeE(p, q).ngens(), 0);
            if (q - r + 1 >= 0) incoming = group_differential(c, r, p + r, q - r + 1).on_gens;
            IntMatrix denom = zlin::lattice_basis(incoming.hcat(c.B_r(p, q, r)));
            FgAbelianGroup homreadout = zlin::subgroup_quotient(c.Z_r(p, q, r + 1), denom, relE);
            if (!direct.same_invariants(homreadout))
                rep.failures.push_back("E^{r+1} != H(E^r, d^r) at " + pq_str(p, q) + " for r=" + std::to_string(r));
        }
    return rep;
}

CheckReport group_convergence_check(const GroupCouple& c) {
    CheckReport rep;
    StabilizationReport stab = detect_stabilization(c, c.r_cap());
    for (int p = 0; p <= c.report_pmax; ++p)
        for (int q = 0; q <= c.report_qmax; ++q) {
            if (p + q < 2) continue;
            const IntMatrix relE = c.nodeE(p, q).relations();
            const FgAbelianGroup& colimit = c.nodeD(p + q + 1, -1);
            const IntMatrix relC = colimit.relations();

            IntMatrix zinf = c.Z_r(p, q, p + 1);  // Z^r is constant from r = p+1 on
            auto itb = stab.b_stable_at.find(PQ{p, q});
            if (itb == stab.b_stable_at.end()) {
                rep.failures.push_back("B-tower did not stabilize at " + pq_str(p, q));
                continue;
            }
            IntMatrix binf = c.B_r(p, q, itb->second);

            IntMatrix f_here = zlin::lattice_basis(c.i_composite(p, q, q + 1));
            IntMatrix f_prev = zlin::lattice_basis(c.i_composite(p - 1, q + 1, q + 2));

            // Well-definedness of the comparison map: i^{q+1}(ker j) inside F_{p-1,q+1}.
            IntMatrix ker_j = zlin::map_kernel(c.mapJ(p, q), relE);
            if (!zlin::subgroup_leq(c.i_composite(p, q, q + 1) * ker_j, f_prev, relC)) {
                rep.failures.push_back("comparison map ill-defined at " + pq_str(p, q));
                continue;
            }

            // Lift Z^infty through j (possible since Z^infty = ker k = im j).
            auto lift = zlin::solve(c.mapJ(p, q).hcat(relE), zinf);
            if (!lift) {
                rep.failures.push_back("Z^infty not inside im j at " + pq_str(p, q));
                continue;
            }
            IntMatrix w = lift->row_slice(0, c.nodeD(p, q).ngens());
            IntMatrix phi = c.i_composite(p, q, q + 1) * w;  // images of the Z^infty generators

            // Surjectivity onto F_{p,q}/F_{p-1,q+1}.
            if (!zlin::subgroup_equal(zlin::lattice_basis(phi.hcat(f_prev)), zlin::lattice_basis(f_here.hcat(f_prev)), relC))
                rep.failures.push_back("comparison map not surjective at " + pq_str(p, q));

            // Kernel = B^infty: z with phi(z) in F_{p-1,q+1}.
            {
                IntMatrix jm = c.mapJ(p, q);
                IntMatrix comp = c.i_composite(p, q, q + 1);
                int rows1 = jm.rows(), rows2 = comp.rows();
                int na = zinf.cols(), nw = jm.cols(), nc1 = relE.cols(), nb = f_prev.cols(), nc2 = relC.cols();
                IntMatrix big(rows1 + rows2, na + nw + nc1 + nb + nc2);
                for (int rr = 0; rr < rows1; ++rr) {
                    for (int cc = 0; cc < na; ++cc) big(rr, cc) = zinf(rr, cc);
                    for (int cc = 0; cc < nw; ++cc) big(rr, na + cc) = -jm(rr, cc);
                    for (int cc = 0; cc < nc1; ++cc) big(rr, na + nw + cc) = -relE(rr, cc);
                }
                for (int rr = 0; rr < rows2; ++rr) {
                    for (int cc = 0; cc < nw; ++cc) big(rows1 + rr, na + cc) = comp(rr, cc);
                    for (int cc = 0; cc < nb; ++cc) big(rows1 + rr, na + nw + nc1 + cc) = -f_prev(rr, cc);
                    for (int cc = 0; cc < nc2; ++cc) big(rows1 + rr, na + nw + nc1 + nb + cc) = -relC(rr, cc);
                }
                IntMatrix a = zlin::kernel_basis(big).row_slice(0, na);
                IntMatrix ker_sub = zlin::lattice_basis((zinf * a).hcat(relE));
                if (!zlin::subgroup_equal(ker_sub, zlin::lattice_basis(binf.hcat(relE)), relE))
                    rep.failures.push_back("comparison-map kernel != B^infty at " + pq_str(p, q));
            }

            // Invariant factors of both sides.
            FgAbelianGroup lhs = zlin::subgroup_quotient(zinf, binf, relE);
            FgAbelianGroup rhs = zlin::subgroup_quotient(f_here, f_prev, relC);
            if (!lhs.same_invariants(rhs))
                rep.failures.push_back("Z^inf/B^inf != F_{p,q}/F_{p-1,q+1} at " + pq_str(p, q) + " (" + lhs.describe() +
                                       " vs " + rhs.describe() + ")");
            else
                rep.notes.push_back("E^inf" + pq_str(p, q) + " = " + lhs.describe());
        }
    return rep;
}

StabilizationReport detect_stabilization(const GroupCouple& c, int r_cap) {
    StabilizationReport rep;
    rep.r_cap = r_cap;
    for (int p = 0; p <= c.report_pmax; ++p)
        for (int q = 0; q <= c.report_qmax; ++q) {
            const IntMatrix relE = c.nodeE(p, q).relations();
            int zs = -1, bs = -1;
            IntMatrix zprev = c.Z_r(p, q, 1), bprev = c.B_r(p, q, 1);
            for (int r = 2; r <= r_cap; ++r) {
                IntMatrix z = c.Z_r(p, q, r);
                IntMatrix b = c.B_r(p, q, r);
                if (zs < 0 && zlin::subgroup_equal(z, zprev, relE)) zs = r - 1;
                if (zs >= 0 && !zlin::subgroup_equal(z, zprev, relE)) zs = -1;  // not yet stable after all
                if (bs < 0 && zlin::subgroup_equal(b, bprev, relE)) bs = r - 1;
                if (bs >= 0 && !zlin::subgroup_equal(b, bprev, relE)) bs = -1;
                zprev = std::move(z);
                bprev = std::move(b);
            }
            if (zs >= 0) rep.z_stable_at[PQ{p, q}] = zs;
            if (bs >= 0) rep.b_stable_at[PQ{p, q}] = bs;
            if (zs < 0 || bs < 0) rep.all_detected = false;
        }
    return rep;
}

// ---------- filtered complexes -----------------------------------------------------

std::optional<std::string> FilteredComplex::validate() const {
    if (int(level.size()) != int(total.dims.size())) return "level table size mismatch";
    for (size_t n = 0; n < level.size(); ++n)
        if (int(level[n].size()) != total.dims[n]) return "level row size mismatch at degree " + std::to_string(n);
    for (size_t n = 0; n < level.size(); ++n)
        for (int v : level[n])
            if (v < 0 || v >= levels) return "level out of range";
    std::string why;
    if (!total.is_complex(&why)) return why;
    for (int n = 1; n <= total.top_dim(); ++n)
        for (int col = 0; col < total.dims[n]; ++col)
            for (int row = 0; row < total.dims[n - 1]; ++row)
                if (total.boundary[n](row, col) != 0 && level[n - 1][row] > level[n][col])
                    return "boundary does not respect the filtration at degree " + std::to_string(n);
    return std::nullopt;
}

std::vector<std::vector<int>> FilteredComplex::sub_index(int p) const {
    std::vector<std::vector<int>> idx(total.dims.size());
    for (size_t n = 0; n < total.dims.size(); ++n)
        for (int t = 0; t < total.dims[n]; ++t)
            if (level[n][t] <= p) idx[n].push_back(t);
    return idx;
}

zlin::ChainComplex FilteredComplex::subcomplex(int p) const {
    auto idx = sub_index(p);
    zlin::ChainComplex c;
    c.dims.resize(total.dims.size());
    c.boundary.resize(total.dims.size());
    for (size_t n = 0; n < total.dims.size(); ++n) c.dims[n] = int(idx[n].size());
    for (size_t n = 1; n < total.dims.size(); ++n) {
        IntMatrix b(c.dims[n - 1], c.dims[n]);
        for (int col = 0; col < c.dims[n]; ++col)
            for (int row = 0; row < c.dims[n - 1]; ++row) b(row, col) = total.boundary[n](idx[n - 1][row], idx[n][col]);
        c.boundary[n] = std::move(b);
    }
    return c;
}

namespace {

struct LevelHomology {
    zlin::HomologyData h;
    std::vector<int> basis_index;  // chain-basis indices (into the total complex) of the sub/quotient complex
};

}  // namespace

GroupCouple build_filtration_couple(const FilteredComplex& fc) {
    if (auto bad = fc.validate()) throw std::invalid_argument("filtered complex invalid: " + *bad);
    const int N = fc.total.top_dim();
    const int P = fc.levels - 1;

    GroupCouple c;
    c.report_pmax = P + 1;
    c.report_qmax = N;
    c.pmax = c.report_pmax + c.r_cap() + 1;
    c.qmin = -(c.pmax + 1);
    c.qmax = N + 1;

    // Homology of every subcomplex F_p (clamped at P) and every quotient F_p/F_{p-1}.
    std::vector<zlin::ChainComplex> subs(c.pmax + 1);
    std::vector<std::vector<std::vector<int>>> sub_idx(c.pmax + 1);
    for (int p = 0; p <= c.pmax; ++p) {
        subs[p] = fc.subcomplex(std::min(p, P));
        sub_idx[p] = fc.sub_index(std::min(p, P));
    }
    std::vector<zlin::ChainComplex> quots(P + 1);
    std::vector<std::vector<std::vector<int>>> quot_idx(P + 1);
    for (int p = 0; p <= P; ++p) {
        zlin::ChainComplex qc;
        qc.dims.resize(fc.total.dims.size());
        qc.boundary.resize(fc.total.dims.size());
        std::vector<std::vector<int>> idx(fc.total.dims.size());
        for (size_t n = 0; n < fc.total.dims.size(); ++n)
            for (int t = 0; t < fc.total.dims[n]; ++t)
                if (fc.level[n][t] == p) idx[n].push_back(t);
        for (size_t n = 0; n < fc.total.dims.size(); ++n) qc.dims[n] = int(idx[n].size());
        for (size_t n = 1; n < fc.total.dims.size(); ++n) {
            IntMatrix b(qc.dims[n - 1], qc.dims[n]);
            for (int col = 0; col < qc.dims[n]; ++col)
                for (int row = 0; row < qc.dims[n - 1]; ++row)
                    b(row, col) = fc.total.boundary[n](idx[n - 1][row], idx[n][col]);
            qc.boundary[n] = std::move(b);
        }
        quots[p] = std::move(qc);
        quot_idx[p] = std::move(idx);
    }

    auto h_sub = [&](int p, int n) -> zlin::HomologyData { return zlin::homology_data(subs[p], n); };
    auto h_quot = [&](int p, int n) -> zlin::HomologyData { return zlin::homology_data(quots[p], n); };

    std::map<std::pair<int, int>, zlin::HomologyData> hs, hq;
    auto get_hs = [&](int p, int n) -> const zlin::HomologyData& {
        auto key = std::make_pair(p, n);
        auto it = hs.find(key);
        if (it == hs.end()) it = hs.emplace(key, h_sub(p, n)).first;
        return it->second;
    };
    auto get_hq = [&](int p, int n) -> const zlin::HomologyData& {
        auto key = std::make_pair(p, n);
        auto it = hq.find(key);
        if (it == hq.end()) it = hq.emplace(key, h_quot(p, n)).first;
        return it->second;
    };

    // Chain-level inclusion F_p -> F_{p+1} and projection F_p -> F_p/F_{p-1} as
    // matrices between the chosen bases, in degree n.
    auto inclusion_matrix = [&](int p, int n) {
        const auto& a = sub_idx[p][n];
        const auto& b = sub_idx[p + 1][n];
        IntMatrix m(int(b.size()), int(a.size()));
        for (int col = 0; col < int(a.size()); ++col) {
            auto it = std::find(b.begin(), b.end(), a[col]);
            m(int(it - b.begin()), col) = 1;
        }
        return m;
    };
    auto projection_matrix = [&](int p, int n) {
        const auto& a = sub_idx[p][n];
        const auto& b = quot_idx[p][n];
        IntMatrix m(int(b.size()), int(a.size()));
        for (int col = 0; col < int(a.size()); ++col) {
            auto it = std::find(b.begin(), b.end(), a[col]);
            if (it != b.end()) m(int(it - b.begin()), col) = 1;
        }
        return m;
    };

    for (int p = 0; p <= c.pmax; ++p)
        for (int n = 0; n <= N; ++n) {
            int q = n - p;
            if (q < c.qmin || q > c.qmax) continue;
            const auto& h = get_hs(p, n);
            if (h.group.ngens() > 0) c.D[PQ{p, q}] = h.group;
            if (p <= P) {
                const auto& hqd = get_hq(p, n);
                if (hqd.group.ngens() > 0) c.E[PQ{p, q}] = hqd.group;
            }
        }

    // i: induced by inclusion.
    for (int p = 0; p + 1 <= c.pmax; ++p)
        for (int n = 0; n <= N; ++n) {
            int q = n - p;
            if (q - 1 < c.qmin || q > c.qmax) continue;
            const auto& src = get_hs(p, n);
            const auto& dst = get_hs(p + 1, n);
            if (src.group.ngens() == 0 || dst.group.ngens() == 0) continue;
            IntMatrix chain = inclusion_matrix(p, n);
            auto sol = zlin::solve(dst.cycle_basis, chain * src.cycle_basis);
            if (!sol) throw std::logic_error("inclusion does not preserve cycles");
            c.i[PQ{p, q}] = *sol;
        }
    // j: induced by projection.
    for (int p = 0; p <= P; ++p)
        for (int n = 0; n <= N; ++n) {
            int q = n - p;
            if (q < c.qmin || q > c.qmax) continue;
            const auto& src = get_hs(p, n);
            const auto& dst = get_hq(p, n);
            if (src.group.ngens() == 0 || dst.group.ngens() == 0) continue;
            IntMatrix chain = projection_matrix(p, n);
            auto sol = zlin::solve(dst.cycle_basis, chain * src.cycle_basis);
            if (!sol) throw std::logic_error("projection does not preserve cycles");
            c.j[PQ{p, q}] = *sol;
        }
    // k: the connecting map.  A quotient cycle lifts to a chain in F_p with the
    // same level-p coordinates; its boundary lies in F_{p-1}.
    for (int p = 0; p <= P; ++p)
        for (int n = 0; n <= N; ++n) {
            int q = n - p;
            if (q < c.qmin || q > c.qmax) continue;
            const auto& src = get_hq(p, n);
            if (src.group.ngens() == 0 || n == 0 || p == 0) continue;
            const auto& dst = get_hs(p - 1, n - 1);
            if (dst.group.ngens() == 0) continue;
            // Lift: total-complex chain with the quotient coordinates.
            IntMatrix lift(fc.total.dims[n], src.cycle_basis.cols());
            for (int col = 0; col < src.cycle_basis.cols(); ++col)
                for (int row = 0; row < int(quot_idx[p][n].size()); ++row)
                    lift(quot_idx[p][n][row], col) = src.cycle_basis(row, col);
            IntMatrix bound = fc.total.boundary[n] * lift;  // lies in F_{p-1}
            IntMatrix bound_sub(int(sub_idx[p - 1][n - 1].size()), bound.cols());
            for (int col = 0; col < bound.cols(); ++col)
                for (int row = 0; row < int(sub_idx[p - 1][n - 1].size()); ++row)
                    bound_sub(row, col) = bound(sub_idx[p - 1][n - 1][row], col);
            auto sol = zlin::solve(dst.cycle_basis, bound_sub);
            if (!sol) throw std::logic_error("connecting map image is not a cycle");
            c.k[PQ{p, q}] = *sol;
        }
    return c;
}

// ---------- finite-table engine -----------------------------------------------------

TableNode TableNode::zero() { return TableNode{}; }

TableNode TableNode::from_monoid(const tab::MonoidTable& m, NodeKind kind) {
    TableNode n;
    n.kind = kind;
    n.names = m.names;
    n.basepoint = m.neutral;
    n.op = m.op;
    return n;
}

namespace {

const TableNode& zero_table_node() {
    static const TableNode z;
    return z;
}

std::vector<int> identity_map(int n) {
    std::vector<int> v(n);
    for (int t = 0; t < n; ++t) v[t] = t;
    return v;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

const TableNode& TableCouple::nodeD(int p, int q) const {
    auto it = D.find(PQ{p, q});
    return it == D.end() ? zero_table_node() : it->second;
}

const TableNode& TableCouple::nodeE(int p, int q) const {
    auto it = E.find(PQ{p, q});
    return it == E.end() ? zero_table_node() : it->second;
}

std::vector<int> TableCouple::mapI(int p, int q) const {
    auto it = i.find(PQ{p, q});
    if (it != i.end()) return it->second;
    return std::vector<int>(size_t(nodeD(p, q).size()), nodeD(p + 1, q - 1).basepoint);
}

std::vector<int> TableCouple::mapJ(int p, int q) const {
    auto it = j.find(PQ{p, q});
    if (it != j.end()) return it->second;
    return std::vector<int>(size_t(nodeD(p, q).size()), nodeE(p, q).basepoint);
}

std::vector<int> TableCouple::mapK(int p, int q) const {
    auto it = k.find(PQ{p, q});
    if (it != k.end()) return it->second;
    return std::vector<int>(size_t(nodeE(p, q).size()), nodeD(p - 1, q).basepoint);
}

std::vector<int> TableCouple::i_image(int p, int q, int r) const {
    std::vector<int> cur = identity_map(nodeD(p, q).size());
    for (int t = 0; t < r; ++t) {
        std::vector<int> step = mapI(p + t, q - t);
        for (int& v : cur) v = step[v];
    }
    return sorted_unique(cur);
}

std::vector<int> TableCouple::i_kernel_set(int p, int q, int r) const {
    std::vector<int> cur = identity_map(nodeD(p, q).size());
    for (int t = 0; t < r; ++t) {
        std::vector<int> step = mapI(p + t, q - t);
        for (int& v : cur) v = step[v];
    }
    int base = nodeD(p + r, q - r).basepoint;
    std::vector<int> out;
    for (int e = 0; e < int(cur.size()); ++e)
        if (cur[e] == base) out.push_back(e);
    return out;
}

std::vector<int> TableCouple::Z_r(int p, int q, int r) const {
    std::vector<int> image = i_image(p - r, q + r - 1, r - 1);
    std::vector<int> km = mapK(p, q);
    std::vector<int> out;
    for (int e = 0; e < nodeE(p, q).size(); ++e)
        if (std::binary_search(image.begin(), image.end(), km[e])) out.push_back(e);
    return out;
}

std::vector<int> TableCouple::B_r(int p, int q, int r) const {
    std::vector<int> ker = i_kernel_set(p, q, r - 1);
    std::vector<int> jm = mapJ(p, q);
    std::vector<int> out;
    for (int e : ker) out.push_back(jm[e]);
    return sorted_unique(out);
}

namespace {

std::optional<std::string> check_table_kind(const TableNode& n, bool need_monoid, bool need_abelian_monoid,
                                            bool need_group, bool need_abelian_group, bool must_vanish,
                                            const std::string& where) {
    if (must_vanish && n.size() != 1) return where + " must vanish";
    // A one-point node is the trivial monoid/group and satisfies everything.
    if (n.size() == 1) return std::nullopt;
    auto as_monoid = [&]() {
        tab::MonoidTable m;
        m.names = n.names;
        m.op = n.op;
        m.neutral = n.basepoint;
        return m;
    };
    bool want_op = need_monoid || need_abelian_monoid || need_group || need_abelian_group;
    if (want_op) {
        if (!n.has_op()) return where + " must carry a monoid structure";
        tab::MonoidTable m = as_monoid();
        if (auto bad = m.check_monoid()) return where + ": " + *bad;
        if ((need_group || need_abelian_group) && !m.is_group()) return where + " must be a group";
        if ((need_abelian_monoid || need_abelian_group) && !m.is_commutative()) return where + " must be abelian";
    }
    return std::nullopt;
}

}  // namespace

CheckReport validate_table_couple(const TableCouple& c) {
    CheckReport rep;
    // Kind ledger.
    for (int p = -1; p <= c.pmax; ++p)
        for (int q = c.qmin; q <= c.qmax; ++q) {
            const TableNode& dn = c.nodeD(p, q);
            bool d_vanish = p < 0;
            bool d_monoid = p >= 1 && q == 0;
            bool d_ab_monoid = p >= 2 && q == 0;
            bool d_group = q >= 1;
            bool d_ab_group = q >= 1 && p + q >= 2;
            if (auto bad = check_table_kind(dn, d_monoid, d_ab_monoid, d_group, d_ab_group, d_vanish, "D" + pq_str(p, q)))
                rep.failures.push_back(*bad);

            const TableNode& en = c.nodeE(p, q);
            bool e_vanish = p < 0 || q < 0;
            bool e_monoid = q == 0 && p >= 2;
            bool e_ab_monoid = q == 0 && p >= 3;
            bool e_group = q >= 1;
            bool e_ab_group = q >= 1 && p + q >= 2;
            if (auto bad = check_table_kind(en, e_monoid, e_ab_monoid, e_group, e_ab_group, e_vanish, "E" + pq_str(p, q)))
                rep.failures.push_back(*bad);
        }

    auto hom_check = [&](const TableNode& a, const TableNode& b, const std::vector<int>& f, const std::string& where) {
        if (int(f.size()) != a.size()) {
            rep.failures.push_back(where + " has wrong domain size");
            return;
        }
        for (int v : f)
            if (v < 0 || v >= b.size()) {
                rep.failures.push_back(where + " maps outside its target");
                return;
            }
        if (f[a.basepoint] != b.basepoint) rep.failures.push_back(where + " does not preserve the basepoint");
        if (a.has_op() && b.has_op()) {
            for (int x = 0; x < a.size(); ++x)
                for (int y = 0; y < a.size(); ++y)
                    if (f[a.op[x][y]] != b.op[f[x]][f[y]]) {
                        rep.failures.push_back(where + " is not a monoid homomorphism");
                        return;
                    }
        }
    };

    for (int p = 0; p + 1 <= c.pmax; ++p)
        for (int q = c.qmin + 1; q + 1 <= c.qmax; ++q) {
            hom_check(c.nodeD(p, q), c.nodeD(p + 1, q - 1), c.mapI(p, q), "i" + pq_str(p, q));
            hom_check(c.nodeD(p, q), c.nodeE(p, q), c.mapJ(p, q), "j" + pq_str(p, q));
            hom_check(c.nodeE(p, q), c.nodeD(p - 1, q), c.mapK(p, q), "k" + pq_str(p, q));

            // Exactness as pointed sets.
            auto im = [&](const std::vector<int>& f) { return sorted_unique(f); };
            auto ker = [&](const std::vector<int>& f, int base) {
                std::vector<int> out;
                for (int e = 0; e < int(f.size()); ++e)
                    if (f[e] == base) out.push_back(e);
                return out;
            };
            if (im(c.mapI(p - 1, q + 1)) != ker(c.mapJ(p, q), c.nodeE(p, q).basepoint))
                rep.failures.push_back("exactness (i,j) fails at D" + pq_str(p, q));
            if (im(c.mapJ(p, q)) != ker(c.mapK(p, q), c.nodeD(p - 1, q).basepoint))
                rep.failures.push_back("exactness (j,k) fails at E" + pq_str(p, q));
            if (im(c.mapK(p + 1, q)) != ker(c.mapI(p, q), c.nodeD(p + 1, q - 1).basepoint))
                rep.failures.push_back("exactness (k,i) fails at D" + pq_str(p, q));
        }
    return rep;
}

TablePage table_page(const TableCouple& c, int r) {
    if (r < 1) throw std::invalid_argument("page index must be >= 1");
    TablePage page;
    page.r = r;
    for (int p = 0; p <= c.pmax; ++p)
        for (int q = 0; q <= c.qmax; ++q) {
            std::vector<int> z = c.Z_r(p, q, r);
            std::vector<int> b = c.B_r(p, q, r);
            if (q >= 1 && c.nodeE(p, q).has_op()) {
                // Left cosets z * B^r inside Z^r.
                const TableNode& en = c.nodeE(p, q);
                std::vector<std::vector<int>> classes;
                std::vector<char> used(en.size(), 0);
                for (int e : z) {
                    if (used[e]) continue;
                    std::vector<int> cls;
                    for (int bb : b) {
                        int v = en.op[e][bb];
                        if (!used[v]) {
                            used[v] = 1;
                            cls.push_back(v);
                        }
                    }
                    if (cls.empty()) {
                        used[e] = 1;
                        cls.push_back(e);
                    }
                    classes.push_back(sorted_unique(cls));
                }
                page.E_classes[PQ{p, q}] = std::move(classes);
            }
            page.Z[PQ{p, q}] = std::move(z);
            page.B[PQ{p, q}] = std::move(b);
        }
    return page;
}

CheckReport table_differential_checks(const TableCouple& c, int rmax) {
    CheckReport rep;
    for (int p = 0; p <= c.pmax; ++p)
        for (int q = 0; q <= c.qmax; ++q)
            for (int r = 1; r <= rmax; ++r) {
                std::vector<int> z = c.Z_r(p, q, r);
                std::vector<int> km = c.mapK(p, q);
                int tp = p - r, tq = q + r - 1;
                std::vector<int> jt = c.mapJ(tp, tq);
                std::vector<int> bt = c.B_r(tp, tq, r);
                const TableNode& et = c.nodeE(tp, tq);

                // Composite i^{r-1} into D(p-1, q), elementwise.
                std::vector<int> comp = identity_map(c.nodeD(tp, tq).size());
                for (int t = 0; t < r - 1; ++t) {
                    std::vector<int> step = c.mapI(tp + t, tq - t);
                    for (int& v : comp) v = step[v];
                }

                auto same_class = [&](int a, int b) {
                    if (a == b) return true;
                    if (!et.has_op()) return false;
                    // b in a * B^r
                    for (int bb : bt)
                        if (et.op[a][bb] == b) return true;
                    return false;
                };

                std::vector<int> dz(z.size(), -1);
                for (size_t t = 0; t < z.size(); ++t) {
                    int target = km[z[t]];
                    std::vector<int> values;
                    for (int x = 0; x < int(comp.size()); ++x)
                        if (comp[x] == target) values.push_back(jt[x]);
                    if (values.empty()) {
                        rep.failures.push_back("k-image escapes im i^{r-1} at " + pq_str(p, q) + ", r=" + std::to_string(r));
                        continue;
                    }
                    for (size_t u = 1; u < values.size(); ++u)
                        if (!same_class(values[0], values[u])) {
                            rep.failures.push_back("d^" + std::to_string(r) + " ill-defined at " + pq_str(p, q));
                            break;
                        }
                    dz[t] = values[0];
                }

                if (r == 1) {
                    // d^1 = j o k exactly.
                    for (size_t t = 0; t < z.size(); ++t)
                        if (dz[t] >= 0 && dz[t] != jt[km[z[t]]]) {
                            rep.failures.push_back("d^1 != j o k at " + pq_str(p, q));
                            break;
                        }
                }

                // ker d^r = Z^{r+1}: the value lies in the zero class B^r/B^r.
                std::vector<int> kernel;
                for (size_t t = 0; t < z.size(); ++t)
                    if (dz[t] >= 0 && std::binary_search(bt.begin(), bt.end(), dz[t])) kernel.push_back(z[t]);
                if (sorted_unique(kernel) != c.Z_r(p, q, r + 1))
                    rep.failures.push_back("ker d^" + std::to_string(r) + " != Z^" + std::to_string(r + 1) + " at " + pq_str(p, q));

                // im d^r united with B^r equals B^{r+1} at the target.
                std::vector<int> im = bt;
                for (size_t t = 0; t < z.size(); ++t)
                    if (dz[t] >= 0) {
                        im.push_back(dz[t]);
                        if (et.has_op())
                            for (int bb : bt) im.push_back(et.op[dz[t]][bb]);
                    }
                if (sorted_unique(im) != c.B_r(tp, tq, r + 1))
                    rep.failures.push_back("im d^" + std::to_string(r) + " != B^" + std::to_string(r + 1) + "/B^" +
                                           std::to_string(r) + " at " + pq_str(p, q));
            }
    return rep;
}

// ---------- monoid homomorphism theorem ------------------------------------------

CheckReport monoid_hom_theorem_check(const tab::MonoidTable& L, const tab::MonoidTable& M, const tab::MonoidTable& A,
                                     const std::vector<int>& f, const std::vector<int>& g) {
    CheckReport rep;
    for (const auto* m : {&L, &M, &A})
        if (auto bad = m->check_monoid()) rep.failures.push_back(*bad);
    if (!L.is_commutative() || !M.is_commutative() || !A.is_commutative())
        rep.failures.push_back("monoids must be abelian");
    if (!A.is_group()) rep.failures.push_back("A must be a group");
    if (int(f.size()) != L.size() || int(g.size()) != M.size()) rep.failures.push_back("map size mismatch");
    if (!rep.ok()) return rep;

    auto is_hom = [](const tab::MonoidTable& a, const tab::MonoidTable& b, const std::vector<int>& h) {
        if (h[a.neutral] != b.neutral) return false;
        for (int x = 0; x < a.size(); ++x)
            for (int y = 0; y < a.size(); ++y)
                if (h[a.op[x][y]] != b.op[h[x]][h[y]]) return false;
        return true;
    };
    if (!is_hom(L, M, f)) rep.failures.push_back("f is not a homomorphism");
    if (!is_hom(M, A, g)) rep.failures.push_back("g is not a homomorphism");
    // f injective, g surjective, ker g = im f.
    std::set<int> imf(f.begin(), f.end());
    if (int(imf.size()) != L.size()) rep.failures.push_back("f is not injective");
    std::set<int> img(g.begin(), g.end());
    if (int(img.size()) != A.size()) rep.failures.push_back("g is not surjective");
    std::set<int> kerg;
    for (int m = 0; m < M.size(); ++m)
        if (g[m] == A.neutral) kerg.insert(m);
    if (kerg != imf) rep.failures.push_back("ker g != im f");
    if (!rep.ok()) return rep;

    // Congruence: m1 ~ m2 iff m1 + f(l1) = m2 + f(l2) for some l1, l2.
    std::vector<int> cls(M.size());
    for (int m = 0; m < M.size(); ++m) cls[m] = m;
    std::function<int(int)> find = [&](int a) { return cls[a] == a ? a : cls[a] = find(cls[a]); };
    for (int m1 = 0; m1 < M.size(); ++m1)
        for (int l1 = 0; l1 < L.size(); ++l1) {
            int a = M.op[m1][f[l1]];
            cls[find(a)] = find(m1);
        }
    std::vector<int> roots;
    for (int m = 0; m < M.size(); ++m)
        if (find(m) == m) roots.push_back(m);
    auto class_index = [&](int m) {
        return int(std::lower_bound(roots.begin(), roots.end(), find(m)) - roots.begin());
    };
    const int nc = int(roots.size());

    // Well-defined addition on classes.
    std::vector<std::vector<int>> qop(nc, std::vector<int>(nc, -1));
    bool welldef = true;
    for (int m1 = 0; m1 < M.size() && welldef; ++m1)
        for (int m2 = 0; m2 < M.size(); ++m2) {
            int v = class_index(M.op[m1][m2]);
            int& slot = qop[class_index(m1)][class_index(m2)];
            if (slot < 0)
                slot = v;
            else if (slot != v) {
                rep.failures.push_back("quotient addition is not well-defined");
                welldef = false;
                break;
            }
        }
    if (!welldef) return rep;

    tab::MonoidTable Q;
    for (int t = 0; t < nc; ++t) Q.names.push_back("[" + M.names[roots[t]] + "]");
    Q.op = qop;
    Q.neutral = class_index(M.neutral);
    if (auto bad = Q.check_monoid()) {
        rep.failures.push_back("quotient is not a monoid: " + *bad);
        return rep;
    }
    if (!Q.is_group()) {
        rep.failures.push_back("quotient M/f(L) is not a group");
        return rep;
    }

    // Induced map to A is constant on classes and an isomorphism.
    std::vector<int> gbar(nc, -1);
    for (int m = 0; m < M.size(); ++m) {
        int& slot = gbar[class_index(m)];
        if (slot < 0)
            slot = g[m];
        else if (slot != g[m]) {
            rep.failures.push_back("g is not constant on congruence classes");
            return rep;
        }
    }
    std::set<int> hit(gbar.begin(), gbar.end());
    if (int(hit.size()) != nc || nc != A.size()) {
        rep.failures.push_back("induced map is not a bijection");
        return rep;
    }
    for (int x = 0; x < nc; ++x)
        for (int y = 0; y < nc; ++y)
            if (gbar[Q.op[x][y]] != A.op[gbar[x]][gbar[y]]) {
                rep.failures.push_back("induced map is not a homomorphism");
                return rep;
            }
    rep.notes.push_back("quotient group of order " + std::to_string(nc));
    return rep;
}

}  // namespace cubicalc::spseq
