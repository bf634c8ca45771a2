// Exact integer linear algebra over arbitrary-precision integers:
// Smith normal form, kernels, integer linear solves, finitely generated
// abelian groups presented by relation matrices, and chain-complex homology.
#ifndef CUBICALC_ZLINALG_HPP
#define CUBICALC_ZLINALG_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace cubicalc::zlin {

using Int = mpz_class;

class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, Int(0)) {}

    static IntMatrix identity(int n);
    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static IntMatrix column(const std::vector<Int>& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Int& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
    const Int& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

    bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

    IntMatrix operator*(const IntMatrix& o) const;
    IntMatrix operator+(const IntMatrix& o) const;
    IntMatrix operator-(const IntMatrix& o) const;
    IntMatrix transpose() const;
    IntMatrix hcat(const IntMatrix& o) const;   // [this | o]
    IntMatrix col_slice(int c0, int c1) const;  // columns [c0, c1)
    IntMatrix row_slice(int r0, int r1) const;
    IntMatrix col(int j) const { return col_slice(j, j + 1); }

    bool is_zero() const;
    Int det() const;  // Bareiss fraction-free elimination, square matrices only

    std::string str() const;

private:
    int rows_, cols_;
    std::vector<Int> a_;
};

// U * M * V = S with U, V unimodular and S diagonal, d_1 | d_2 | ..., d_i >= 0.
struct SmithResult {
    IntMatrix U, S, V;
    int rank = 0;                       // number of nonzero diagonal entries
    std::vector<Int> diagonal;          // all min(r,c) diagonal entries of S
};

SmithResult smith_normal_form(const IntMatrix& M);

// Basis of the lattice {x : M x = 0}, one column per basis vector.
IntMatrix kernel_basis(const IntMatrix& M);

// Integer solution of M x = b (b one or more columns); nullopt if unsolvable over Z.
std::optional<IntMatrix> solve(const IntMatrix& M, const IntMatrix& b);

// --- Subgroups of a presented group G = Z^n / colspan(rel) -------------------
//
// A subgroup is represented by a generator matrix (n x k); the subgroup is
// (colspan(gens) + colspan(rel)) / colspan(rel).  All functions take the
// ambient relation matrix explicitly.

// Does v (n x 1) lie in colspan(gens) + colspan(rel)?
bool subgroup_contains(const IntMatrix& gens, const IntMatrix& rel, const IntMatrix& v);
bool subgroup_leq(const IntMatrix& a, const IntMatrix& b, const IntMatrix& rel);  // a <= b
bool subgroup_equal(const IntMatrix& a, const IntMatrix& b, const IntMatrix& rel);

// Image of a subgroup of the domain under the matrix map f.
IntMatrix subgroup_image(const IntMatrix& f, const IntMatrix& gens);

// Full preimage {x : f x in colspan(gens_target) + colspan(rel_target)},
// returned as a generator matrix over the domain (relations of the domain
// are not included; callers append them where needed).
IntMatrix subgroup_preimage(const IntMatrix& f, const IntMatrix& gens_target, const IntMatrix& rel_target);

IntMatrix map_kernel(const IntMatrix& f, const IntMatrix& rel_target);

// A reduced basis of the lattice spanned by the columns (drops redundant columns).
IntMatrix lattice_basis(const IntMatrix& gens);

class FgAbelianGroup {
public:
    FgAbelianGroup() : ngens_(0), rel_(0, 0) {}
    FgAbelianGroup(int ngens, IntMatrix relations);

    int ngens() const { return ngens_; }
    const IntMatrix& relations() const { return rel_; }

    // d_1 | d_2 | ... with all d_i >= 2; infinite factors reported via free_rank.
    const std::vector<Int>& torsion_factors() const { return torsion_; }
    int free_rank() const { return free_rank_; }
    bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }

    bool element_is_zero(const IntMatrix& v) const;
    std::string describe() const;  // e.g. "Z^2 + Z/2 + Z/6", "0"

    bool same_invariants(const FgAbelianGroup& o) const {
        return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
    }

private:
    int ngens_;
    IntMatrix rel_;
    std::vector<Int> torsion_;
    int free_rank_ = 0;
};

// Quotient (colspan(z)+colspan(rel)) / (colspan(b)+colspan(rel)) as a presented group.
// Requires colspan(b) subset of colspan(z)+colspan(rel).
FgAbelianGroup subgroup_quotient(const IntMatrix& z, const IntMatrix& b, const IntMatrix& rel);

// --- Chain complexes ---------------------------------------------------------

struct ChainComplex {
    // dims[n] = rank of C_n; boundary[n] : C_n -> C_{n-1} for 1 <= n < dims.size().
    // boundary[0] is unused (kept empty).
    std::vector<int> dims;
    std::vector<IntMatrix> boundary;

    int top_dim() const { return int(dims.size()) - 1; }
    bool is_complex(std::string* why = nullptr) const;  // boundary o boundary == 0
};

struct HomologyData {
    IntMatrix cycle_basis;   // columns: lattice basis of ker boundary[n] in C_n
    IntMatrix relations;     // boundaries expressed in cycle-basis coordinates
    FgAbelianGroup group;
};

HomologyData homology_data(const ChainComplex& c, int n);
FgAbelianGroup homology(const ChainComplex& c, int n);

// Alternating sum of ranks rank H_n - convenience for Euler characteristic checks.
long euler_characteristic_from_homology(const ChainComplex& c);

}  // namespace cubicalc::zlin

#endif
