#include "cubicalc/zlinalg.hpp"

#include <sstream>
#include <stdexcept>

namespace cubicalc::zlin {

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    int r = int(rows.size());
    int c = r == 0 ? 0 : int(rows[0].size());
    IntMatrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (int(rows[i].size()) != c) throw std::invalid_argument("ragged row list");
        for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::column(const std::vector<Int>& v) {
    IntMatrix m(int(v.size()), 1);
    for (int i = 0; i < int(v.size()); ++i) m(i, 0) = v[i];
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product dimension mismatch");
    IntMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Int& v = (*this)(i, k);
            if (v == 0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
        }
    return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix sum dimension mismatch");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix difference dimension mismatch");
    IntMatrix r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

IntMatrix IntMatrix::hcat(const IntMatrix& o) const {
    if (rows_ != o.rows_) throw std::invalid_argument("hcat row mismatch");
    IntMatrix r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
        for (int j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
    }
    return r;
}

IntMatrix IntMatrix::col_slice(int c0, int c1) const {
    IntMatrix r(rows_, c1 - c0);
    for (int i = 0; i < rows_; ++i)
        for (int j = c0; j < c1; ++j) r(i, j - c0) = (*this)(i, j);
    return r;
}

IntMatrix IntMatrix::row_slice(int r0, int r1) const {
    IntMatrix r(r1 - r0, cols_);
    for (int i = r0; i < r1; ++i)
        for (int j = 0; j < cols_; ++j) r(i - r0, j) = (*this)(i, j);
    return r;
}

bool IntMatrix::is_zero() const {
    for (const Int& v : a_)
        if (v != 0) return false;
    return true;
}

Int IntMatrix::det() const {
    if (rows_ != cols_) throw std::invalid_argument("det of non-square matrix");
    int n = rows_;
    if (n == 0) return 1;
    IntMatrix a = *this;
    Int prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
        prev = a(k, k);
    }
    return sign > 0 ? a(n - 1, n - 1) : Int(-a(n - 1, n - 1));
}

std::string IntMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ");
        for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
        os << (i + 1 == rows_ ? "]" : ";\n");
    }
    return os.str();
}

namespace {

struct Snf {
    IntMatrix U, S, V;
};

void swap_rows(IntMatrix& m, int a, int b) {
    for (int j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, int a, int b) {
    for (int i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
void add_row(IntMatrix& m, int dst, int src, const Int& f) {
    for (int j = 0; j < m.cols(); ++j) m(dst, j) += f * m(src, j);
}
void add_col(IntMatrix& m, int dst, int src, const Int& f) {
    for (int i = 0; i < m.rows(); ++i) m(i, dst) += f * m(i, src);
}
void negate_row(IntMatrix& m, int r) {
    for (int j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& M) {
    const int rows = M.rows(), cols = M.cols();
    SmithResult res;
    res.S = M;
    res.U = IntMatrix::identity(rows);
    res.V = IntMatrix::identity(cols);
    IntMatrix& S = res.S;
    IntMatrix& U = res.U;
    IntMatrix& V = res.V;

    auto pick_pivot = [&](int t, int& pi, int& pj) {
        pi = -1; pj = -1;
        Int best;
        for (int i = t; i < rows; ++i)
            for (int j = t; j < cols; ++j) {
                if (S(i, j) == 0) continue;
                Int a = abs(S(i, j));
                if (pi < 0 || a < best) { best = a; pi = i; pj = j; }
            }
        return pi >= 0;
    };

    const int nmin = std::min(rows, cols);
    for (int t = 0; t < nmin; ++t) {
        int pi, pj;
        if (!pick_pivot(t, pi, pj)) break;  // trailing block is zero

        for (;;) {
            if (pi != t) { swap_rows(S, t, pi); swap_rows(U, t, pi); }
            if (pj != t) { swap_cols(S, t, pj); swap_cols(V, t, pj); }

            bool clean = true;
            for (int i = t + 1; i < rows; ++i) {
                if (S(i, t) == 0) continue;
                Int q = S(i, t) / S(t, t);  // truncated division is fine, loop repeats
                if (q != 0) { add_row(S, i, t, -q); add_row(U, i, t, -q); }
                if (S(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < cols; ++j) {
                if (S(t, j) == 0) continue;
                Int q = S(t, j) / S(t, t);
                if (q != 0) { add_col(S, j, t, -q); add_col(V, j, t, -q); }
                if (S(t, j) != 0) clean = false;
            }
            if (clean) {
                // Enforce divisibility of the trailing block by S(t,t).
                int bi = -1;
                for (int i = t + 1; i < rows && bi < 0; ++i)
                    for (int j = t + 1; j < cols; ++j)
                        if (S(i, j) % S(t, t) != 0) { bi = i; break; }
                if (bi < 0) break;
                add_row(S, t, bi, 1);
                add_row(U, t, bi, 1);
            }
            pick_pivot(t, pi, pj);
        }
        if (S(t, t) < 0) { negate_row(S, t); negate_row(U, t); }
    }

    for (int t = 0; t < nmin; ++t) {
        res.diagonal.push_back(S(t, t));
        if (S(t, t) != 0) res.rank = t + 1;
    }
    return res;
}

IntMatrix kernel_basis(const IntMatrix& M) {
    if (M.cols() == 0) return IntMatrix(M.cols(), 0);
    if (M.rows() == 0) return IntMatrix::identity(M.cols());
    SmithResult s = smith_normal_form(M);
    return s.V.col_slice(s.rank, M.cols());
}

std::optional<IntMatrix> solve(const IntMatrix& M, const IntMatrix& b) {
    if (M.rows() != b.rows()) throw std::invalid_argument("solve dimension mismatch");
    SmithResult s = smith_normal_form(M);
    IntMatrix y = s.U * b;
    IntMatrix z(M.cols(), b.cols());
    const int nmin = std::min(M.rows(), M.cols());
    for (int c = 0; c < b.cols(); ++c) {
        for (int i = 0; i < M.rows(); ++i) {
            if (i < nmin && s.S(i, i) != 0) {
                if (y(i, c) % s.S(i, i) != 0) return std::nullopt;
                z(i, c) = y(i, c) / s.S(i, i);
            } else {
                if (y(i, c) != 0) return std::nullopt;
            }
        }
    }
    return s.V * z;
}

bool subgroup_contains(const IntMatrix& gens, const IntMatrix& rel, const IntMatrix& v) {
    IntMatrix m = gens.hcat(rel);
    if (m.cols() == 0) return v.is_zero();
    return solve(m, v).has_value();
}

bool subgroup_leq(const IntMatrix& a, const IntMatrix& b, const IntMatrix& rel) {
    for (int j = 0; j < a.cols(); ++j)
        if (!subgroup_contains(b, rel, a.col(j))) return false;
    return true;
}

bool subgroup_equal(const IntMatrix& a, const IntMatrix& b, const IntMatrix& rel) {
    return subgroup_leq(a, b, rel) && subgroup_leq(b, a, rel);
}

IntMatrix subgroup_image(const IntMatrix& f, const IntMatrix& gens) { return f * gens; }

IntMatrix subgroup_preimage(const IntMatrix& f, const IntMatrix& gens_target, const IntMatrix& rel_target) {
    // x is a preimage iff f x = gens_target a + rel_target c for some a, c.
    IntMatrix stacked = f.hcat(gens_target).hcat(rel_target);
    IntMatrix k = kernel_basis(stacked);
    return k.row_slice(0, f.cols());
}

IntMatrix map_kernel(const IntMatrix& f, const IntMatrix& rel_target) {
    return subgroup_preimage(f, IntMatrix(f.rows(), 0), rel_target);
}

IntMatrix lattice_basis(const IntMatrix& gens) {
    if (gens.cols() == 0) return gens;
    SmithResult s = smith_normal_form(gens);
    return (gens * s.V).col_slice(0, s.rank);
}

FgAbelianGroup::FgAbelianGroup(int ngens, IntMatrix relations) : ngens_(ngens), rel_(std::move(relations)) {
    if (rel_.rows() != ngens_) throw std::invalid_argument("relation matrix row count != generator count");
    SmithResult s = smith_normal_form(rel_);
    free_rank_ = ngens_ - s.rank;
    for (const Int& d : s.diagonal)
        if (d > 1) torsion_.push_back(d);
}

bool FgAbelianGroup::element_is_zero(const IntMatrix& v) const {
    if (rel_.cols() == 0) return v.is_zero();
    return solve(rel_, v).has_value();
}

std::string FgAbelianGroup::describe() const {
    std::ostringstream os;
    bool first = true;
    if (free_rank_ == 1) { os << "Z"; first = false; }
    else if (free_rank_ > 1) { os << "Z^" << free_rank_; first = false; }
    for (const Int& d : torsion_) {
        if (!first) os << " + ";
        os << "Z/" << d.get_str();
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

FgAbelianGroup subgroup_quotient(const IntMatrix& z, const IntMatrix& b, const IntMatrix& rel) {
    // Generators: columns of z.  Relations: coordinates (in those generators) of
    // every element of colspan(b) + colspan(rel) that lies in the subgroup.
    IntMatrix bw = b.hcat(rel);
    IntMatrix k = kernel_basis(z.hcat(bw));
    IntMatrix relations = k.row_slice(0, z.cols());
    return FgAbelianGroup(z.cols(), relations);
}

bool ChainComplex::is_complex(std::string* why) const {
    for (size_t n = 2; n < boundary.size(); ++n) {
        if (boundary[n].cols() == 0 || boundary[n - 1].cols() == 0) continue;
        if (!(boundary[n - 1] * boundary[n]).is_zero()) {
            if (why) *why = "boundary[" + std::to_string(n - 1) + "] * boundary[" + std::to_string(n) + "] != 0";
            return false;
        }
    }
    for (size_t n = 1; n < boundary.size(); ++n) {
        if (boundary[n].rows() != dims[n - 1] || boundary[n].cols() != dims[n]) {
            if (why) *why = "boundary[" + std::to_string(n) + "] has inconsistent dimensions";
            return false;
        }
    }
    return true;
}

HomologyData homology_data(const ChainComplex& c, int n) {
    HomologyData out;
    if (n < 0 || n > c.top_dim() || c.dims[n] == 0) {
        out.cycle_basis = IntMatrix(std::max(0, n <= c.top_dim() && n >= 0 ? c.dims[n] : 0), 0);
        out.relations = IntMatrix(0, 0);
        out.group = FgAbelianGroup(0, IntMatrix(0, 0));
        return out;
    }
    if (n == 0) {
        out.cycle_basis = IntMatrix::identity(c.dims[0]);
    } else {
        out.cycle_basis = kernel_basis(c.boundary[n]);
    }
    int k = out.cycle_basis.cols();
    if (n + 1 <= c.top_dim() && c.dims[n + 1] > 0) {
        auto sol = solve(out.cycle_basis, c.boundary[n + 1]);
        if (!sol) throw std::logic_error("boundaries are not cycles: not a chain complex");
        out.relations = *sol;
    } else {
        out.relations = IntMatrix(k, 0);
    }
    out.group = FgAbelianGroup(k, out.relations);
    return out;
}

FgAbelianGroup homology(const ChainComplex& c, int n) { return homology_data(c, n).group; }

long euler_characteristic_from_homology(const ChainComplex& c) {
    long chi = 0;
    for (int n = 0; n <= c.top_dim(); ++n) {
        FgAbelianGroup h = homology(c, n);
        chi += (n % 2 == 0 ? 1 : -1) * h.free_rank();
    }
    return chi;
}

}  // namespace cubicalc::zlin
