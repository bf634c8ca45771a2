#include "cubicalc/boxcat.hpp"

#include <algorithm>
#include <functional>
#include <list>
#include <sstream>
#include <stdexcept>

namespace cubicalc::box {

BoxMorphism BoxMorphism::identity(int n) {
    BoxMorphism m;
    m.dom_dim = m.cod_dim = n;
    return m;
}

BoxMorphism BoxMorphism::face(int n, int i, int sign) {
    if (i < 1 || i > n || (sign != 1 && sign != -1)) throw std::invalid_argument("bad face generator");
    BoxMorphism m;
    m.dom_dim = n - 1;
    m.cod_dim = n;
    m.insertions = {{i, sign}};
    return m;
}

BoxMorphism BoxMorphism::degeneracy(int n, int i) {
    if (i < 1 || i > n) throw std::invalid_argument("bad degeneracy generator");
    BoxMorphism m;
    m.dom_dim = n;
    m.cod_dim = n - 1;
    m.projections = {i};
    return m;
}

std::vector<int> BoxMorphism::projected_set() const {
    // The word (j_1 >= ... >= j_t) applied right-to-left removes original
    // coordinate j_{t+1-k} + (k-1) at the k-th application.
    int t = int(projections.size());
    std::vector<int> removed(t);
    for (int k = 1; k <= t; ++k) removed[k - 1] = projections[t - k] + (k - 1);
    return removed;
}

std::vector<int> BoxMorphism::word_from_projected_set(const std::vector<int>& removed) {
    int t = int(removed.size());
    std::vector<int> word(t);
    for (int k = 1; k <= t; ++k) word[t - k] = removed[k - 1] - (k - 1);
    return word;
}

std::string BoxMorphism::str() const {
    std::ostringstream os;
    bool any = false;
    for (auto it = insertions.rbegin(); it != insertions.rend(); ++it) {
        os << (any ? " " : "") << "d" << it->pos << (it->sign > 0 ? "+" : "-");
        any = true;
    }
    for (int j : projections) {
        os << (any ? " " : "") << "s" << j;
        any = true;
    }
    if (!any) os << "id";
    os << " : I^" << dom_dim << " -> I^" << cod_dim;
    return os.str();
}

std::vector<Letter> to_word(const BoxMorphism& m) {
    std::vector<Letter> w;
    // Normal form reads (left to right): insertions with strictly decreasing
    // position, then projections with non-increasing index.
    for (auto it = m.insertions.rbegin(); it != m.insertions.rend(); ++it)
        w.push_back({true, it->pos, it->sign});
    for (int j : m.projections) w.push_back({false, j, 0});
    return w;
}

BoxMorphism normalize_word(int dom_dim, std::span<const Letter> word) {
    std::list<Letter> w(word.begin(), word.end());

    // Validate dimensions right-to-left and compute the codomain dimension.
    int dim = dom_dim;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (it->is_insertion) {
            if (it->index < 1 || it->index > dim + 1) throw std::invalid_argument("insertion index out of range");
            ++dim;
        } else {
            if (dim < 1 || it->index < 1 || it->index > dim) throw std::invalid_argument("projection index out of range");
            --dim;
        }
    }
    const int cod_dim = dim;

    // Rewrite adjacent pairs until normal order is reached.  Each rule either
    // removes two letters or moves an insertion left / projection right, so
    // the loop terminates.
    bool changed = true;
    long passes = 0;
    while (changed) {
        if (++passes > 100000) throw std::logic_error("rewriting did not terminate");
        changed = false;
        for (auto it = w.begin(); it != w.end();) {
            auto nx = std::next(it);
            if (nx == w.end()) break;
            Letter& L = *it;   // applied second
            Letter& R = *nx;   // applied first
            if (L.is_insertion && R.is_insertion && L.index <= R.index) {
                // delta_a delta_b = delta_{b+1} delta_a for a <= b
                int a = L.index, asign = L.sign;
                L = {true, R.index + 1, R.sign};
                R = {true, a, asign};
                changed = true;
                ++it;
            } else if (!L.is_insertion && !R.is_insertion && L.index < R.index) {
                // sigma_a sigma_b = sigma_{b-1} sigma_a for a < b
                int a = L.index;
                L = {false, R.index - 1, 0};
                R = {false, a, 0};
                changed = true;
                ++it;
            } else if (!L.is_insertion && R.is_insertion) {
                int j = L.index, i = R.index, sign = R.sign;
                if (i == j) {
                    it = w.erase(it);
                    it = w.erase(it);
                    if (it != w.begin()) --it;
                } else if (i < j) {
                    L = {true, i, sign};
                    R = {false, j - 1, 0};
                    ++it;
                } else {
                    L = {true, i - 1, sign};
                    R = {false, j, 0};
                    ++it;
                }
                changed = true;
            } else {
                ++it;
            }
        }
    }

    BoxMorphism m;
    m.dom_dim = dom_dim;
    m.cod_dim = cod_dim;
    auto it = w.begin();
    for (; it != w.end() && it->is_insertion; ++it) m.insertions.push_back({it->index, it->sign});
    std::reverse(m.insertions.begin(), m.insertions.end());
    for (; it != w.end(); ++it) {
        if (it->is_insertion) throw std::logic_error("rewriting did not reach normal form");
        m.projections.push_back(it->index);
    }
    for (size_t t = 1; t < m.insertions.size(); ++t)
        if (m.insertions[t - 1].pos >= m.insertions[t].pos) throw std::logic_error("insertions not strictly increasing");
    for (size_t t = 1; t < m.projections.size(); ++t)
        if (m.projections[t - 1] < m.projections[t]) throw std::logic_error("projections not non-increasing");
    return m;
}

BoxMorphism compose(const BoxMorphism& g, const BoxMorphism& f) {
    if (f.cod_dim != g.dom_dim) throw std::invalid_argument("compose: dimension mismatch");
    std::vector<Letter> w = to_word(g);
    std::vector<Letter> wf = to_word(f);
    w.insert(w.end(), wf.begin(), wf.end());
    BoxMorphism m = normalize_word(f.dom_dim, w);
    if (m.cod_dim != g.cod_dim) throw std::logic_error("compose: codomain mismatch after rewriting");
    return m;
}

std::vector<double> apply_geometric(const BoxMorphism& m, std::span<const double> x) {
    if (int(x.size()) != m.dom_dim) throw std::invalid_argument("apply_geometric: length mismatch");
    std::vector<double> v(x.begin(), x.end());
    // Apply the projection word right-to-left.
    for (auto it = m.projections.rbegin(); it != m.projections.rend(); ++it)
        v.erase(v.begin() + (*it - 1));
    for (const Insertion& ins : m.insertions)
        v.insert(v.begin() + (ins.pos - 1), double(ins.sign));
    return v;
}

namespace {

void subsets_of_size(int n, int k, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& emit,
                     int start = 1) {
    if (int(cur.size()) == k) {
        emit(cur);
        return;
    }
    for (int v = start; v <= n; ++v) {
        if (n - v + 1 < k - int(cur.size())) break;
        cur.push_back(v);
        subsets_of_size(n, k, cur, emit, v + 1);
        cur.pop_back();
    }
}

}  // namespace

std::vector<BoxMorphism> enumerate_hom(int n, int m) {
    if (n < 0 || m < 0) throw std::invalid_argument("enumerate_hom: negative dimension");
    std::vector<BoxMorphism> out;
    for (int r = 0; r <= std::min(n, m); ++r) {
        std::vector<int> proj_cur, ins_cur;
        subsets_of_size(n, n - r, proj_cur, [&](const std::vector<int>& removed) {
            subsets_of_size(m, m - r, ins_cur, [&](const std::vector<int>& inserted) {
                int k = int(inserted.size());
                for (int mask = 0; mask < (1 << k); ++mask) {
                    BoxMorphism mor;
                    mor.dom_dim = n;
                    mor.cod_dim = m;
                    mor.projections = BoxMorphism::word_from_projected_set(removed);
                    for (int t = 0; t < k; ++t)
                        mor.insertions.push_back({inserted[t], (mask >> t) & 1 ? 1 : -1});
                    out.push_back(std::move(mor));
                }
            });
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t hom_count_closed_form(int n, int m) {
    auto binom = [](int a, int b) -> std::uint64_t {
        if (b < 0 || b > a) return 0;
        std::uint64_t r = 1;
        for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
        return r;
    };
    std::uint64_t total = 0;
    for (int r = 0; r <= std::min(n, m); ++r)
        total += binom(n, r) * binom(m, r) * (std::uint64_t(1) << (m - r));
    return total;
}

}  // namespace cubicalc::box
