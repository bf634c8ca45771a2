#include "cubicalc/cubset.hpp"

#include "cubicalc/boxcat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cubicalc::cub {

namespace {

// Prepend sigma_i to an ascending word, renormalizing with
// sigma_i sigma_j = sigma_{j+1} sigma_i (i <= j).
std::vector<int> word_prepend(std::vector<int> word, int i) {
    size_t t = 0;
    for (; t < word.size(); ++t) {
        if (i <= word[t]) break;
        // sigma_i sigma_{word[t]} with i > word[t]: swap to sigma_{word[t]} sigma_{i-1}
        --i;
    }
    word.insert(word.begin() + t, i);
    return word;
}

}  // namespace

const std::vector<GenId>& CubicalSet::generators_of_dim(int d) const {
    static const std::vector<GenId> empty;
    if (d < 0 || d >= int(by_dim_.size())) return empty;
    return by_dim_[d];
}

std::optional<GenId> CubicalSet::find_generator(const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

GenId CubicalSet::add_generator(const std::string& name, int dim) {
    if (dim < 0 || dim > trunc_dim_) throw std::invalid_argument("generator dimension outside truncation: " + name);
    if (by_name_.count(name)) throw std::invalid_argument("duplicate generator name: " + name);
    GenId id = int(gens_.size());
    gens_.push_back({name, dim});
    if (int(by_dim_.size()) <= dim) by_dim_.resize(dim + 1);
    by_dim_[dim].push_back(id);
    by_name_[name] = id;
    face_table_.emplace_back(size_t(2 * dim));
    face_set_.emplace_back(size_t(2 * dim), 0);
    return id;
}

void CubicalSet::set_face(GenId g, int i, int sign, Cube value) {
    int d = gens_[g].dim;
    if (i < 1 || i > d) throw std::invalid_argument("face index out of range for " + gens_[g].name);
    face_table_[g][2 * (i - 1) + (sign > 0)] = std::move(value);
    face_set_[g][2 * (i - 1) + (sign > 0)] = 1;
}

bool CubicalSet::has_face(GenId g, int i, int sign) const {
    return face_set_[g][2 * (i - 1) + (sign > 0)] != 0;
}

const Cube& CubicalSet::generator_face(GenId g, int i, int sign) const {
    if (!has_face(g, i, sign)) throw std::logic_error("missing face entry for " + gens_[g].name);
    return face_table_[g][2 * (i - 1) + (sign > 0)];
}

Cube CubicalSet::face(const Cube& c, int i, int sign) const {
    int d = cube_dim(c);
    if (d < 1 || i < 1 || i > d) throw std::invalid_argument("face index out of range");
    // Push the face index through the degeneracy word (outermost letter first).
    std::vector<int> outer;
    outer.reserve(c.word.size());
    int idx = i;
    for (size_t t = 0; t < c.word.size(); ++t) {
        int u = c.word[t];
        if (idx < u) {
            outer.push_back(u - 1);
        } else if (idx == u) {
            // Cancellation: the remaining inner part survives unchanged.
            Cube r{c.gen, std::vector<int>(c.word.begin() + t + 1, c.word.end())};
            for (auto it = outer.rbegin(); it != outer.rend(); ++it) r.word = word_prepend(std::move(r.word), *it);
            return r;
        } else {
            outer.push_back(u);
            --idx;
        }
    }
    Cube r = generator_face(c.gen, idx, sign);
    for (auto it = outer.rbegin(); it != outer.rend(); ++it) r.word = word_prepend(std::move(r.word), *it);
    return r;
}

Cube CubicalSet::degenerate(const Cube& c, int i) const {
    int d = cube_dim(c);
    if (i < 1 || i > d + 1) throw std::invalid_argument("degeneracy index out of range");
    return Cube{c.gen, word_prepend(c.word, i)};
}

std::vector<Cube> CubicalSet::all_cubes(int dim) const {
    std::vector<Cube> out;
    for (GenId g = 0; g < int(gens_.size()); ++g) {
        int d = gens_[g].dim;
        if (d > dim) continue;
        int k = dim - d;
        // Ascending words u_1 <= ... <= u_k with u_t <= d + k - t + 1.
        std::vector<int> word;
        std::function<void(int)> rec = [&](int t) {
            if (t == k) {
                out.push_back(Cube{g, word});
                return;
            }
            int lo = t == 0 ? 1 : word.back();
            int hi = d + k - (t + 1) + 1;
            for (int u = lo; u <= hi; ++u) {
                word.push_back(u);
                rec(t + 1);
                word.pop_back();
            }
        };
        rec(0);
    }
    return out;
}

long CubicalSet::count_cubes(int dim) const { return long(all_cubes(dim).size()); }

std::vector<long> CubicalSet::nondegenerate_counts() const {
    std::vector<long> counts(trunc_dim_ + 1, 0);
    for (const Generator& g : gens_) ++counts[g.dim];
    return counts;
}

long CubicalSet::euler_characteristic() const {
    long chi = 0;
    for (const Generator& g : gens_) chi += g.dim % 2 == 0 ? 1 : -1;
    return chi;
}

std::vector<std::string> CubicalSet::validate() const {
    std::vector<std::string> bad;
    for (GenId g = 0; g < int(gens_.size()); ++g) {
        int d = gens_[g].dim;
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                if (!has_face(g, i, sign)) {
                    bad.push_back("missing face (" + std::to_string(i) + "," + (sign > 0 ? std::string("+") : std::string("-")) +
                                  ") of " + gens_[g].name);
                    continue;
                }
                const Cube& f = generator_face(g, i, sign);
                if (f.gen < 0 || f.gen >= int(gens_.size())) {
                    bad.push_back("dangling generator reference in face of " + gens_[g].name);
                    continue;
                }
                if (cube_dim(f) != d - 1)
                    bad.push_back("face of " + gens_[g].name + " has wrong dimension");
                for (size_t t = 1; t < f.word.size(); ++t)
                    if (f.word[t - 1] > f.word[t]) bad.push_back("non-normalized word in face of " + gens_[g].name);
            }
    }
    if (!bad.empty()) return bad;  // identity checks need well-formed tables
    for (GenId g = 0; g < int(gens_.size()); ++g) {
        int d = gens_[g].dim;
        if (d < 2) continue;
        Cube top{g, {}};
        for (int j = 2; j <= d; ++j)
            for (int i = 1; i < j; ++i)
                for (int se : {-1, 1})
                    for (int sw : {-1, 1}) {
                        Cube lhs = face(face(top, j, sw), i, se);
                        Cube rhs = face(face(top, i, se), j - 1, sw);
                        if (!(lhs == rhs)) {
                            std::ostringstream os;
                            os << "cubical identity violated at " << gens_[g].name << ": d_" << i << "^" << se
                               << " d_" << j << "^" << sw << " != d_" << (j - 1) << "^" << sw << " d_" << i << "^" << se;
                            bad.push_back(os.str());
                        }
                    }
    }
    return bad;
}

std::string CubicalSet::cube_str(const Cube& c) const {
    std::ostringstream os;
    os << gens_[c.gen].name;
    if (!c.word.empty()) {
        os << "[s";
        for (int u : c.word) os << " " << u;
        os << "]";
    }
    return os.str();
}

// --- canonical constructions -------------------------------------------------

namespace {

std::string pattern_name(const std::string& pat) { return pat.empty() ? "pt" : pat; }

// Insertion-only box morphisms I^m -> I^n as sign patterns in {+,-,*}^n.
std::vector<std::string> insertion_patterns(int n, int m) {
    std::vector<std::string> out;
    std::string pat(size_t(n), '*');
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (left == 0) {
            out.push_back(pat);
            return;
        }
        if (pos >= n || n - pos < left) return;
        rec(pos + 1, left);
        pat[pos] = '+';
        rec(pos + 1, left - 1);
        pat[pos] = '-';
        rec(pos + 1, left - 1);
        pat[pos] = '*';
    };
    rec(0, n - m);
    std::sort(out.begin(), out.end());
    return out;
}

box::BoxMorphism pattern_to_morphism(const std::string& pat) {
    box::BoxMorphism f;
    f.cod_dim = int(pat.size());
    for (int p = 0; p < int(pat.size()); ++p)
        if (pat[p] != '*') f.insertions.push_back({p + 1, pat[p] == '+' ? 1 : -1});
    f.dom_dim = f.cod_dim - int(f.insertions.size());
    return f;
}

std::string morphism_to_pattern(const box::BoxMorphism& f) {
    std::string pat(size_t(f.cod_dim), '*');
    for (const auto& ins : f.insertions) pat[ins.pos - 1] = ins.sign > 0 ? '+' : '-';
    return pat;
}

CubicalSet build_from_patterns(int n, const std::vector<std::string>& pats) {
    CubicalSet x(n);
    for (int m = 0; m <= n; ++m)
        for (const std::string& pat : pats)
            if (int(std::count(pat.begin(), pat.end(), '*')) == m) x.add_generator(pattern_name(pat), m);
    // Face tables by box-category composition; faces of insertion-only
    // morphisms are again insertion-only, so the words are empty.
    for (const std::string& pat : pats) {
        box::BoxMorphism phi = pattern_to_morphism(pat);
        int m = phi.dom_dim;
        GenId g = *x.find_generator(pattern_name(pat));
        for (int i = 1; i <= m; ++i)
            for (int sign : {-1, 1}) {
                box::BoxMorphism psi = box::compose(phi, box::BoxMorphism::face(m, i, sign));
                if (!psi.projections.empty()) throw std::logic_error("unexpected projection in cube face");
                auto id = x.find_generator(pattern_name(morphism_to_pattern(psi)));
                if (!id) throw std::logic_error("face pattern missing: " + morphism_to_pattern(psi));
                x.set_face(g, i, sign, Cube{*id, {}});
            }
    }
    return x;
}

}  // namespace

CubicalSet standard_cube(int n) {
    std::vector<std::string> pats;
    for (int m = 0; m <= n; ++m) {
        auto p = insertion_patterns(n, m);
        pats.insert(pats.end(), p.begin(), p.end());
    }
    return build_from_patterns(n, pats);
}

CubicalSet boundary_sphere(int n) {
    if (n < 1) throw std::invalid_argument("boundary_sphere needs n >= 1");
    std::vector<std::string> pats;
    for (int m = 0; m < n; ++m) {
        auto p = insertion_patterns(n, m);
        pats.insert(pats.end(), p.begin(), p.end());
    }
    return build_from_patterns(n, pats);
}

CubicalSet horn_complex(int n, int open_i, int open_sign) {
    if (n < 1 || open_i < 1 || open_i > n) throw std::invalid_argument("bad horn parameters");
    std::string open_pat(size_t(n), '*');
    open_pat[open_i - 1] = open_sign > 0 ? '+' : '-';
    std::vector<std::string> pats;
    for (int m = 0; m < n; ++m)
        for (const std::string& pat : insertion_patterns(n, m))
            if (pat != open_pat) pats.push_back(pat);
    return build_from_patterns(n, pats);
}

// --- reduced product ----------------------------------------------------------

namespace {

std::string pair_name(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }

// The product cube of two component cubes: B-side degeneracy letters shift by
// the full dimension of the A-side cube; the concatenated word is ascending.
Cube pair_cube(const CubicalSet& prod, const CubicalSet& x, const CubicalSet& y, const Cube& ca, const Cube& cb) {
    const std::string name = pair_name(x.generator(ca.gen).name, y.generator(cb.gen).name);
    auto g = prod.find_generator(name);
    if (!g) throw std::logic_error("product generator missing: " + name);
    std::vector<int> word = ca.word;
    int adim = x.cube_dim(ca);
    for (int u : cb.word) word.push_back(u + adim);
    std::sort(word.begin(), word.end());  // already sorted by construction; keep it canonical
    return Cube{*g, word};
}

}  // namespace

CubicalSet reduced_product(const CubicalSet& x, const CubicalSet& y, int trunc) {
    CubicalSet p(trunc);
    for (int n = 0; n <= trunc; ++n)
        for (int k = 0; k <= n; ++k)
            for (GenId a : x.generators_of_dim(k))
                for (GenId b : y.generators_of_dim(n - k))
                    p.add_generator(pair_name(x.generator(a).name, y.generator(b).name), n);
    for (int n = 1; n <= trunc; ++n)
        for (int k = 0; k <= n; ++k)
            for (GenId a : x.generators_of_dim(k))
                for (GenId b : y.generators_of_dim(n - k)) {
                    GenId g = *p.find_generator(pair_name(x.generator(a).name, y.generator(b).name));
                    for (int i = 1; i <= n; ++i)
                        for (int sign : {-1, 1}) {
                            Cube value = i <= k ? pair_cube(p, x, y, x.face(Cube{a, {}}, i, sign), Cube{b, {}})
                                                : pair_cube(p, x, y, Cube{a, {}}, y.face(Cube{b, {}}, i - k, sign));
                            p.set_face(g, i, sign, value);
                        }
                }
    return p;
}

std::vector<std::string> check_cube_product_iso(int m, int n) {
    std::vector<std::string> bad;
    CubicalSet cm = standard_cube(m), cn = standard_cube(n), cmn = standard_cube(m + n);
    CubicalSet prod = reduced_product(cm, cn, m + n);

    // Generator bijection: (pat_a, pat_b) -> pat_a ++ pat_b.
    auto image_name = [&](GenId g) {
        const std::string& nm = prod.generator(g).name;
        size_t comma = nm.find(',');
        std::string a = nm.substr(1, comma - 1);
        std::string b = nm.substr(comma + 1, nm.size() - comma - 2);
        if (a == "pt") a.clear();
        if (b == "pt") b.clear();
        std::string joined = a + b;
        return joined.empty() ? std::string("pt") : joined;
    };
    if (prod.num_generators() != cmn.num_generators()) {
        bad.push_back("generator counts differ");
        return bad;
    }
    for (GenId g = 0; g < prod.num_generators(); ++g) {
        auto ig = cmn.find_generator(image_name(g));
        if (!ig) {
            bad.push_back("no image generator for " + prod.generator(g).name);
            continue;
        }
        if (cmn.generator(*ig).dim != prod.generator(g).dim) bad.push_back("dimension mismatch at " + prod.generator(g).name);
    }
    // Face tables commute with the bijection.
    for (GenId g = 0; g < prod.num_generators(); ++g) {
        int d = prod.generator(g).dim;
        GenId ig = *cmn.find_generator(image_name(g));
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                Cube pf = prod.face(Cube{g, {}}, i, sign);
                Cube cf = cmn.face(Cube{ig, {}}, i, sign);
                Cube mapped{*cmn.find_generator(image_name(pf.gen)), pf.word};
                if (!(mapped == cf))
                    bad.push_back("face mismatch at " + prod.generator(g).name + " (" + std::to_string(i) + "," +
                                  (sign > 0 ? "+" : "-") + ")");
            }
    }
    return bad;
}

CubicalSet disjoint_union(const CubicalSet& x, const CubicalSet& y) {
    CubicalSet u(std::max(x.trunc_dim(), y.trunc_dim()));
    auto name_of = [&](const CubicalSet& s, GenId g, const char* tag) {
        std::string nm = s.generator(g).name;
        if (x.find_generator(nm) && y.find_generator(nm)) return std::string(tag) + nm;
        return nm;
    };
    for (GenId g = 0; g < x.num_generators(); ++g) u.add_generator(name_of(x, g, "a:"), x.generator(g).dim);
    for (GenId g = 0; g < y.num_generators(); ++g) u.add_generator(name_of(y, g, "b:"), y.generator(g).dim);
    for (GenId g = 0; g < x.num_generators(); ++g) {
        int d = x.generator(g).dim;
        GenId ug = *u.find_generator(name_of(x, g, "a:"));
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                const Cube& f = x.generator_face(g, i, sign);
                u.set_face(ug, i, sign, Cube{*u.find_generator(name_of(x, f.gen, "a:")), f.word});
            }
    }
    for (GenId g = 0; g < y.num_generators(); ++g) {
        int d = y.generator(g).dim;
        GenId ug = *u.find_generator(name_of(y, g, "b:"));
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                const Cube& f = y.generator_face(g, i, sign);
                u.set_face(ug, i, sign, Cube{*u.find_generator(name_of(y, f.gen, "b:")), f.word});
            }
    }
    return u;
}

// --- cubical maps --------------------------------------------------------------

Cube CubicalMap::apply(const Cube& c) const {
    Cube r = assignment[c.gen];
    for (auto it = c.word.rbegin(); it != c.word.rend(); ++it) r = target->degenerate(r, *it);
    return r;
}

CubicalMap CubicalMap::identity(const CubicalSet& x) {
    CubicalMap f;
    f.source = &x;
    f.target = &x;
    for (GenId g = 0; g < x.num_generators(); ++g) f.assignment.push_back(Cube{g, {}});
    return f;
}

CubicalMap CubicalMap::constant(const CubicalSet& x, const CubicalSet& y, GenId vertex) {
    if (y.generator(vertex).dim != 0) throw std::invalid_argument("constant map target must be a vertex");
    CubicalMap f;
    f.source = &x;
    f.target = &y;
    for (GenId g = 0; g < x.num_generators(); ++g) {
        Cube c{vertex, {}};
        for (int t = 0; t < x.generator(g).dim; ++t) c = y.degenerate(c, 1);
        f.assignment.push_back(c);
    }
    return f;
}

std::vector<std::string> validate_map(const CubicalMap& f) {
    std::vector<std::string> bad;
    const CubicalSet& x = *f.source;
    const CubicalSet& y = *f.target;
    if (int(f.assignment.size()) != x.num_generators()) {
        bad.push_back("assignment size mismatch");
        return bad;
    }
    for (GenId g = 0; g < x.num_generators(); ++g) {
        if (y.cube_dim(f.assignment[g]) != x.generator(g).dim) {
            bad.push_back("image of " + x.generator(g).name + " has wrong dimension");
            return bad;
        }
    }
    for (GenId g = 0; g < x.num_generators(); ++g) {
        int d = x.generator(g).dim;
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                Cube lhs = f.apply(x.face(Cube{g, {}}, i, sign));
                Cube rhs = y.face(f.apply(Cube{g, {}}), i, sign);
                if (!(lhs == rhs))
                    bad.push_back("map does not commute with face (" + std::to_string(i) + "," + (sign > 0 ? "+" : "-") +
                                  ") at " + x.generator(g).name);
            }
    }
    return bad;
}

std::set<GenId> face_closure(const CubicalSet& x, std::set<GenId> gens) {
    std::vector<GenId> todo(gens.begin(), gens.end());
    while (!todo.empty()) {
        GenId g = todo.back();
        todo.pop_back();
        int d = x.generator(g).dim;
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                GenId fg = x.generator_face(g, i, sign).gen;
                if (gens.insert(fg).second) todo.push_back(fg);
            }
    }
    return gens;
}

std::set<GenId> map_image(const CubicalMap& f) {
    std::set<GenId> img;
    for (const Cube& c : f.assignment) img.insert(c.gen);
    return face_closure(*f.target, img);
}

std::set<GenId> map_preimage(const CubicalMap& f, const std::set<GenId>& target_sub) {
    std::set<GenId> pre;
    for (GenId g = 0; g < f.source->num_generators(); ++g)
        if (target_sub.count(f.assignment[g].gen)) pre.insert(g);
    return pre;  // closed automatically: faces map into faces of the image
}

CubicalSet subcomplex(const CubicalSet& x, const std::set<GenId>& gens) {
    for (GenId g : gens) {
        int d = x.generator(g).dim;
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1})
                if (!gens.count(x.generator_face(g, i, sign).gen))
                    throw std::invalid_argument("subcomplex: generator set is not face-closed");
    }
    CubicalSet s(x.trunc_dim());
    for (int d = 0; d <= x.trunc_dim(); ++d)
        for (GenId g : x.generators_of_dim(d))
            if (gens.count(g)) s.add_generator(x.generator(g).name, d);
    for (GenId g : gens) {
        int d = x.generator(g).dim;
        GenId sg = *s.find_generator(x.generator(g).name);
        for (int i = 1; i <= d; ++i)
            for (int sign : {-1, 1}) {
                const Cube& f = x.generator_face(g, i, sign);
                s.set_face(sg, i, sign, Cube{*s.find_generator(x.generator(f.gen).name), f.word});
            }
    }
    return s;
}

// --- element-level materialization ---------------------------------------------

CubicalSet materialize(const ElementSource& src) {
    CubicalSet x(src.trunc_dim);
    // key -> normalized cube, per dimension
    std::vector<std::map<std::string, Cube>> normal(src.trunc_dim + 1);

    for (int d = 0; d <= src.trunc_dim; ++d) {
        std::vector<std::string> keys = src.elements(d);
        std::set<std::string> degenerate_keys;
        if (d >= 1)
            for (const auto& [key, cube] : normal[d - 1])
                for (int i = 1; i <= d; ++i) degenerate_keys.insert(src.degeneracy(d - 1, key, i));
        for (const std::string& key : keys) {
            if (degenerate_keys.count(key)) {
                // Find the expression sigma_i(key') deterministically (smallest i).
                bool found = false;
                for (int i = 1; i <= d && !found; ++i) {
                    std::string down = src.face(d, key, i, +1);
                    if (src.degeneracy(d - 1, down, i) == key) {
                        const Cube& inner = normal[d - 1].at(down);
                        normal[d][key] = Cube{inner.gen, word_prepend(inner.word, i)};
                        found = true;
                    }
                }
                if (!found) throw std::logic_error("degenerate element without sigma-preimage: " + key);
            } else {
                GenId g = x.add_generator(key, d);
                normal[d][key] = Cube{g, {}};
            }
        }
    }
    // Face tables for the nondegenerate elements.
    for (int d = 1; d <= src.trunc_dim; ++d)
        for (const std::string& key : src.elements(d)) {
            const Cube& c = normal[d][key];
            if (c.is_degenerate()) continue;
            for (int i = 1; i <= d; ++i)
                for (int sign : {-1, 1}) x.set_face(c.gen, i, sign, normal[d - 1].at(src.face(d, key, i, sign)));
        }
    return x;
}

// --- text format ----------------------------------------------------------------

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::string cur;
    for (char ch : line) {
        if (ch == '#') break;
        if (isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) toks.push_back(cur), cur.clear();
        } else if (ch == ':' || ch == '=' || ch == '[' || ch == ']') {
            if (!cur.empty()) toks.push_back(cur), cur.clear();
            toks.push_back(std::string(1, ch));
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) toks.push_back(cur);
    return toks;
}

// Parses "h" or "h [ s i1 i2 ... ]" starting at position p.
Cube parse_cube_tokens(const CubicalSet& s, const std::vector<std::string>& toks, size_t& p, int line_no) {
    if (p >= toks.size()) throw std::invalid_argument("line " + std::to_string(line_no) + ": expected cube");
    auto g = s.find_generator(toks[p]);
    if (!g) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown generator " + toks[p]);
    ++p;
    Cube c{*g, {}};
    if (p < toks.size() && toks[p] == "[") {
        ++p;
        if (p >= toks.size() || toks[p] != "s")
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 's' in degeneracy word");
        ++p;
        std::vector<int> word;
        while (p < toks.size() && toks[p] != "]") {
            word.push_back(std::stoi(toks[p]));
            ++p;
        }
        if (p >= toks.size()) throw std::invalid_argument("line " + std::to_string(line_no) + ": unterminated word");
        ++p;
        for (size_t t = 1; t < word.size(); ++t)
            if (word[t - 1] > word[t])
                throw std::invalid_argument("line " + std::to_string(line_no) + ": degeneracy word must be ascending");
        c.word = word;
    }
    return c;
}

}  // namespace

ParsedFile parse_cubical_file(const std::string& text, int trunc_dim) {
    ParsedFile pf;
    auto current_set = [&]() -> CubicalSet& {
        if (pf.sets.empty()) pf.sets.emplace_back("main", CubicalSet(trunc_dim));
        return pf.sets.back().second;
    };
    auto set_index_of_gen = [&](const std::string& gname) -> int {
        for (size_t s = 0; s < pf.sets.size(); ++s)
            if (pf.sets[s].second.find_generator(gname)) return int(s);
        return -1;
    };

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "set") {
            if (toks.size() != 2) throw std::invalid_argument("line " + std::to_string(line_no) + ": set NAME");
            pf.sets.emplace_back(toks[1], CubicalSet(trunc_dim));
        } else if (toks[0] == "dim") {
            // dim k : g1 g2 ...
            if (toks.size() < 3 || toks[2] != ":")
                throw std::invalid_argument("line " + std::to_string(line_no) + ": dim k: g1 g2 ...");
            int k = std::stoi(toks[1]);
            for (size_t p = 3; p < toks.size(); ++p) current_set().add_generator(toks[p], k);
        } else if (toks[0] == "face") {
            // face g i +|- = cube
            if (toks.size() < 6 || toks[4] != "=")
                throw std::invalid_argument("line " + std::to_string(line_no) + ": face g i +|- = h[s ...]");
            CubicalSet& s = current_set();
            auto g = s.find_generator(toks[1]);
            if (!g) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown generator " + toks[1]);
            int i = std::stoi(toks[2]);
            int sign = toks[3] == "+" ? 1 : toks[3] == "-" ? -1 : 0;
            if (sign == 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": sign must be + or -");
            size_t p = 5;
            Cube c = parse_cube_tokens(s, toks, p, line_no);
            s.set_face(*g, i, sign, c);
        } else if (toks[0] == "map") {
            // map f : g -> cube
            if (toks.size() < 6 || toks[2] != ":" || toks[4] != "->")
                throw std::invalid_argument("line " + std::to_string(line_no) + ": map f: g -> h[s ...]");
            const std::string& fname = toks[1];
            const std::string& gname = toks[3];
            int src_set = set_index_of_gen(gname);
            if (src_set < 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown generator " + gname);
            ParsedFile::MapDecl* decl = nullptr;
            for (auto& m : pf.maps)
                if (m.name == fname) decl = &m;
            if (!decl) {
                pf.maps.push_back({fname, src_set, -1, {}});
                decl = &pf.maps.back();
            }
            // Target set: the one containing the image generator.
            size_t p = 5;
            int tgt_set = set_index_of_gen(toks[5]);
            if (tgt_set < 0) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown generator " + toks[5]);
            if (decl->target_set < 0) decl->target_set = tgt_set;
            if (decl->target_set != tgt_set || decl->source_set != src_set)
                throw std::invalid_argument("line " + std::to_string(line_no) + ": map entries span different sets");
            Cube c = parse_cube_tokens(pf.sets[tgt_set].second, toks, p, line_no);
            decl->entries.emplace_back(gname, c);
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown directive " + toks[0]);
        }
    }
    return pf;
}

const CubicalSet& ParsedFile::only_set() const {
    if (sets.size() != 1) throw std::invalid_argument("file must contain exactly one cubical set");
    return sets[0].second;
}

const CubicalSet& ParsedFile::set_named(const std::string& name) const {
    for (const auto& [n, s] : sets)
        if (n == name) return s;
    throw std::invalid_argument("no set named " + name);
}

CubicalMap build_map(const ParsedFile& pf, size_t map_index) {
    const auto& decl = pf.maps.at(map_index);
    const CubicalSet& src = pf.sets[decl.source_set].second;
    const CubicalSet& tgt = pf.sets[decl.target_set].second;
    CubicalMap f;
    f.source = &src;
    f.target = &tgt;
    f.assignment.assign(src.num_generators(), Cube{});
    std::vector<char> seen(src.num_generators(), 0);
    for (const auto& [gname, cube] : decl.entries) {
        GenId g = *src.find_generator(gname);
        f.assignment[g] = cube;
        seen[g] = 1;
    }
    for (GenId g = 0; g < src.num_generators(); ++g)
        if (!seen[g]) throw std::invalid_argument("map " + decl.name + " missing entry for " + src.generator(g).name);
    return f;
}

}  // namespace cubicalc::cub
