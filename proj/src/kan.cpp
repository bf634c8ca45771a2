#include "cubicalc/kan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cubicalc::kan {

namespace {

Cube degenerate_basepoint(GenId v, int dim) { return Cube{v, std::vector<int>(size_t(dim), 1)}; }

std::string describe_slot(const CubicalSet& x, int j, int omega, const Cube& c) {
    std::ostringstream os;
    os << "(" << j << (omega > 0 ? "+" : "-") << ")=" << x.cube_str(c);
    return os.str();
}

std::string describe_horn(const CubicalSet& x, const HornInstance& h) {
    std::ostringstream os;
    os << "horn n=" << h.n << " open (" << h.open_j << (h.open_omega > 0 ? "+" : "-") << ")";
    for (int j = 1; j <= h.n; ++j)
        for (int omega : {-1, 1})
            if (!h.is_open(j, omega)) os << " " << describe_slot(x, j, omega, h.slots[slot_of(j, omega)]);
    return os.str();
}

std::string describe_sphere(const CubicalSet& x, const SphereInstance& s) {
    std::ostringstream os;
    os << "sphere n=" << s.n;
    for (int j = 1; j <= s.n; ++j)
        for (int omega : {-1, 1}) os << " " << describe_slot(x, j, omega, s.slots[slot_of(j, omega)]);
    return os.str();
}

// d_j^omega x_{(k,eta)} = d_{k-1}^eta x_{(j,omega)} for j < k.
bool pair_compatible(const CubicalSet& x, int j, int omega, const Cube& xj, int k, int eta, const Cube& xk) {
    return x.face(xk, j, omega) == x.face(xj, k - 1, eta);
}

}  // namespace

std::optional<std::string> horn_compatibility_violation(const CubicalSet& x, const HornInstance& h) {
    if (h.n < 1 || int(h.slots.size()) != 2 * h.n) return "malformed horn";
    for (int j = 1; j <= h.n; ++j)
        for (int omega : {-1, 1}) {
            if (h.is_open(j, omega)) continue;
            if (x.cube_dim(h.slots[slot_of(j, omega)]) != h.n - 1) return "slot (" + std::to_string(j) + ") has wrong dimension";
        }
    if (h.n == 1) return std::nullopt;
    for (int j = 1; j <= h.n; ++j)
        for (int omega : {-1, 1}) {
            if (h.is_open(j, omega)) continue;
            for (int k = j + 1; k <= h.n; ++k)
                for (int eta : {-1, 1}) {
                    if (h.is_open(k, eta)) continue;
                    if (!pair_compatible(x, j, omega, h.slots[slot_of(j, omega)], k, eta, h.slots[slot_of(k, eta)]))
                        return "incompatible pair (" + std::to_string(j) + (omega > 0 ? "+" : "-") + "),(" +
                               std::to_string(k) + (eta > 0 ? "+" : "-") + ")";
                }
        }
    return std::nullopt;
}

std::optional<std::string> sphere_compatibility_violation(const CubicalSet& x, const SphereInstance& s) {
    HornInstance h{s.n, 0, 0, s.slots};  // no open slot
    h.open_j = -1;
    return horn_compatibility_violation(x, h);
}

std::optional<Cube> find_filler(const CubicalSet& x, const HornInstance& h, bool reversed_order) {
    if (auto bad = horn_compatibility_violation(x, h)) throw std::invalid_argument("incompatible horn: " + *bad);
    std::vector<Cube> candidates = x.all_cubes(h.n);
    if (reversed_order) std::reverse(candidates.begin(), candidates.end());
    for (const Cube& c : candidates) {
        bool ok = true;
        for (int j = 1; j <= h.n && ok; ++j)
            for (int omega : {-1, 1}) {
                if (h.is_open(j, omega)) continue;
                if (!(x.face(c, j, omega) == h.slots[slot_of(j, omega)])) {
                    ok = false;
                    break;
                }
            }
        if (ok) return c;
    }
    return std::nullopt;
}

std::optional<Cube> find_sphere_filler(const CubicalSet& x, const SphereInstance& s) {
    if (auto bad = sphere_compatibility_violation(x, s)) throw std::invalid_argument("incompatible sphere: " + *bad);
    for (const Cube& c : x.all_cubes(s.n)) {
        bool ok = true;
        for (int j = 1; j <= s.n && ok; ++j)
            for (int omega : {-1, 1})
                if (!(x.face(c, j, omega) == s.slots[slot_of(j, omega)])) {
                    ok = false;
                    break;
                }
        if (ok) return c;
    }
    return std::nullopt;
}

namespace {

// Enumerates assignments of the given slots (backtracking with incremental
// compatibility checks) and calls visit on each complete instance.  visit
// returns false to abort the enumeration.
bool enumerate_assignments(const CubicalSet& x, int n, const std::vector<std::pair<int, int>>& open_slots,
                           const std::function<bool(const std::vector<Cube>&)>& visit) {
    std::vector<std::pair<int, int>> order;  // (j, omega) in canonical order
    for (int j = 1; j <= n; ++j)
        for (int omega : {-1, 1})
            if (std::find(open_slots.begin(), open_slots.end(), std::make_pair(j, omega)) == open_slots.end())
                order.emplace_back(j, omega);
    std::vector<Cube> faces = x.all_cubes(n - 1);
    std::vector<Cube> slots(size_t(2 * n));
    std::vector<char> assigned(size_t(2 * n), 0);

    std::function<bool(size_t)> rec = [&](size_t t) -> bool {
        if (t == order.size()) return visit(slots);
        auto [j, omega] = order[t];
        for (const Cube& c : faces) {
            bool ok = true;
            for (size_t u = 0; u < t && ok; ++u) {
                auto [k, eta] = order[u];
                const Cube& other = slots[slot_of(k, eta)];
                if (j < k)
                    ok = pair_compatible(x, j, omega, c, k, eta, other);
                else if (k < j)
                    ok = pair_compatible(x, k, eta, other, j, omega, c);
            }
            if (!ok) continue;
            slots[slot_of(j, omega)] = c;
            assigned[slot_of(j, omega)] = 1;
            if (!rec(t + 1)) return false;
            assigned[slot_of(j, omega)] = 0;
        }
        return true;
    };
    return rec(0);
}

}  // namespace

KanVerdict is_kan(const CubicalSet& x, int up_to) {
    KanVerdict v;
    v.checked_up_to = up_to;
    for (int n = 1; n <= up_to; ++n)
        for (int j = 1; j <= n; ++j)
            for (int omega : {-1, 1}) {
                bool complete = enumerate_assignments(x, n, {{j, omega}}, [&](const std::vector<Cube>& slots) {
                    HornInstance h{n, j, omega, slots};
                    if (!find_filler(x, h)) {
                        v.counterexample = describe_horn(x, h);
                        return false;
                    }
                    return true;
                });
                if (!complete) return v;
            }
    v.ok = true;
    return v;
}

KanVerdict is_contractible(const CubicalSet& x, int up_to) {
    KanVerdict v;
    v.checked_up_to = up_to;
    for (int n = 1; n <= up_to; ++n) {
        bool complete = enumerate_assignments(x, n, {}, [&](const std::vector<Cube>& slots) {
            SphereInstance s{n, slots};
            if (!find_sphere_filler(x, s)) {
                v.counterexample = describe_sphere(x, s);
                return false;
            }
            return true;
        });
        if (!complete) return v;
    }
    v.ok = true;
    return v;
}

KanVerdict is_kan_fibration(const CubicalMap& f, int up_to) {
    const CubicalSet& e = *f.source;
    const CubicalSet& b = *f.target;
    KanVerdict v;
    v.checked_up_to = up_to;
    for (int n = 1; n <= up_to; ++n)
        for (int j = 1; j <= n; ++j)
            for (int omega : {-1, 1}) {
                std::vector<Cube> base_cubes = b.all_cubes(n);
                bool complete = enumerate_assignments(e, n, {{j, omega}}, [&](const std::vector<Cube>& slots) {
                    HornInstance h{n, j, omega, slots};
                    for (const Cube& base : base_cubes) {
                        bool matches = true;
                        for (int k = 1; k <= n && matches; ++k)
                            for (int eta : {-1, 1}) {
                                if (h.is_open(k, eta)) continue;
                                if (!(b.face(base, k, eta) == f.apply(slots[slot_of(k, eta)]))) {
                                    matches = false;
                                    break;
                                }
                            }
                        if (!matches) continue;
                        // Lift: an n-cube over base filling the horn.
                        bool lifted = false;
                        for (const Cube& c : e.all_cubes(n)) {
                            if (!(f.apply(c) == base)) continue;
                            bool ok = true;
                            for (int k = 1; k <= n && ok; ++k)
                                for (int eta : {-1, 1}) {
                                    if (h.is_open(k, eta)) continue;
                                    if (!(e.face(c, k, eta) == slots[slot_of(k, eta)])) {
                                        ok = false;
                                        break;
                                    }
                                }
                            if (ok) {
                                lifted = true;
                                break;
                            }
                        }
                        if (!lifted) {
                            v.counterexample = describe_horn(e, h) + " over base " + b.cube_str(base);
                            return false;
                        }
                    }
                    return true;
                });
                if (!complete) return v;
            }
    v.ok = true;
    return v;
}

bool homotopic(const CubicalSet& x, const Cube& a, const Cube& b) {
    int n = x.cube_dim(a);
    if (x.cube_dim(b) != n) throw std::invalid_argument("homotopic: dimension mismatch");
    for (int i = 1; i <= n; ++i)
        for (int eps : {-1, 1})
            if (!(x.face(a, i, eps) == x.face(b, i, eps))) return false;
    for (const Cube& h : x.all_cubes(n + 1)) {
        if (!(x.face(h, 1, -1) == a) || !(x.face(h, 1, +1) == b)) continue;
        bool ok = true;
        for (int i = 2; i <= n + 1 && ok; ++i)
            for (int eps : {-1, 1}) {
                Cube expected = x.degenerate(x.face(a, i - 1, eps), 1);
                if (!(x.face(h, i, eps) == expected)) {
                    ok = false;
                    break;
                }
            }
        if (ok) return true;
    }
    return false;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<std::vector<GenId>> pi0(const CubicalSet& x) {
    const auto& verts = x.generators_of_dim(0);
    std::map<GenId, int> index;
    for (int t = 0; t < int(verts.size()); ++t) index[verts[t]] = t;
    UnionFind uf(int(verts.size()));
    for (const Cube& c : x.all_cubes(1)) {
        GenId a = x.face(c, 1, -1).gen;
        GenId b = x.face(c, 1, +1).gen;
        uf.unite(index.at(a), index.at(b));
    }
    std::map<int, std::vector<GenId>> classes;
    for (int t = 0; t < int(verts.size()); ++t) classes[uf.find(t)].push_back(verts[t]);
    std::vector<std::vector<GenId>> out;
    for (auto& [root, members] : classes) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cube> loops(const CubicalSet& x, GenId basepoint, int n) {
    if (x.generator(basepoint).dim != 0) throw std::invalid_argument("basepoint must be a vertex");
    Cube base = degenerate_basepoint(basepoint, n - 1);
    std::vector<Cube> out;
    for (const Cube& c : x.all_cubes(n)) {
        bool ok = true;
        for (int i = 1; i <= n && ok; ++i)
            for (int eps : {-1, 1})
                if (!(x.face(c, i, eps) == base)) {
                    ok = false;
                    break;
                }
        if (ok) out.push_back(c);
    }
    return out;
}

GroupTable pi_n(const CubicalSet& x, GenId basepoint, int n, const KanVerdict& certificate, bool reversed_order) {
    if (!certificate.ok || certificate.checked_up_to < n + 1)
        throw std::invalid_argument("pi_n requires a Kan certificate up to dimension n+1");

    std::vector<Cube> ls = loops(x, basepoint, n);
    if (ls.empty()) throw std::runtime_error("no loops at the basepoint");

    // Partition by the homotopy relation (generated equivalence).
    UnionFind uf(int(ls.size()));
    for (size_t a = 0; a < ls.size(); ++a)
        for (size_t b = a + 1; b < ls.size(); ++b)
            if (homotopic(x, ls[a], ls[b]) || homotopic(x, ls[b], ls[a])) uf.unite(int(a), int(b));
    std::vector<int> class_of(ls.size());
    std::vector<Cube> reps;
    std::map<int, int> root_to_class;
    for (size_t t = 0; t < ls.size(); ++t) {
        int root = uf.find(int(t));
        auto it = root_to_class.find(root);
        if (it == root_to_class.end()) {
            root_to_class[root] = int(reps.size());
            class_of[t] = int(reps.size());
            reps.push_back(ls[t]);
        } else {
            class_of[t] = it->second;
        }
    }
    const int m = int(reps.size());

    Cube base_n = degenerate_basepoint(basepoint, n);
    auto product_class = [&](const Cube& a, const Cube& b) {
        HornInstance h;
        h.n = n + 1;
        h.open_j = 1;
        h.open_omega = +1;
        h.slots.assign(size_t(2 * (n + 1)), base_n);
        h.slots[slot_of(1, -1)] = a;
        h.slots[slot_of(2, +1)] = b;
        auto filler = find_filler(x, h, reversed_order);
        if (!filler) throw std::runtime_error("group-law horn has no filler despite Kan certificate");
        Cube prod = x.face(*filler, 1, +1);
        for (size_t t = 0; t < ls.size(); ++t)
            if (ls[t] == prod) return class_of[t];
        // The product is a loop by the cubical identities; classify by homotopy.
        for (int c = 0; c < m; ++c)
            if (homotopic(x, prod, reps[c]) || homotopic(x, reps[c], prod)) return c;
        throw std::runtime_error("product loop not found in any homotopy class");
    };

    GroupTable g;
    g.reps = reps;
    g.table.names.resize(m);
    for (int c = 0; c < m; ++c) g.table.names[c] = x.cube_str(reps[c]);
    g.table.op.assign(m, std::vector<int>(m, -1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) g.table.op[a][b] = product_class(reps[a], reps[b]);

    // Independence of representative choice: re-derive from every pair.
    for (size_t a = 0; a < ls.size(); ++a)
        for (size_t b = 0; b < ls.size(); ++b)
            if (product_class(ls[a], ls[b]) != g.table.op[class_of[a]][class_of[b]])
                throw std::runtime_error("group law depends on representatives (insufficient truncation?)");

    // The neutral element is the class of the degenerate basepoint loop.
    int e = -1;
    for (size_t t = 0; t < ls.size(); ++t)
        if (ls[t] == base_n) e = class_of[t];
    if (e < 0) throw std::runtime_error("degenerate basepoint loop missing");
    g.table.neutral = e;
    g.identity = e;
    if (auto bad = g.table.check_monoid()) throw std::runtime_error("group axioms fail: " + *bad);
    g.inverse.resize(m);
    for (int a = 0; a < m; ++a) {
        auto inv = g.table.inverse(a);
        if (!inv) throw std::runtime_error("group axioms fail: no inverse for class " + std::to_string(a));
        g.inverse[a] = *inv;
    }
    return g;
}

CubicalSet mapping_path_set(const CubicalSet& x, int trunc) {
    // Keys are cube strings of X_{d+1}; connecting maps shift the index by one.
    auto lookup = std::make_shared<std::vector<std::map<std::string, Cube>>>(trunc + 2);
    for (int d = 0; d <= trunc + 1; ++d)
        for (const Cube& c : x.all_cubes(d)) (*lookup)[d][x.cube_str(c)] = c;

    cub::ElementSource src;
    src.trunc_dim = trunc;
    src.elements = [&x, lookup](int d) {
        std::vector<std::string> keys;
        for (const Cube& c : x.all_cubes(d + 1)) keys.push_back(x.cube_str(c));
        return keys;
    };
    src.face = [&x, lookup](int d, const std::string& key, int i, int sign) {
        return x.cube_str(x.face(lookup->at(d + 1).at(key), i + 1, sign));
    };
    src.degeneracy = [&x, lookup](int d, const std::string& key, int i) {
        return x.cube_str(x.degenerate(lookup->at(d + 1).at(key), i + 1));
    };
    return cub::materialize(src);
}

CubicalSet homotopy_fiber(const CubicalMap& f, GenId basepoint, int trunc) {
    const CubicalSet& xs = *f.source;
    const CubicalSet& ks = *f.target;
    if (ks.generator(basepoint).dim != 0) throw std::invalid_argument("basepoint must be a vertex");

    auto key_of = [&](const Cube& a, const Cube& k) { return "(" + xs.cube_str(a) + "|" + ks.cube_str(k) + ")"; };
    struct Pair {
        Cube a, k;
    };
    auto table = std::make_shared<std::vector<std::map<std::string, Pair>>>(trunc + 1);
    for (int d = 0; d <= trunc; ++d) {
        Cube base_d = degenerate_basepoint(basepoint, d);
        for (const Cube& a : xs.all_cubes(d))
            for (const Cube& k : ks.all_cubes(d + 1)) {
                if (!(ks.face(k, 1, +1) == f.apply(a))) continue;
                if (!(ks.face(k, 1, -1) == base_d)) continue;
                (*table)[d][key_of(a, k)] = Pair{a, k};
            }
    }

    cub::ElementSource src;
    src.trunc_dim = trunc;
    src.elements = [table](int d) {
        std::vector<std::string> keys;
        for (const auto& [key, pair] : table->at(d)) keys.push_back(key);
        return keys;
    };
    src.face = [&, table, key_of](int d, const std::string& key, int i, int sign) {
        const Pair& p = table->at(d).at(key);
        return key_of(xs.face(p.a, i, sign), ks.face(p.k, i + 1, sign));
    };
    src.degeneracy = [&, table, key_of](int d, const std::string& key, int i) {
        const Pair& p = table->at(d).at(key);
        return key_of(xs.degenerate(p.a, i), ks.degenerate(p.k, i + 1));
    };
    return cub::materialize(src);
}

CubicalSet build_BG(const tab::MonoidTable& group, int up_to) {
    if (auto bad = group.check_monoid()) throw std::invalid_argument("build_BG: " + *bad);
    if (!group.is_group()) throw std::invalid_argument("build_BG: table is not a group");
    const int order = group.size();

    // A d-cell of E is a function {+-1}^d -> G, stored as a vector of length 2^d
    // (bit t of the vertex index is coordinate t+1; bit set means +1).
    // B-cells are diagonal left-multiplication orbits with the lexicographically
    // minimal orbit member as the canonical representative.
    auto canonical = [&](std::vector<int> u) {
        std::vector<int> best = u;
        for (int g = 0; g < order; ++g) {
            std::vector<int> v(u.size());
            for (size_t t = 0; t < u.size(); ++t) v[t] = group.add(g, u[t]);
            if (v < best) best = v;
        }
        return best;
    };
    auto serialize = [&](const std::vector<int>& u) {
        std::string s;
        for (size_t t = 0; t < u.size(); ++t) s += (t ? "," : "") + group.names[u[t]];
        return s;
    };
    auto parse = [&](const std::string& key) {
        std::vector<int> u;
        std::string cur;
        auto flush = [&]() {
            for (int g = 0; g < order; ++g)
                if (group.names[g] == cur) {
                    u.push_back(g);
                    cur.clear();
                    return;
                }
            throw std::logic_error("bad BG key");
        };
        for (char ch : key) {
            if (ch == ',')
                flush();
            else
                cur.push_back(ch);
        }
        flush();
        return u;
    };

    cub::ElementSource src;
    src.trunc_dim = up_to;
    src.elements = [=](int d) {
        std::vector<std::string> keys;
        std::vector<int> u(size_t(1) << d, 0);
        std::function<void(size_t)> rec = [&](size_t t) {
            if (t == u.size()) {
                std::vector<int> c = canonical(u);
                if (c == u) keys.push_back(serialize(u));
                return;
            }
            for (int g = 0; g < order; ++g) {
                u[t] = g;
                rec(t + 1);
            }
            u[t] = 0;
        };
        rec(0);
        std::sort(keys.begin(), keys.end());
        return keys;
    };
    src.face = [=](int d, const std::string& key, int i, int sign) {
        std::vector<int> u = parse(key);
        std::vector<int> v(size_t(1) << (d - 1));
        for (size_t t = 0; t < v.size(); ++t) {
            // Insert the bit (sign > 0) at coordinate position i-1.
            size_t low = t & ((size_t(1) << (i - 1)) - 1);
            size_t high = t >> (i - 1);
            size_t idx = low | (size_t(sign > 0 ? 1 : 0) << (i - 1)) | (high << i);
            v[t] = u[idx];
        }
        return serialize(canonical(v));
    };
    src.degeneracy = [=](int d, const std::string& key, int i) {
        std::vector<int> u = parse(key);
        std::vector<int> v(size_t(1) << (d + 1));
        for (size_t t = 0; t < v.size(); ++t) {
            // Delete coordinate i.
            size_t low = t & ((size_t(1) << (i - 1)) - 1);
            size_t high = t >> i;
            v[t] = u[low | (high << (i - 1))];
        }
        return serialize(canonical(v));
    };
    return cub::materialize(src);
}

}  // namespace cubicalc::kan
