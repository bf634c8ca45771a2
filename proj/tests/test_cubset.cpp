#include "cubicalc/cubset.hpp"

#include "cubicalc/boxcat.hpp"
#include "cubicalc/cubhomology.hpp"

#include <doctest.h>

#include <random>

using namespace cubicalc;
using namespace cubicalc::cub;

namespace {

// Two-point discrete set {a, b}.
CubicalSet two_points(int trunc = 3) {
    CubicalSet x(trunc);
    x.add_generator("a", 0);
    x.add_generator("b", 0);
    return x;
}

// Minimal circle: one vertex, one nondegenerate loop.
CubicalSet minimal_circle(int trunc = 3) {
    CubicalSet x(trunc);
    GenId v = x.add_generator("v", 0);
    GenId e = x.add_generator("e", 1);
    x.set_face(e, 1, -1, Cube{v, {}});
    x.set_face(e, 1, +1, Cube{v, {}});
    return x;
}

long binom(int a, int b) {
    if (b < 0 || b > a) return 0;
    long r = 1;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("standard cubes: counts, validation, Euler characteristic") {
    for (int n = 0; n <= 4; ++n) {
        CubicalSet q = standard_cube(n);
        CHECK(q.validate().empty());
        auto counts = q.nondegenerate_counts();
        for (int m = 0; m <= n; ++m) CHECK(counts[m] == binom(n, m) * (1L << (n - m)));
        CHECK(q.euler_characteristic() == 1);  // alternating sum telescopes for a cube
    }
    CubicalSet q0 = standard_cube(0);
    CHECK(q0.num_generators() == 1);
}

TEST_CASE("total cube counts against box-category enumeration") {
    for (int n = 0; n <= 3; ++n) {
        CubicalSet q = standard_cube(n);
        for (int m = 0; m <= 3; ++m) CHECK(q.count_cubes(m) == long(box::enumerate_hom(m, n).size()));
    }
    CHECK(standard_cube(1).count_cubes(1) == 3);
}

TEST_CASE("boundary spheres and horns") {
    CubicalSet s1 = boundary_sphere(1);
    CHECK(s1.validate().empty());
    CHECK(s1.nondegenerate_counts() == std::vector<long>{2, 0});

    CubicalSet s2 = boundary_sphere(2);
    CHECK(s2.validate().empty());
    CHECK(s2.nondegenerate_counts() == std::vector<long>{4, 4, 0});

    CubicalSet h = horn_complex(2, 1, +1);
    CHECK(h.validate().empty());
    auto counts = h.nondegenerate_counts();
    CHECK(counts[0] == 4);
    CHECK(counts[1] == 3);

    for (int n = 1; n <= 4; ++n) {
        CubicalSet s = boundary_sphere(n);
        CHECK(s.validate().empty());
        CHECK(s.euler_characteristic() == 1 + (n % 2 == 1 ? 1 : -1));
    }
    CHECK(boundary_sphere(3).euler_characteristic() == 2);
}

TEST_CASE("face identities hold on random degenerate cubes") {
    std::mt19937 rng(43);
    CubicalSet q = standard_cube(3);
    for (int t = 0; t < 500; ++t) {
        int dim = std::uniform_int_distribution<int>(2, 5)(rng);
        auto cubes = q.all_cubes(dim);
        const Cube& c = cubes[std::uniform_int_distribution<size_t>(0, cubes.size() - 1)(rng)];
        int j = std::uniform_int_distribution<int>(2, dim)(rng);
        int i = std::uniform_int_distribution<int>(1, j - 1)(rng);
        int se = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
        int sw = std::bernoulli_distribution(0.5)(rng) ? 1 : -1;
        CHECK(q.face(q.face(c, j, sw), i, se) == q.face(q.face(c, i, se), j - 1, sw));
    }
}

TEST_CASE("degeneracy normal form is canonical") {
    std::mt19937 rng(17);
    CubicalSet q = standard_cube(2);
    for (int t = 0; t < 300; ++t) {
        auto cubes = q.all_cubes(std::uniform_int_distribution<int>(0, 3)(rng));
        const Cube& c = cubes[std::uniform_int_distribution<size_t>(0, cubes.size() - 1)(rng)];
        int d = q.cube_dim(c);
        if (d + 2 > q.trunc_dim()) continue;
        int j = std::uniform_int_distribution<int>(1, d + 1)(rng);
        int i = std::uniform_int_distribution<int>(1, j)(rng);  // i <= j
        CHECK(q.degenerate(q.degenerate(c, j), i) == q.degenerate(q.degenerate(c, i), j + 1));
    }
    // delta_1 sigma_1 = id on elements: face(degenerate(c,1),1,eps) == c.
    for (int t = 0; t < 100; ++t) {
        auto cubes = q.all_cubes(1);
        const Cube& c = cubes[std::uniform_int_distribution<size_t>(0, cubes.size() - 1)(rng)];
        CHECK(q.face(q.degenerate(c, 1), 1, +1) == c);
        CHECK(q.face(q.degenerate(c, 1), 1, -1) == c);
        CHECK(q.face(q.degenerate(c, 2), 2, -1) == c);
    }
}

TEST_CASE("face past degeneracy identity d_2(s_1 e) = s_1 d_1 e") {
    CubicalSet q = minimal_circle();
    Cube e{*q.find_generator("e"), {}};
    Cube s1e = q.degenerate(e, 1);
    Cube lhs = q.face(s1e, 2, +1);
    Cube rhs = q.degenerate(q.face(e, 1, +1), 1);
    CHECK(lhs == rhs);
}

TEST_CASE("reduced product of standard cubes is a standard cube") {
    for (int m = 0; m + 0 <= 4; ++m)
        for (int n = 0; m + n <= 4; ++n) {
            auto bad = check_cube_product_iso(m, n);
            for (const auto& msg : bad) MESSAGE(msg);
            CHECK(bad.empty());
        }
}

TEST_CASE("product with the point is the identity on cell counts") {
    CubicalSet pt = standard_cube(0);
    for (auto make : {+[]() { return standard_cube(2); }, +[]() { return boundary_sphere(2); }}) {
        CubicalSet x = make();
        CubicalSet p = reduced_product(x, pt, x.trunc_dim());
        CHECK(p.validate().empty());
        CHECK(p.nondegenerate_counts() == x.nondegenerate_counts());
    }
}

TEST_CASE("torus cell counts") {
    CubicalSet s2 = boundary_sphere(2);
    CubicalSet t = reduced_product(s2, s2, 4);
    CHECK(t.validate().empty());
    auto counts = t.nondegenerate_counts();
    CHECK(counts[0] == 16);
    CHECK(counts[1] == 32);
    CHECK(counts[2] == 16);
    CHECK(counts[3] == 0);
}

TEST_CASE("reduced product is associative on cell counts") {
    CubicalSet a = boundary_sphere(1);
    CubicalSet b = standard_cube(1);
    CubicalSet c = boundary_sphere(2);
    CubicalSet l = reduced_product(reduced_product(a, b, 4), c, 4);
    CubicalSet r = reduced_product(a, reduced_product(b, c, 4), 4);
    CHECK(l.nondegenerate_counts() == r.nondegenerate_counts());
    CHECK(l.validate().empty());
    CHECK(r.validate().empty());
}

TEST_CASE("validate flags corrupted face tables") {
    CubicalSet q = standard_cube(2);
    CHECK(q.validate().empty());
    // Corrupt a single entry of the square's face table.
    GenId sq = *q.find_generator("**");
    GenId far_vertex = *q.find_generator("++");
    q.set_face(sq, 1, -1, Cube{far_vertex, {1}});
    auto bad = q.validate();
    CHECK(!bad.empty());
}

TEST_CASE("maps: identity, constant, image, preimage") {
    CubicalSet q = standard_cube(2);
    CubicalMap id = CubicalMap::identity(q);
    CHECK(validate_map(id).empty());

    CubicalSet pt = standard_cube(0);
    CubicalMap c = CubicalMap::constant(q, pt, 0);
    CHECK(validate_map(c).empty());

    // Preimage of the basepoint under a constant map is the whole source.
    std::set<GenId> base{0};
    auto pre = map_preimage(c, base);
    CHECK(int(pre.size()) == q.num_generators());

    // Image of the inclusion of the boundary is the boundary.
    CubicalSet s = boundary_sphere(2);
    CubicalMap incl;
    incl.source = &s;
    incl.target = &q;
    for (GenId g = 0; g < s.num_generators(); ++g) incl.assignment.push_back(Cube{*q.find_generator(s.generator(g).name), {}});
    CHECK(validate_map(incl).empty());
    auto img = map_image(incl);
    CHECK(img.size() == 8);
    CubicalSet sub = subcomplex(q, img);
    CHECK(sub.validate().empty());
    CHECK(sub.nondegenerate_counts() == s.nondegenerate_counts());
}

TEST_CASE("homology of cubical fixtures") {
    using zlin::cubical_chain_complex;
    using zlin::homology;

    for (int n = 0; n <= 4; ++n) {
        auto c = cubical_chain_complex(standard_cube(n));
        std::string why;
        CHECK(c.is_complex(&why));
        auto h0 = homology(c, 0);
        CHECK(h0.free_rank() == 1);
        CHECK(h0.torsion_factors().empty());
        for (int k = 1; k <= c.top_dim(); ++k) CHECK(homology(c, k).is_trivial());
    }

    // Spheres: H_0 = Z, H_{n-1} = Z for n >= 2; two points for n = 1.
    {
        auto c = cubical_chain_complex(boundary_sphere(1));
        CHECK(homology(c, 0).free_rank() == 2);
    }
    for (int n = 2; n <= 4; ++n) {
        auto c = cubical_chain_complex(boundary_sphere(n));
        std::string why;
        CHECK(c.is_complex(&why));
        CHECK(homology(c, 0).free_rank() == 1);
        for (int k = 1; k < n - 1; ++k) CHECK(homology(c, k).is_trivial());
        auto top = homology(c, n - 1);
        CHECK(top.free_rank() == 1);
        CHECK(top.torsion_factors().empty());
    }

    // The torus.
    {
        CubicalSet s2 = boundary_sphere(2);
        auto c = cubical_chain_complex(reduced_product(s2, s2, 4));
        std::string why;
        CHECK(c.is_complex(&why));
        CHECK(homology(c, 0).free_rank() == 1);
        CHECK(homology(c, 1).free_rank() == 2);
        CHECK(homology(c, 1).torsion_factors().empty());
        CHECK(homology(c, 2).free_rank() == 1);
    }

    // Euler characteristic via homology equals alternating cell count.
    for (int n = 1; n <= 4; ++n) {
        CubicalSet s = boundary_sphere(n);
        auto c = cubical_chain_complex(s);
        CHECK(zlin::euler_characteristic_from_homology(c) == s.euler_characteristic());
    }
}

TEST_CASE("two-point and circle fixtures") {
    CHECK(two_points().validate().empty());
    CHECK(minimal_circle().validate().empty());
    auto c = zlin::cubical_chain_complex(minimal_circle());
    CHECK(zlin::homology(c, 0).free_rank() == 1);
    CHECK(zlin::homology(c, 1).free_rank() == 1);
}

TEST_CASE("text format round trip") {
    std::string text = R"(
# a circle and a map collapsing it to a point
set S
dim 0: v
dim 1: e
face e 1 - = v
face e 1 + = v
set P
dim 0: p
map f: v -> p
map f: e -> p [s 1]
)";
    ParsedFile pf = parse_cubical_file(text, 3);
    CHECK(pf.sets.size() == 2);
    const CubicalSet& s = pf.set_named("S");
    CHECK(s.validate().empty());
    CHECK(s.num_generators() == 2);
    CubicalMap f = build_map(pf, 0);
    CHECK(validate_map(f).empty());

    CHECK_THROWS(parse_cubical_file("dim 0 v", 3));
    CHECK_THROWS(parse_cubical_file("face e 1 + = v", 3));
    CHECK_THROWS(parse_cubical_file("dim 0: v\nface v 1 + = v", 3));
}

TEST_CASE("disjoint union") {
    CubicalSet u = disjoint_union(two_points(), minimal_circle());
    CHECK(u.validate().empty());
    CHECK(u.num_generators() == 4);
}

TEST_CASE("materialize normalizes an element-level description") {
    // The interval as an element source: elements of dim d = monotone lattice
    // paths; here simply take the cubes of standard_cube(1) as keys.
    CubicalSet q = standard_cube(1);
    ElementSource src;
    src.trunc_dim = 3;
    auto key_of = [&](const Cube& c) { return q.cube_str(c); };
    auto cube_of = [&](int dim, const std::string& key) {
        for (const Cube& c : q.all_cubes(dim))
            if (q.cube_str(c) == key) return c;
        throw std::logic_error("unknown key " + key);
    };
    src.elements = [&](int d) {
        std::vector<std::string> keys;
        for (const Cube& c : q.all_cubes(d)) keys.push_back(key_of(c));
        return keys;
    };
    src.face = [&](int d, const std::string& key, int i, int sign) { return key_of(q.face(cube_of(d, key), i, sign)); };
    src.degeneracy = [&](int d, const std::string& key, int i) { return key_of(q.degenerate(cube_of(d, key), i)); };
    CubicalSet m = materialize(src);
    CHECK(m.validate().empty());
    CHECK(m.nondegenerate_counts() == std::vector<long>{2, 1, 0, 0});
}
