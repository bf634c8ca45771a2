// Finite, dimension-truncated cubical sets presented by nondegenerate
// generators and face tables.  Every cube is stored as a generator plus a
// normalized degeneracy word; the face maps push through the word with the
// cubical identities and consult the face table at the generator.
#ifndef CUBICALC_CUBSET_HPP
#define CUBICALC_CUBSET_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cubicalc::cub {

using GenId = int;

struct Cube {
    GenId gen = -1;
    // Ascending word [u1 <= u2 <= ...]; the cube is sigma_{u1}(sigma_{u2}(... g)).
    std::vector<int> word;

    bool is_degenerate() const { return !word.empty(); }
    bool operator==(const Cube&) const = default;
    auto operator<=>(const Cube&) const = default;
};

struct Generator {
    std::string name;
    int dim = 0;
};

class CubicalSet {
public:
    explicit CubicalSet(int trunc_dim) : trunc_dim_(trunc_dim) {}

    int trunc_dim() const { return trunc_dim_; }
    int num_generators() const { return int(gens_.size()); }
    const Generator& generator(GenId g) const { return gens_[g]; }
    const std::vector<GenId>& generators_of_dim(int d) const;
    std::optional<GenId> find_generator(const std::string& name) const;

    GenId add_generator(const std::string& name, int dim);
    void set_face(GenId g, int i, int sign, Cube value);
    bool has_face(GenId g, int i, int sign) const;
    const Cube& generator_face(GenId g, int i, int sign) const;

    int cube_dim(const Cube& c) const { return gens_[c.gen].dim + int(c.word.size()); }

    // The face map: pushes the index through the degeneracy word and consults
    // the face table.  Throws on out-of-range indices.
    Cube face(const Cube& c, int i, int sign) const;
    // The degeneracy map with word renormalization.
    Cube degenerate(const Cube& c, int i) const;
    // Strips the degeneracy word.
    Cube core(const Cube& c) const { return Cube{c.gen, {}}; }

    // All cubes of the given dimension: generators in declaration order, then
    // degeneracy words in lexicographic order.
    std::vector<Cube> all_cubes(int dim) const;
    long count_cubes(int dim) const;
    std::vector<long> nondegenerate_counts() const;  // index = dimension
    long euler_characteristic() const;

    // Every violated cubical identity / dangling reference, as messages.
    std::vector<std::string> validate() const;

    std::string cube_str(const Cube& c) const;

private:
    int trunc_dim_;
    std::vector<Generator> gens_;
    std::vector<std::vector<GenId>> by_dim_;
    std::map<std::string, GenId> by_name_;
    // face_table_[g][2*(i-1) + (sign>0)]
    std::vector<std::vector<Cube>> face_table_;
    std::vector<std::vector<char>> face_set_;
};

// --- canonical constructions -------------------------------------------------

CubicalSet standard_cube(int n);
CubicalSet boundary_sphere(int n);
// The horn: all hyperfaces of the n-cube except (open_i, open_sign).
CubicalSet horn_complex(int n, int open_i, int open_sign);

// Nondegenerate generators of the reduced product are pairs of nondegenerate
// generators; truncated at trunc.
CubicalSet reduced_product(const CubicalSet& x, const CubicalSet& y, int trunc);

// For tests: the canonical isomorphism standard_cube(m) (x) standard_cube(n)
// -> standard_cube(m+n) on generator names; returns mismatch messages.
std::vector<std::string> check_cube_product_iso(int m, int n);

CubicalSet disjoint_union(const CubicalSet& x, const CubicalSet& y);

// --- cubical maps --------------------------------------------------------------

struct CubicalMap {
    const CubicalSet* source = nullptr;
    const CubicalSet* target = nullptr;
    std::vector<Cube> assignment;  // one target cube per source generator, equal dimension

    Cube apply(const Cube& c) const;
    static CubicalMap identity(const CubicalSet& x);
    static CubicalMap constant(const CubicalSet& x, const CubicalSet& y, GenId vertex);
};

std::vector<std::string> validate_map(const CubicalMap& f);

// Cubical subsets are face-closed sets of nondegenerate generators.
std::set<GenId> face_closure(const CubicalSet& x, std::set<GenId> gens);
std::set<GenId> map_image(const CubicalMap& f);
std::set<GenId> map_preimage(const CubicalMap& f, const std::set<GenId>& target_sub);
// Materialize a face-closed generator subset as its own CubicalSet (same names).
CubicalSet subcomplex(const CubicalSet& x, const std::set<GenId>& gens);

// --- element-level presentations ---------------------------------------------
//
// Some constructions (mapping path sets, homotopy fibers, classifying spaces)
// are easiest to define on raw elements.  ElementSource describes such a
// cubical set by canonical element keys; materialize() normalizes it into a
// generator/face-table presentation, finding the nondegenerate elements.

struct ElementSource {
    int trunc_dim = 0;
    std::function<std::vector<std::string>(int)> elements;                       // keys per dim
    std::function<std::string(int, const std::string&, int, int)> face;         // dim, key, i, sign
    std::function<std::string(int, const std::string&, int)> degeneracy;        // dim, key, i
};

CubicalSet materialize(const ElementSource& src);

// --- text format ---------------------------------------------------------------
//
//   set NAME                (optional; defaults to "main")
//   dim k: g1 g2 ...
//   face g i +|- = h [s i1 i2 ...]
//   map f: g -> h [s i1 i2 ...]
//   # comments

struct ParsedFile {
    std::vector<std::pair<std::string, CubicalSet>> sets;
    struct MapDecl {
        std::string name;
        int source_set = -1, target_set = -1;
        std::vector<std::pair<std::string, Cube>> entries;  // source generator name -> target cube
    };
    std::vector<MapDecl> maps;

    const CubicalSet& only_set() const;
    const CubicalSet& set_named(const std::string& name) const;
};

ParsedFile parse_cubical_file(const std::string& text, int trunc_dim);
CubicalMap build_map(const ParsedFile& pf, size_t map_index);

}  // namespace cubicalc::cub

#endif
