// The box category: objects I^n, morphisms generated by face inclusions
// delta_i^eps : I^{n-1} -> I^n and projections sigma_i : I^n -> I^{n-1},
// subject to the co-cubical identities.  Every morphism has a unique normal
// form: a list of insertions at strictly increasing codomain positions
// followed by a projection word with non-increasing indices.
#ifndef CUBICALC_BOXCAT_HPP
#define CUBICALC_BOXCAT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cubicalc::box {

struct Insertion {
    int pos;   // final position in the codomain, 1-based
    int sign;  // -1 or +1
    bool operator==(const Insertion&) const = default;
    auto operator<=>(const Insertion&) const = default;
};

// A generator letter of the box category; words compose left-to-right as
// function composition (the rightmost letter is applied first).
struct Letter {
    bool is_insertion;  // true: delta_index^sign, false: sigma_index
    int index;
    int sign;  // used only for insertions
};

struct BoxMorphism {
    int dom_dim = 0;
    int cod_dim = 0;
    std::vector<Insertion> insertions;  // strictly increasing positions in 1..cod_dim
    std::vector<int> projections;       // non-increasing word j_1 >= j_2 >= ..., j in 1..dom_dim

    bool operator==(const BoxMorphism&) const = default;
    auto operator<=>(const BoxMorphism&) const = default;

    bool is_identity() const { return dom_dim == cod_dim && insertions.empty() && projections.empty(); }
    int surviving() const { return dom_dim - int(projections.size()); }

    static BoxMorphism identity(int n);
    static BoxMorphism face(int n, int i, int sign);  // delta_i^sign : I^{n-1} -> I^n
    static BoxMorphism degeneracy(int n, int i);      // sigma_i : I^n -> I^{n-1}

    // The set of domain coordinates removed by the projection word (1-based, sorted).
    std::vector<int> projected_set() const;
    // Rebuild the canonical projection word from a sorted set of removed coordinates.
    static std::vector<int> word_from_projected_set(const std::vector<int>& removed);

    std::string str() const;  // e.g. "d2+ d1- s3 s1 : I^3 -> I^2"
};

// Composite g o f in normal form; throws std::invalid_argument on dimension mismatch.
BoxMorphism compose(const BoxMorphism& g, const BoxMorphism& f);

// Rewrites an arbitrary generator word (dims inferred from dom_dim) to normal
// form using the co-cubical identities.  Throws on ill-formed words.
BoxMorphism normalize_word(int dom_dim, std::span<const Letter> word);
std::vector<Letter> to_word(const BoxMorphism& m);

// The affine action on point tuples: delete projected coordinates, insert signs.
std::vector<double> apply_geometric(const BoxMorphism& m, std::span<const double> x);

std::vector<BoxMorphism> enumerate_hom(int n, int m);
// sum_r C(n,r) C(m,r) 2^(m-r)
std::uint64_t hom_count_closed_form(int n, int m);

}  // namespace cubicalc::box

#endif
