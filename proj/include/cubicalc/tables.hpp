// Finite pointed sets, monoids and groups given by element lists and
// operation tables; shared by the Kan engine (homotopy group tables,
// classifying-space input) and the spectral-sequence table engine.
#ifndef CUBICALC_TABLES_HPP
#define CUBICALC_TABLES_HPP

#include <optional>
#include <string>
#include <vector>

namespace cubicalc::tab {

struct MonoidTable {
    std::vector<std::string> names;
    std::vector<std::vector<int>> op;  // op[a][b]
    int neutral = 0;

    int size() const { return int(names.size()); }
    int add(int a, int b) const { return op[a][b]; }

    std::optional<std::string> check_monoid() const;       // closure, associativity, neutral
    bool is_commutative() const;
    bool is_group() const;                                  // every element invertible
    std::optional<int> inverse(int a) const;

    static MonoidTable cyclic(int n);                       // Z/n
    static MonoidTable trivial();
    static MonoidTable max_monoid(int n);                   // ({0..n-1}, max), neutral 0
    static MonoidTable direct_product(const MonoidTable& a, const MonoidTable& b);
};

// Isomorphism test by backtracking (intended for small tables).
bool monoid_isomorphic(const MonoidTable& a, const MonoidTable& b);

}  // namespace cubicalc::tab

#endif
