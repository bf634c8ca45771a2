#include "cubicalc/tables.hpp"

#include <algorithm>
#include <functional>

namespace cubicalc::tab {

std::optional<std::string> MonoidTable::check_monoid() const {
    const int n = size();
    if (int(op.size()) != n) return "operation table has wrong row count";
    for (const auto& row : op)
        if (int(row.size()) != n) return "operation table has wrong column count";
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (op[a][b] < 0 || op[a][b] >= n) return "operation not closed";
    if (neutral < 0 || neutral >= n) return "neutral element out of range";
    for (int a = 0; a < n; ++a)
        if (op[neutral][a] != a || op[a][neutral] != a) return "neutral element fails at " + names[a];
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (op[op[a][b]][c] != op[a][op[b][c]])
                    return "associativity fails at (" + names[a] + "," + names[b] + "," + names[c] + ")";
    return std::nullopt;
}

bool MonoidTable::is_commutative() const {
    for (int a = 0; a < size(); ++a)
        for (int b = a + 1; b < size(); ++b)
            if (op[a][b] != op[b][a]) return false;
    return true;
}

std::optional<int> MonoidTable::inverse(int a) const {
    for (int b = 0; b < size(); ++b)
        if (op[a][b] == neutral && op[b][a] == neutral) return b;
    return std::nullopt;
}

bool MonoidTable::is_group() const {
    for (int a = 0; a < size(); ++a)
        if (!inverse(a)) return false;
    return true;
}

MonoidTable MonoidTable::cyclic(int n) {
    MonoidTable m;
    for (int i = 0; i < n; ++i) m.names.push_back(std::to_string(i));
    m.op.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.op[a][b] = (a + b) % n;
    m.neutral = 0;
    return m;
}

MonoidTable MonoidTable::trivial() { return cyclic(1); }

MonoidTable MonoidTable::max_monoid(int n) {
    MonoidTable m;
    for (int i = 0; i < n; ++i) m.names.push_back(std::to_string(i));
    m.op.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.op[a][b] = std::max(a, b);
    m.neutral = 0;
    return m;
}

MonoidTable MonoidTable::direct_product(const MonoidTable& a, const MonoidTable& b) {
    MonoidTable m;
    const int na = a.size(), nb = b.size();
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) m.names.push_back("(" + a.names[i] + "," + b.names[j] + ")");
    m.op.assign(na * nb, std::vector<int>(na * nb));
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < na; ++k)
                for (int l = 0; l < nb; ++l) m.op[i * nb + j][k * nb + l] = a.op[i][k] * nb + b.op[j][l];
    m.neutral = a.neutral * nb + b.neutral;
    return m;
}

bool monoid_isomorphic(const MonoidTable& a, const MonoidTable& b) {
    if (a.size() != b.size()) return false;
    const int n = a.size();
    std::vector<int> phi(n, -1), used(n, 0);
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return true;
        for (int v = 0; v < n; ++v) {
            if (used[v]) continue;
            if (i == a.neutral && v != b.neutral) continue;
            phi[i] = v;
            used[v] = 1;
            bool ok = true;
            for (int x = 0; x <= i && ok; ++x)
                for (int y = 0; y <= i && ok; ++y) {
                    if (phi[x] < 0 || phi[y] < 0) continue;
                    int z = a.op[x][y];
                    if (z <= i && phi[z] >= 0 && b.op[phi[x]][phi[y]] != phi[z]) ok = false;
                }
            if (ok && rec(i + 1)) return true;
            used[v] = 0;
            phi[i] = -1;
        }
        return false;
    };
    return rec(0);
}

}  // namespace cubicalc::tab
