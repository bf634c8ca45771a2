#include "cubicalc/cubhomology.hpp"

#include <map>

namespace cubicalc::zlin {

ChainComplex cubical_chain_complex(const cub::CubicalSet& x) {
    ChainComplex c;
    int top = x.trunc_dim();
    while (top > 0 && x.generators_of_dim(top).empty()) --top;
    c.dims.resize(top + 1);
    c.boundary.resize(top + 1);

    std::vector<std::map<cub::GenId, int>> index(top + 1);
    for (int d = 0; d <= top; ++d) {
        const auto& gens = x.generators_of_dim(d);
        c.dims[d] = int(gens.size());
        for (int t = 0; t < int(gens.size()); ++t) index[d][gens[t]] = t;
    }
    for (int d = 1; d <= top; ++d) {
        IntMatrix b(c.dims[d - 1], c.dims[d]);
        const auto& gens = x.generators_of_dim(d);
        for (int col = 0; col < int(gens.size()); ++col) {
            cub::Cube topcell{gens[col], {}};
            for (int i = 1; i <= d; ++i) {
                Int sgn = i % 2 == 0 ? 1 : -1;
                cub::Cube fp = x.face(topcell, i, +1);
                cub::Cube fm = x.face(topcell, i, -1);
                if (!fp.is_degenerate()) b(index[d - 1].at(fp.gen), col) += sgn;
                if (!fm.is_degenerate()) b(index[d - 1].at(fm.gen), col) -= sgn;
            }
        }
        c.boundary[d] = std::move(b);
    }
    return c;
}

}  // namespace cubicalc::zlin
