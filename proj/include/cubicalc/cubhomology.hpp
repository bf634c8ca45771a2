// Normalized cubical chain complex: basis = nondegenerate generators,
// boundary = sum_i (-1)^i (d_i^+ - d_i^-) with degenerate faces dropped.
#ifndef CUBICALC_CUBHOMOLOGY_HPP
#define CUBICALC_CUBHOMOLOGY_HPP

#include "cubicalc/cubset.hpp"
#include "cubicalc/zlinalg.hpp"

namespace cubicalc::zlin {

ChainComplex cubical_chain_complex(const cub::CubicalSet& x);

}  // namespace cubicalc::zlin

#endif
