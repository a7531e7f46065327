#pragma once

#include "alc/linalg.hpp"

namespace alc {

// Hermite normal form of the lattice generated by the columns of G, given that
// the lattice contains D Z^N. Returns the basis as rows of an upper-triangular
// matrix with positive diagonal and entries above each pivot reduced into
// [0, pivot). Two lattices are equal iff their forms are equal.
IMat hnf_mod(const IMat& G, std::int64_t D);

}  // namespace alc
