#ifndef SPARSELAB_RANDOM_FUNCTIONS_HPP
#define SPARSELAB_RANDOM_FUNCTIONS_HPP

#include <random>

#include "sparselab/grid.hpp"
#include "sparselab/polynomial.hpp"

namespace sparselab {

// Nonnegative step function with dyadic-aligned jumps. Heavy-tailed levels and
// an occasional restriction to a short dyadic window keep the family spiky
// enough to probe L^1-type bounds.
GridFunction random_step_function(const Grid& g, std::mt19937_64& rng);

// Random polynomial with integer exponents 1..degree (no constant term),
// normalized to unit coefficient norm when requested.
NPoly random_npoly(int dim, int degree, std::mt19937_64& rng,
                   bool unit_norm = true);

// Random stripped two-variable polynomial of total degree <= degree with unit
// coefficient norm (dim 1).
BiPoly random_stripped_bipoly(int degree, std::mt19937_64& rng);

}  // namespace sparselab

#endif
