#ifndef SPARSELAB_BESSELMAX_HPP
#define SPARSELAB_BESSELMAX_HPP

#include <complex>
#include <vector>

#include "sparselab/grid.hpp"

namespace sparselab {

struct FunctionFamily {
    std::vector<GridFunction> members;
    std::vector<std::complex<double>> gram;  // row-major <phi_i, phi_j>

    int size() const { return static_cast<int>(members.size()); }
    std::complex<double> gram_at(int i, int j) const {
        return gram[static_cast<std::size_t>(i) * members.size() + j];
    }
};

FunctionFamily make_family(std::vector<GridFunction> members);

enum class BesselMode { kExhaustive, kGramBound };

// Exhaustive: max over signs c in {0,+1,-1}^N of ||sum c_j phi_j||_2, via the
// Gram quadratic form (N <= 12). Gram bound: sqrt(||Gram||_op N), a certified
// upper bound for any N.
double bessel_constant(const FunctionFamily& fam, BesselMode mode);

// || sup_n |sum_{j<=n} phi_j| ||_2 by cellwise running maxima.
double max_partial_sum_norm(const FunctionFamily& fam);

// |<beta_u, beta_v>| for a generation family.
std::vector<std::vector<double>> beta_orthogonality(
    const std::vector<GridFunction>& betas);

}  // namespace sparselab

#endif
