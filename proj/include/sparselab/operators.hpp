#ifndef SPARSELAB_OPERATORS_HPP
#define SPARSELAB_OPERATORS_HPP

#include <functional>
#include <vector>

#include "sparselab/grid.hpp"
#include "sparselab/kernel.hpp"
#include "sparselab/polynomial.hpp"

namespace sparselab {

// Pointwise kernel K(y) of a Calderon-Zygmund convolution, evaluated away
// from the origin.
using CZKernelFn = std::function<double(double)>;
CZKernelFn hilbert_kernel();  // 1/y

// L^r average over a cell-aligned cube: (|I|^{-1} int_I |f|^r)^{1/r}.
double average(const GridFunction& f, const DyadicCube& I, double r = 1.0);
double average(const GridFunction& f, double lo, double hi, double r = 1.0);

// Localized single-scale piece
//   T_I g(x) = int e(P(x,y)) 2^{-k} psi_k(2^{-k}(x-y)) (g 1_{(1/3)I})(y) dy
// with side(I) = 2^{k + kScaleGap}. Quadrature is the grid's cell sum; the
// bump support must span at least 8 cells.
GridFunction apply_T_I(const GridFunction& f, const DyadicCube& I,
                       const BiPoly& p);

// Truncated integral at fixed cutoffs,
//   int_{eps < |y| <= R} f(x-y) e(P(x,y)) K(y) dy,
// with f extended by zero outside the grid domain.
GridFunction apply_truncated(const GridFunction& f, const BiPoly& p,
                             const CZKernelFn& kernel, double eps, double R);

// Pointwise sup over the cutoff ladder of |apply_truncated|; real-valued.
GridFunction apply_maximal(const GridFunction& f, const BiPoly& p,
                           const CZKernelFn& kernel,
                           const std::vector<double>& eps_ladder, double R);

// Dyadic cutoff ladder from one cell up to the grid side.
std::vector<double> dyadic_eps_ladder(const Grid& g);

// sup over the dyadic cutoff of |sum_{I in collection, side(I) >= eps} T_I f|.
GridFunction apply_collection_maximal(const GridFunction& f,
                                      const std::vector<DyadicCube>& collection,
                                      const BiPoly& p);

// Centered Hardy-Littlewood maximal function over dyadic radii (half a cell,
// one cell, two cells, ...), zero extension outside the domain.
GridFunction hl_maximal(const GridFunction& f);

}  // namespace sparselab

#endif
