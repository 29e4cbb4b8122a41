#ifndef SPARSELAB_WEIGHTS_HPP
#define SPARSELAB_WEIGHTS_HPP

#include <vector>

#include "sparselab/grid.hpp"
#include "sparselab/operators.hpp"
#include "sparselab/polynomial.hpp"

namespace sparselab {

// Strictly positive density on the grid.
struct Weight {
    Grid grid;
    std::vector<double> w;

    explicit Weight(const GridFunction& f);
    Weight(const Grid& g, std::vector<double> values);

    double measure_where(const std::vector<char>& indicator) const;
    double integral_against(const GridFunction& f) const;  // int |f| w
};

// Power weight |x - x0|^a sampled at cell centers.
Weight power_weight(const Grid& g, double exponent, double x0 = 0.0);

// Muckenhoupt characteristic over the cell-aligned subcubes of all three
// shifted grids: sup <w>_I <w^{1-p'}>_I^{p-1} for p > 1, the average/essinf
// ratio for p = 1.
double ap_characteristic(const Weight& w, double p);

// sup over a log-spaced level ladder of lambda w({T_{P,*} f > lambda}) / int f w.
double weak_type_ratio(const GridFunction& f, const Weight& w, const BiPoly& p,
                       const CZKernelFn& kernel, int levels = 40);

// ||T_{P,*} f||_{L^p(w)} / ||f||_{L^p(w)}.
double strong_type_ratio(const GridFunction& f, const Weight& w, const BiPoly& p,
                         const CZKernelFn& kernel, double lp);

}  // namespace sparselab

#endif
