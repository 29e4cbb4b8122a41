#ifndef SPARSELAB_FIT_HPP
#define SPARSELAB_FIT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "sparselab/errors.hpp"

namespace sparselab {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;  // root mean square residual of the fit
    std::size_t points = 0;
};

// Ordinary least squares y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least squares on (log x, log y). Pairs with y <= floor are dropped; fewer
// than three surviving points is an error.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                   double floor = 1e-300);

}  // namespace sparselab

#endif
