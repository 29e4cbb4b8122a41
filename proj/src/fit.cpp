#include "sparselab/fit.hpp"

#include <cmath>

namespace sparselab {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw InvalidInputError("fit_line: size mismatch");
    if (x.size() < 3)
        throw InvalidInputError("fit_line: need at least 3 points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0)
        throw InvalidInputError("fit_line: degenerate abscissae");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        rss += r * r;
    }
    f.residual_rms = std::sqrt(rss / n);
    f.points = n;
    return f;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y,
                   double floor) {
    if (x.size() != y.size())
        throw InvalidInputError("fit_loglog: size mismatch");
    std::vector<double> lx, ly;
    lx.reserve(x.size());
    ly.reserve(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0))
            throw InvalidInputError("fit_loglog: nonpositive abscissa");
        if (y[i] > floor) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 3)
        throw InvalidInputError("fit_loglog: fewer than 3 usable points");
    return fit_line(lx, ly);
}

}  // namespace sparselab
