#include "sparselab/oscillatory.hpp"

#include <algorithm>
#include <cmath>

#include "sparselab/constants.hpp"

namespace sparselab {

namespace {

double pow2d(int k) { return std::ldexp(1.0, k); }

inline std::complex<double> unit_phase(double t) {
    const double a = kTwoPi * t;
    return {std::cos(a), std::sin(a)};
}

}  // namespace

OscIntegral osc_integral(const NPoly& p, const RealFn& window, double a,
                         double b, int n) {
    if (p.dim() != 1)
        throw UnsupportedDimensionError("osc_integral: 1D regions only");
    if (n < 1) throw InvalidInputError("osc_integral: resolution must be >= 1");
    OscIntegral out;
    const int d = std::max(1, p.degree());
    const double norm = p.coeff_norm();
    out.resolution_ok = n >= 8.0 * d * std::pow(std::max(norm, 1.0), 1.0 / d);
    const double h = (b - a) / n;
    std::complex<double> s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = a + (i + 0.5) * h;
        s += window(t) * unit_phase(p.eval1(t));
    }
    out.value = s * h;
    return out;
}

DecayFit vdc_decay_fit(const NPoly& p0, const std::vector<double>& lambda_grid,
                       const RealFn& window, double a, double b,
                       int resolution) {
    if (lambda_grid.size() < 3)
        throw InvalidInputError("vdc_decay_fit: need at least 3 lambda values");
    if (p0.degree() < 1 || p0.coeff_norm() == 0.0)
        throw InvalidInputError("vdc_decay_fit: P0 must be nonconstant");
    std::vector<double> mags;
    mags.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        NPoly p = p0;
        p.scale(lam);
        mags.push_back(std::abs(osc_integral(p, window, a, b, resolution).value));
    }
    DecayFit fit;
    fit.raw = fit_loglog(lambda_grid, mags);
    fit.exponent = fit.raw.slope;
    fit.constant = std::exp(fit.raw.intercept);
    return fit;
}

double sublevel_measure(const NPoly& p, double eps, const Box& I, int n) {
    if (eps <= 0) throw InvalidInputError("sublevel_measure: eps must be > 0");
    const int dim = I.dim();
    if (p.dim() != dim)
        throw InvalidInputError("sublevel_measure: dimension mismatch");
    const double h = I.side / n;
    if (dim == 1) {
        std::int64_t count = 0;
        for (int i = 0; i < n; ++i) {
            const double x = I.corner[0] + (i + 0.5) * h;
            if (std::abs(p.eval1(x)) < eps) ++count;
        }
        return count * h;
    }
    if (dim == 2) {
        std::int64_t count = 0;
        double xy[2];
        for (int i = 0; i < n; ++i) {
            xy[0] = I.corner[0] + (i + 0.5) * h;
            for (int j = 0; j < n; ++j) {
                xy[1] = I.corner[1] + (j + 0.5) * h;
                if (std::abs(p.eval(std::span<const double>(xy, 2))) < eps) ++count;
            }
        }
        return count * h * h;
    }
    throw UnsupportedDimensionError("sublevel_measure: dim must be 1 or 2");
}

PhaseFlatSet build_phase_flat_set(const BiPoly& p, const DyadicCube& K,
                                  std::int64_t cells_per_side) {
    if (p.dim() != 1)
        throw UnsupportedDimensionError("build_phase_flat_set: 1D pairs only");
    if (!p.is_stripped())
        throw InvalidInputError("build_phase_flat_set: polynomial not stripped");
    if (std::abs(p.coeff_norm() - 1.0) > 1e-9)
        throw InvalidInputError("build_phase_flat_set: need unit coefficient norm");
    const int k = K.scale_exp;
    if (k < kMinCollectionScaleExp)
        throw ScaleError("build_phase_flat_set: cube scale below minimum");

    PhaseFlatSet z{Box{{K.corner(0), K.corner(0)}, K.side()}, k,
                   std::pow(2.0, 0.5 * k),
                   GridMask(2, {K.corner(0), K.corner(0)}, K.side(), cells_per_side)};

    // Profile values at the 1D cell centers, one array per y-power, already
    // weighted by side^|beta|.
    auto profiles = p.y_power_profiles();
    const std::int64_t n = cells_per_side;
    const double h = K.side() / n;
    std::vector<std::vector<double>> vals;
    for (const auto& [beta, r] : profiles) {
        const double w = std::pow(K.side(), multi_order(beta));
        std::vector<double> row(n);
        for (std::int64_t i = 0; i < n; ++i)
            row[i] = w * r.eval1(K.corner(0) + (i + 0.5) * h);
        vals.push_back(std::move(row));
    }
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            double s = 0;
            for (const auto& row : vals) s += std::abs(row[i] - row[j]);
            if (s < z.threshold) z.mask.set(i, j, true);
        }
    }
    return z;
}

bool phase_flat_contains(const BiPoly& p, const Box& K, int scale_exp, double x,
                         double y) {
    auto profiles = p.y_power_profiles();
    double s = 0;
    for (const auto& [beta, r] : profiles) {
        const double w = std::pow(K.side, multi_order(beta));
        s += w * std::abs(r.eval1(x) - r.eval1(y));
    }
    return s < std::pow(2.0, 0.5 * scale_exp);
}

std::vector<NeighborhoodRow> phase_flat_neighborhoods(
    const PhaseFlatSet& z, int degree, const std::vector<int>& s_grid) {
    const int k = z.scale_exp;
    const double eps_d = decay_exponent(degree);
    const double full = z.cube.side * z.cube.side;
    const double fiber_full = z.cube.side;
    std::vector<NeighborhoodRow> rows;
    for (int s : s_grid) {
        if (s < 0 || s > k)
            throw InvalidInputError("phase_flat_neighborhoods: need 1 <= 2^s <= 2^k");
        NeighborhoodRow row;
        row.s = s;
        row.shape = std::pow(2.0, -0.5 * eps_d * k) + pow2d(s - k);
        row.minkowski_ratio = dilate(z.mask, pow2d(s)).measure() / full;
        double worst = 0.0;
        for (std::int64_t i = 0; i < z.mask.cells_per_side(); ++i) {
            GridMask f = z.mask.fiber(i);
            if (f.popcount() == 0) continue;
            worst = std::max(worst, dilate(f, pow2d(s)).measure());
        }
        row.fiber_ratio = worst / fiber_full;
        rows.push_back(row);
    }
    return rows;
}

int strip_interval_count(const NPoly& p, double level, const KStrip& strip,
                         std::int64_t j_lo, std::int64_t j_hi, int samples) {
    if (level <= 0) throw InvalidInputError("strip_interval_count: level must be > 0");
    if (j_lo > j_hi) throw InvalidInputError("strip_interval_count: empty range");
    const int dim = strip.base.grid.dim;
    if (p.dim() != dim)
        throw InvalidInputError("strip_interval_count: dimension mismatch");
    int runs = 0;
    bool in_run = false;
    std::vector<double> pt(dim);
    for (std::int64_t j = j_lo; j <= j_hi; ++j) {
        const DyadicCube q = strip.cube_at(j);
        const double side = q.side();
        bool meets = false;
        if (dim == 2) {
            for (int a = 0; a < samples && !meets; ++a) {
                pt[0] = q.corner(0) + (a + 0.5) * side / samples;
                for (int b = 0; b < samples && !meets; ++b) {
                    pt[1] = q.corner(1) + (b + 0.5) * side / samples;
                    meets = std::abs(p.eval(pt)) < level;
                }
            }
        } else if (dim == 1) {
            for (int a = 0; a < samples && !meets; ++a) {
                pt[0] = q.corner(0) + (a + 0.5) * side / samples;
                meets = std::abs(p.eval(pt)) < level;
            }
        } else {
            throw UnsupportedDimensionError("strip_interval_count: dim must be <= 2");
        }
        if (meets && !in_run) ++runs;
        in_run = meets;
    }
    return runs;
}

}  // namespace sparselab
