#include "sparselab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sparselab/constants.hpp"

namespace sparselab {

namespace {

double pow2d(int k) { return std::ldexp(1.0, k); }

inline std::complex<double> unit_phase(double t) {
    const double a = kTwoPi * t;
    return {std::cos(a), std::sin(a)};
}

// Coefficients of x |-> P(x, y) for fixed y (dim 1).
void x_profile(const BiPoly& p, double y, std::vector<double>& coef) {
    std::fill(coef.begin(), coef.end(), 0.0);
    for (const auto& [key, c] : p.terms()) {
        const int a = key.first[0];
        const int b = key.second[0];
        if (static_cast<int>(coef.size()) <= a) coef.resize(a + 1, 0.0);
        double m = c;
        for (int i = 0; i < b; ++i) m *= y;
        coef[a] += m;
    }
}

double horner(const std::vector<double>& c, double x) {
    double r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// Accumulates sum_{eps < |y| <= hi} f(x-y) e(P(x,y)) K(y) dy into acc.
void add_annulus(const GridFunction& f, const BiPoly& p, const CZKernelFn& kernel,
                 double eps, double hi, GridFunction& acc) {
    const Grid& g = f.grid;
    const double h = g.h();
    const std::int64_t n = g.cells;
    const std::int64_t m_lo = static_cast<std::int64_t>(std::floor(eps / h)) + 1;
    const std::int64_t m_hi = static_cast<std::int64_t>(std::floor(hi / h + 1e-9));
    std::vector<double> coef;
    for (std::int64_t am = m_lo; am <= m_hi; ++am) {
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            const std::int64_t m = sgn * am;
            const double y = static_cast<double>(m) * h;
            const double kv = kernel(y) * h;
            x_profile(p, y, coef);
            const std::int64_t x_first = std::max<std::int64_t>(0, m);
            const std::int64_t x_last = std::min<std::int64_t>(n, n + m);
            for (std::int64_t ix = x_first; ix < x_last; ++ix) {
                const double xc = g.center(ix);
                acc[ix] += f[ix - m] * (kv * unit_phase(horner(coef, xc)));
            }
        }
    }
}

// Cutoffs must land on cell boundaries so annulus membership is unambiguous.
bool cell_aligned_cutoff(double value, double h) {
    if (value <= 0) return false;
    const double m = value / h;
    return std::abs(m - std::round(m)) < 1e-9;
}

}  // namespace

CZKernelFn hilbert_kernel() {
    return [](double y) { return 1.0 / y; };
}

double average(const GridFunction& f, double lo, double hi, double r) {
    if (r < 1.0) throw InvalidInputError("average: exponent must be >= 1");
    CellRange cr = cell_range(f.grid, lo, hi);
    const double h = f.grid.h();
    double s = 0;
    for (std::int64_t i = cr.first; i < cr.last; ++i)
        s += std::pow(std::abs(f[i]), r) * h;
    return std::pow(s / (hi - lo), 1.0 / r);
}

double average(const GridFunction& f, const DyadicCube& I, double r) {
    if (I.grid.dim != 1) throw UnsupportedDimensionError("average: 1D only");
    return average(f, I.corner(0), I.corner(0) + I.side(), r);
}

GridFunction apply_T_I(const GridFunction& f, const DyadicCube& I,
                       const BiPoly& p) {
    const Grid& g = f.grid;
    const double h = g.h();
    const int k = I.scale_exp - kScaleGap;
    const double reach = pow2d(k);
    if (0.75 * reach / h < 8.0)
        throw ResolutionError("apply_T_I: fewer than 8 cells per bump support");
    const double lo = I.corner(0) + I.side() / 3.0;
    const double hi = I.corner(0) + 2.0 * I.side() / 3.0;
    CellRange third = cell_range(g, lo, hi);

    GridFunction out(g);
    if (third.count() == 0) return out;

    // Offset weights 2^{-k} psi(2^{-k} m h) h, nonzero for
    // 2^{k-2} < |m| h < 2^k.
    const std::int64_t m_hi = static_cast<std::int64_t>(std::ceil(reach / h));
    std::vector<double> wpos(m_hi + 1, 0.0), wneg(m_hi + 1, 0.0);
    for (std::int64_t m = 1; m <= m_hi; ++m) {
        wpos[m] = pow2d(-k) * hilbert_bump(static_cast<double>(m) * h / reach) * h;
        wneg[m] = pow2d(-k) * hilbert_bump(-static_cast<double>(m) * h / reach) * h;
    }

    std::vector<double> coef;
    for (std::int64_t iy = third.first; iy < third.last; ++iy) {
        const std::complex<double> fy = f[iy];
        if (fy == std::complex<double>(0.0)) continue;
        const double yc = g.center(iy);
        x_profile(p, yc, coef);
        for (std::int64_t m = 1; m <= m_hi; ++m) {
            const std::int64_t ixp = iy + m, ixn = iy - m;
            if (wpos[m] != 0.0 && ixp >= 0 && ixp < g.cells)
                out[ixp] += fy * (wpos[m] * unit_phase(horner(coef, g.center(ixp))));
            if (wneg[m] != 0.0 && ixn >= 0 && ixn < g.cells)
                out[ixn] += fy * (wneg[m] * unit_phase(horner(coef, g.center(ixn))));
        }
    }
    return out;
}

GridFunction apply_truncated(const GridFunction& f, const BiPoly& p,
                             const CZKernelFn& kernel, double eps, double R) {
    const double h = f.grid.h();
    if (eps < h * (1.0 - 1e-9))
        throw TruncationError("apply_truncated: cutoff below one cell");
    if (!cell_aligned_cutoff(eps, h) || !cell_aligned_cutoff(R, h))
        throw InvalidInputError("apply_truncated: cutoffs must lie on cell boundaries");
    GridFunction out(f.grid);
    if (eps >= R) return out;
    add_annulus(f, p, kernel, eps, R, out);
    return out;
}

GridFunction apply_maximal(const GridFunction& f, const BiPoly& p,
                           const CZKernelFn& kernel,
                           const std::vector<double>& eps_ladder, double R) {
    if (eps_ladder.empty())
        throw InvalidInputError("apply_maximal: empty cutoff ladder");
    const double h = f.grid.h();
    std::vector<double> ladder = eps_ladder;
    std::sort(ladder.begin(), ladder.end(), std::greater<double>());
    for (double e : ladder) {
        if (e < h * (1.0 - 1e-9))
            throw TruncationError("apply_maximal: cutoff below one cell");
        if (!cell_aligned_cutoff(e, h))
            throw InvalidInputError("apply_maximal: cutoffs must lie on cell boundaries");
    }
    GridFunction running(f.grid);
    GridFunction out(f.grid);
    double prev = R;
    for (double e : ladder) {
        if (e < prev) add_annulus(f, p, kernel, e, prev, running);
        for (std::int64_t i = 0; i < f.grid.cells; ++i)
            out[i] = std::max(out[i].real(), std::abs(running[i]));
        prev = std::min(prev, e);
    }
    return out;
}

std::vector<double> dyadic_eps_ladder(const Grid& g) {
    std::vector<double> ladder;
    for (double e = g.h(); e < g.side() * (1 + 1e-12); e *= 2.0)
        ladder.push_back(e);
    return ladder;
}

GridFunction apply_collection_maximal(const GridFunction& f,
                                      const std::vector<DyadicCube>& collection,
                                      const BiPoly& p) {
    std::map<int, std::vector<const DyadicCube*>> by_scale;
    for (const auto& I : collection) {
        if (I.scale_exp < kMinCollectionScaleExp)
            throw ScaleError("apply_collection_maximal: cube below minimum scale");
        by_scale[I.scale_exp].push_back(&I);
    }
    GridFunction partial(f.grid);
    GridFunction out(f.grid);
    // Descending scale: partial sums over side(I) >= eps as eps shrinks.
    for (auto it = by_scale.rbegin(); it != by_scale.rend(); ++it) {
        for (const DyadicCube* I : it->second) {
            GridFunction t = apply_T_I(f, *I, p);
            for (std::int64_t i = 0; i < f.grid.cells; ++i) partial[i] += t[i];
        }
        for (std::int64_t i = 0; i < f.grid.cells; ++i)
            out[i] = std::max(out[i].real(), std::abs(partial[i]));
    }
    return out;
}

GridFunction hl_maximal(const GridFunction& f) {
    const Grid& g = f.grid;
    const std::int64_t n = g.cells;
    const double h = g.h();
    // Continuous prefix integral of |f|, linear within cells.
    std::vector<double> prefix(n + 1, 0.0);
    for (std::int64_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + std::abs(f[i]) * h;
    auto integral_to = [&](double x) {
        if (x <= 0) return 0.0;
        if (x >= g.side()) return prefix[n];
        const double t = x / h;
        const std::int64_t i = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(t));
        return prefix[i] + (t - static_cast<double>(i)) * (prefix[i + 1] - prefix[i]);
    };
    GridFunction out(g);
    // Radii 2^j spanning one cell to the full domain, plus the exact one-cell
    // window so Mf >= |f| holds cellwise.
    std::vector<double> radii = {0.5 * h};
    for (int j = static_cast<int>(std::floor(std::log2(0.5 * h)));
         std::ldexp(1.0, j) <= 2.0 * g.side(); ++j) {
        const double r = std::ldexp(1.0, j);
        if (r > 0.5 * h) radii.push_back(r);
    }
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = g.center(i);
        double best = 0.0;
        for (double r : radii) {
            const double mass = integral_to(x + r) - integral_to(x - r);
            best = std::max(best, mass / (2.0 * r));
        }
        out[i] = best;
    }
    return out;
}

}  // namespace sparselab
