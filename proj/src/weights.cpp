#include "sparselab/weights.hpp"

#include <algorithm>
#include <cmath>

namespace sparselab {

Weight::Weight(const GridFunction& f) : grid(f.grid) {
    w.reserve(f.v.size());
    for (const auto& z : f.v) {
        if (z.imag() != 0.0 || !(z.real() > 0.0))
            throw InvalidInputError("Weight: values must be real and positive");
        w.push_back(z.real());
    }
}

Weight::Weight(const Grid& g, std::vector<double> values)
    : grid(g), w(std::move(values)) {
    if (static_cast<std::int64_t>(w.size()) != g.cells)
        throw InvalidInputError("Weight: value count != cells");
    for (double v : w)
        if (!(v > 0.0))
            throw InvalidInputError("Weight: values must be positive");
}

double Weight::measure_where(const std::vector<char>& indicator) const {
    if (indicator.size() != w.size())
        throw InvalidInputError("Weight: indicator size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (indicator[i]) s += w[i];
    return s * grid.h();
}

double Weight::integral_against(const GridFunction& f) const {
    if (!(f.grid == grid)) throw AlignmentError("Weight: grid mismatch");
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += std::abs(f.v[i]) * w[i];
    return s * grid.h();
}

Weight power_weight(const Grid& g, double exponent, double x0) {
    std::vector<double> vals(g.cells);
    for (std::int64_t i = 0; i < g.cells; ++i)
        vals[i] = std::pow(std::abs(g.center(i) - x0), exponent);
    return Weight(g, std::move(vals));
}

namespace {

// Enumerate [first, last) half-open cell ranges of every cell-aligned cube of
// the three shifted grids fully inside the domain.
template <typename Fn>
void for_each_subcube(const Grid& g, Fn&& fn) {
    for (int thirds = 0; thirds < 3; ++thirds) {
        ShiftedGrid sg(1, {thirds});
        for (int scale = g.side_exp; ; --scale) {
            const double side = std::ldexp(1.0, scale);
            const double cells_exact = side / g.h();
            const double rc = std::round(cells_exact);
            if (std::abs(cells_exact - rc) > 1e-9) break;  // misaligned scale
            const std::int64_t span = static_cast<std::int64_t>(rc);
            if (span < 1) break;
            bool any = false;
            for (const DyadicCube& cube : cubes_at_scale(g, scale, sg)) {
                const double lo = cube.corner(0), hi = lo + cube.side();
                if (lo < -1e-12 || hi > g.side() + 1e-12) continue;
                const double fc = lo / g.h();
                const double rf = std::round(fc);
                if (std::abs(fc - rf) > 1e-9) continue;
                const std::int64_t first = static_cast<std::int64_t>(rf);
                fn(first, first + span);
                any = true;
            }
            if (!any && scale < 0) break;
        }
    }
}

}  // namespace

double ap_characteristic(const Weight& w, double p) {
    if (p < 1.0) throw InvalidInputError("ap_characteristic: need p >= 1");
    const Grid& g = w.grid;
    const std::int64_t n = g.cells;
    std::vector<double> prefix(n + 1, 0.0), prefix_dual(n + 1, 0.0);
    const bool a1 = (p == 1.0);
    const double dual_exp = a1 ? 0.0 : 1.0 - p / (p - 1.0);  // 1 - p'
    for (std::int64_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + w.w[i];
        prefix_dual[i + 1] =
            prefix_dual[i] + (a1 ? 0.0 : std::pow(w.w[i], dual_exp));
    }
    // Sparse min table only needed for p = 1; scan directly per cube instead
    // (cube count is O(n log n) but each min scan reuses halving structure
    // poorly; direct scan is fine at this size).
    double best = 0.0;
    for_each_subcube(g, [&](std::int64_t first, std::int64_t last) {
        const double cnt = static_cast<double>(last - first);
        const double avg = (prefix[last] - prefix[first]) / cnt;
        double value;
        if (a1) {
            double mn = w.w[first];
            for (std::int64_t i = first + 1; i < last; ++i)
                mn = std::min(mn, w.w[i]);
            value = avg / mn;
        } else {
            const double avg_dual = (prefix_dual[last] - prefix_dual[first]) / cnt;
            value = avg * std::pow(avg_dual, p - 1.0);
        }
        best = std::max(best, value);
    });
    return best;
}

double weak_type_ratio(const GridFunction& f, const Weight& w, const BiPoly& p,
                       const CZKernelFn& kernel, int levels) {
    if (levels < 1) throw InvalidInputError("weak_type_ratio: need levels >= 1");
    GridFunction t =
        apply_maximal(f, p, kernel, dyadic_eps_ladder(f.grid), f.grid.side());
    const double denom = w.integral_against(f);
    if (denom == 0.0) return 0.0;
    double tmax = t.norm_linf();
    if (tmax == 0.0) return 0.0;
    double best = 0.0;
    std::vector<char> above(f.grid.cells, 0);
    for (int l = 0; l < levels; ++l) {
        const double lam =
            tmax * std::pow(1e-4, 1.0 - static_cast<double>(l) / std::max(1, levels - 1));
        for (std::int64_t i = 0; i < f.grid.cells; ++i)
            above[i] = t[i].real() > lam ? 1 : 0;
        best = std::max(best, lam * w.measure_where(above) / denom);
    }
    return best;
}

double strong_type_ratio(const GridFunction& f, const Weight& w, const BiPoly& p,
                         const CZKernelFn& kernel, double lp) {
    if (!(lp > 1.0)) throw InvalidInputError("strong_type_ratio: need p > 1");
    GridFunction t =
        apply_maximal(f, p, kernel, dyadic_eps_ladder(f.grid), f.grid.side());
    double num = 0.0, den = 0.0;
    for (std::int64_t i = 0; i < f.grid.cells; ++i) {
        num += std::pow(t[i].real(), lp) * w.w[i];
        den += std::pow(std::abs(f[i]), lp) * w.w[i];
    }
    if (den == 0.0) return 0.0;
    return std::pow(num / den, 1.0 / lp);
}

}  // namespace sparselab
