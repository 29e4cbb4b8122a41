#include "sparselab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sparselab/constants.hpp"
#include "sparselab/oscillatory.hpp"

namespace sparselab {

namespace {

DyadicCube root_cube(const Grid& g) {
    return DyadicCube{ShiftedGrid::unshifted(1), g.side_exp, {0}};
}

void collect_bad(const GridFunction& f, const DyadicCube& cube, double cutoff,
                 std::vector<DyadicCube>& out) {
    if (average(f, cube) >= cutoff) {
        out.push_back(cube);
        return;
    }
    if (!cube_splittable(f.grid, cube)) return;
    collect_bad(f, cube.child(0), cutoff, out);
    collect_bad(f, cube.child(1), cutoff, out);
}

}  // namespace

GridFunction CZDecomposition::bad_bucket(int s) const {
    GridFunction b(grid);
    if (s < 0 || s >= static_cast<int>(buckets.size())) return b;
    for (int idx : buckets[s]) {
        CellRange r = cell_range(grid, bad_cubes[idx]);
        for (std::int64_t i = r.first; i < r.last; ++i) b[i] = source[i];
    }
    return b;
}

GridFunction CZDecomposition::bad_total() const {
    GridFunction b(grid);
    for (const auto& cube : bad_cubes) {
        CellRange r = cell_range(grid, cube);
        for (std::int64_t i = r.first; i < r.last; ++i) b[i] = source[i];
    }
    return b;
}

CZDecomposition cz_decompose(const GridFunction& f, double threshold) {
    if (threshold <= 1.0)
        throw InvalidInputError("cz_decompose: threshold must be > 1");
    if (!f.is_real())
        throw InvalidInputError("cz_decompose: source must be real");
    for (const auto& z : f.v)
        if (z.real() < 0.0)
            throw InvalidInputError("cz_decompose: source must be nonnegative");

    CZDecomposition dec{f.grid, threshold, 0.0, f, GridFunction(f.grid), {}, {}};
    const DyadicCube root = root_cube(f.grid);
    dec.base_average = average(f, root);
    dec.good = f;
    dec.buckets.assign(std::max(1, f.grid.side_exp), {});
    if (dec.base_average == 0.0) return dec;

    const double cutoff = threshold * dec.base_average;
    // The root never qualifies (threshold > 1), so start from the children.
    if (cube_splittable(f.grid, root)) {
        collect_bad(f, root.child(0), cutoff, dec.bad_cubes);
        collect_bad(f, root.child(1), cutoff, dec.bad_cubes);
    }
    for (int idx = 0; idx < static_cast<int>(dec.bad_cubes.size()); ++idx) {
        const DyadicCube& J = dec.bad_cubes[idx];
        const int s = std::max(0, J.scale_exp);
        dec.buckets[s].push_back(idx);
        CellRange r = cell_range(f.grid, J);
        for (std::int64_t i = r.first; i < r.last; ++i) dec.good[i] = 0.0;
    }
    return dec;
}

GridFunction apply_T_Ks(const CZDecomposition& dec, const DyadicCube& K, int s,
                        const BiPoly& p) {
    // s = k reaches bucket 0 (cubes of side <= 1), still strictly inside K.
    if (s < 1 || s > K.scale_exp)
        throw InvalidInputError("apply_T_Ks: need buckets strictly inside K");
    const int bucket = K.scale_exp - s;
    GridFunction b = dec.bad_bucket(bucket);
    return apply_T_I(b, K, p);
}

ScaleSplit classify_scales(const CZDecomposition& dec,
                           const std::vector<DyadicCube>& collection,
                           const BiPoly& p, double c0, bool check_flat_bound) {
    if (c0 <= 0) throw InvalidInputError("classify_scales: need C0 > 0");
    const double eps_d = decay_exponent(std::max(2, p.degree()));
    const double k0 = dec.threshold * dec.base_average;
    ScaleSplit split;
    for (int ci = 0; ci < static_cast<int>(collection.size()); ++ci) {
        const DyadicCube& K = collection[ci];
        const int k = K.scale_exp;
        for (int s = 0; s < k; ++s) {
            const int bucket = k - s;
            if (bucket > dec.max_bucket()) continue;
            GridFunction b = dec.bad_bucket(bucket);
            CellRange r = cell_range(dec.grid, K);
            double mass = 0.0;  // ||b_{k-s} 1_K||_1
            for (std::int64_t i = r.first; i < r.last; ++i)
                mass += b[i].real() * dec.grid.h();
            ScaleSplitEntry e;
            e.cube_index = ci;
            e.s = s;
            GridFunction t = apply_T_I(b, K, p);
            const double l2 = t.norm_l2();
            e.lhs = l2 * l2;
            e.rhs = 100.0 * c0 * std::pow(K.volume(), -(1.0 + eps_d)) * mass * mass;
            e.standard = e.lhs <= e.rhs;
            const double avg = mass / K.volume();
            if (avg > 0.0 && k0 > 0.0)
                e.t = std::max(0, static_cast<int>(std::ceil(std::log2(k0 / avg))));
            if (!e.standard && check_flat_bound) {
                // Pair mass of b over the phase-flat subset of K x K.
                auto profiles = p.strip_forbidden().y_power_profiles();
                const double thr = std::pow(2.0, 0.5 * k);
                std::vector<std::int64_t> supp;
                for (std::int64_t i = r.first; i < r.last; ++i)
                    if (b[i].real() != 0.0) supp.push_back(i);
                std::vector<std::vector<double>> vals;
                for (const auto& [beta, rb] : profiles) {
                    const double w = std::pow(K.side(), multi_order(beta));
                    std::vector<double> row(supp.size());
                    for (std::size_t a = 0; a < supp.size(); ++a)
                        row[a] = w * rb.eval1(dec.grid.center(supp[a]));
                    vals.push_back(std::move(row));
                }
                double pair_mass = 0.0;
                for (std::size_t a = 0; a < supp.size(); ++a) {
                    for (std::size_t bb = 0; bb < supp.size(); ++bb) {
                        double sum = 0;
                        for (const auto& row : vals) sum += std::abs(row[a] - row[bb]);
                        if (sum < thr)
                            pair_mass += b[supp[a]].real() * b[supp[bb]].real();
                    }
                }
                pair_mass *= dec.grid.h() * dec.grid.h();
                e.flat_pair_mass = 2.0 * c0 / K.volume() * pair_mass;
                e.flat_bound_holds = e.lhs < e.flat_pair_mass;
            }
            split.entries.push_back(std::move(e));
        }
    }
    return split;
}

namespace {

bool cube_inside(const DyadicCube& K, const DyadicCube& J) {
    const double eps = 1e-9 * J.side();
    return K.corner(0) >= J.corner(0) - eps &&
           K.corner(0) + K.side() <= J.corner(0) + J.side() + eps;
}

}  // namespace

double carleson_packing(const std::vector<DyadicCube>& cubes, int t,
                        const DyadicCube& J) {
    if (t < 0) throw InvalidInputError("carleson_packing: t must be >= 0");
    double s = 0.0;
    for (const auto& K : cubes)
        if (cube_inside(K, J)) s += K.volume();
    return s / (std::ldexp(1.0, t) * J.volume());
}

double max_carleson_packing(const Grid& g, const std::vector<DyadicCube>& cubes,
                            int t) {
    // Accumulate subtree mass over every dyadic ancestor of each cube.
    std::map<std::pair<int, std::int64_t>, double> mass;
    for (const auto& K : cubes) {
        int scale = K.scale_exp;
        std::int64_t pos = K.pos[0];
        while (scale <= g.side_exp) {
            mass[{scale, pos}] += K.volume();
            pos = (pos >= 0 ? pos / 2 : (pos - 1) / 2);
            ++scale;
        }
    }
    double best = 0.0;
    for (const auto& [key, m] : mass) {
        const double vol = std::ldexp(1.0, key.first);
        best = std::max(best, m / (std::ldexp(1.0, t) * vol));
    }
    return best;
}

GridMask exceptional_set(const Grid& g, const std::vector<DyadicCube>& cubes,
                         double C, int t) {
    if (C <= 0) throw InvalidInputError("exceptional_set: C must be > 0");
    std::vector<int> overlap(g.cells, 0);
    for (const auto& K : cubes) {
        CellRange r = cell_range(g, K);
        for (std::int64_t i = r.first; i < r.last; ++i) ++overlap[i];
    }
    GridMask mask(1, {0.0}, g.side(), g.cells);
    const double bound = C * std::ldexp(1.0, t);
    for (std::int64_t i = 0; i < g.cells; ++i)
        if (overlap[i] > bound) mask.set(i, true);
    return mask;
}

double exceptional_constant(const Grid& g, const std::vector<DyadicCube>& cubes,
                            int t, double cap) {
    for (double C = 1.0; C <= cap; C *= 2.0) {
        if (exceptional_set(g, cubes, C, t).measure() <= 0.25 * g.side())
            return C;
    }
    throw SearchFailureError(
        "exceptional_constant: packing bound violated up to the cap");
}

std::vector<std::vector<DyadicCube>> generations(std::vector<DyadicCube> cubes) {
    std::vector<std::vector<DyadicCube>> out;
    if (cubes.empty()) return out;
    // First layer: minimal cubes (containing no other cube of the set).
    auto strictly_inside = [](const DyadicCube& a, const DyadicCube& b) {
        return a.scale_exp < b.scale_exp && cube_inside(a, b);
    };
    std::vector<DyadicCube> rest = std::move(cubes);
    {
        std::vector<DyadicCube> layer, next;
        for (const auto& K : rest) {
            bool minimal = true;
            for (const auto& J : rest)
                if (strictly_inside(J, K)) {
                    minimal = false;
                    break;
                }
            (minimal ? layer : next).push_back(K);
        }
        out.push_back(std::move(layer));
        rest = std::move(next);
    }
    // Later layers: maximal cubes of what remains.
    while (!rest.empty()) {
        std::vector<DyadicCube> layer, next;
        for (const auto& K : rest) {
            bool maximal = true;
            for (const auto& J : rest)
                if (strictly_inside(K, J)) {
                    maximal = false;
                    break;
                }
            (maximal ? layer : next).push_back(K);
        }
        if (layer.empty()) throw DepthError("generations: no progress");
        out.push_back(std::move(layer));
        rest = std::move(next);
    }
    return out;
}

}  // namespace sparselab
