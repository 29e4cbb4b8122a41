#include "sparselab/random_functions.hpp"

#include <algorithm>
#include <cmath>

namespace sparselab {

GridFunction random_step_function(const Grid& g, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> npieces(2, 16);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int pieces = npieces(rng);
    // Jump positions on a dyadic sublattice of the cells.
    std::uniform_int_distribution<int> level_dist(3, 8);
    const int level = level_dist(rng);
    const std::int64_t block =
        std::max<std::int64_t>(1, g.cells >> level);  // cells per slot
    const std::int64_t slots = g.cells / block;

    std::vector<std::int64_t> cuts;
    std::uniform_int_distribution<std::int64_t> slot_dist(1, std::max<std::int64_t>(1, slots - 1));
    for (int i = 0; i + 1 < pieces; ++i) cuts.push_back(slot_dist(rng) * block);
    cuts.push_back(0);
    cuts.push_back(g.cells);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    GridFunction f(g);
    for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
        double level_value = std::exp(gauss(rng));
        if (unif(rng) < 0.2) level_value *= 100.0;  // occasional spike
        if (unif(rng) < 0.15) level_value = 0.0;
        for (std::int64_t i = cuts[piece]; i < cuts[piece + 1]; ++i)
            f[i] = level_value;
    }
    // Sometimes restrict the support to a short dyadic window.
    if (unif(rng) < 0.5) {
        std::uniform_int_distribution<int> shrink(1, 6);
        const int u = shrink(rng);
        const std::int64_t len = std::max<std::int64_t>(1, g.cells >> u);
        std::uniform_int_distribution<std::int64_t> start_dist(0, g.cells - len);
        const std::int64_t start = (start_dist(rng) / block) * block;
        for (std::int64_t i = 0; i < g.cells; ++i)
            if (i < start || i >= start + len) f[i] = 0.0;
    }
    // Guard against an all-zero draw.
    bool any = false;
    for (const auto& z : f.v)
        if (z.real() != 0.0) any = true;
    if (!any) f[g.cells / 2] = 1.0;
    return f;
}

NPoly random_npoly(int dim, int degree, std::mt19937_64& rng, bool unit_norm) {
    if (degree < 1) throw InvalidInputError("random_npoly: degree must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    NPoly p(dim);
    if (dim == 1) {
        for (int e = 1; e <= degree; ++e) p.add_term({e}, gauss(rng));
    } else if (dim == 2) {
        for (int a = 0; a <= degree; ++a)
            for (int b = 0; a + b <= degree; ++b)
                if (a + b >= 1) p.add_term({a, b}, gauss(rng));
    } else {
        throw UnsupportedDimensionError("random_npoly: dim must be 1 or 2");
    }
    if (unit_norm) {
        const double n = p.coeff_norm();
        p.scale(1.0 / n);
    }
    return p;
}

BiPoly random_stripped_bipoly(int degree, std::mt19937_64& rng) {
    if (degree < 2)
        throw InvalidInputError("random_stripped_bipoly: degree must be >= 2");
    std::normal_distribution<double> gauss(0.0, 1.0);
    BiPoly p(1);
    for (int a = 0; a <= degree; ++a) {
        for (int b = 1; a + b <= degree; ++b) {
            if (a + b < 2) continue;
            p.add_term({a}, {b}, gauss(rng));
        }
    }
    return p.normalized();
}

}  // namespace sparselab
