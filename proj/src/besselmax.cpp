#include "sparselab/besselmax.hpp"

#include <algorithm>
#include <cmath>

namespace sparselab {

FunctionFamily make_family(std::vector<GridFunction> members) {
    if (members.empty()) throw InvalidInputError("make_family: empty family");
    for (const auto& f : members)
        if (!(f.grid == members[0].grid))
            throw AlignmentError("make_family: members on different grids");
    FunctionFamily fam;
    fam.gram.resize(members.size() * members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = 0; j < members.size(); ++j)
            fam.gram[i * members.size() + j] =
                inner_product(members[i], members[j]);
    fam.members = std::move(members);
    return fam;
}

double bessel_constant(const FunctionFamily& fam, BesselMode mode) {
    const int n = fam.size();
    if (mode == BesselMode::kExhaustive) {
        if (n > 12)
            throw ModeError("bessel_constant: exhaustive mode capped at N = 12");
        std::vector<int> c(n, 0);  // ternary counter over {0, 1, -1}
        double best_sq = 0.0;
        std::int64_t total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        for (std::int64_t code = 0; code < total; ++code) {
            std::int64_t v = code;
            for (int i = 0; i < n; ++i) {
                const int d = static_cast<int>(v % 3);
                c[i] = d == 2 ? -1 : d;
                v /= 3;
            }
            double q = 0.0;
            for (int i = 0; i < n; ++i) {
                if (c[i] == 0) continue;
                q += fam.gram_at(i, i).real();
                for (int j = i + 1; j < n; ++j) {
                    if (c[j] == 0) continue;
                    q += 2.0 * c[i] * c[j] * fam.gram_at(i, j).real();
                }
            }
            best_sq = std::max(best_sq, q);
        }
        return std::sqrt(std::max(0.0, best_sq));
    }
    // Operator norm of the (Hermitian PSD) Gram matrix by power iteration.
    std::vector<std::complex<double>> x(n, 1.0), y(n);
    double norm = 0.0;
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < n; ++i) {
            std::complex<double> s = 0.0;
            for (int j = 0; j < n; ++j) s += fam.gram_at(i, j) * x[j];
            y[i] = s;
        }
        double len = 0.0;
        for (int i = 0; i < n; ++i) len += std::norm(y[i]);
        len = std::sqrt(len);
        if (len == 0.0) return 0.0;
        for (int i = 0; i < n; ++i) x[i] = y[i] / len;
        norm = len;
    }
    return std::sqrt(norm * n);
}

double max_partial_sum_norm(const FunctionFamily& fam) {
    const Grid& g = fam.members.front().grid;
    std::vector<std::complex<double>> run(g.cells, 0.0);
    std::vector<double> peak(g.cells, 0.0);
    for (const auto& f : fam.members) {
        for (std::int64_t i = 0; i < g.cells; ++i) {
            run[i] += f[i];
            peak[i] = std::max(peak[i], std::abs(run[i]));
        }
    }
    double s = 0.0;
    for (double v : peak) s += v * v;
    return std::sqrt(s * g.h());
}

std::vector<std::vector<double>> beta_orthogonality(
    const std::vector<GridFunction>& betas) {
    const int n = static_cast<int>(betas.size());
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m[i][j] = std::abs(inner_product(betas[i], betas[j]));
    return m;
}

}  // namespace sparselab
