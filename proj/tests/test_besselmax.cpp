#include <cmath>
#include <random>

#include "doctest.h"
#include "sparselab/besselmax.hpp"
#include "sparselab/random_functions.hpp"

using namespace sparselab;

namespace {

// Orthonormal indicator blocks scaled to unit L2 norm.
FunctionFamily orthonormal_family(const Grid& g, int n) {
    std::vector<GridFunction> fs;
    const std::int64_t block = g.cells / n;
    for (int j = 0; j < n; ++j) {
        GridFunction f(g);
        const double v = 1.0 / std::sqrt(block * g.h());
        for (std::int64_t i = j * block; i < (j + 1) * block; ++i) f[i] = v;
        fs.push_back(std::move(f));
    }
    return make_family(std::move(fs));
}

}  // namespace

TEST_CASE("bessel constants") {
    Grid g(2, 768);
    FunctionFamily fam = orthonormal_family(g, 4);
    CHECK(bessel_constant(fam, BesselMode::kExhaustive) ==
          doctest::Approx(2.0).epsilon(1e-9));

    FunctionFamily single = orthonormal_family(g, 1);
    CHECK(bessel_constant(single, BesselMode::kExhaustive) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // Random N = 8 family: exhaustive never beats the certified bound.
    std::mt19937_64 rng(67);
    std::vector<GridFunction> fs;
    for (int j = 0; j < 8; ++j) fs.push_back(random_step_function(g, rng));
    FunctionFamily rnd = make_family(std::move(fs));
    const double ex = bessel_constant(rnd, BesselMode::kExhaustive);
    const double gb = bessel_constant(rnd, BesselMode::kGramBound);
    CHECK(ex <= gb + 1e-9);

    std::vector<GridFunction> many;
    for (int j = 0; j < 13; ++j) many.push_back(random_step_function(g, rng));
    FunctionFamily big = make_family(std::move(many));
    CHECK_THROWS_AS(bessel_constant(big, BesselMode::kExhaustive), ModeError);
    CHECK_NOTHROW(bessel_constant(big, BesselMode::kGramBound));
}

TEST_CASE("maximal partial sums") {
    Grid g(2, 768);
    FunctionFamily single = orthonormal_family(g, 1);
    CHECK(max_partial_sum_norm(single) == doctest::Approx(1.0).epsilon(1e-12));

    // Nonnegative members: the running sup is the final sum.
    std::mt19937_64 rng(71);
    std::vector<GridFunction> fs;
    GridFunction total(g);
    for (int j = 0; j < 6; ++j) {
        fs.push_back(random_step_function(g, rng));
        for (std::int64_t i = 0; i < g.cells; ++i) total[i] += fs.back()[i];
    }
    FunctionFamily fam = make_family(std::move(fs));
    CHECK(max_partial_sum_norm(fam) == doctest::Approx(total.norm_l2()).epsilon(1e-12));

    // Orthonormal shape check: bound by A log(2 + N) with a tame constant.
    FunctionFamily ortho = orthonormal_family(g, 64);
    const double a = std::sqrt(64.0);  // exact Bessel constant
    const double mps = max_partial_sum_norm(ortho);
    CHECK(mps <= a * std::log(2.0 + 64.0));
}

TEST_CASE("orthogonality matrices") {
    Grid g(2, 768);
    FunctionFamily fam = orthonormal_family(g, 4);
    auto m = beta_orthogonality(fam.members);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    CHECK(beta_orthogonality({}).empty());
}
