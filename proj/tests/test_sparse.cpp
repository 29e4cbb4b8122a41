#include <cmath>
#include <random>

#include "doctest.h"
#include "sparselab/sparse.hpp"
#include "sparselab/random_functions.hpp"

using namespace sparselab;

namespace {

DyadicCube d0_cube(int scale_exp, std::int64_t pos) {
    return DyadicCube{ShiftedGrid::unshifted(1), scale_exp, {pos}};
}

GridFunction ones(const Grid& g) {
    GridFunction f(g);
    for (auto& z : f.v) z = 1.0;
    return f;
}

}  // namespace

TEST_CASE("sparse form on simple data") {
    Grid g(3, 768);
    GridFunction f = ones(g), zero(g);

    SparseCollection c{g, {d0_cube(3, 0)}, {}};
    GridMask w(1, {0.0}, g.side(), g.cells);
    for (std::int64_t i = 0; i < g.cells; ++i) w.set(i, true);
    c.witnesses.push_back(w);

    CHECK(sparse_form(c, f, f, 1.0, 2.0) == doctest::Approx(8.0));
    CHECK(sparse_form(c, zero, f, 1.0, 1.5) == 0.0);

    // Two nested cubes with indicator data, against the hand expansion.
    SparseCollection two = c;
    two.cubes.push_back(d0_cube(2, 0));
    two.witnesses.push_back(w);  // witnesses unused by the form
    GridFunction ind(g);
    CellRange r = cell_range(g, 0.0, 2.0);
    for (std::int64_t i = r.first; i < r.last; ++i) ind[i] = 1.0;
    // <ind>_{I0,1} = 1/4, <ind>_{I0,2} = 1/2; over [0,4): 1/2 and 1/sqrt(2).
    const double expect = 8.0 * 0.25 * 0.5 + 4.0 * 0.5 * (1.0 / std::sqrt(2.0));
    CHECK(sparse_form(two, ind, ind, 1.0, 2.0) == doctest::Approx(expect));
}

TEST_CASE("stopping family structure") {
    Grid flatg(3, 768);
    GridFunction f = ones(flatg);
    StoppingFamily fam = build_stopping_family(f, f);
    CHECK(fam.nodes.size() == 1);
    SparseCollection c = fam.to_collection();
    CHECK(verify_sparse(c).ok());
    CHECK(c.witnesses[0].popcount() == flatg.cells);

    // The spike example: the single hot cell stops immediately.
    Grid g(0, 256);
    GridFunction spike(g);
    for (auto& z : spike.v) z = 1.0;
    spike[0] = 201.0;
    StoppingFamily fam2 = build_stopping_family(spike, ones(g));
    REQUIRE(fam2.nodes.size() == 2);
    CHECK(fam2.nodes[1].cube.side() == doctest::Approx(1.0 / 256.0));
    CHECK(fam2.nodes[0].children.size() == 1);

    CHECK_THROWS_AS(build_stopping_family(spike, ones(g), 1.0), InvalidInputError);
}

TEST_CASE("random stopping families are uniformly sparse") {
    Grid g(4, 768);
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction f = random_step_function(g, rng);
        GridFunction h = random_step_function(g, rng);
        StoppingFamily fam = build_stopping_family(f, h);
        SparseCheck check = verify_sparse(fam.to_collection());
        CHECK(check.ok());
        CHECK(check.min_fraction >= 0.98);
    }
}

TEST_CASE("form monotonicity properties") {
    Grid g(4, 768);
    std::mt19937_64 rng(53);
    GridFunction f = random_step_function(g, rng);
    GridFunction h = random_step_function(g, rng);

    StoppingFamily fam = build_stopping_family(f, h);
    SparseCollection c = fam.to_collection();

    // Enlarging the collection never decreases the form.
    SparseCollection larger = c;
    larger.cubes.push_back(d0_cube(2, 1));
    larger.witnesses.push_back(larger.witnesses[0]);
    CHECK(sparse_form(larger, f, h, 1.0, 1.5) >=
          sparse_form(c, f, h, 1.0, 1.5) - 1e-12);

    // Jensen: the form grows with the second exponent.
    CHECK(sparse_form(c, f, h, 1.0, 1.1) <= sparse_form(c, f, h, 1.0, 1.5) + 1e-12);
    CHECK(sparse_form(c, f, h, 1.0, 1.5) <= sparse_form(c, f, h, 1.0, 2.0) + 1e-12);
}

TEST_CASE("domination ratio basics and stability under refinement") {
    Grid g(4, 768);
    GridFunction zero(g);
    CHECK(domination_ratio(zero, zero, bimonomial1(1, 1), hilbert_kernel(), 1.5) ==
          0.0);

    std::mt19937_64 rng(59);
    GridFunction f = random_step_function(g, rng);
    GridFunction h = random_step_function(g, rng);
    BiPoly p = bimonomial1(1, 1);  // resolved phase at these resolutions
    const double ratio = domination_ratio(f, h, p, hilbert_kernel(), 1.5);
    CHECK(ratio > 0.0);
    CHECK(std::isfinite(ratio));

    // Quadrature guard: doubling the resolution moves the ratio < 25%.
    Grid g2(4, 1536);
    GridFunction f2(g2), h2(g2);
    for (std::int64_t i = 0; i < g2.cells; ++i) {
        f2[i] = f[i / 2];
        h2[i] = h[i / 2];
    }
    const double ratio2 = domination_ratio(f2, h2, p, hilbert_kernel(), 1.5);
    CHECK(std::abs(ratio2 - ratio) / ratio < 0.25);

    CHECK_THROWS_AS(domination_ratio(f, h, p, hilbert_kernel(), 1.0),
                    InvalidInputError);
}
