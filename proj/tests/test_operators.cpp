#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "sparselab/constants.hpp"
#include "sparselab/operators.hpp"
#include "sparselab/random_functions.hpp"

using namespace sparselab;

namespace {

DyadicCube d0_cube(int scale_exp, std::int64_t pos) {
    return DyadicCube{ShiftedGrid::unshifted(1), scale_exp, {pos}};
}

}  // namespace

TEST_CASE("averages") {
    Grid g(2, 768);
    GridFunction f(g);
    for (auto& z : f.v) z = -3.0;
    DyadicCube I = d0_cube(1, 1);  // [2, 4)
    CHECK(average(f, I, 1.0) == doctest::Approx(3.0));
    CHECK(average(f, I, 2.0) == doctest::Approx(3.0));

    GridFunction half(g);
    for (std::int64_t i = 0; i < g.cells / 4; ++i) half[i] = 1.0;  // [0, 1)
    CHECK(average(half, d0_cube(1, 0), 1.0) == doctest::Approx(0.5));

    // Two-pass summation oracle at r = 2.
    std::mt19937_64 rng(3);
    GridFunction r = random_step_function(g, rng);
    CellRange cr = cell_range(g, 0.0, 2.0);
    double acc = 0.0;
    for (std::int64_t i = cr.first; i < cr.last; ++i)
        acc += std::norm(r[i]) * g.h();
    const double oracle = std::sqrt(acc / 2.0);
    CHECK(average(r, d0_cube(1, 0), 2.0) == doctest::Approx(oracle).epsilon(1e-12));

    CHECK_THROWS_AS(average(r, 0.0, 0.1234, 1.0), AlignmentError);
    CHECK_THROWS_AS(average(r, d0_cube(1, 0), 0.5), InvalidInputError);
}

TEST_CASE("localized piece T_I") {
    Grid g(5, 1536);
    DyadicCube I = d0_cube(5, 0);  // the whole domain, bump scale 2

    GridFunction zero(g);
    CHECK(apply_T_I(zero, I, BiPoly(1)).norm_linf() == 0.0);

    // P = 0 on the indicator of the middle third: the output integrates to
    // zero because the bump has zero mean.
    GridFunction f(g);
    CellRange third = cell_range(g, 32.0 / 3.0, 64.0 / 3.0);
    for (std::int64_t i = third.first; i < third.last; ++i) f[i] = 1.0;
    GridFunction out = apply_T_I(f, I, BiPoly(1));
    std::complex<double> total = 0.0;
    for (const auto& z : out.v) total += z * g.h();
    CHECK(std::abs(total) < 1e-10);

    // Pointwise modulus bound by 2^{-k} ||psi||_inf int |f|.
    std::mt19937_64 rng(5);
    GridFunction rf = random_step_function(g, rng);
    BiPoly p = bimonomial1(1, 2);
    GridFunction tf = apply_T_I(rf, I, p);
    double mass_third = 0.0;
    for (std::int64_t i = third.first; i < third.last; ++i)
        mass_third += std::abs(rf[i]) * g.h();
    const double bound = 0.25 * 4.0 * mass_third;  // 2^{-k} sup|psi| int
    for (const auto& z : tf.v) CHECK(std::abs(z) <= bound + 1e-12);

    // Too-coarse grids are rejected: bump scale 2 needs 8 cells over 3 units.
    Grid coarse(5, 64);
    GridFunction cf(coarse);
    CHECK_THROWS_AS(apply_T_I(cf, d0_cube(5, 0), p), ResolutionError);
}

TEST_CASE("truncated integrals") {
    Grid g(2, 768);  // [0, 4), h = 1/192

    // Even function about a cell center: the Hilbert pairing cancels.
    GridFunction even(g);
    const std::int64_t c = g.cells / 2;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::int64_t m = 0; m < 128; ++m) {
        const double v = unif(rng);
        even[c + m] = v;
        even[c - m] = v;
    }
    GridFunction t = apply_truncated(even, BiPoly(1), hilbert_kernel(),
                                     g.h() * 2.0, 1.0);
    CHECK(std::abs(t[c]) < 1e-10);

    // Single-cell input traces the kernel directly.
    GridFunction delta(g);
    const std::int64_t j0 = 200;
    delta[j0] = 1.0;
    BiPoly p = bimonomial1(1, 2);
    GridFunction out = apply_truncated(delta, p, hilbert_kernel(), 0.25, 2.0);
    for (std::int64_t ix : {std::int64_t(260), std::int64_t(420), std::int64_t(110)}) {
        const double y = static_cast<double>(ix - j0) * g.h();
        std::complex<double> expect = 0.0;
        if (std::abs(y) > 0.25 && std::abs(y) <= 2.0) {
            const double ph = kTwoPi * p.eval1(g.center(ix), y);
            expect = std::complex<double>(std::cos(ph), std::sin(ph)) / y * g.h();
        }
        CHECK(std::abs(out[ix] - expect) < 1e-12);
    }

    // Empty annulus.
    GridFunction none = apply_truncated(delta, p, hilbert_kernel(), 1.0, 1.0);
    CHECK(none.norm_linf() == 0.0);

    CHECK_THROWS_AS(apply_truncated(delta, p, hilbert_kernel(), g.h() / 4, 1.0),
                    TruncationError);
    CHECK_THROWS_AS(apply_truncated(delta, p, hilbert_kernel(), 0.3, 1.0),
                    InvalidInputError);
}

TEST_CASE("maximal truncation") {
    Grid g(2, 12288);  // h = 1/3072 for the analytic comparison
    GridFunction f(g);
    CellRange unit = cell_range(g, 0.0, 1.0);
    for (std::int64_t i = unit.first; i < unit.last; ++i) f[i] = 1.0;

    // Single cutoff reduces to |apply_truncated|.
    GridFunction one = apply_maximal(f, BiPoly(1), hilbert_kernel(), {0.5}, 4.0);
    GridFunction tr = apply_truncated(f, BiPoly(1), hilbert_kernel(), 0.5, 4.0);
    for (std::int64_t i = 0; i < g.cells; i += 7)
        CHECK(one[i].real() == doctest::Approx(std::abs(tr[i])).epsilon(1e-12));

    // Refining the ladder can only increase the sup.
    GridFunction coarse =
        apply_maximal(f, BiPoly(1), hilbert_kernel(), {0.5, 2.0}, 4.0);
    GridFunction fine = apply_maximal(f, BiPoly(1), hilbert_kernel(),
                                      {0.25, 0.5, 1.0, 2.0}, 4.0);
    for (std::int64_t i = 0; i < g.cells; ++i)
        CHECK(coarse[i].real() <= fine[i].real() + 1e-12);

    // Analytic truncated-Hilbert value just past x = 2 for the indicator.
    GridFunction full =
        apply_maximal(f, BiPoly(1), hilbert_kernel(), dyadic_eps_ladder(g), 4.0);
    const std::int64_t ix = cell_range(g, 0.0, 2.0).last;
    const double x = g.center(ix);
    CHECK(full[ix].real() ==
          doctest::Approx(std::log(x / (x - 1.0))).epsilon(1e-4));

    CHECK_THROWS_AS(apply_maximal(f, BiPoly(1), hilbert_kernel(), {}, 4.0),
                    InvalidInputError);
}

TEST_CASE("maximal truncation is sublinear") {
    Grid g(2, 768);
    std::mt19937_64 rng(11);
    GridFunction a = random_step_function(g, rng);
    GridFunction b = random_step_function(g, rng);
    GridFunction sum(g);
    for (std::int64_t i = 0; i < g.cells; ++i) sum[i] = a[i] + b[i];
    BiPoly p = bimonomial1(1, 2);
    auto ladder = dyadic_eps_ladder(g);
    GridFunction ta = apply_maximal(a, p, hilbert_kernel(), ladder, 4.0);
    GridFunction tb = apply_maximal(b, p, hilbert_kernel(), ladder, 4.0);
    GridFunction ts = apply_maximal(sum, p, hilbert_kernel(), ladder, 4.0);
    for (std::int64_t i = 0; i < g.cells; ++i)
        CHECK(ts[i].real() <= ta[i].real() + tb[i].real() + 1e-10);
}

TEST_CASE("collection maximal operator") {
    Grid g(5, 1536);
    std::mt19937_64 rng(13);
    GridFunction f = random_step_function(g, rng);
    BiPoly p = bimonomial1(1, 2);

    DyadicCube big = d0_cube(5, 0);
    GridFunction single = apply_collection_maximal(f, {big}, p);
    GridFunction direct = apply_T_I(f, big, p);
    for (std::int64_t i = 0; i < g.cells; ++i)
        CHECK(single[i].real() == doctest::Approx(std::abs(direct[i])).epsilon(1e-12));

    // Zero data on every middle third kills the operator.
    GridFunction hollow = f;
    for (const auto& cube : {d0_cube(5, 0), d0_cube(4, 0), d0_cube(4, 1)}) {
        CellRange third = cell_range(
            g, cube.corner(0) + cube.side() / 3.0,
            cube.corner(0) + 2.0 * cube.side() / 3.0);
        for (std::int64_t i = third.first; i < third.last; ++i) hollow[i] = 0.0;
    }
    GridFunction nothing = apply_collection_maximal(
        hollow, {d0_cube(5, 0), d0_cube(4, 0), d0_cube(4, 1)}, p);
    CHECK(nothing.norm_linf() == 0.0);

    // Two scales: cellwise max of the full and the large-scale partial sums.
    DyadicCube small = d0_cube(4, 1);
    GridFunction both = apply_collection_maximal(f, {big, small}, p);
    GridFunction t1 = apply_T_I(f, big, p);
    GridFunction t2 = apply_T_I(f, small, p);
    for (std::int64_t i = 0; i < g.cells; ++i) {
        const double expect =
            std::max(std::abs(t1[i] + t2[i]), std::abs(t1[i]));
        CHECK(both[i].real() == doctest::Approx(expect).epsilon(1e-12));
    }

    DyadicCube toosmall = d0_cube(2, 0);
    CHECK_THROWS_AS(apply_collection_maximal(f, {toosmall}, p), ScaleError);
}

TEST_CASE("fixed-scale sums are uniformly bounded in sup norm") {
    Grid g(6, 3072);
    std::mt19937_64 rng(17);
    GridFunction f = random_step_function(g, rng);
    const double fmax = f.norm_linf();
    BiPoly p = bimonomial1(1, 2);
    double worst = 0.0;
    for (int k = 3; k <= 6; ++k) {
        std::vector<DyadicCube> cubes =
            cubes_at_scale(g, k, ShiftedGrid::unshifted(1));
        GridFunction sum(g);
        for (const auto& I : cubes) {
            GridFunction t = apply_T_I(f, I, p);
            for (std::int64_t i = 0; i < g.cells; ++i) sum[i] += t[i];
        }
        worst = std::max(worst, sum.norm_linf() / fmax);
    }
    CHECK(worst <= 16.0);
    MESSAGE("fixed-scale sup-norm ratio across k in [3,6]: ", worst);
}

TEST_CASE("hardy-littlewood maximal function") {
    Grid g(2, 768);
    GridFunction c(g);
    for (auto& z : c.v) z = 2.5;
    GridFunction mc = hl_maximal(c);
    for (const auto& z : mc.v) CHECK(z.real() == doctest::Approx(2.5));

    GridFunction f(g);
    CellRange unit = cell_range(g, 0.0, 1.0);
    for (std::int64_t i = unit.first; i < unit.last; ++i) f[i] = 1.0;
    GridFunction mf = hl_maximal(f);
    const std::int64_t ix = cell_range(g, 0.0, 2.0).last;
    CHECK(mf[ix].real() == doctest::Approx(0.25).epsilon(2e-3));

    std::mt19937_64 rng(19);
    GridFunction r = random_step_function(g, rng);
    GridFunction mr = hl_maximal(r);
    for (std::int64_t i = 0; i < g.cells; ++i)
        CHECK(mr[i].real() >= std::abs(r[i]) - 1e-12);
}

TEST_CASE("modulation reduction stays within C |y|") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> box(-8.0, 8.0);
    std::uniform_int_distribution<int> mdist(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        BiPoly p = random_stripped_bipoly(3, rng);
        const int d = p.degree();
        const double c_bound = kTwoPi * std::pow(8.0, d - 1);
        const double m = 16.0 * mdist(rng);
        for (int i = 0; i < 50; ++i) {
            const double x = box(rng), y = box(rng);
            const double full = p.eval1(m + x, y);
            const double reduced = p.eval1(m + x, y) - p.eval1(x, y);
            const std::complex<double> ef{std::cos(kTwoPi * full),
                                          std::sin(kTwoPi * full)};
            const std::complex<double> er{std::cos(kTwoPi * reduced),
                                          std::sin(kTwoPi * reduced)};
            CHECK(std::abs(ef - er) <= c_bound * std::abs(y) + 1e-12);
        }
    }
}
