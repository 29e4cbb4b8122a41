#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "sparselab/constants.hpp"
#include "sparselab/polynomial.hpp"
#include "sparselab/random_functions.hpp"

using namespace sparselab;

namespace {

std::vector<double> rotation(double a) {
    return {std::cos(a), -std::sin(a), std::sin(a), std::cos(a)};
}

}  // namespace

TEST_CASE("BiPoly evaluation") {
    BiPoly p = bimonomial1(1, 2);  // x y^2
    CHECK(p.eval1(2.0, 3.0) == doctest::Approx(18.0));

    BiPoly zero(1);
    CHECK(zero.eval1(5.0, -7.0) == 0.0);

    // Term-by-term hand sum: x^2 y + x y^2 at (1.5, 2) is 4.5 + 6 = 10.5.
    BiPoly q(1);
    q.add_term({2}, {1}, 1.0);
    q.add_term({1}, {2}, 1.0);
    CHECK(q.eval1(1.5, 2.0) == doctest::Approx(10.5));

    double one[1] = {1.0};
    CHECK_THROWS_AS(q.eval(std::span<const double>(one, 1),
                           std::span<const double>{}),
                    InvalidInputError);
}

TEST_CASE("coefficient norm") {
    CHECK(bimonomial1(1, 2).coeff_norm() == doctest::Approx(1.0));

    BiPoly p(1);
    p.add_term({2}, {1}, 3.0);
    p.add_term({1}, {1}, -4.0);
    CHECK(p.coeff_norm() == doctest::Approx(7.0));

    BiPoly c(1);
    c.add_term({0}, {0}, 5.0);
    CHECK(c.coeff_norm() == 0.0);

    NPoly n(1);
    n.add_term({0}, 5.0);
    n.add_term({2}, -2.0);
    CHECK(n.coeff_norm() == doctest::Approx(2.0));
}

TEST_CASE("strip_forbidden") {
    BiPoly p(1);
    p.add_term({2}, {0}, 1.0);  // x^2
    p.add_term({1}, {2}, 1.0);  // x y^2
    BiPoly s = p.strip_forbidden();
    CHECK(s.terms().size() == 1);
    CHECK(s.eval1(2.0, 3.0) == doctest::Approx(18.0));

    BiPoly lin(1);
    lin.add_term({0}, {1}, 1.0);  // y
    CHECK(lin.strip_forbidden().empty());

    // 7 + x^3 + x y + y^2 -> x y + y^2, checked against the keep rule.
    BiPoly q(1);
    q.add_term({0}, {0}, 7.0);
    q.add_term({3}, {0}, 1.0);
    q.add_term({1}, {1}, 1.0);
    q.add_term({0}, {2}, 1.0);
    BiPoly qs = q.strip_forbidden();
    int kept = 0;
    for (const auto& [key, c] : q.terms()) {
        const int oa = multi_order(key.first), ob = multi_order(key.second);
        const bool keep = ob != 0 && oa + ob >= 2;
        if (keep) {
            ++kept;
            CHECK(qs.terms().count(key) == 1);
        } else {
            CHECK(qs.terms().count(key) == 0);
        }
    }
    CHECK(kept == 2);

    // Idempotence.
    CHECK(qs.strip_forbidden().terms() == qs.terms());
}

TEST_CASE("y-power profiles reconstruct phase differences") {
    BiPoly p = bimonomial1(1, 1);  // x y
    auto prof = p.y_power_profiles();
    REQUIRE(prof.size() == 1);
    CHECK(prof.begin()->first == MultiIndex{1});
    CHECK(prof.begin()->second.coeff({1}) == doctest::Approx(1.0));

    BiPoly q(1);
    q.add_term({2}, {1}, 1.0);
    q.add_term({1}, {2}, 1.0);
    auto prof2 = q.y_power_profiles();
    REQUIRE(prof2.size() == 2);
    CHECK(prof2.at({1}).coeff({2}) == doctest::Approx(1.0));
    CHECK(prof2.at({2}).coeff({1}) == doctest::Approx(1.0));

    BiPoly unstripped(1);
    unstripped.add_term({2}, {0}, 1.0);
    CHECK_THROWS_AS(unstripped.y_power_profiles(), InvalidInputError);

    std::mt19937_64 rng(2024);
    BiPoly r = random_stripped_bipoly(4, rng);
    auto profiles = r.y_power_profiles();
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = unif(rng), y = unif(rng), z = unif(rng);
        const double lhs = r.eval1(x, z) - r.eval1(y, z);
        double rhs = 0.0;
        for (const auto& [beta, rb] : profiles)
            rhs += (rb.eval1(x) - rb.eval1(y)) * std::pow(z, beta[0]);
        const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
    }
}

TEST_CASE("partial derivatives") {
    NPoly p(2);
    p.add_term({2, 1}, 1.0);  // x^2 y
    NPoly dx = p.partial(1);
    CHECK(dx.coeff({1, 1}) == doctest::Approx(2.0));
    CHECK(dx.terms().size() == 1);

    NPoly q(2);
    q.add_term({2, 0}, 1.0);
    CHECK(q.partial(2).empty());
    CHECK_THROWS_AS(q.partial(3), InvalidInputError);

    // Central differences on a random cubic.
    std::mt19937_64 rng(7);
    NPoly r = random_npoly(2, 3, rng, false);
    NPoly d1 = r.partial(1);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const double h = 1e-5;
    for (int i = 0; i < 50; ++i) {
        double pt[2] = {unif(rng), unif(rng)};
        double hi[2] = {pt[0] + h, pt[1]};
        double lo[2] = {pt[0] - h, pt[1]};
        const double fd = (r.eval(std::span<const double>(hi, 2)) -
                           r.eval(std::span<const double>(lo, 2))) /
                          (2 * h);
        const double scale = std::abs(fd) + 1.0;
        CHECK(std::abs(fd - d1.eval(std::span<const double>(pt, 2))) <=
              1e-6 * scale);
    }
}

TEST_CASE("rotation of coefficients") {
    NPoly p(2);
    p.add_term({1, 0}, 1.0);  // x1
    NPoly same = p.rotate({1, 0, 0, 1});
    CHECK(same.terms() == p.terms());

    NPoly quarter = p.rotate(rotation(kPi / 2));
    CHECK(quarter.coeff({0, 1}) == doctest::Approx(-1.0));
    CHECK(std::abs(quarter.coeff({1, 0})) < 1e-12);

    std::vector<double> bad = {1, 0, 0.5, 1};
    CHECK_THROWS_AS(p.rotate(bad), InvalidInputError);

    // Norm equivalence under 100 random rotations, constants recorded.
    std::mt19937_64 rng(11);
    NPoly r = random_npoly(2, 3, rng, true);
    std::uniform_real_distribution<double> unif(0.0, kPi);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double ratio = r.rotate(rotation(unif(rng))).coeff_norm() / r.coeff_norm();
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(lo > 0.2);
    CHECK(hi < 5.0);
    MESSAGE("rotation norm ratio range for (n,d)=(2,3): [", lo, ", ", hi, "]");

    // Planar rotations commute, so composing matrices matches nested rotation.
    NPoly a = r.rotate(rotation(0.3));
    NPoly b = a.rotate(rotation(1.1));
    NPoly direct = r.rotate(rotation(1.4));
    for (const auto& [key, c] : direct.terms())
        CHECK(b.coeff(key) == doctest::Approx(c).epsilon(1e-9));
}

TEST_CASE("coefficient norm is a norm on the nonconstant part") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 25; ++i) {
        NPoly a = random_npoly(2, 4, rng, false);
        NPoly b = random_npoly(2, 4, rng, false);
        NPoly scaled = a;
        scaled.scale(-3.5);
        CHECK(scaled.coeff_norm() == doctest::Approx(3.5 * a.coeff_norm()));
        CHECK((a + b).coeff_norm() <= a.coeff_norm() + b.coeff_norm() + 1e-12);
    }
}

TEST_CASE("admissible rotation search") {
    NPoly cross(2);
    cross.add_term({1, 1}, 1.0);  // x1 x2: already admissible at the identity
    auto res = find_admissible_rotation(cross, 360);
    CHECK(res.score >= 1.0);

    NPoly sq(2);
    sq.add_term({2, 0}, 1.0);  // x1^2: degenerate at the identity
    auto res2 = find_admissible_rotation(sq, 360);
    CHECK(res2.score >= 1.0);
    NPoly rotated = sq.rotate(res2.theta);
    CHECK(rotated.partial(2).coeff_norm() > 0.5);

    NPoly low(2);
    low.add_term({1, 0}, 1.0);
    CHECK_THROWS_AS(find_admissible_rotation(low, 8), InvalidInputError);
    NPoly one(1);
    one.add_term({2}, 1.0);
    CHECK_THROWS_AS(find_admissible_rotation(one, 8), UnsupportedDimensionError);

    // Random cubics: positive scores, consistent with a 10x finer grid.
    std::mt19937_64 rng(17);
    for (int i = 0; i < 50; ++i) {
        NPoly p = random_npoly(2, 3, rng, true);
        if (p.degree() < 2) continue;
        auto coarse = find_admissible_rotation(p, 64);
        auto fine = find_admissible_rotation(p, 640);
        CHECK(coarse.score > 0.0);
        CHECK(fine.score > 0.0);
        CHECK(coarse.score <= fine.score + 1e-12);
    }
}

TEST_CASE("json round trip") {
    std::mt19937_64 rng(23);
    BiPoly p = random_stripped_bipoly(4, rng);
    BiPoly q = BiPoly::from_json(p.to_json());
    CHECK(q.dim() == p.dim());
    REQUIRE(q.terms().size() == p.terms().size());
    for (const auto& [key, c] : p.terms())
        CHECK(q.terms().at(key) == doctest::Approx(c).epsilon(1e-15));
}
