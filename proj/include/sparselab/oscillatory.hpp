#ifndef SPARSELAB_OSCILLATORY_HPP
#define SPARSELAB_OSCILLATORY_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sparselab/dyadic.hpp"
#include "sparselab/fit.hpp"
#include "sparselab/polynomial.hpp"
#include "sparselab/quadrature.hpp"

namespace sparselab {

// Midpoint quadrature of int_a^b e(P(t)) window(t) dt at resolution n.
// resolution_ok reports the heuristic n >= 8 * d * ||P||^(1/d).
struct OscIntegral {
    std::complex<double> value;
    bool resolution_ok = true;
};
OscIntegral osc_integral(const NPoly& p, const RealFn& window, double a,
                         double b, int n);

// Log-log decay fit of |int e(lambda P0) window| over a lambda grid.
struct DecayFit {
    double exponent = 0.0;   // fitted slope
    double constant = 0.0;   // exp(intercept)
    LineFit raw;
};
DecayFit vdc_decay_fit(const NPoly& p0, const std::vector<double>& lambda_grid,
                       const RealFn& window, double a, double b,
                       int resolution);

// Grid measure of {x in I : |P(x)| < eps}, cube I sampled with n cells per
// side. Supports dim 1 and 2.
double sublevel_measure(const NPoly& p, double eps, const Box& I, int n);

// Pairs (x, y) in K x K where the rescaled profile differences stay below the
// oscillation threshold:
//   sum_beta side(K)^|beta| |R_beta(x) - R_beta(y)| < 2^(k/2).
struct PhaseFlatSet {
    Box cube;               // K
    int scale_exp = 0;      // k
    double threshold = 0.0; // 2^(k/2)
    GridMask mask;          // over K x K, membership tested at cell centers
};

PhaseFlatSet build_phase_flat_set(const BiPoly& p, const DyadicCube& K,
                                  std::int64_t cells_per_side);

// Membership of a single pair in the defining inequality (no grid involved).
bool phase_flat_contains(const BiPoly& p, const Box& K, int scale_exp, double x,
                         double y);

// Dilation behaviour of the phase-flat set across neighborhood radii 2^s:
// full Minkowski measure ratio and the worst fiber ratio, with the reference
// shape 2^(-eps_d k / 2) + 2^(s - k).
struct NeighborhoodRow {
    int s = 0;
    double minkowski_ratio = 0.0;  // |Z + B(2^s)| / |K|^2
    double fiber_ratio = 0.0;      // sup_x |fiber_x Z + B(2^s)| / 2^(nk)
    double shape = 0.0;            // 2^(-eps_d k/2) + 2^(s-k)
};
std::vector<NeighborhoodRow> phase_flat_neighborhoods(const PhaseFlatSet& z,
                                                      int degree,
                                                      const std::vector<int>& s_grid);

// Number of maximal runs of consecutive strip cubes meeting {|P| < level},
// scanning j in [j_lo, j_hi]. Each cube is probed on a samples x samples
// lattice of cell centers.
int strip_interval_count(const NPoly& p, double level, const KStrip& strip,
                         std::int64_t j_lo, std::int64_t j_hi,
                         int samples = 12);

}  // namespace sparselab

#endif
