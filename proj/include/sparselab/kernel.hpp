#ifndef SPARSELAB_KERNEL_HPP
#define SPARSELAB_KERNEL_HPP

#include <complex>
#include <vector>

#include "sparselab/dyadic.hpp"
#include "sparselab/polynomial.hpp"
#include "sparselab/quadrature.hpp"

namespace sparselab {

// C1 transition: 0 below 1/2, 1 above 1, cubic smoothstep between.
double smooth_step_half_one(double t);

// Dyadic partition-of-unity hat on (1/4, 1): chi(t) + chi(2t) + ... telescopes
// to 1 for t > 0.
double pou_hat(double t);

// The canonical bump psi(t) = pou_hat(|t|)/t. Odd, C1, supported in
// 1/4 < |t| < 1, and sum_j 2^-j psi(2^-j x) = 1/x for x != 0.
double hilbert_bump(double t);
double hilbert_bump_c1_bound();

struct PsiBump {
    int scale = 0;  // j
    double c1_bound = 0.0;
    double operator()(double t) const { return hilbert_bump(t); }
    // Evaluated at the native scale: psi_j(2^-j t).
    double at_scale(double t) const;
};

std::vector<PsiBump> hilbert_psi_family(int j_lo, int j_hi);

// Partial kernel reconstruction sum_{j_lo <= j <= j_hi} 2^-j psi_j(2^-j x).
double hilbert_reconstruct(double x, int j_lo, int j_hi);

// Single-scale oscillatory kernel 2^-nk e(P(x,y)) psi_k(2^-k y).
struct OscKernel {
    BiPoly poly;
    int scale_exp = 0;  // k
    PsiBump bump;

    OscKernel(BiPoly p, int k);
};

// Kernel value for 1D points; zero when |y| is outside (2^{k-2}, 2^k].
std::complex<double> phi_eval(const OscKernel& kernel, double x, double y);

// Sampled composition kernel on K x K.
struct KernelGrid {
    Box cube;
    int samples = 0;
    std::vector<std::complex<double>> values;  // row-major in (ix, iy)

    std::complex<double>& at(int ix, int iy) { return values[ix * samples + iy]; }
    std::complex<double> at(int ix, int iy) const { return values[ix * samples + iy]; }
    double coord(int i) const;  // sample center along either axis
};

// Composition value
//   2^{-j-k} int e(P1(x,z) - P2(y,z)) psi_j(2^{-j}(z-y)) psi_k(2^{-k}(x-z)) dz
// by the midpoint rule with quad_cells cells across the integration range.
// Fails when the finer bump is covered by fewer than 8 cells.
std::complex<double> composed_kernel_value_midpoint(const OscKernel& outer,
                                                    const OscKernel& inner,
                                                    double x, double y,
                                                    int quad_cells);

// Same value through the adaptive oscillatory integrator; accurate at any
// phase speed.
std::complex<double> composed_kernel_value(const OscKernel& outer,
                                           const OscKernel& inner, double x,
                                           double y);

// Midpoint-rule composition sampled at the centers of an MxM partition of
// K x K. Requires kMinBumpScale <= inner scale <= outer scale and
// side(K) = 2^outer.
KernelGrid ttstar_kernel(const OscKernel& outer, const OscKernel& inner,
                         const Box& K, int quad_cells, int samples);

}  // namespace sparselab

#endif
