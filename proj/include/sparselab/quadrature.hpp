#ifndef SPARSELAB_QUADRATURE_HPP
#define SPARSELAB_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

#include "sparselab/errors.hpp"

namespace sparselab {

// Dense 1D polynomial in the power basis, for phase arithmetic in hot loops.
struct Poly1 {
    std::vector<double> c;  // value = sum c[i] t^i

    double eval(double t) const;
    Poly1 derivative() const;
    int degree() const;
    bool is_zero() const;
};

using RealFn = std::function<double(double)>;
using CplxFn = std::function<std::complex<double>(double)>;

// Midpoint rule with n cells.
std::complex<double> midpoint_complex(const CplxFn& f, double a, double b, int n);
double midpoint_real(const RealFn& f, double a, double b, int n);

// Composite 16-point Gauss-Legendre.
std::complex<double> gauss_complex(const CplxFn& f, double a, double b, int panels);

// Integral of w(z) e(Q(z)) dz over [a, b], where e(t) = exp(2 pi i t) and Q is
// a real polynomial. Slowly varying stretches use composite Gauss-Legendre;
// fast stretches away from stationary points use Levin collocation, so the
// cost does not grow with the oscillation count. w must be smooth on panels of
// length w_scale.
std::complex<double> integrate_oscillatory(const RealFn& w, const Poly1& phase,
                                           double a, double b, double w_scale);

}  // namespace sparselab

#endif
