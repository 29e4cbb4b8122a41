#include "sparselab/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "sparselab/constants.hpp"

namespace sparselab {

namespace {

double pow2d(int k) { return std::ldexp(1.0, k); }

inline std::complex<double> unit_phase(double t) {
    const double a = kTwoPi * t;
    return {std::cos(a), std::sin(a)};
}

struct Interval {
    double lo, hi;
};

// Intersection of two unions of disjoint sorted intervals.
std::vector<Interval> intersect(const std::vector<Interval>& a,
                                const std::vector<Interval>& b) {
    std::vector<Interval> out;
    for (const auto& u : a) {
        for (const auto& v : b) {
            const double lo = std::max(u.lo, v.lo);
            const double hi = std::min(u.hi, v.hi);
            if (hi > lo) out.push_back({lo, hi});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    return out;
}

// z with 2^{s-2} < |z - c| < 2^s.
std::vector<Interval> annulus(double c, int s) {
    const double r_in = pow2d(s - 2), r_out = pow2d(s);
    return {{c - r_out, c - r_in}, {c + r_in, c + r_out}};
}

// 1D coefficient profile of P(x, .) in powers of the second argument.
Poly1 y_profile(const BiPoly& p, double x) {
    Poly1 q;
    for (const auto& [key, c] : p.terms()) {
        const int a = key.first[0];
        const int b = key.second[0];
        if (static_cast<int>(q.c.size()) <= b) q.c.resize(b + 1, 0.0);
        double m = c;
        for (int i = 0; i < a; ++i) m *= x;
        q.c[b] += m;
    }
    return q;
}

}  // namespace

double smooth_step_half_one(double t) {
    if (t <= 0.5) return 0.0;
    if (t >= 1.0) return 1.0;
    const double u = (t - 0.5) * 2.0;
    return u * u * (3.0 - 2.0 * u);
}

double pou_hat(double t) {
    return smooth_step_half_one(2.0 * t) - smooth_step_half_one(t);
}

double hilbert_bump(double t) {
    const double a = std::abs(t);
    if (a <= 0.25 || a >= 1.0) return 0.0;
    return pou_hat(a) / t;
}

double hilbert_bump_c1_bound() {
    // sup|psi| <= 4 and sup|psi'| <= sup|chi'|/(1/4) + sup|chi|/(1/16).
    return 4.0 + (9.0 * 4.0 + 16.0);
}

double PsiBump::at_scale(double t) const { return hilbert_bump(std::ldexp(t, -scale)); }

std::vector<PsiBump> hilbert_psi_family(int j_lo, int j_hi) {
    if (j_lo > j_hi) throw InvalidInputError("hilbert_psi_family: empty range");
    std::vector<PsiBump> out;
    out.reserve(j_hi - j_lo + 1);
    for (int j = j_lo; j <= j_hi; ++j)
        out.push_back(PsiBump{j, hilbert_bump_c1_bound()});
    return out;
}

double hilbert_reconstruct(double x, int j_lo, int j_hi) {
    double s = 0.0;
    for (int j = j_lo; j <= j_hi; ++j)
        s += std::ldexp(hilbert_bump(std::ldexp(x, -j)), -j);
    return s;
}

OscKernel::OscKernel(BiPoly p, int k)
    : poly(std::move(p)), scale_exp(k), bump{k, hilbert_bump_c1_bound()} {
    if (poly.dim() != 1)
        throw UnsupportedDimensionError("OscKernel: only dim 1 kernels are exercised");
}

std::complex<double> phi_eval(const OscKernel& kernel, double x, double y) {
    const double psi = kernel.bump.at_scale(y);
    if (psi == 0.0) return 0.0;
    const double amp = pow2d(-kernel.scale_exp) * psi;
    return amp * unit_phase(kernel.poly.eval1(x, y));
}

double KernelGrid::coord(int i) const {
    return cube.corner[0] + (i + 0.5) * cube.side / samples;
}

namespace {

// Shared geometry for one composition value.
struct CompositionSetup {
    std::vector<Interval> pieces;  // support split at bump breakpoints
    Poly1 phase;
    double prefactor;
    double w_scale;
    int j, k;
    double x, y;
};

CompositionSetup composition_setup(const OscKernel& outer, const OscKernel& inner,
                                   double x, double y) {
    CompositionSetup s;
    s.k = outer.scale_exp;
    s.j = inner.scale_exp;
    s.x = x;
    s.y = y;
    if (s.j > s.k)
        throw InvalidInputError("composed kernel: inner scale must be <= outer");
    auto supp = intersect(annulus(x, s.k), annulus(y, s.j));
    // Split at the piecewise-cubic breakpoints of both bumps.
    std::vector<double> cuts;
    for (int m = 0; m <= 2; ++m) {
        cuts.push_back(y - pow2d(s.j - m));
        cuts.push_back(y + pow2d(s.j - m));
        cuts.push_back(x - pow2d(s.k - m));
        cuts.push_back(x + pow2d(s.k - m));
    }
    std::sort(cuts.begin(), cuts.end());
    for (const auto& iv : supp) {
        double lo = iv.lo;
        for (double c : cuts) {
            if (c > lo && c < iv.hi) {
                s.pieces.push_back({lo, c});
                lo = c;
            }
        }
        s.pieces.push_back({lo, iv.hi});
    }
    // Phase P1(x, z) - P2(y, z) as a polynomial in z.
    Poly1 px = y_profile(outer.poly, x);
    Poly1 py = y_profile(inner.poly, y);
    s.phase.c.resize(std::max(px.c.size(), py.c.size()), 0.0);
    for (std::size_t i = 0; i < px.c.size(); ++i) s.phase.c[i] += px.c[i];
    for (std::size_t i = 0; i < py.c.size(); ++i) s.phase.c[i] -= py.c[i];
    s.prefactor = pow2d(-s.j - s.k);
    s.w_scale = pow2d(s.j - 3);
    return s;
}

}  // namespace

std::complex<double> composed_kernel_value_midpoint(const OscKernel& outer,
                                                    const OscKernel& inner,
                                                    double x, double y,
                                                    int quad_cells) {
    const int k = outer.scale_exp, j = inner.scale_exp;
    if (j > k)
        throw InvalidInputError("composed kernel: inner scale must be <= outer");
    const double lo = x - pow2d(k), hi = x + pow2d(k);
    const double cell = (hi - lo) / quad_cells;
    // The narrower bump support piece spans 3*2^{j-2}; demand 8 cells on it.
    if (3.0 * pow2d(j - 2) / cell < 8.0)
        throw ResolutionError("composed kernel: fewer than 8 cells per bump");
    const double sj = pow2d(-j), sk = pow2d(-k);
    Poly1 px = y_profile(outer.poly, x);
    Poly1 py = y_profile(inner.poly, y);
    Poly1 phase;
    phase.c.resize(std::max(px.c.size(), py.c.size()), 0.0);
    for (std::size_t i = 0; i < px.c.size(); ++i) phase.c[i] += px.c[i];
    for (std::size_t i = 0; i < py.c.size(); ++i) phase.c[i] -= py.c[i];
    std::complex<double> acc = 0.0;
    for (int i = 0; i < quad_cells; ++i) {
        const double z = lo + (i + 0.5) * cell;
        const double w = hilbert_bump((z - y) * sj) * hilbert_bump((x - z) * sk);
        if (w == 0.0) continue;
        acc += w * unit_phase(phase.eval(z));
    }
    return pow2d(-j - k) * cell * acc;
}

std::complex<double> composed_kernel_value(const OscKernel& outer,
                                           const OscKernel& inner, double x,
                                           double y) {
    CompositionSetup s = composition_setup(outer, inner, x, y);
    const double sj = pow2d(-s.j), sk = pow2d(-s.k);
    auto w = [&](double z) {
        return hilbert_bump((z - y) * sj) * hilbert_bump((x - z) * sk);
    };
    std::complex<double> acc = 0.0;
    for (const auto& piece : s.pieces)
        acc += integrate_oscillatory(w, s.phase, piece.lo, piece.hi, s.w_scale);
    return s.prefactor * acc;
}

KernelGrid ttstar_kernel(const OscKernel& outer, const OscKernel& inner,
                         const Box& K, int quad_cells, int samples) {
    if (K.dim() != 1 || outer.poly.dim() != 1)
        throw UnsupportedDimensionError("ttstar_kernel: 1D only");
    if (inner.scale_exp < kMinCollectionScaleExp)
        throw ScaleError("ttstar_kernel: inner scale below the minimum");
    if (inner.scale_exp > outer.scale_exp)
        throw InvalidInputError("ttstar_kernel: need inner <= outer scale");
    if (std::abs(K.side - pow2d(outer.scale_exp)) > 1e-9 * K.side)
        throw InvalidInputError("ttstar_kernel: cube side must be 2^outer");
    if (samples < 1) throw InvalidInputError("ttstar_kernel: samples >= 1");
    KernelGrid g;
    g.cube = K;
    g.samples = samples;
    g.values.assign(static_cast<std::size_t>(samples) * samples, 0.0);
    for (int ix = 0; ix < samples; ++ix) {
        const double x = g.coord(ix);
        for (int iy = 0; iy < samples; ++iy) {
            const double y = g.coord(iy);
            g.at(ix, iy) =
                composed_kernel_value_midpoint(outer, inner, x, y, quad_cells);
        }
    }
    return g;
}

}  // namespace sparselab
