#include "sparselab/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "sparselab/constants.hpp"

namespace sparselab {

double Poly1::eval(double t) const {
    double r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * t + c[i];
    return r;
}

Poly1 Poly1::derivative() const {
    Poly1 d;
    if (c.size() <= 1) return d;
    d.c.resize(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
        d.c[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

int Poly1::degree() const {
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0.0) return static_cast<int>(i);
    return 0;
}

bool Poly1::is_zero() const {
    for (double v : c)
        if (v != 0.0) return false;
    return true;
}

namespace {

inline std::complex<double> unit_phase(double t) {
    const double a = kTwoPi * t;
    return {std::cos(a), std::sin(a)};
}

// 16-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr double kGLNode[8] = {
    0.0950125098376374401853, 0.2816035507792589132304,
    0.4580167776572273863424, 0.6178762444026437484467,
    0.7554044083550030338951, 0.8656312023878317438805,
    0.9445750230732325760780, 0.9894009349916499325962};
constexpr double kGLWeight[8] = {
    0.1894506104550684962854, 0.1826034150449235888667,
    0.1691565193950025381893, 0.1495959888165767320815,
    0.1246289712555338720525, 0.0951585116824927848099,
    0.0622535239386478928628, 0.0271524594117540948518};

constexpr int kLevinOrder = 14;
constexpr double kSlowCycles = 16.0;

template <typename F>
std::complex<double> gl16(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::complex<double> s = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kGLNode[i];
        s += kGLWeight[i] * (f(mid + dx) + f(mid - dx));
    }
    return half * s;
}

// Total variation of the phase over [a, b], sampled finely enough for the low
// polynomial degrees in play.
double phase_cycles(const Poly1& q, double a, double b) {
    const int n = 128;
    double tv = 0;
    double prev = q.eval(a);
    for (int i = 1; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        const double cur = q.eval(t);
        tv += std::abs(cur - prev);
        prev = cur;
    }
    return tv;
}

void solve_complex(std::vector<std::complex<double>>& A,
                   std::vector<std::complex<double>>& rhs, int n) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(A[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(A[r * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) throw ResolutionError("levin: singular system");
        if (piv != col) {
            for (int cc = 0; cc < n; ++cc) std::swap(A[piv * n + cc], A[col * n + cc]);
            std::swap(rhs[piv], rhs[col]);
        }
        const std::complex<double> d = A[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const std::complex<double> m = A[r * n + col] / d;
            if (m == std::complex<double>(0.0)) continue;
            for (int cc = col; cc < n; ++cc) A[r * n + cc] -= m * A[col * n + cc];
            rhs[r] -= m * rhs[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        std::complex<double> s = rhs[r];
        for (int cc = r + 1; cc < n; ++cc) s -= A[r * n + cc] * rhs[cc];
        rhs[r] = s / A[r * n + r];
    }
}

struct LevinResult {
    std::complex<double> value;
    double residual = 0.0;
};

// One Levin collocation panel: find u with (u e(Q))' = w e(Q); then the
// integral is u(b)e(Q(b)) - u(a)e(Q(a)). Needs Q' bounded away from zero.
LevinResult levin_panel(const RealFn& w, const Poly1& q, const Poly1& dq,
                        double a, double b) {
    const int M = kLevinOrder;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    // Chebyshev-Gauss-Lobatto collocation nodes.
    double zeta[kLevinOrder], zp[kLevinOrder];
    double T[kLevinOrder][kLevinOrder], U[kLevinOrder][kLevinOrder];
    for (int i = 0; i < M; ++i) {
        zeta[i] = std::cos(kPi * i / (M - 1));
        zp[i] = mid + half * zeta[i];
        T[i][0] = 1.0;
        T[i][1] = zeta[i];
        U[i][0] = 1.0;
        U[i][1] = 2.0 * zeta[i];
        for (int m = 2; m < M; ++m) {
            T[i][m] = 2.0 * zeta[i] * T[i][m - 1] - T[i][m - 2];
            U[i][m] = 2.0 * zeta[i] * U[i][m - 1] - U[i][m - 2];
        }
    }
    std::vector<std::complex<double>> A(M * M);
    std::vector<std::complex<double>> rhs(M);
    for (int i = 0; i < M; ++i) {
        const double qp = dq.eval(zp[i]);
        for (int m = 0; m < M; ++m) {
            const double tprime = (m == 0) ? 0.0 : m * U[i][m - 1];
            A[i * M + m] = std::complex<double>(tprime / half, 0.0) +
                           std::complex<double>(0.0, kTwoPi * qp) * T[i][m];
        }
        rhs[i] = w(zp[i]);
    }
    solve_complex(A, rhs, M);

    // Residual of the collocated ODE at off-node points.
    double resid = 0.0, wmax = 1e-300;
    for (int i = 0; i < M - 1; ++i) {
        const double zm = 0.5 * (zeta[i] + zeta[i + 1]);
        const double z = mid + half * zm;
        double t0 = 1.0, t1 = zm, u0 = 1.0, u1 = 2.0 * zm;
        std::complex<double> uval = rhs[0] + rhs[1] * t1;
        std::complex<double> uder = rhs[1] * u0;
        double tp2 = t1, tp1 = t0;  // walk the recurrences
        double up2 = u1, up1 = u0;
        for (int m = 2; m < M; ++m) {
            const double tm = 2.0 * zm * tp2 - tp1;
            const double um = 2.0 * zm * up2 - up1;
            uval += rhs[m] * tm;
            uder += rhs[m] * (m * up2);
            tp1 = tp2;
            tp2 = tm;
            up1 = up2;
            up2 = um;
        }
        (void)u1;
        (void)t0;
        const double wv = w(z);
        wmax = std::max(wmax, std::abs(wv));
        const std::complex<double> r =
            uder / half + std::complex<double>(0.0, kTwoPi * dq.eval(z)) * uval - wv;
        resid = std::max(resid, std::abs(r));
    }

    std::complex<double> u_hi = 0.0, u_lo = 0.0;
    for (int m = 0; m < M; ++m) {
        u_hi += rhs[m];
        u_lo += (m % 2 == 0 ? 1.0 : -1.0) * rhs[m];
    }
    LevinResult out;
    out.value = u_hi * unit_phase(q.eval(b)) - u_lo * unit_phase(q.eval(a));
    out.residual = resid / wmax;
    return out;
}

struct OscWork {
    const RealFn* w;
    const Poly1* q;
    Poly1 dq;
    double w_scale;
};

std::complex<double> gl_slow(const OscWork& wk, double a, double b, double cycles) {
    const int by_cycles = static_cast<int>(std::ceil(cycles / 2.0)) + 1;
    const int by_scale = static_cast<int>(std::ceil((b - a) / wk.w_scale)) + 1;
    const int panels = std::min(std::max(by_cycles, by_scale), 1 << 16);
    auto f = [&wk](double z) { return (*wk.w)(z)*unit_phase(wk.q->eval(z)); };
    std::complex<double> s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        s += gl16(f, pa, pb);
    }
    return s;
}

std::complex<double> levin_fast(const OscWork& wk, double a, double b, int depth);

std::complex<double> osc_recurse(const OscWork& wk, double a, double b, int depth) {
    if (!(b > a)) return 0.0;
    const double cycles = phase_cycles(*wk.q, a, b);
    if (cycles <= kSlowCycles || depth > 48) return gl_slow(wk, a, b, cycles);

    // Stationary-point screen: minimum phase speed over the stretch.
    double qmin = 1e300, qmax = 0.0;
    const int n = 128;
    for (int i = 0; i <= n; ++i) {
        const double t = a + (b - a) * i / n;
        const double v = std::abs(wk.dq.eval(t));
        qmin = std::min(qmin, v);
        qmax = std::max(qmax, v);
    }
    const double mean_rate = cycles / (b - a);
    if (qmin > 0.02 * mean_rate) return levin_fast(wk, a, b, depth);

    const double mid = 0.5 * (a + b);
    return osc_recurse(wk, a, mid, depth + 1) + osc_recurse(wk, mid, b, depth + 1);
}

std::complex<double> levin_fast(const OscWork& wk, double a, double b, int depth) {
    const int panels =
        std::max(1, static_cast<int>(std::ceil((b - a) / wk.w_scale)));
    std::complex<double> s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        LevinResult r = levin_panel(*wk.w, *wk.q, wk.dq, pa, pb);
        if (r.residual > 1e-7) {
            if (depth > 48) throw ResolutionError("integrate_oscillatory: no convergence");
            const double pm = 0.5 * (pa + pb);
            s += osc_recurse(wk, pa, pm, depth + 1);
            s += osc_recurse(wk, pm, pb, depth + 1);
        } else {
            s += r.value;
        }
    }
    return s;
}

}  // namespace

std::complex<double> midpoint_complex(const CplxFn& f, double a, double b, int n) {
    if (n < 1) throw InvalidInputError("midpoint_complex: need n >= 1");
    const double h = (b - a) / n;
    std::complex<double> s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

double midpoint_real(const RealFn& f, double a, double b, int n) {
    if (n < 1) throw InvalidInputError("midpoint_real: need n >= 1");
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

std::complex<double> gauss_complex(const CplxFn& f, double a, double b, int panels) {
    if (panels < 1) throw InvalidInputError("gauss_complex: need panels >= 1");
    std::complex<double> s = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double pa = a + (b - a) * p / panels;
        const double pb = a + (b - a) * (p + 1) / panels;
        s += gl16(f, pa, pb);
    }
    return s;
}

std::complex<double> integrate_oscillatory(const RealFn& w, const Poly1& phase,
                                           double a, double b, double w_scale) {
    if (!(b > a)) return 0.0;
    if (!(w_scale > 0)) throw InvalidInputError("integrate_oscillatory: bad w_scale");
    OscWork wk{&w, &phase, phase.derivative(), w_scale};
    return osc_recurse(wk, a, b, 0);
}

}  // namespace sparselab
