#include "sparselab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

namespace sparselab {

namespace {

int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

double pow2(int k) { return std::ldexp(1.0, k); }

}  // namespace

ShiftedGrid::ShiftedGrid(int n, std::vector<int> thirds)
    : dim(n), shift_thirds(std::move(thirds)) {
    if (n < 1) throw InvalidInputError("ShiftedGrid: dim must be >= 1");
    if (static_cast<int>(shift_thirds.size()) != n)
        throw InvalidInputError("ShiftedGrid: shift length != dim");
    for (int t : shift_thirds)
        if (t < 0 || t > 2)
            throw InvalidInputError("ShiftedGrid: shift entries must be 0, 1/3 or 2/3");
}

double DyadicCube::side() const { return pow2(scale_exp); }

double DyadicCube::corner(int axis) const {
    const int s = parity_sign(scale_exp);
    return pow2(scale_exp) *
           (static_cast<double>(pos[axis]) + s * grid.shift(axis));
}

bool DyadicCube::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != grid.dim) return false;
    const double len = side();
    for (int i = 0; i < grid.dim; ++i) {
        const double c = corner(i);
        if (!(x[i] >= c && x[i] < c + len)) return false;
    }
    return true;
}

DyadicCube DyadicCube::child(int which) const {
    const int n = grid.dim;
    if (which < 0 || which >= (1 << n))
        throw InvalidInputError("DyadicCube::child: selector out of range");
    DyadicCube c{grid, scale_exp - 1, pos};
    const int s = parity_sign(scale_exp);
    for (int i = 0; i < n; ++i) {
        const int o = (which >> i) & 1;
        c.pos[i] = 2 * pos[i] + o + s * grid.shift_thirds[i];
    }
    return c;
}

double DyadicCube::volume() const {
    double v = 1.0;
    for (int i = 0; i < grid.dim; ++i) v *= side();
    return v;
}

DyadicCube cube_containing(std::span<const double> x, int scale_exp,
                           const ShiftedGrid& g) {
    if (static_cast<int>(x.size()) != g.dim)
        throw InvalidInputError("cube_containing: point dimension mismatch");
    DyadicCube c{g, scale_exp, std::vector<std::int64_t>(g.dim, 0)};
    const int s = parity_sign(scale_exp);
    const double len = pow2(scale_exp);
    for (int i = 0; i < g.dim; ++i) {
        c.pos[i] =
            static_cast<std::int64_t>(std::floor(x[i] / len - s * g.shift(i)));
    }
    return c;
}

DyadicCube enclosing_shifted_cube(const Box& I) {
    if (I.side <= 0.0)
        throw InvalidInputError("enclosing_shifted_cube: degenerate cube");
    const int n = I.dim();
    const int k0 = static_cast<int>(std::ceil(std::log2(I.side)));
    std::vector<double> center(n);
    for (int i = 0; i < n; ++i) center[i] = I.corner[i] + 0.5 * I.side;
    const double eps = 1e-9 * I.side;

    const int nshift = 1;
    (void)nshift;
    for (int k = k0; k <= k0 + 4; ++k) {
        if (pow2(k) > 6.0 * I.side) break;
        std::vector<int> thirds(n, 0);
        const int total = static_cast<int>(std::pow(3, n) + 0.5);
        for (int code = 0; code < total; ++code) {
            int c = code;
            for (int i = 0; i < n; ++i) {
                thirds[i] = c % 3;
                c /= 3;
            }
            ShiftedGrid g(n, thirds);
            DyadicCube P = cube_containing(center, k, g);
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                const double lo = P.corner(i);
                ok = (lo <= I.corner[i] + eps) &&
                     (I.corner[i] + I.side <= lo + P.side() + eps);
            }
            if (ok) return P;
        }
    }
    throw SearchFailureError("enclosing_shifted_cube: no cube found");
}

std::optional<int> identity_partition_weight(std::span<const double> x,
                                             int scale_exp, double rel_tol) {
    const int n = static_cast<int>(x.size());
    const int s = parity_sign(scale_exp);
    const double len = pow2(scale_exp);
    int count = 0;
    const int total = static_cast<int>(std::pow(3, n) + 0.5);
    std::vector<int> thirds(n, 0);
    for (int code = 0; code < total; ++code) {
        int c = code;
        for (int i = 0; i < n; ++i) {
            thirds[i] = c % 3;
            c /= 3;
        }
        bool inside = true;
        for (int i = 0; i < n; ++i) {
            double u = x[i] / len - s * (thirds[i] / 3.0);
            double frac = u - std::floor(u);
            if (std::abs(frac - 1.0 / 3.0) < rel_tol ||
                std::abs(frac - 2.0 / 3.0) < rel_tol)
                return std::nullopt;
            if (!(frac >= 1.0 / 3.0 && frac < 2.0 / 3.0)) {
                inside = false;
                break;
            }
        }
        if (inside) ++count;
    }
    return count;
}

DyadicCube KStrip::cube_at(std::int64_t j) const {
    DyadicCube c = base;
    c.pos[c.grid.dim - 1] += j;
    return c;
}

// ---------------------------------------------------------------------------
// GridMask

GridMask::GridMask(int dim, std::vector<double> origin, double side,
                   std::int64_t cells)
    : dim_(dim), origin_(std::move(origin)), side_(side), n_(cells) {
    if (dim != 1 && dim != 2)
        throw UnsupportedDimensionError("GridMask: dim must be 1 or 2");
    if (static_cast<int>(origin_.size()) != dim)
        throw InvalidInputError("GridMask: origin length != dim");
    if (side <= 0 || cells < 1) throw InvalidInputError("GridMask: bad geometry");
    bits_.assign(static_cast<std::size_t>(dim == 1 ? n_ : n_ * n_), 0);
}

std::size_t GridMask::index1(std::int64_t i) const {
    if (i < 0 || i >= n_) throw InvalidInputError("GridMask: index out of range");
    return static_cast<std::size_t>(i);
}

std::size_t GridMask::index2(std::int64_t i, std::int64_t j) const {
    if (dim_ != 2) throw InvalidInputError("GridMask: 2D access on 1D mask");
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw InvalidInputError("GridMask: index out of range");
    return static_cast<std::size_t>(i * n_ + j);
}

std::int64_t GridMask::popcount() const {
    std::int64_t c = 0;
    for (std::uint8_t b : bits_) c += b;
    return c;
}

double GridMask::measure() const {
    const double h = cell_size();
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= h;
    return static_cast<double>(popcount()) * v;
}

bool GridMask::contains_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    const double h = cell_size();
    std::int64_t idx[2] = {0, 0};
    for (int a = 0; a < dim_; ++a) {
        const double t = (x[a] - origin_[a]) / h;
        if (t < 0 || t >= static_cast<double>(n_)) return false;
        idx[a] = static_cast<std::int64_t>(t);
    }
    return dim_ == 1 ? get(idx[0]) : get(idx[0], idx[1]);
}

GridMask GridMask::fiber(std::int64_t row) const {
    if (dim_ != 2) throw InvalidInputError("GridMask::fiber: mask is not 2D");
    GridMask f(1, {origin_[1]}, side_, n_);
    for (std::int64_t j = 0; j < n_; ++j) f.set(j, get(row, j));
    return f;
}

std::vector<std::uint8_t> GridMask::serialize() const {
    std::vector<std::uint8_t> out;
    auto put32 = [&out](std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
    };
    put32(static_cast<std::uint32_t>(n_));
    put32(static_cast<std::uint32_t>(dim_));
    // Runs alternate starting with a run of clear cells.
    std::uint8_t cur = 0;
    std::uint32_t run = 0;
    for (std::uint8_t b : bits_) {
        if (b == cur) {
            ++run;
        } else {
            put32(run);
            cur = b;
            run = 1;
        }
    }
    put32(run);
    return out;
}

GridMask GridMask::deserialize(std::span<const std::uint8_t> bytes,
                               std::vector<double> origin, double side) {
    if (bytes.size() < 8) throw InvalidInputError("GridMask: truncated header");
    auto get32 = [&bytes](std::size_t off) {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(bytes[off + i]) << (8 * i);
        return v;
    };
    const std::int64_t n = get32(0);
    const int dim = static_cast<int>(get32(4));
    GridMask m(dim, std::move(origin), side, n);
    const std::size_t total = m.bits_.size();
    std::size_t cell = 0;
    std::uint8_t cur = 0;
    for (std::size_t off = 8; off + 4 <= bytes.size(); off += 4) {
        std::uint32_t run = get32(off);
        for (std::uint32_t r = 0; r < run; ++r) {
            if (cell >= total) throw InvalidInputError("GridMask: RLE overflow");
            m.bits_[cell++] = cur;
        }
        cur = cur ? 0 : 1;
    }
    if (cell != total) throw InvalidInputError("GridMask: RLE underflow");
    return m;
}

// ---------------------------------------------------------------------------
// Dilation via squared Euclidean distance transform with one cell of per-axis
// slack, so the threshold test measures distance between cell regions rather
// than centers.

namespace {

constexpr double kInf = 1e30;

// Felzenszwalb-Huttenlocher lower envelope; d[q] = min_p (q-p)^2 + f[p].
void edt_1d(const std::vector<double>& f, std::vector<double>& d,
            std::vector<int>& v, std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    d.resize(n);
    v.assign(n, 0);
    z.assign(n + 1, 0.0);
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        double s = 0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) -
                 (f[p] + static_cast<double>(p) * p)) /
                (2.0 * q - 2.0 * p);
            if (s <= z[k] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = static_cast<double>(q - p) * (q - p) + f[p];
    }
}

}  // namespace

GridMask dilate(const GridMask& mask, double radius) {
    if (radius < 0) throw InvalidInputError("dilate: negative radius");
    if (radius == 0) return mask;
    const double h = mask.cell_size();
    const std::int64_t pad = static_cast<std::int64_t>(std::ceil(radius / h)) + 1;
    const std::int64_t n = mask.cells_per_side();
    const std::int64_t m = n + 2 * pad;
    std::vector<double> origin = mask.origin();
    for (double& o : origin) o -= static_cast<double>(pad) * h;
    GridMask out(mask.dim(), origin, mask.side() + 2.0 * pad * h, m);

    const double r2_cells = (radius / h) * (radius / h);

    if (mask.dim() == 1) {
        // Chebyshev-1 slack then 1D EDT.
        std::vector<double> f(static_cast<std::size_t>(m), kInf);
        for (std::int64_t i = 0; i < n; ++i) {
            if (!mask.get(i)) continue;
            for (std::int64_t d = -1; d <= 1; ++d) f[static_cast<std::size_t>(i + pad + d)] = 0.0;
        }
        std::vector<double> dist;
        std::vector<int> v;
        std::vector<double> z;
        edt_1d(f, dist, v, z);
        for (std::int64_t q = 0; q < m; ++q) {
            const bool inside = (q >= pad && q < pad + n && mask.get(q - pad));
            if (inside || dist[static_cast<std::size_t>(q)] < r2_cells)
                out.set(q, true);
        }
        return out;
    }

    // 2D: slack stencil, then row pass, then column pass.
    std::vector<double> g(static_cast<std::size_t>(m) * m, kInf);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < n; ++j) {
            if (!mask.get(i, j)) continue;
            for (std::int64_t di = -1; di <= 1; ++di)
                for (std::int64_t dj = -1; dj <= 1; ++dj)
                    g[static_cast<std::size_t>((i + pad + di) * m + (j + pad + dj))] = 0.0;
        }
    }
    std::vector<double> f(static_cast<std::size_t>(m)), dcol;
    std::vector<int> v;
    std::vector<double> z;
    // Along rows (j direction).
    for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = 0; j < m; ++j) f[static_cast<std::size_t>(j)] = g[static_cast<std::size_t>(i * m + j)];
        edt_1d(f, dcol, v, z);
        for (std::int64_t j = 0; j < m; ++j) g[static_cast<std::size_t>(i * m + j)] = dcol[static_cast<std::size_t>(j)];
    }
    // Along columns (i direction).
    for (std::int64_t j = 0; j < m; ++j) {
        for (std::int64_t i = 0; i < m; ++i) f[static_cast<std::size_t>(i)] = g[static_cast<std::size_t>(i * m + j)];
        edt_1d(f, dcol, v, z);
        for (std::int64_t i = 0; i < m; ++i) g[static_cast<std::size_t>(i * m + j)] = dcol[static_cast<std::size_t>(i)];
    }
    for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t j = 0; j < m; ++j) {
            const bool inside = (i >= pad && i < pad + n && j >= pad &&
                                 j < pad + n && mask.get(i - pad, j - pad));
            if (inside || g[static_cast<std::size_t>(i * m + j)] < r2_cells)
                out.set(i, j, true);
        }
    }
    return out;
}

}  // namespace sparselab
