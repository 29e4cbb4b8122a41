#include "sparselab/grid.hpp"

#include <cmath>

namespace sparselab {

Grid::Grid(int s0, std::int64_t n) : side_exp(s0), cells(n) {
    if (s0 < 0) throw InvalidInputError("Grid: side exponent must be >= 0");
    if (n < 1) throw InvalidInputError("Grid: cell count must be >= 1");
    const std::int64_t units = std::int64_t{1} << s0;
    if (n % units != 0)
        throw InvalidInputError("Grid: cells must be divisible by 2^side_exp");
}

double Grid::side() const { return std::ldexp(1.0, side_exp); }

bool Grid::thirds_aligned() const {
    return cells % (3 * (std::int64_t{1} << side_exp)) == 0;
}

bool GridFunction::is_real(double tol) const {
    for (const auto& z : v)
        if (std::abs(z.imag()) > tol) return false;
    return true;
}

double GridFunction::norm_l2() const {
    double s = 0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s * grid.h());
}

double GridFunction::norm_l1() const {
    double s = 0;
    for (const auto& z : v) s += std::abs(z);
    return s * grid.h();
}

double GridFunction::norm_linf() const {
    double s = 0;
    for (const auto& z : v) s = std::max(s, std::abs(z));
    return s;
}

GridFunction GridFunction::abs() const {
    GridFunction out(grid);
    for (std::size_t i = 0; i < v.size(); ++i) out.v[i] = std::abs(v[i]);
    return out;
}

std::complex<double> inner_product(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid == g.grid)) throw AlignmentError("inner_product: grids differ");
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * std::conj(g.v[i]);
    return s * f.grid.h();
}

CellRange cell_range(const Grid& g, double lo, double hi) {
    const double h = g.h();
    const double a = lo / h, b = hi / h;
    const double ra = std::round(a), rb = std::round(b);
    if (std::abs(a - ra) > 1e-6 || std::abs(b - rb) > 1e-6)
        throw AlignmentError("cell_range: endpoints miss cell boundaries");
    CellRange r;
    r.first = std::max<std::int64_t>(0, static_cast<std::int64_t>(ra));
    r.last = std::min<std::int64_t>(g.cells, static_cast<std::int64_t>(rb));
    if (r.last < r.first) r.last = r.first;
    return r;
}

CellRange cell_range(const Grid& g, const DyadicCube& cube) {
    if (cube.grid.dim != 1)
        throw UnsupportedDimensionError("cell_range: 1D cubes only");
    return cell_range(g, cube.corner(0), cube.corner(0) + cube.side());
}

std::vector<DyadicCube> cubes_at_scale(const Grid& g, int scale_exp,
                                       const ShiftedGrid& sg) {
    if (sg.dim != 1) throw UnsupportedDimensionError("cubes_at_scale: 1D only");
    std::vector<DyadicCube> out;
    const double point0[1] = {0.0};
    DyadicCube first =
        cube_containing(std::span<const double>(point0, 1), scale_exp, sg);
    DyadicCube c = first;
    while (c.corner(0) < g.side()) {
        if (c.corner(0) + c.side() > 0.0) out.push_back(c);
        c.pos[0] += 1;
    }
    return out;
}

bool cube_splittable(const Grid& g, const DyadicCube& cube) {
    CellRange r = cell_range(g, cube);
    return r.count() >= 2 && r.count() % 2 == 0;
}

}  // namespace sparselab
