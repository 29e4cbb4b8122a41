#ifndef SPARSELAB_GRID_HPP
#define SPARSELAB_GRID_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "sparselab/dyadic.hpp"
#include "sparselab/errors.hpp"

namespace sparselab {

// Uniform grid over the reference cube [0, 2^side_exp). Cell count must keep
// every dyadic scale cell-aligned; concentric thirds additionally need
// divisibility by 3 * 2^side_exp (checked by the operations that use thirds).
struct Grid {
    int side_exp = 0;
    std::int64_t cells = 0;

    Grid(int s0, std::int64_t n);
    double side() const;
    double h() const { return side() / static_cast<double>(cells); }
    double center(std::int64_t i) const { return (static_cast<double>(i) + 0.5) * h(); }
    bool thirds_aligned() const;
    bool operator==(const Grid& o) const {
        return side_exp == o.side_exp && cells == o.cells;
    }
};

struct GridFunction {
    Grid grid;
    std::vector<std::complex<double>> v;

    explicit GridFunction(const Grid& g) : grid(g), v(g.cells, 0.0) {}

    std::complex<double>& operator[](std::int64_t i) { return v[i]; }
    const std::complex<double>& operator[](std::int64_t i) const { return v[i]; }

    bool is_real(double tol = 0.0) const;
    double norm_l2() const;               // (h sum |v|^2)^(1/2)
    double norm_l1() const;
    double norm_linf() const;
    GridFunction abs() const;
};

std::complex<double> inner_product(const GridFunction& f, const GridFunction& g);

// Index range [first, last) of the grid cells exactly tiling [lo, hi).
// Throws AlignmentError when the endpoints miss cell boundaries; the range is
// clamped to the grid domain.
struct CellRange {
    std::int64_t first = 0;
    std::int64_t last = 0;
    std::int64_t count() const { return last - first; }
};
CellRange cell_range(const Grid& g, double lo, double hi);
CellRange cell_range(const Grid& g, const DyadicCube& cube);

// All cubes of the shifted grid at one scale that meet the grid domain.
std::vector<DyadicCube> cubes_at_scale(const Grid& g, int scale_exp,
                                       const ShiftedGrid& sg);

// Children count is always 2 in 1D; splitting stops when a cube no longer has
// an even cell count.
bool cube_splittable(const Grid& g, const DyadicCube& cube);

}  // namespace sparselab

#endif
