#ifndef SPARSELAB_DYADIC_HPP
#define SPARSELAB_DYADIC_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sparselab/errors.hpp"

namespace sparselab {

// Grid shifted by omega, with entries in {0, 1/3, 2/3} stored as thirds.
// Cubes of the grid at scale k are 2^k([0,1)^n + m + (-1)^k omega).
struct ShiftedGrid {
    int dim = 1;
    std::vector<int> shift_thirds;  // each entry in {0,1,2}

    ShiftedGrid(int n, std::vector<int> thirds);
    static ShiftedGrid unshifted(int n) { return ShiftedGrid(n, std::vector<int>(n, 0)); }
    double shift(int axis) const { return shift_thirds[axis] / 3.0; }
};

struct DyadicCube {
    ShiftedGrid grid;
    int scale_exp = 0;                 // side length 2^scale_exp
    std::vector<std::int64_t> pos;     // m

    double side() const;
    double corner(int axis) const;     // 2^k (m_i + (-1)^k omega_i)
    bool contains(std::span<const double> x) const;  // half-open
    DyadicCube child(int which) const;   // which in [0, 2^n)
    double volume() const;
};

// Plain axis-aligned cube, half-open.
struct Box {
    std::vector<double> corner;
    double side = 0.0;
    int dim() const { return static_cast<int>(corner.size()); }
};

// The unique cube of the grid at the given scale containing x.
DyadicCube cube_containing(std::span<const double> x, int scale_exp,
                           const ShiftedGrid& g);

// Some shifted dyadic cube P with I inside P and side(P) <= 6 side(I).
DyadicCube enclosing_shifted_cube(const Box& I);

// Number of concentric-third cells (over all 3^n shifts, at one scale)
// containing x; equals 1 for generic x. Returns nullopt when x sits within
// rel_tol of a third boundary and the count is ambiguous.
std::optional<int> identity_partition_weight(std::span<const double> x,
                                             int scale_exp,
                                             double rel_tol = 1e-12);

// Bi-infinite column of side-2^k cubes along the last axis.
struct KStrip {
    DyadicCube base;
    DyadicCube cube_at(std::int64_t j) const;  // base translated by j*2^k e_n
};

// A maximal run j0 <= j <= j1 of strip cubes.
struct KInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// ---------------------------------------------------------------------------
// GridMask: subset of a uniform grid over an axis-aligned cube, one bit per
// cell. dim is 1 or 2.

class GridMask {
  public:
    GridMask(int dim, std::vector<double> origin, double side, std::int64_t cells);

    int dim() const { return dim_; }
    std::int64_t cells_per_side() const { return n_; }
    double cell_size() const { return side_ / static_cast<double>(n_); }
    double side() const { return side_; }
    const std::vector<double>& origin() const { return origin_; }

    bool get(std::int64_t i) const { return bits_[index1(i)] != 0; }
    bool get(std::int64_t i, std::int64_t j) const { return bits_[index2(i, j)] != 0; }
    void set(std::int64_t i, bool v = true) { bits_[index1(i)] = v ? 1 : 0; }
    void set(std::int64_t i, std::int64_t j, bool v = true) { bits_[index2(i, j)] = v ? 1 : 0; }

    std::int64_t popcount() const;
    double measure() const;  // popcount * cell volume
    bool contains_point(std::span<const double> x) const;

    // Cell-center coordinate along one axis.
    double center(int axis, std::int64_t i) const {
        return origin_[axis] + (static_cast<double>(i) + 0.5) * cell_size();
    }

    // 1D row y -> mask(x_row, y) of a 2D mask.
    GridMask fiber(std::int64_t row) const;

    const std::vector<std::uint8_t>& raw() const { return bits_; }
    std::vector<std::uint8_t>& raw() { return bits_; }

    std::vector<std::uint8_t> serialize() const;          // RLE with 8-byte header
    static GridMask deserialize(std::span<const std::uint8_t> bytes,
                                std::vector<double> origin, double side);

  private:
    std::size_t index1(std::int64_t i) const;
    std::size_t index2(std::int64_t i, std::int64_t j) const;

    int dim_;
    std::vector<double> origin_;
    double side_;
    std::int64_t n_;
    std::vector<std::uint8_t> bits_;
};

// Minkowski sum with the closed Euclidean ball of the given radius,
// discretized outward: the result covers every cell whose interior meets the
// true dilation, and overshoots by at most one extra cell layer. The returned
// mask lives on a padded grid enlarged to hold the dilation. radius 0 returns
// the mask unchanged (same geometry).
GridMask dilate(const GridMask& mask, double radius);

}  // namespace sparselab

#endif
