#ifndef SPARSELAB_DECOMPOSITION_HPP
#define SPARSELAB_DECOMPOSITION_HPP

#include <cstdint>
#include <vector>

#include "sparselab/grid.hpp"
#include "sparselab/operators.hpp"
#include "sparselab/polynomial.hpp"

namespace sparselab {

// Calderon-Zygmund decomposition of a nonnegative f over the grid domain at
// threshold A <f>_{I0}: f = good + sum_s bad_bucket(s), with the bad cubes the
// maximal dyadic subcubes beating the threshold. Bucket 0 holds cubes of side
// <= 1; bucket s >= 1 holds side 2^s.
struct CZDecomposition {
    Grid grid;
    double threshold = 0.0;       // A
    double base_average = 0.0;    // <f>_{I0}
    GridFunction source;          // f
    GridFunction good;            // gamma
    std::vector<DyadicCube> bad_cubes;
    std::vector<std::vector<int>> buckets;  // bucket s -> indices into bad_cubes

    GridFunction bad_bucket(int s) const;   // b_s; zero function when out of range
    GridFunction bad_total() const;
    int max_bucket() const { return static_cast<int>(buckets.size()) - 1; }
};

CZDecomposition cz_decompose(const GridFunction& f, double threshold);

// T_{K,s} b = T_K applied to the bucket at side 2^{k-s}, side(K) = 2^k.
GridFunction apply_T_Ks(const CZDecomposition& dec, const DyadicCube& K, int s,
                        const BiPoly& p);

// Scale classification of operator cubes against the composition bound.
struct ScaleSplitEntry {
    int cube_index = 0;      // into the collection passed in
    int s = 0;
    int t = -1;              // secondary index; -1 when the bucket average is 0
    double lhs = 0.0;        // ||T_{K,s} b||_2^2
    double rhs = 0.0;        // 100 C0 |K|^{-(1+eps_d)} ||b 1_K||_1^2
    bool standard = false;   // lhs <= rhs (ties standard)
    double flat_pair_mass = 0.0;  // (2 C0/|K|) int int_{Z_K} b(x) b(y)
    bool flat_bound_holds = true; // lhs < flat_pair_mass, non-standard only
};

struct ScaleSplit {
    std::vector<ScaleSplitEntry> entries;
};

// C0 is the fitted composition-bound constant; degree sets eps_d. The flat-set
// pair mass is only evaluated for non-standard entries when check_flat_bound.
ScaleSplit classify_scales(const CZDecomposition& dec,
                           const std::vector<DyadicCube>& collection,
                           const BiPoly& p, double c0,
                           bool check_flat_bound = false);

// Packing ratio sum_{K in cubes, K inside J} |K| / (2^t |J|).
double carleson_packing(const std::vector<DyadicCube>& cubes, int t,
                        const DyadicCube& J);

// Maximum of the packing ratio over every dyadic subcube J of the domain.
double max_carleson_packing(const Grid& g, const std::vector<DyadicCube>& cubes,
                            int t);

// Cells where the overlap count of the cubes exceeds C 2^t.
GridMask exceptional_set(const Grid& g, const std::vector<DyadicCube>& cubes,
                         double C, int t);

// Smallest power-of-two C <= cap with |exceptional set| <= |I0| / 4.
double exceptional_constant(const Grid& g, const std::vector<DyadicCube>& cubes,
                            int t, double cap = 1 << 20);

// Generation layers: first the minimal cubes of the set, then repeatedly the
// maximal cubes of what remains.
std::vector<std::vector<DyadicCube>> generations(std::vector<DyadicCube> cubes);

}  // namespace sparselab

#endif
