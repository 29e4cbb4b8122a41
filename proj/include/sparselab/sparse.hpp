#ifndef SPARSELAB_SPARSE_HPP
#define SPARSELAB_SPARSE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sparselab/grid.hpp"
#include "sparselab/operators.hpp"
#include "sparselab/polynomial.hpp"

namespace sparselab {

// Cubes with explicit pairwise-disjoint witnesses E_S inside S carrying more
// than a quarter of the measure.
struct SparseCollection {
    Grid grid;
    std::vector<DyadicCube> cubes;
    std::vector<GridMask> witnesses;  // one 1D mask per cube, over the domain
};

struct SparseCheck {
    bool witnesses_inside = true;
    bool witnesses_disjoint = true;
    bool witnesses_large = true;  // |E_S| > |S| / 4
    double min_fraction = 1.0;    // min |E_S| / |S|
    bool ok() const { return witnesses_inside && witnesses_disjoint && witnesses_large; }
};

SparseCheck verify_sparse(const SparseCollection& c);

// Lambda_{r,s}(f, g) = sum_S |S| <f>_{S,r} <g>_{S,s}.
double sparse_form(const SparseCollection& c, const GridFunction& f,
                   const GridFunction& g, double r, double s);

// Stopping-time family: children of a node are the maximal dyadic subcubes
// whose f- or g-average beats threshold times the node's own; the witness is
// the node minus its children.
struct StoppingNode {
    DyadicCube cube;
    int parent = -1;
    std::vector<int> children;
    double avg_f = 0.0, avg_g = 0.0;
};

struct StoppingFamily {
    Grid grid;
    double threshold = 100.0;
    std::vector<StoppingNode> nodes;  // node 0 is the root

    explicit StoppingFamily(const Grid& g) : grid(g) {}

    SparseCollection to_collection() const;
    std::string to_json() const;  // cube coordinates, |E_S|/|S|, averages
};

StoppingFamily build_stopping_family(const GridFunction& f, const GridFunction& g,
                                     double threshold = 100.0);

// |<T_{P,*} f, g>| / Lambda_{1,r}(f, g) over the constructed stopping family.
// Zero data gives 0; a vanishing form with nonzero pairing is an error.
double domination_ratio(const GridFunction& f, const GridFunction& g,
                        const BiPoly& p, const CZKernelFn& kernel, double r);

}  // namespace sparselab

#endif
