#include "sparselab/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace sparselab {

SparseCheck verify_sparse(const SparseCollection& c) {
    SparseCheck out;
    if (c.cubes.size() != c.witnesses.size())
        throw InvalidInputError("verify_sparse: cube/witness count mismatch");
    std::vector<int> painted(c.grid.cells, 0);
    for (std::size_t s = 0; s < c.cubes.size(); ++s) {
        CellRange r = cell_range(c.grid, c.cubes[s]);
        const GridMask& w = c.witnesses[s];
        std::int64_t count = 0;
        for (std::int64_t i = 0; i < c.grid.cells; ++i) {
            if (!w.get(i)) continue;
            ++count;
            if (i < r.first || i >= r.last) out.witnesses_inside = false;
            if (painted[i]++) out.witnesses_disjoint = false;
        }
        const double frac =
            static_cast<double>(count) * c.grid.h() / c.cubes[s].volume();
        out.min_fraction = std::min(out.min_fraction, frac);
        if (!(frac > 0.25)) out.witnesses_large = false;
    }
    return out;
}

double sparse_form(const SparseCollection& c, const GridFunction& f,
                   const GridFunction& g, double r, double s) {
    if (!(f.grid == c.grid) || !(g.grid == c.grid))
        throw AlignmentError("sparse_form: grids differ");
    double total = 0.0;
    for (const auto& cube : c.cubes)
        total += cube.volume() * average(f, cube, r) * average(g, cube, s);
    return total;
}

namespace {

void find_stopping_children(const GridFunction& f, const GridFunction& g,
                            const DyadicCube& cube, double cf, double cg,
                            std::vector<DyadicCube>& out, int depth) {
    if (depth > 64) throw DepthError("build_stopping_family: recursion too deep");
    if (!cube_splittable(f.grid, cube)) return;
    for (int which = 0; which < 2; ++which) {
        DyadicCube q = cube.child(which);
        if (average(f, q) > cf || average(g, q) > cg) {
            out.push_back(q);
        } else {
            find_stopping_children(f, g, q, cf, cg, out, depth + 1);
        }
    }
}

}  // namespace

StoppingFamily build_stopping_family(const GridFunction& f, const GridFunction& g,
                                     double threshold) {
    if (!(f.grid == g.grid))
        throw AlignmentError("build_stopping_family: grids differ");
    if (threshold <= 1.0)
        throw InvalidInputError("build_stopping_family: threshold must be > 1");
    for (const auto& z : f.v)
        if (z.real() < 0.0 || z.imag() != 0.0)
            throw InvalidInputError("build_stopping_family: f must be >= 0");
    for (const auto& z : g.v)
        if (z.real() < 0.0 || z.imag() != 0.0)
            throw InvalidInputError("build_stopping_family: g must be >= 0");

    StoppingFamily fam(f.grid);
    fam.threshold = threshold;
    DyadicCube root{ShiftedGrid::unshifted(1), f.grid.side_exp, {0}};
    fam.nodes.push_back({root, -1, {}, average(f, root), average(g, root)});
    // Breadth-first over stopping nodes.
    for (int ni = 0; ni < static_cast<int>(fam.nodes.size()); ++ni) {
        const DyadicCube cube = fam.nodes[ni].cube;
        const double cf = threshold * fam.nodes[ni].avg_f;
        const double cg = threshold * fam.nodes[ni].avg_g;
        std::vector<DyadicCube> kids;
        find_stopping_children(f, g, cube, cf, cg, kids, 0);
        for (auto& q : kids) {
            StoppingNode node{q, ni, {}, average(f, q), average(g, q)};
            fam.nodes[ni].children.push_back(static_cast<int>(fam.nodes.size()));
            fam.nodes.push_back(std::move(node));
        }
    }
    return fam;
}

SparseCollection StoppingFamily::to_collection() const {
    SparseCollection c{grid, {}, {}};
    for (const auto& node : nodes) {
        c.cubes.push_back(node.cube);
        GridMask w(1, {0.0}, grid.side(), grid.cells);
        CellRange r = cell_range(grid, node.cube);
        for (std::int64_t i = r.first; i < r.last; ++i) w.set(i, true);
        for (int child : node.children) {
            CellRange cr = cell_range(grid, nodes[child].cube);
            for (std::int64_t i = cr.first; i < cr.last; ++i) w.set(i, false);
        }
        c.witnesses.push_back(std::move(w));
    }
    return c;
}

std::string StoppingFamily::to_json() const {
    nlohmann::json j;
    j["threshold"] = threshold;
    j["nodes"] = nlohmann::json::array();
    for (const auto& node : nodes) {
        nlohmann::json nj;
        nj["corner"] = node.cube.corner(0);
        nj["side"] = node.cube.side();
        nj["parent"] = node.parent;
        nj["avg_f"] = node.avg_f;
        nj["avg_g"] = node.avg_g;
        double child_vol = 0.0;
        for (int c : node.children) child_vol += nodes[c].cube.volume();
        nj["witness_fraction"] = 1.0 - child_vol / node.cube.volume();
        j["nodes"].push_back(nj);
    }
    return j.dump(2);
}

double domination_ratio(const GridFunction& f, const GridFunction& g,
                        const BiPoly& p, const CZKernelFn& kernel, double r) {
    if (!(r > 1.0 && r <= 2.0))
        throw InvalidInputError("domination_ratio: need 1 < r <= 2");
    GridFunction tmax =
        apply_maximal(f, p, kernel, dyadic_eps_ladder(f.grid), f.grid.side());
    const double num = std::abs(inner_product(tmax, g));
    StoppingFamily fam = build_stopping_family(f, g);
    const double form = sparse_form(fam.to_collection(), f, g, 1.0, r);
    if (form == 0.0) {
        if (num == 0.0) return 0.0;
        throw DegenerateInputError("domination_ratio: zero form, nonzero pairing");
    }
    return num / form;
}

}  // namespace sparselab
