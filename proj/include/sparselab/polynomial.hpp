#ifndef SPARSELAB_POLYNOMIAL_HPP
#define SPARSELAB_POLYNOMIAL_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sparselab/errors.hpp"

namespace sparselab {

// Exponent vector alpha = (a_1, ..., a_n), all entries >= 0.
using MultiIndex = std::vector<int>;

int multi_order(const MultiIndex& a);  // |alpha| = sum of entries

// Real polynomial of one vector variable,
//   P(x) = sum_alpha c_alpha x^alpha.
// Zero coefficients are never stored.
class NPoly {
  public:
    explicit NPoly(int dim) : dim_(dim) {
        if (dim < 1) throw InvalidInputError("NPoly: dim must be >= 1");
    }

    int dim() const { return dim_; }
    int degree() const;  // max |alpha| over stored terms, 0 when empty
    bool empty() const { return coeffs_.empty(); }
    const std::map<MultiIndex, double>& terms() const { return coeffs_; }

    void add_term(const MultiIndex& alpha, double c);
    double coeff(const MultiIndex& alpha) const;

    double eval(std::span<const double> x) const;
    double eval1(double x) const;  // dim 1 shortcut

    // Coefficient norm: sum |c_alpha| over 1 <= |alpha|. The constant term
    // never contributes.
    double coeff_norm() const;

    NPoly partial(int axis) const;  // formal d/dx_axis, axis in [1, dim]

    // Coefficients of P(theta x) by exact expansion; theta is a dim x dim
    // orthogonal matrix in row-major order.
    NPoly rotate(const std::vector<double>& theta) const;

    NPoly operator*(const NPoly& q) const;
    NPoly operator+(const NPoly& q) const;
    NPoly& scale(double c);

  private:
    int dim_;
    std::map<MultiIndex, double> coeffs_;
};

// Real polynomial of a pair of vector variables,
//   P(x, y) = sum_{alpha, beta} c_{alpha,beta} x^alpha y^beta.
class BiPoly {
  public:
    explicit BiPoly(int dim) : dim_(dim) {
        if (dim < 1) throw InvalidInputError("BiPoly: dim must be >= 1");
    }

    int dim() const { return dim_; }
    int degree() const;  // max |alpha|+|beta|
    bool empty() const { return coeffs_.empty(); }
    const std::map<std::pair<MultiIndex, MultiIndex>, double>& terms() const {
        return coeffs_;
    }

    void add_term(const MultiIndex& alpha, const MultiIndex& beta, double c);

    double eval(std::span<const double> x, std::span<const double> y) const;
    double eval1(double x, double y) const;  // dim 1 shortcut

    double coeff_norm() const;  // sum |c| over |alpha|+|beta| >= 1

    // Drops terms with beta = 0 (constants and pure powers of x) and terms
    // with |alpha|+|beta| <= 1. Survivors satisfy |alpha|+|beta| >= 2 and
    // beta != 0.
    BiPoly strip_forbidden() const;
    bool is_stripped() const;

    // For stripped P, the profiles R_beta with
    //   P(x,z) - P(y,z) = sum_beta [R_beta(x) - R_beta(y)] z^beta.
    std::map<MultiIndex, NPoly> y_power_profiles() const;

    BiPoly& scale(double c);
    BiPoly normalized() const;  // coefficients divided by coeff_norm()

    std::string to_json() const;
    static BiPoly from_json(const std::string& text);

  private:
    int dim_;
    std::map<std::pair<MultiIndex, MultiIndex>, double> coeffs_;
};

// Best rotation for a planar polynomial: maximizes
//   score(theta) = min_j ||d_j (P o theta)|| / ||P||
// over a uniform grid of grid_size rotation angles in [0, pi). Only dim 2 is
// supported. A winning score below 1e-8 signals a degenerate search.
struct RotationSearchResult {
    std::vector<double> theta;  // 2x2 row-major
    double angle = 0.0;
    double score = 0.0;
};

RotationSearchResult find_admissible_rotation(const NPoly& p, int grid_size);

// Helpers shared by tests and experiments.
NPoly monomial1(int power, double c = 1.0);             // c * t^power, dim 1
BiPoly bimonomial1(int px, int py, double c = 1.0);     // c * x^px y^py, dim 1

}  // namespace sparselab

#endif
