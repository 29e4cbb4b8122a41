#include "sparselab/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "sparselab/constants.hpp"

namespace sparselab {

namespace {

double pow_int(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

bool orthogonal_within(const std::vector<double>& theta, int n, double tol) {
    // theta^T theta = I
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int r = 0; r < n; ++r) s += theta[r * n + i] * theta[r * n + j];
            if (std::abs(s - (i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

}  // namespace

int multi_order(const MultiIndex& a) {
    int s = 0;
    for (int v : a) s += v;
    return s;
}

// ---------------------------------------------------------------------------
// NPoly

int NPoly::degree() const {
    int d = 0;
    for (const auto& [a, c] : coeffs_) d = std::max(d, multi_order(a));
    return d;
}

void NPoly::add_term(const MultiIndex& alpha, double c) {
    if (static_cast<int>(alpha.size()) != dim_)
        throw InvalidInputError("NPoly::add_term: index length != dim");
    for (int v : alpha)
        if (v < 0) throw InvalidInputError("NPoly::add_term: negative exponent");
    if (c == 0.0) return;
    auto it = coeffs_.find(alpha);
    if (it == coeffs_.end()) {
        coeffs_.emplace(alpha, c);
    } else {
        it->second += c;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

double NPoly::coeff(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? 0.0 : it->second;
}

double NPoly::eval(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw InvalidInputError("NPoly::eval: point dimension mismatch");
    double s = 0;
    for (const auto& [a, c] : coeffs_) {
        double m = c;
        for (int i = 0; i < dim_; ++i) m *= pow_int(x[i], a[i]);
        s += m;
    }
    return s;
}

double NPoly::eval1(double x) const { return eval(std::span<const double>(&x, 1)); }

double NPoly::coeff_norm() const {
    double s = 0;
    for (const auto& [a, c] : coeffs_)
        if (multi_order(a) >= 1) s += std::abs(c);
    return s;
}

NPoly NPoly::partial(int axis) const {
    if (axis < 1 || axis > dim_)
        throw InvalidInputError("NPoly::partial: axis out of range");
    NPoly out(dim_);
    for (const auto& [a, c] : coeffs_) {
        if (a[axis - 1] == 0) continue;
        MultiIndex b = a;
        const int e = b[axis - 1]--;
        out.add_term(b, c * e);
    }
    return out;
}

NPoly NPoly::operator*(const NPoly& q) const {
    if (q.dim_ != dim_) throw InvalidInputError("NPoly::*: dim mismatch");
    NPoly out(dim_);
    for (const auto& [a, ca] : coeffs_) {
        for (const auto& [b, cb] : q.coeffs_) {
            MultiIndex s(dim_);
            for (int i = 0; i < dim_; ++i) s[i] = a[i] + b[i];
            out.add_term(s, ca * cb);
        }
    }
    return out;
}

NPoly NPoly::operator+(const NPoly& q) const {
    if (q.dim_ != dim_) throw InvalidInputError("NPoly::+: dim mismatch");
    NPoly out = *this;
    for (const auto& [b, cb] : q.coeffs_) out.add_term(b, cb);
    return out;
}

NPoly& NPoly::scale(double c) {
    if (c == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [a, v] : coeffs_) v *= c;
    return *this;
}

NPoly NPoly::rotate(const std::vector<double>& theta) const {
    if (static_cast<int>(theta.size()) != dim_ * dim_)
        throw InvalidInputError("NPoly::rotate: matrix size mismatch");
    if (!orthogonal_within(theta, dim_, 1e-12))
        throw InvalidInputError("NPoly::rotate: matrix not orthogonal");
    // Linear forms L_i(x) = (theta x)_i, expanded by repeated products.
    std::vector<NPoly> linear;
    linear.reserve(dim_);
    for (int i = 0; i < dim_; ++i) {
        NPoly li(dim_);
        for (int j = 0; j < dim_; ++j) {
            MultiIndex e(dim_, 0);
            e[j] = 1;
            li.add_term(e, theta[i * dim_ + j]);
        }
        linear.push_back(li);
    }
    NPoly out(dim_);
    for (const auto& [a, c] : coeffs_) {
        NPoly term(dim_);
        term.add_term(MultiIndex(dim_, 0), c);
        for (int i = 0; i < dim_; ++i)
            for (int e = 0; e < a[i]; ++e) term = term * linear[i];
        out = out + term;
    }
    return out;
}

// ---------------------------------------------------------------------------
// BiPoly

int BiPoly::degree() const {
    int d = 0;
    for (const auto& [k, c] : coeffs_)
        d = std::max(d, multi_order(k.first) + multi_order(k.second));
    return d;
}

void BiPoly::add_term(const MultiIndex& alpha, const MultiIndex& beta, double c) {
    if (static_cast<int>(alpha.size()) != dim_ ||
        static_cast<int>(beta.size()) != dim_)
        throw InvalidInputError("BiPoly::add_term: index length != dim");
    for (int v : alpha)
        if (v < 0) throw InvalidInputError("BiPoly::add_term: negative exponent");
    for (int v : beta)
        if (v < 0) throw InvalidInputError("BiPoly::add_term: negative exponent");
    if (c == 0.0) return;
    auto key = std::make_pair(alpha, beta);
    auto it = coeffs_.find(key);
    if (it == coeffs_.end()) {
        coeffs_.emplace(key, c);
    } else {
        it->second += c;
        if (it->second == 0.0) coeffs_.erase(it);
    }
}

double BiPoly::eval(std::span<const double> x, std::span<const double> y) const {
    if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
        throw InvalidInputError("BiPoly::eval: point dimension mismatch");
    double s = 0;
    for (const auto& [k, c] : coeffs_) {
        double m = c;
        for (int i = 0; i < dim_; ++i) m *= pow_int(x[i], k.first[i]);
        for (int i = 0; i < dim_; ++i) m *= pow_int(y[i], k.second[i]);
        s += m;
    }
    return s;
}

double BiPoly::eval1(double x, double y) const {
    return eval(std::span<const double>(&x, 1), std::span<const double>(&y, 1));
}

double BiPoly::coeff_norm() const {
    double s = 0;
    for (const auto& [k, c] : coeffs_)
        if (multi_order(k.first) + multi_order(k.second) >= 1) s += std::abs(c);
    return s;
}

BiPoly BiPoly::strip_forbidden() const {
    BiPoly out(dim_);
    for (const auto& [k, c] : coeffs_) {
        const int oa = multi_order(k.first);
        const int ob = multi_order(k.second);
        if (ob == 0) continue;
        if (oa + ob <= 1) continue;
        out.add_term(k.first, k.second, c);
    }
    return out;
}

bool BiPoly::is_stripped() const {
    for (const auto& [k, c] : coeffs_) {
        const int oa = multi_order(k.first);
        const int ob = multi_order(k.second);
        if (ob == 0 || oa + ob <= 1) return false;
    }
    return true;
}

std::map<MultiIndex, NPoly> BiPoly::y_power_profiles() const {
    if (!is_stripped())
        throw InvalidInputError("y_power_profiles: polynomial not stripped");
    std::map<MultiIndex, NPoly> out;
    for (const auto& [k, c] : coeffs_) {
        auto it = out.find(k.second);
        if (it == out.end())
            it = out.emplace(k.second, NPoly(dim_)).first;
        it->second.add_term(k.first, c);
    }
    return out;
}

BiPoly& BiPoly::scale(double c) {
    if (c == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [k, v] : coeffs_) v *= c;
    return *this;
}

BiPoly BiPoly::normalized() const {
    const double n = coeff_norm();
    if (n == 0.0) throw InvalidInputError("BiPoly::normalized: zero norm");
    BiPoly out = *this;
    out.scale(1.0 / n);
    return out;
}

std::string BiPoly::to_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    j["terms"] = nlohmann::json::array();
    for (const auto& [k, c] : coeffs_) {
        nlohmann::json t;
        t["alpha"] = k.first;
        t["beta"] = k.second;
        t["coef"] = c;
        j["terms"].push_back(t);
    }
    return j.dump();
}

BiPoly BiPoly::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("dim") || !j.contains("terms"))
        throw InvalidInputError("BiPoly::from_json: missing fields");
    BiPoly p(j["dim"].get<int>());
    for (const auto& t : j["terms"]) {
        p.add_term(t["alpha"].get<MultiIndex>(), t["beta"].get<MultiIndex>(),
                   t["coef"].get<double>());
    }
    return p;
}

// ---------------------------------------------------------------------------

RotationSearchResult find_admissible_rotation(const NPoly& p, int grid_size) {
    if (p.dim() != 2)
        throw UnsupportedDimensionError(
            "find_admissible_rotation: only dim 2 is supported");
    if (p.degree() < 2)
        throw InvalidInputError("find_admissible_rotation: degree must be >= 2");
    const double norm = p.coeff_norm();
    if (norm == 0.0)
        throw InvalidInputError("find_admissible_rotation: zero coefficient norm");
    if (grid_size < 1)
        throw InvalidInputError("find_admissible_rotation: empty angle grid");

    RotationSearchResult best;
    best.score = -1.0;
    for (int i = 0; i < grid_size; ++i) {
        const double a = kPi * static_cast<double>(i) / grid_size;
        const double c = std::cos(a), s = std::sin(a);
        std::vector<double> theta = {c, -s, s, c};
        const NPoly q = p.rotate(theta);
        double score = std::min(q.partial(1).coeff_norm(),
                                q.partial(2).coeff_norm()) /
                       norm;
        if (score > best.score) {
            best.score = score;
            best.angle = a;
            best.theta = theta;
        }
    }
    if (best.score < 1e-8)
        throw SearchFailureError(
            "find_admissible_rotation: no rotation with positive score found");
    return best;
}

NPoly monomial1(int power, double c) {
    NPoly p(1);
    p.add_term({power}, c);
    return p;
}

BiPoly bimonomial1(int px, int py, double c) {
    BiPoly p(1);
    p.add_term({px}, {py}, c);
    return p;
}

}  // namespace sparselab
