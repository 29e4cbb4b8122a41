// Acceptance suite: one checkable criterion per function, each printing a
// single [PASS]/[FAIL] line. Run with no arguments for the full battery or
// with an index (1-13) for one criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparselab/besselmax.hpp"
#include "sparselab/constants.hpp"
#include "sparselab/decomposition.hpp"
#include "sparselab/experiments.hpp"
#include "sparselab/grid.hpp"
#include "sparselab/kernel.hpp"
#include "sparselab/operators.hpp"
#include "sparselab/oscillatory.hpp"
#include "sparselab/polynomial.hpp"
#include "sparselab/random_functions.hpp"
#include "sparselab/sparse.hpp"
#include "sparselab/weights.hpp"

using namespace sparselab;
using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool report(int index, const std::string& name, bool pass,
            const std::string& detail) {
    std::printf("[%s] C%d %s: %s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    return pass;
}

json run_and_parse(const std::string& config, int threads = 2) {
    RunResult r = run_experiment(config, threads);
    if (r.exit_code == 2) throw Error("experiment failed: " + r.error);
    json s = json::parse(r.summary_json);
    s["__exit"] = r.exit_code;
    return s;
}

bool invariant_pass(const json& summary, const std::string& name) {
    for (const auto& inv : summary["invariants"])
        if (inv["name"] == name) return inv["pass"].get<bool>();
    throw Error("invariant not found: " + name);
}

double invariant_value(const json& summary, const std::string& name) {
    for (const auto& inv : summary["invariants"])
        if (inv["name"] == name) return inv["value"].get<double>();
    throw Error("invariant not found: " + name);
}

// 1. Van der Corput decay shape for t, t^2, t^3 within 30 seconds.
bool criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    json s = run_and_parse(R"({"experiment":"vdc","seed":1})");
    const double elapsed = seconds_since(t0);
    bool pass = elapsed < 30.0;
    std::string detail = "slopes";
    for (const auto& row : s["fitted"]["per_degree"]) {
        const int d = row["degree"].get<int>();
        const double slope = row["slope"].get<double>();
        pass = pass && slope <= -1.0 / d + 0.15;
        detail += " d" + std::to_string(d) + "=" + std::to_string(slope);
    }
    detail += " elapsed=" + std::to_string(elapsed) + "s";
    return report(1, "vdc-decay-shape", pass, detail);
}

// 2. Sublevel measures scale like eps^{1/d} with comparable constants.
bool criterion_2() {
    json s = run_and_parse(R"({"experiment":"sublevel","seed":2,"samples":20})");
    const double median = s["fitted"]["median"].get<double>();
    const double worst = s["fitted"]["max"].get<double>();
    const bool pass = worst <= 3.0 * median;
    return report(2, "sublevel-shape", pass,
                  "max=" + std::to_string(worst) +
                      " median=" + std::to_string(median));
}

// 3. Bump family reconstructs 1/x to 1e-6 relative; every bump zero-mean to
// 1e-10 on its quadrature grid.
bool criterion_3() {
    double worst_rel = 0.0;
    for (double x = 1e-2; x <= 1e2; x *= 1.11) {
        for (double sx : {x, -x}) {
            const double r = hilbert_reconstruct(sx, -30, 30);
            worst_rel = std::max(worst_rel, std::abs(r - 1.0 / sx) * std::abs(sx));
        }
    }
    double worst_mean = 0.0;
    for (const PsiBump& bump : hilbert_psi_family(-10, 10)) {
        const double lim = std::ldexp(1.0, bump.scale);
        const int n = 1 << 14;
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = -lim + 2.0 * lim * (i + 0.5) / n;
            mean += bump.at_scale(t) * (2.0 * lim / n);
        }
        worst_mean = std::max(worst_mean, std::abs(mean));
    }
    const bool pass = worst_rel <= 1e-6 && worst_mean <= 1e-10;
    return report(3, "kernel-reconstruction", pass,
                  "rel_err=" + std::to_string(worst_rel) +
                      " worst_mean=" + std::to_string(worst_mean));
}

// 4. Composition bound constant stable across k in {7..10} within 5 minutes.
bool criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    json s = run_and_parse(R"({"experiment":"ttstar","seed":4})");
    const double elapsed = seconds_since(t0);
    const double drift = s["fitted"]["drift"].get<double>();
    const bool pass = drift < 1.5 && elapsed < 300.0;
    std::string cs;
    for (const auto& c : s["fitted"]["c0_per_k"])
        cs += std::to_string(c.get<double>()) + " ";
    return report(4, "composition-bound", pass,
                  "C0 per k = " + cs + "drift=" + std::to_string(drift) +
                      " elapsed=" + std::to_string(elapsed) + "s");
}

// 5. Flat-set neighborhoods fit C (2^{-eps_d k/2} + 2^{s-k}) with one C per k,
// stable across k, dilation overshoot within two cell layers.
bool criterion_5() {
    json s = run_and_parse(R"({"experiment":"zset","seed":5})");
    const bool monotone = invariant_pass(s, "zset_monotone_in_s");
    const double drift = invariant_value(s, "zset_constant_drift");
    // Dilation slack on an analytic case: an interval grown by r covers at
    // most r plus two cell layers on each side.
    const std::int64_t n = 1024;
    GridMask interval(1, {0.0}, 1.0, n);
    const double h = 1.0 / n;
    for (std::int64_t i = 0; i < n; ++i) {
        const double c = (i + 0.5) * h;
        if (c >= 0.25 && c < 0.5) interval.set(i, true);
    }
    const double grown = dilate(interval, 0.125).measure();
    const double analytic = interval.measure() + 0.25;
    const bool slack_ok = grown >= analytic - 1e-12 && grown <= analytic + 4 * h;
    const bool pass = monotone && drift <= 4.0 && slack_ok;
    return report(5, "flat-set-neighborhoods", pass,
                  "drift=" + std::to_string(drift) +
                      " monotone=" + std::to_string(monotone) +
                      " slack=" + std::to_string((grown - analytic) / h) +
                      " cells");
}

// 6. Strip structure: interval counts stay at most 10 over 1000 random pairs.
bool criterion_6() {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> pos(-8.0, 8.0);
    std::uniform_real_distribution<double> level_log(std::log(0.05), std::log(2.0));
    ShiftedGrid g2 = ShiftedGrid::unshifted(2);
    int worst[4] = {0, 0, 0, 0};
    for (int trial = 0; trial < 1000; ++trial) {
        NPoly p = random_npoly(2, 1 + trial % 3, rng, true);
        const int d = std::max(1, p.degree());
        KStrip strip{DyadicCube{
            g2, 0,
            {static_cast<std::int64_t>(std::floor(pos(rng))),
             static_cast<std::int64_t>(std::floor(pos(rng)))}}};
        const double level = std::exp(level_log(rng));
        const int runs = strip_interval_count(p, level, strip, -64, 64);
        worst[d] = std::max(worst[d], runs);
    }
    const bool pass = worst[1] <= 10 && worst[2] <= 10 && worst[3] <= 10;
    return report(6, "strip-structure", pass,
                  "max runs by degree = " + std::to_string(worst[1]) + "/" +
                      std::to_string(worst[2]) + "/" + std::to_string(worst[3]));
}

// 7. Calderon-Zygmund exactness on 100 random draws.
bool criterion_7() {
    Grid g(5, 1536);
    std::mt19937_64 rng(7);
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction f = random_step_function(g, rng);
        const double A = 2.0 + (trial % 4);
        CZDecomposition dec = cz_decompose(f, A);
        bool ok = true;
        GridFunction sum = dec.good;
        for (int s = 0; s <= dec.max_bucket(); ++s) {
            GridFunction b = dec.bad_bucket(s);
            for (std::int64_t i = 0; i < g.cells; ++i) sum[i] += b[i];
        }
        for (std::int64_t i = 0; i < g.cells; ++i)
            if (std::abs(sum[i] - f[i]) > 1e-12) ok = false;
        std::vector<int> paint(g.cells, 0);
        for (const auto& J : dec.bad_cubes) {
            CellRange r = cell_range(g, J);
            for (std::int64_t i = r.first; i < r.last; ++i)
                if (paint[i]++) ok = false;
        }
        if (dec.good.norm_linf() > 2.0 * A * dec.base_average + 1e-12) ok = false;
        if (!ok) ++failures;
    }
    return report(7, "cz-exactness", failures == 0,
                  std::to_string(100 - failures) + "/100 decompositions exact");
}

// 8. Carleson packing finite and stable under grid refinement.
bool criterion_8() {
    json s = run_and_parse(R"({"experiment":"czd","seed":8,"samples":20})");
    const bool stable = invariant_pass(s, "czd_packing_stable");
    const bool finite = invariant_pass(s, "czd_packing_finite");
    const double drift = s["fitted"]["worst_packing_drift"].get<double>();
    const double maxp = s["fitted"]["max_packing_ratio"].get<double>();
    return report(8, "carleson-packing", stable && finite,
                  "max_packing=" + std::to_string(maxp) +
                      " drift=" + std::to_string(drift));
}

// 9. Constructed stopping families pass the sparseness validator with
// witnesses above 98 percent.
bool criterion_9() {
    Grid g(4, 768);
    std::mt19937_64 rng(9);
    double worst = 1.0;
    bool pass = true;
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction f = random_step_function(g, rng);
        GridFunction h = random_step_function(g, rng);
        StoppingFamily fam = build_stopping_family(f, h);
        SparseCheck check = verify_sparse(fam.to_collection());
        worst = std::min(worst, check.min_fraction);
        pass = pass && check.ok() && check.min_fraction >= 0.98;
    }
    return report(9, "sparseness-witness", pass,
                  "min witness fraction = " + std::to_string(worst));
}

// 10. Sparse domination shape across P in {0, xy, xy^2}.
bool criterion_10() {
    json s = run_and_parse(R"({"experiment":"sparse","seed":10,"samples":30})");
    bool pass = true;
    std::string detail;
    for (const auto& name : {"zero", "xy", "xy2"}) {
        const double excess =
            s["fitted"]["shape"][name]["envelope_excess"].get<double>();
        pass = pass && excess <= 4.0;
        detail += std::string(name) + ":excess=" + std::to_string(excess) + " ";
    }
    const double spread =
        s["fitted"]["shape"]["zero"]["ratio_spread"].get<double>();
    pass = pass && spread <= 4.0;
    detail += "zero:ratio_spread=" + std::to_string(spread);
    return report(10, "sparse-domination-shape", pass, detail);
}

// 11. Weighted inequalities keep a uniform shape across the weight sweep.
bool criterion_11() {
    json s = run_and_parse(R"({"experiment":"weights","seed":11})");
    bool pass = invariant_pass(s, "weights_weak_spread");
    std::string detail =
        "weak_spread=" + std::to_string(invariant_value(s, "weights_weak_spread"));
    for (const auto& p : {"1.5", "2", "3"}) {
        const std::string name = std::string("weights_strong_spread_p") + p;
        pass = pass && invariant_pass(s, name);
        detail += " p" + std::string(p) + "=" +
                  std::to_string(invariant_value(s, name));
    }
    return report(11, "weighted-shape", pass, detail);
}

// 12. Rademacher-Menshov gauge with a global constant; exact sqrt(N) Bessel
// constants on orthonormal families.
bool criterion_12() {
    json s = run_and_parse(
        R"({"experiment":"rm","seed":12,"families":200,"max_members":64})");
    const double c = s["fitted"]["c"].get<double>();
    const double exact = s["fitted"]["orthonormal_error"].get<double>();
    const bool pass = std::isfinite(c) && c > 0.0 && exact <= 1e-9;
    return report(12, "rademacher-menshov", pass,
                  "fitted C=" + std::to_string(c) +
                      " orthonormal_err=" + std::to_string(exact));
}

// 13. Fixed-scale operator sums decay in the scale.
bool criterion_13() {
    json s = run_and_parse(R"({"experiment":"simple-scales","seed":13,"samples":5})");
    const double eta = s["fitted"]["eta"].get<double>();
    const bool pass = eta > 0.0;
    std::string ratios;
    for (const auto& r : s["fitted"]["norm_ratio_per_k"])
        ratios += std::to_string(r.get<double>()) + " ";
    return report(13, "fixed-scale-decay", pass,
                  "eta=" + std::to_string(eta) + " ratios: " + ratios);
}

}  // namespace

int main(int argc, char** argv) {
    using CriterionFn = bool (*)();
    CriterionFn all[] = {criterion_1, criterion_2,  criterion_3,  criterion_4,
                         criterion_5, criterion_6,  criterion_7,  criterion_8,
                         criterion_9, criterion_10, criterion_11, criterion_12,
                         criterion_13};
    int failures = 0;
    if (argc > 1) {
        const int idx = std::atoi(argv[1]);
        if (idx < 1 || idx > 13) {
            std::fprintf(stderr, "usage: %s [criterion 1-13]\n", argv[0]);
            return 2;
        }
        failures += all[idx - 1]() ? 0 : 1;
    } else {
        for (CriterionFn fn : all) failures += fn() ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
