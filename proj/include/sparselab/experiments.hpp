#ifndef SPARSELAB_EXPERIMENTS_HPP
#define SPARSELAB_EXPERIMENTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sparselab {

// Config-driven experiment runner shared by the CLI and tests.
//
// Config is a JSON object:
//   {
//     "experiment": "vdc" | "sublevel" | "zset" | "ttstar" | "czd" |
//                   "sparse" | "weights" | "rm" | "simple-scales",
//     "grid": {"s0": 6, "cells": 6144},          // where applicable
//     "polynomial": {...BiPoly json...},          // where applicable
//     "sweeps": {...per-experiment ranges...},
//     "samples": 30,
//     "seed": 1
//   }
struct RunResult {
    int exit_code = 0;  // 0 ok, 1 invariant violation, 2 invalid config
    std::string csv;            // rows, schema per experiment
    std::string summary_json;   // fitted constants + invariant flags
    std::string error;          // set when exit_code != 0 and no summary
};

// Validates only; exit_code 2 plus message on bad config.
RunResult check_config(const std::string& config_json);

// Executes the experiment; deterministic for a fixed config (threads only
// change scheduling, not output bytes).
RunResult run_experiment(const std::string& config_json, int threads = 1);

// FNV-1a of the canonicalized config, embedded in every summary.
std::uint64_t config_hash(const std::string& config_json);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sparselab

#endif
