#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparselab/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sparselab: config-driven harmonic-analysis experiments"};
    std::string config_path;
    std::string out_dir = ".";
    long long seed = -1;
    int threads = 1;
    bool check_only = false;
    app.add_option("config", config_path, "experiment config (JSON)")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--threads", threads, "worker threads for sweep points")
        ->check(CLI::PositiveNumber);
    app.add_flag("--check-only", check_only, "validate the config and exit");
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(buf.str());
    } catch (const std::exception& e) {
        std::cerr << "config parse error: " << e.what() << "\n";
        return 2;
    }
    if (seed >= 0) cfg["seed"] = seed;
    const std::string effective = cfg.dump();

    if (check_only) {
        auto r = sparselab::check_config(effective);
        if (r.exit_code != 0) std::cerr << "invalid config: " << r.error << "\n";
        return r.exit_code;
    }

    auto r = sparselab::run_experiment(effective, threads);
    if (r.exit_code == 2) {
        std::cerr << "error: " << r.error << "\n";
        return 2;
    }
    const std::string name = cfg.value("experiment", "experiment");
    std::filesystem::create_directories(out_dir);
    const std::string csv_path = out_dir + "/" + name + ".csv";
    const std::string json_path = out_dir + "/" + name + "_summary.json";
    std::ofstream(csv_path) << r.csv;
    std::ofstream(json_path) << r.summary_json << "\n";
    std::cout << r.summary_json << "\n";
    std::cout << "wrote " << csv_path << " and " << json_path << "\n";
    return r.exit_code;
}
