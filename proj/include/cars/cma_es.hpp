#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cars {

// (mu/mu_w, lambda) covariance matrix adaptation evolution strategy with
// cumulative step-size control and rank-one plus rank-mu covariance updates.
// Deterministic for a fixed seed and configuration; candidate evaluations
// within one generation may run on multiple threads, so the objective must
// be thread-safe.

struct CmaEsConfig {
    int population = 0;          // 0 -> 4 + floor(3 ln n)
    double initial_sigma = 0.5;
    long long max_evals = 20000;  // total budget including restarts
    std::uint64_t seed = 1;
    int restarts = 0;            // extra runs with doubled population
    double tol_fun = 1e-12;      // stagnation window tolerance on f
    bool parallel_eval = true;
    std::vector<double> initial_mean;  // empty -> origin
};

struct CmaEsResult {
    std::vector<double> best_point;
    double best_value = 0.0;
    long long evaluations = 0;
    bool converged = false;  // a run reached tol_fun stagnation before the budget ran out
    std::vector<std::pair<long long, double>> history;  // (eval index, best so far)
    std::uint64_t seed = 0;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;

CmaEsResult cma_es_minimize(const ObjectiveFn& objective, int dim, const CmaEsConfig& config,
                            const std::vector<std::vector<double>>& injected = {});

}  // namespace cars
