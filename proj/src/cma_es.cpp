#include "cars/cma_es.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

#include "cars/errors.hpp"

namespace cars {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BestTracker {
    double value = std::numeric_limits<double>::infinity();
    VectorXd point;
    long long evals = 0;
    std::vector<std::pair<long long, double>> history;

    void offer(double f, const VectorXd& x) {
        ++evals;
        if (f < value) {
            value = f;
            point = x;
            history.emplace_back(evals, f);
        }
    }
};

double safe_eval(const ObjectiveFn& f, const VectorXd& x) {
    const double v = f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

// One CMA-ES run.  Returns true when it stopped on the stagnation criterion
// rather than the evaluation budget.
bool run_once(const ObjectiveFn& f, int n, int lambda, double sigma0, const VectorXd& mean0,
              long long eval_budget, double tol_fun, bool parallel, std::mt19937_64& rng,
              BestTracker& best) {
    const int mu = lambda / 2;
    VectorXd weights(mu);
    for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
    weights /= weights.sum();
    const double mu_eff = 1.0 / weights.squaredNorm();

    const double nd = static_cast<double>(n);
    const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
    const double d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
    const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
    const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
    const double c_mu =
        std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nd + 2.0) * (nd + 2.0) + mu_eff));
    const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

    VectorXd mean = mean0;
    double sigma = sigma0;
    MatrixXd cov = MatrixXd::Identity(n, n);
    VectorXd p_sigma = VectorXd::Zero(n);
    VectorXd p_c = VectorXd::Zero(n);
    MatrixXd eigvec = MatrixXd::Identity(n, n);
    VectorXd eigval_sqrt = VectorXd::Ones(n);

    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t hist_len = 10 + static_cast<std::size_t>(std::ceil(30.0 * nd / lambda));
    std::deque<double> recent_best;

    std::vector<VectorXd> ys(static_cast<std::size_t>(lambda));
    std::vector<VectorXd> xs(static_cast<std::size_t>(lambda));
    std::vector<double> fx(static_cast<std::size_t>(lambda));
    std::vector<int> order(static_cast<std::size_t>(lambda));

    long long used = 0;
    for (int generation = 0; used + lambda <= eval_budget; ++generation) {
        for (int i = 0; i < lambda; ++i) {
            VectorXd z(n);
            for (int d = 0; d < n; ++d) z[d] = normal(rng);
            VectorXd y = eigvec * (eigval_sqrt.asDiagonal() * z);
            ys[static_cast<std::size_t>(i)] = y;
            xs[static_cast<std::size_t>(i)] = mean + sigma * y;
        }

#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < lambda; ++i)
            fx[static_cast<std::size_t>(i)] = safe_eval(f, xs[static_cast<std::size_t>(i)]);

        for (int i = 0; i < lambda; ++i) best.offer(fx[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i)]);
        used += lambda;

        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&fx](int a, int b) { return fx[static_cast<std::size_t>(a)] < fx[static_cast<std::size_t>(b)]; });

        VectorXd y_w = VectorXd::Zero(n);
        for (int i = 0; i < mu; ++i) y_w += weights[i] * ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
        mean += sigma * y_w;

        // C^{-1/2} y_w through the cached eigendecomposition
        VectorXd c_inv_sqrt_yw = eigvec * (eigval_sqrt.cwiseInverse().asDiagonal() * (eigvec.transpose() * y_w));
        p_sigma = (1.0 - c_sigma) * p_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * c_inv_sqrt_yw;

        const double expected_decay = 1.0 - std::pow(1.0 - c_sigma, 2.0 * (generation + 1.0));
        const bool h_sigma =
            p_sigma.norm() / std::sqrt(expected_decay) < (1.4 + 2.0 / (nd + 1.0)) * chi_n;
        p_c = (1.0 - c_c) * p_c;
        if (h_sigma) p_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;

        MatrixXd rank_mu = MatrixXd::Zero(n, n);
        for (int i = 0; i < mu; ++i) {
            const VectorXd& y = ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
            rank_mu.noalias() += weights[i] * (y * y.transpose());
        }
        const double delta_h = h_sigma ? 0.0 : c_c * (2.0 - c_c);
        cov = (1.0 - c_1 - c_mu) * cov + c_1 * (p_c * p_c.transpose() + delta_h * cov) + c_mu * rank_mu;
        cov = 0.5 * (cov + cov.transpose()).eval();

        sigma *= std::exp((c_sigma / d_sigma) * (p_sigma.norm() / chi_n - 1.0));

        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
        if (eig.info() != Eigen::Success) throw NumericsError("cma_es: eigendecomposition failed");
        eigvec = eig.eigenvectors();
        VectorXd ev = eig.eigenvalues();
        const double floor_ev = std::max(ev.maxCoeff(), 1e-300) * 1e-20;
        for (int d = 0; d < n; ++d) ev[d] = std::max(ev[d], floor_ev);
        eigval_sqrt = ev.cwiseSqrt();

        // stagnation window on the per-generation best
        recent_best.push_back(fx[static_cast<std::size_t>(order[0])]);
        if (recent_best.size() > hist_len) recent_best.pop_front();
        if (recent_best.size() == hist_len) {
            const auto [lo, hi] = std::minmax_element(recent_best.begin(), recent_best.end());
            if (*hi - *lo < tol_fun) return true;
        }
        // degenerate step size: nothing left to explore
        if (sigma * eigval_sqrt.maxCoeff() < 1e-16 * std::max(1.0, mean.cwiseAbs().maxCoeff())) return true;
    }
    return false;
}

}  // namespace

CmaEsResult cma_es_minimize(const ObjectiveFn& objective, int dim, const CmaEsConfig& config,
                            const std::vector<std::vector<double>>& injected) {
    if (dim < 1) throw ConfigError("cma_es_minimize: dim must be >= 1");
    if (!(config.initial_sigma > 0.0)) throw ConfigError("cma_es_minimize: initial_sigma must be > 0");
    int lambda = config.population > 0 ? config.population
                                       : 4 + static_cast<int>(std::floor(3.0 * std::log(dim)));
    if (lambda < 4) throw ConfigError("cma_es_minimize: population must be >= 4");
    if (!config.initial_mean.empty() && static_cast<int>(config.initial_mean.size()) != dim)
        throw ConfigError("cma_es_minimize: initial_mean dimension mismatch");

    std::mt19937_64 rng(config.seed);
    BestTracker best;
    best.point = VectorXd::Zero(dim);

    VectorXd mean0 = VectorXd::Zero(dim);
    if (!config.initial_mean.empty())
        mean0 = Eigen::Map<const VectorXd>(config.initial_mean.data(), dim);

    // analytic candidates join the pool first and seed the starting mean
    VectorXd start = mean0;
    double start_value = std::numeric_limits<double>::infinity();
    for (const auto& cand : injected) {
        if (static_cast<int>(cand.size()) != dim)
            throw ConfigError("cma_es_minimize: injected candidate dimension mismatch");
        if (best.evals >= config.max_evals) break;
        const VectorXd x = Eigen::Map<const VectorXd>(cand.data(), dim);
        const double fv = safe_eval(objective, x);
        best.offer(fv, x);
        if (fv < start_value) {
            start_value = fv;
            start = x;
        }
    }

    bool converged = false;
    for (int run = 0; run <= config.restarts; ++run) {
        const long long remaining = config.max_evals - best.evals;
        if (remaining < lambda) break;
        const bool stagnated = run_once(objective, dim, lambda, config.initial_sigma, start, remaining,
                                        config.tol_fun, config.parallel_eval, rng, best);
        converged = converged || stagnated;
        if (!stagnated) break;  // budget exhausted
        lambda *= 2;
    }

    CmaEsResult result;
    result.best_point.assign(best.point.data(), best.point.data() + dim);
    result.best_value = best.value;
    result.evaluations = best.evals;
    result.converged = converged;
    result.history = std::move(best.history);
    result.seed = config.seed;
    return result;
}

}  // namespace cars
