#include <doctest.h>

#include <cmath>
#include <span>
#include <vector>

#include "cars/cma_es.hpp"
#include "cars/errors.hpp"

using namespace cars;

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += (v - 0.7) * (v - 0.7);
    return s;
}

double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

}  // namespace

TEST_CASE("cma-es: sphere to high precision within the standard budget") {
    CmaEsConfig config;
    config.seed = 42;
    config.max_evals = 10000;
    config.tol_fun = 1e-14;
    const CmaEsResult result = cma_es_minimize(sphere, 10, config);
    CHECK(result.best_value < 1e-10);
    CHECK(result.evaluations <= 10000);
    for (double v : result.best_point) CHECK(v == doctest::Approx(0.7).epsilon(1e-4));
}

TEST_CASE("cma-es: rosenbrock with one restart") {
    CmaEsConfig config;
    config.seed = 7;
    config.max_evals = 60000;
    config.restarts = 1;
    config.tol_fun = 1e-14;
    const CmaEsResult result = cma_es_minimize(rosenbrock, 5, config);
    CHECK(result.best_value < 1e-6);
}

TEST_CASE("cma-es: identical seed gives a bit-identical run") {
    CmaEsConfig config;
    config.seed = 1234;
    config.max_evals = 3000;
    const CmaEsResult a = cma_es_minimize(sphere, 6, config);
    const CmaEsResult b = cma_es_minimize(sphere, 6, config);
    CHECK(a.best_value == b.best_value);
    CHECK(a.evaluations == b.evaluations);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].first == b.history[i].first);
        CHECK(a.history[i].second == b.history[i].second);
    }
    for (std::size_t i = 0; i < a.best_point.size(); ++i) CHECK(a.best_point[i] == b.best_point[i]);

    CmaEsConfig other = config;
    other.seed = 4321;
    const CmaEsResult c = cma_es_minimize(sphere, 6, other);
    CHECK(c.best_value != a.best_value);
}

TEST_CASE("cma-es: serial and parallel evaluation agree bitwise") {
    CmaEsConfig serial;
    serial.seed = 99;
    serial.max_evals = 2000;
    serial.parallel_eval = false;
    CmaEsConfig parallel = serial;
    parallel.parallel_eval = true;
    const CmaEsResult a = cma_es_minimize(rosenbrock, 4, serial);
    const CmaEsResult b = cma_es_minimize(rosenbrock, 4, parallel);
    CHECK(a.best_value == b.best_value);
    CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("cma-es: best-so-far trace is monotone nonincreasing") {
    CmaEsConfig config;
    config.seed = 5;
    config.max_evals = 5000;
    const CmaEsResult result = cma_es_minimize(rosenbrock, 6, config);
    REQUIRE(!result.history.empty());
    for (std::size_t i = 1; i < result.history.size(); ++i) {
        CHECK(result.history[i].second < result.history[i - 1].second);
        CHECK(result.history[i].first > result.history[i - 1].first);
    }
}

TEST_CASE("cma-es: injected candidates bound the result") {
    CmaEsConfig config;
    config.seed = 17;
    config.max_evals = 500;  // tiny budget: the injection must still hold
    const std::vector<double> good(8, 0.7);
    const CmaEsResult result = cma_es_minimize(sphere, 8, config, {good});
    CHECK(result.best_value <= sphere(good) + 1e-15);
    CHECK(result.best_value == 0.0);
}

TEST_CASE("cma-es: budget exhaustion reports not converged") {
    CmaEsConfig config;
    config.seed = 3;
    config.max_evals = 200;
    config.tol_fun = 0.0;  // unreachable
    const CmaEsResult result = cma_es_minimize(rosenbrock, 8, config);
    CHECK(!result.converged);

    CmaEsConfig generous = config;
    generous.max_evals = 50000;
    generous.tol_fun = 1e-12;
    CHECK(cma_es_minimize(sphere, 4, generous).converged);
}

TEST_CASE("cma-es: configuration validation") {
    CmaEsConfig config;
    CHECK_THROWS_AS(cma_es_minimize(sphere, 0, config), ConfigError);
    config.initial_sigma = 0.0;
    CHECK_THROWS_AS(cma_es_minimize(sphere, 4, config), ConfigError);
    config.initial_sigma = 0.5;
    config.population = 2;
    CHECK_THROWS_AS(cma_es_minimize(sphere, 4, config), ConfigError);
    config.population = 0;
    config.initial_mean = {1.0, 2.0};
    CHECK_THROWS_AS(cma_es_minimize(sphere, 4, config), ConfigError);
    config.initial_mean.clear();
    CHECK_THROWS_AS(cma_es_minimize(sphere, 4, config, {{1.0}}), ConfigError);
}

TEST_CASE("cma-es: non-finite objective values are quarantined") {
    CmaEsConfig config;
    config.seed = 8;
    config.max_evals = 4000;
    const auto spiky = [](std::span<const double> x) {
        if (x[0] > 0.69 && x[0] < 0.71) return std::nan("");
        return sphere(x);
    };
    const CmaEsResult result = cma_es_minimize(spiky, 3, config);
    CHECK(std::isfinite(result.best_value));
    CHECK(result.best_value < 1e-3);
}
