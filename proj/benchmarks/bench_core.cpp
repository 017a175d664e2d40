#include <benchmark/benchmark.h>

#include "crbloc/crbloc.hpp"

namespace {

using namespace crbloc;

Scenario square_scenario(BiasModel model) {
    Scenario s;
    s.beacons = {make_point({0.0, 0.0}), make_point({10.0, 0.0}),
                 make_point({10.0, 10.0}), make_point({0.0, 10.0})};
    s.target = make_point({3.0, 4.0});
    s.noise_std = {1.0, 1.0, 1.0, 1.0};
    s.biased_count = 1;
    s.bias_models.push_back(std::move(model));
    return s;
}

void bm_residual_marginal_profile(benchmark::State& state) {
    const BiasModel model = table_one_pdf(0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual_marginal(0.7, 1.0, model));
    }
}
BENCHMARK(bm_residual_marginal_profile);

void bm_residual_marginal_gaussian(benchmark::State& state) {
    const BiasModel model = BiasModel::gaussian(0.5, 0.4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(residual_marginal(0.7, 1.0, model));
    }
}
BENCHMARK(bm_residual_marginal_gaussian);

void bm_coeff_numeric_profile(benchmark::State& state) {
    const Scenario s = square_scenario(table_one_pdf(0.3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coeff_numeric(0, s));
    }
}
BENCHMARK(bm_coeff_numeric_profile);

void bm_coeff_numeric_gaussian(benchmark::State& state) {
    const Scenario s = square_scenario(BiasModel::gaussian(0.5, 0.4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(coeff_numeric(0, s));
    }
}
BENCHMARK(bm_coeff_numeric_gaussian);

void bm_crb_exact(benchmark::State& state) {
    const Scenario s = square_scenario(table_one_pdf(0.3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(crb(s, CoeffMode::NumericExact));
    }
}
BENCHMARK(bm_crb_exact);

void bm_loglik(benchmark::State& state) {
    const Scenario s = square_scenario(table_one_pdf(0.3));
    const MeasurementSet ms = sample_trial(s, 1, 0);
    const IndicatorVector ind = true_indicators(s);
    const EstimatorConfig config;
    const Point p = make_point({3.2, 3.8});
    for (auto _ : state) {
        benchmark::DoNotOptimize(loglik(p, ind, ms.r, s, config));
    }
}
BENCHMARK(bm_loglik);

void bm_ml_informed_trial(benchmark::State& state) {
    const Scenario s = square_scenario(table_one_pdf(0.3));
    const MeasurementSet ms = sample_trial(s, 1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ml_informed(ms.r, s));
    }
}
BENCHMARK(bm_ml_informed_trial);

void bm_ml_joint_trial(benchmark::State& state) {
    const Scenario s = square_scenario(table_one_pdf(0.3));
    const MeasurementSet ms = sample_trial(s, 1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ml_joint(ms.r, s));
    }
}
BENCHMARK(bm_ml_joint_trial);

}  // namespace

BENCHMARK_MAIN();
