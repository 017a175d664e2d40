#include <cmath>
#include <random>
#include <vector>

#include "crbloc/crb.hpp"
#include "crbloc/estimator.hpp"
#include "crbloc/experiments.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace crbloc;
using crbloc::testing::square_scenario;
using crbloc::testing::unbiased_square;

namespace {

std::vector<double> exact_ranges(const Scenario& s) {
    std::vector<double> r(s.beacon_count());
    for (std::size_t m = 0; m < s.beacon_count(); ++m) {
        r[m] = distance(s, m);
    }
    return r;
}

}  // namespace

TEST_SUITE("estimators") {

TEST_CASE("default search box pads the beacon hull") {
    const Box box = default_search_box(square_scenario());
    CHECK(box.lo[0] == doctest::Approx(-2.0));
    CHECK(box.lo[1] == doctest::Approx(-2.0));
    CHECK(box.hi[0] == doctest::Approx(12.0));
    CHECK(box.hi[1] == doctest::Approx(12.0));
}

TEST_CASE("degenerate hull axes fall back to a fixed pad") {
    Scenario s = square_scenario();
    for (auto& b : s.beacons) b[1] = 3.0;  // all beacons on one line
    const Box box = default_search_box(s);
    CHECK(box.lo[1] == doctest::Approx(2.0));
    CHECK(box.hi[1] == doctest::Approx(4.0));
}

TEST_CASE("true indicators flag the biased beacons with zero") {
    const IndicatorVector s = true_indicators(square_scenario());
    REQUIRE(s.size() == 4);
    CHECK(s[0] == 0);
    CHECK(s[1] == 1);
    CHECK(s[2] == 1);
    CHECK(s[3] == 1);
}

TEST_CASE("candidate priors default to the first biased model") {
    const Scenario s = square_scenario();
    const EstimatorConfig config;
    const auto candidates = resolve_candidates(s, config);
    REQUIRE(candidates.size() == 4);
    for (const BiasModel& m : candidates) {
        const Interval sup = m.support();
        CHECK(sup.lo == doctest::Approx(0.1));
        CHECK(sup.hi == doctest::Approx(1.0));
    }

    EstimatorConfig with_own;
    with_own.candidate_bias_pdfs.assign(4, BiasModel::point_mass(0.3));
    CHECK(resolve_candidates(s, with_own)[2].is_point_mass());

    EstimatorConfig short_list;
    short_list.candidate_bias_pdfs.assign(2, BiasModel::point_mass(0.3));
    CHECK_THROWS_AS(resolve_candidates(s, short_list),
                    const std::invalid_argument&);

    CHECK(resolve_candidates(unbiased_square(), config).empty());
}

TEST_CASE("log-likelihood terms") {
    const Scenario s = square_scenario();
    const EstimatorConfig config;
    const double d0 = distance(s, 0);

    // unbiased treatment: plain Gaussian residual term
    const double g = loglik_term(s.target, 1, d0 + 0.4, 0, s, config);
    CHECK(g == doctest::Approx(-0.5 * std::log(2.0 * M_PI) - 0.08)
                   .epsilon(1e-12));

    // biased treatment: log of the marginalized residual density
    const double b = loglik_term(s.target, 0, d0 + 0.4, 0, s, config);
    CHECK(b == doctest::Approx(std::log(residual_marginal(0.4, 1.0,
                                                          s.bias_models[0])))
                   .epsilon(1e-12));

    // hopeless measurements underflow to -inf instead of throwing
    CHECK(loglik_term(s.target, 0, d0 + 500.0, 0, s, config) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("log-likelihood sums terms and validates sizes") {
    const Scenario s = square_scenario();
    const EstimatorConfig config;
    const std::vector<double> r = exact_ranges(s);
    const IndicatorVector ind = true_indicators(s);
    double expect = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
        expect += loglik_term(s.target, ind[m], r[m], m, s, config);
    }
    CHECK(loglik(s.target, ind, r, s, config) ==
          doctest::Approx(expect).epsilon(1e-12));

    CHECK_THROWS_AS(loglik(s.target, IndicatorVector{1, 1}, r, s, config),
                    const std::invalid_argument&);
    CHECK_THROWS_AS(loglik(s.target, ind, {1.0, 2.0}, s, config),
                    const std::invalid_argument&);
}

TEST_CASE("informed estimate recovers a noiseless target") {
    const Scenario s = unbiased_square();
    const std::vector<double> r = exact_ranges(s);
    const EstimateResult est = ml_informed(r, s);
    CHECK(est.converged);
    CHECK((est.location - s.target).norm() < 1e-4);
    CHECK(est.indicators == IndicatorVector{1, 1, 1, 1});
    CHECK(!est.ambiguous);
    CHECK(est.iterations > 0);
}

TEST_CASE("informed estimate beats the true location's likelihood") {
    const Scenario s = square_scenario(table_one_pdf(0.5));
    const EstimatorConfig config;
    const MeasurementSet set = sample_trial(s, 2026, 3);
    const EstimateResult est = ml_informed(set.r, s, config);
    CHECK(est.converged);
    const double at_truth =
        loglik(s.target, true_indicators(s), set.r, s, config);
    CHECK(est.loglik >= at_truth - 1e-9);
}

TEST_CASE("informed estimation is deterministic") {
    const Scenario s = square_scenario();
    const MeasurementSet set = sample_trial(s, 99, 0);
    const EstimateResult a = ml_informed(set.r, s);
    const EstimateResult b = ml_informed(set.r, s);
    CHECK(a.location == b.location);
    CHECK(a.loglik == b.loglik);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("mirror geometry raises the ambiguity flag") {
    // two beacons cannot separate a target from its mirror image
    Scenario s;
    s.beacons = {make_point({0.0, 0.0}), make_point({4.0, 0.0})};
    s.target = make_point({2.0, 1.5});
    s.noise_std = {1.0, 1.0};
    EstimatorConfig config;
    config.search_box = Box{make_point({-1.0, -4.0}), make_point({5.0, 4.0})};
    const std::vector<double> r = exact_ranges(s);
    const EstimateResult est = ml_informed(r, s, config);
    CHECK(est.ambiguous);
    CHECK(std::abs(est.location[0] - 2.0) < 1e-3);
    CHECK(std::abs(std::abs(est.location[1]) - 1.5) < 1e-3);
}

TEST_CASE("zero iteration budget is an optimization failure") {
    const Scenario s = unbiased_square();
    EstimatorConfig config;
    config.max_iters = 0;
    try {
        ml_informed(exact_ranges(s), s, config);
        FAIL("expected optimization-failure");
    } catch (const OptimizationFailureError& e) {
        CHECK(e.code() == ErrorCode::OptimizationFailure);
        CHECK(e.best_location().size() == 2);
    }
}

TEST_CASE("degenerate grid is rejected") {
    const Scenario s = unbiased_square();
    EstimatorConfig config;
    config.grid = 1;
    CHECK_THROWS_AS(ml_informed(exact_ranges(s), s, config),
                    const std::invalid_argument&);
}

TEST_CASE("estimates respect the hard wall around the box") {
    Scenario s = square_scenario();
    EstimatorConfig config;
    config.search_box = Box{make_point({0.0, 0.0}), make_point({10.0, 10.0})};
    const MeasurementSet set = sample_trial(s, 5, 1);
    const EstimateResult est = ml_informed(set.r, s, config);
    for (int k = 0; k < 2; ++k) {
        CHECK(est.location[k] >= -5.0);
        CHECK(est.location[k] <= 15.0);
    }
}

TEST_CASE("joint estimate keeps all measurements on clean data") {
    const Scenario s = unbiased_square();
    EstimatorConfig config;
    config.candidate_bias_pdfs.assign(4, BiasModel::point_mass(0.7));
    const std::vector<double> r = exact_ranges(s);
    const EstimateResult est = ml_joint(r, s, config);
    CHECK(est.indicators == IndicatorVector{1, 1, 1, 1});
    CHECK((est.location - s.target).norm() < 1e-4);
}

TEST_CASE("joint estimate never trails the informed one") {
    const Scenario s = square_scenario(table_one_pdf(0.4));
    for (std::uint64_t trial : {0ull, 1ull, 2ull}) {
        const MeasurementSet set = sample_trial(s, 31, trial);
        const EstimateResult informed = ml_informed(set.r, s);
        const EstimateResult joint = ml_joint(set.r, s);
        CHECK(joint.loglik >= informed.loglik - 1e-9);
    }
}

TEST_CASE("joint estimation needs candidates when nothing is biased") {
    const Scenario s = unbiased_square();
    CHECK_THROWS_AS(ml_joint(exact_ranges(s), s),
                    const std::invalid_argument&);
}

TEST_CASE("joint enumeration is capped") {
    Scenario s;
    const int count = 17;
    for (int m = 0; m < count; ++m) {
        const double angle = 2.0 * M_PI * m / count;
        s.beacons.push_back(
            make_point({10.0 * std::cos(angle), 10.0 * std::sin(angle)}));
    }
    s.target = make_point({1.0, 2.0});
    s.noise_std.assign(count, 1.0);
    std::vector<double> r(count, 10.0);
    try {
        ml_joint(r, s);
        FAIL("expected enumeration-too-large");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EnumerationTooLarge);
    }
}

TEST_CASE("measurement count must match the scenario") {
    const Scenario s = unbiased_square();
    CHECK_THROWS_AS(ml_informed({1.0, 2.0}, s), const std::invalid_argument&);
}

}  // TEST_SUITE
