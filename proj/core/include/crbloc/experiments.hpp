#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "crbloc/estimator.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/quadrature.hpp"

namespace crbloc {

struct MeasurementSet {
    std::vector<double> r;  // meters, one per beacon in canonical order
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
};

// One sweep grid point. Bound fields are NaN and optionals empty when the
// value is undefined or the row failed; status carries "ok", an
// "error:<code>" marker, or "invalid:estimator-failures".
struct SweepRecord {
    double delta = 0.0;
    double kappa_over_sigma = 0.0;
    double bound_exact = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> bound_approx;
    double bound_discarded = std::numeric_limits<double>::quiet_NaN();
    double bound_unbiased = std::numeric_limits<double>::quiet_NaN();
    std::optional<double> mse_informed;
    std::optional<double> mse_joint;
    long trials = 0;
    std::string status = "ok";

    // Monte Carlo bookkeeping; not serialized to CSV.
    std::optional<double> se_informed;
    std::optional<double> se_joint;
    long failures_informed = 0;
    long failures_joint = 0;

    bool ok() const { return status == "ok"; }
};

// Generator for one trial's substream. Distinct (base_seed, trial_index)
// pairs give independent streams, so any single trial reproduces in
// isolation and trial order never matters.
std::mt19937_64 trial_rng(std::uint64_t base_seed, std::uint64_t trial_index);

// r_m = d_m + eps_m (+ b_m for biased beacons). Draw order is fixed per
// beacon: noise first, then bias; this order is part of the determinism
// contract.
MeasurementSet sample_measurements(const Scenario& scenario,
                                   std::mt19937_64& rng);

// sample_measurements on the (base_seed, trial_index) substream, with the
// bookkeeping fields stamped.
MeasurementSet sample_trial(const Scenario& scenario, std::uint64_t base_seed,
                            std::uint64_t trial_index);

// Copy of the scenario with every biased beacon's prior replaced by the
// bin-profile family at the given spacing.
Scenario with_table_one_delta(const Scenario& scenario, double delta);

// For each spacing: exact, first-order (where kappa < sigma), discarded,
// and bias-free bounds. Per-row failures land in the row's status instead
// of aborting the sweep.
std::vector<SweepRecord> run_bound_sweep(const Scenario& scenario,
                                         const std::vector<double>& deltas,
                                         const QuadratureSpec& spec = {});

// Bound sweep plus Monte Carlo MSE of both estimators. Each trial draws a
// fresh measurement set (biases resampled every trial) and runs both
// estimators on it; estimator failures are counted, and a row turns invalid
// when more than 1% of its trials fail.
std::vector<SweepRecord> run_ml_mse(const Scenario& scenario,
                                    const std::vector<double>& deltas,
                                    long trials, std::uint64_t base_seed,
                                    const EstimatorConfig& config = {},
                                    const QuadratureSpec& spec = {});

}  // namespace crbloc
