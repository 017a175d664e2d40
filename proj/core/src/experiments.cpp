#include "crbloc/experiments.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include "crbloc/crb.hpp"
#include "crbloc/errors.hpp"
#include "crbloc/parallel.hpp"

namespace crbloc {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct MseSummary {
    long ok = 0;
    double mean = kNan;
    double se = kNan;
};

// Mean and standard error of the finite entries, accumulated in index order
// so the result does not depend on scheduling.
MseSummary summarize(const std::vector<double>& values) {
    MseSummary s;
    double sum = 0.0;
    for (double v : values) {
        if (std::isfinite(v)) {
            sum += v;
            ++s.ok;
        }
    }
    if (s.ok == 0) return s;
    s.mean = sum / static_cast<double>(s.ok);
    if (s.ok > 1) {
        double ss = 0.0;
        for (double v : values) {
            if (std::isfinite(v)) {
                const double d = v - s.mean;
                ss += d * d;
            }
        }
        const double var = ss / static_cast<double>(s.ok - 1);
        s.se = std::sqrt(var / static_cast<double>(s.ok));
    }
    return s;
}

SweepRecord bound_record(const Scenario& scenario, double delta,
                         const QuadratureSpec& spec) {
    SweepRecord rec;
    rec.delta = delta;
    try {
        const Scenario s = with_table_one_delta(scenario, delta);
        if (s.biased_count > 0) {
            rec.kappa_over_sigma =
                s.bias_models[0].moments().std / s.noise_std[0];
        }
        rec.bound_exact = crb(s, CoeffMode::NumericExact, spec).mse_bound;
        rec.bound_discarded = crb(s, CoeffMode::Discarded, spec).mse_bound;
        rec.bound_unbiased = crb(s, CoeffMode::Unbiased, spec).mse_bound;
        try {
            rec.bound_approx = crb(s, CoeffMode::Approximate, spec).mse_bound;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ApproximationDomain) throw;
            // kappa >= sigma: the first-order bound is undefined here
        }
    } catch (const Error& e) {
        rec.status = std::string("error:") + error_code_name(e.code());
    }
    return rec;
}

}  // namespace

std::mt19937_64 trial_rng(std::uint64_t base_seed, std::uint64_t trial_index) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(base_seed & 0xffffffffu),
        static_cast<std::uint32_t>(base_seed >> 32),
        static_cast<std::uint32_t>(trial_index & 0xffffffffu),
        static_cast<std::uint32_t>(trial_index >> 32)};
    return std::mt19937_64(seq);
}

MeasurementSet sample_measurements(const Scenario& scenario,
                                   std::mt19937_64& rng) {
    MeasurementSet ms;
    ms.r.reserve(scenario.beacon_count());
    for (std::size_t m = 0; m < scenario.beacon_count(); ++m) {
        const double d = distance(scenario, m);
        std::normal_distribution<double> noise(0.0, scenario.noise_std[m]);
        double r = d + noise(rng);
        if (scenario.is_biased(m)) {
            r += scenario.bias_models[m].sample(rng);
        }
        ms.r.push_back(r);
    }
    return ms;
}

MeasurementSet sample_trial(const Scenario& scenario, std::uint64_t base_seed,
                            std::uint64_t trial_index) {
    std::mt19937_64 rng = trial_rng(base_seed, trial_index);
    MeasurementSet ms = sample_measurements(scenario, rng);
    ms.trial_index = trial_index;
    ms.seed = base_seed;
    return ms;
}

Scenario with_table_one_delta(const Scenario& scenario, double delta) {
    Scenario out = scenario;
    for (std::size_t m = 0; m < out.biased_count; ++m) {
        out.bias_models[m] = table_one_pdf(delta);
    }
    return out;
}

std::vector<SweepRecord> run_bound_sweep(const Scenario& scenario,
                                         const std::vector<double>& deltas,
                                         const QuadratureSpec& spec) {
    std::vector<SweepRecord> records;
    records.reserve(deltas.size());
    for (double delta : deltas) {
        records.push_back(bound_record(scenario, delta, spec));
    }
    return records;
}

std::vector<SweepRecord> run_ml_mse(const Scenario& scenario,
                                    const std::vector<double>& deltas,
                                    long trials, std::uint64_t base_seed,
                                    const EstimatorConfig& config,
                                    const QuadratureSpec& spec) {
    if (trials < 1) {
        throw std::invalid_argument("at least one trial required");
    }
    std::vector<SweepRecord> records;
    records.reserve(deltas.size());
    for (double delta : deltas) {
        SweepRecord rec = bound_record(scenario, delta, spec);
        if (!rec.ok()) {
            records.push_back(std::move(rec));
            continue;
        }
        const Scenario s = with_table_one_delta(scenario, delta);
        const std::size_t n = static_cast<std::size_t>(trials);
        std::vector<double> sq_informed(n, kNan);
        std::vector<double> sq_joint(n, kNan);
        parallel_for(n, [&](std::size_t i) {
            const MeasurementSet ms =
                sample_trial(s, base_seed, static_cast<std::uint64_t>(i));
            try {
                const EstimateResult est = ml_informed(ms.r, s, config, spec);
                sq_informed[i] = (est.location - s.target).squaredNorm();
            } catch (const Error&) {
                // counted below; the trial keeps its NaN slot
            }
            try {
                const EstimateResult est = ml_joint(ms.r, s, config, spec);
                sq_joint[i] = (est.location - s.target).squaredNorm();
            } catch (const Error&) {
            }
        });
        const MseSummary informed = summarize(sq_informed);
        const MseSummary joint = summarize(sq_joint);
        rec.trials = trials;
        rec.failures_informed = trials - informed.ok;
        rec.failures_joint = trials - joint.ok;
        if (informed.ok > 0) {
            rec.mse_informed = informed.mean;
            rec.se_informed = informed.se;
        }
        if (joint.ok > 0) {
            rec.mse_joint = joint.mean;
            rec.se_joint = joint.se;
        }
        const double limit = 0.01 * static_cast<double>(trials);
        if (static_cast<double>(rec.failures_informed) > limit ||
            static_cast<double>(rec.failures_joint) > limit) {
            rec.status = "invalid:estimator-failures";
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace crbloc
