#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "crbloc/bias_model.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/quadrature.hpp"

namespace crbloc {

// Axis-aligned search region, one entry per coordinate.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
};

// Per-measurement treatment flags: s[m] = 1 treats measurement m as
// unbiased, s[m] = 0 marginalizes its residual over the candidate bias
// prior.
using IndicatorVector = std::vector<std::uint8_t>;

struct EstimatorConfig {
    // Candidate locations are sought inside this box; defaults to the beacon
    // bounding box inflated by 20% of its span. The optimizer may leave the
    // box slightly, but a hard wall at 50% beyond it keeps iterates sane.
    std::optional<Box> search_box;
    int grid = 5;           // multi-start grid points per axis, >= 2
    double conv_tol = 1e-6; // simplex extent, meters
    int max_iters = 500;    // per simplex descent
    // Bias prior assumed for measurements flagged s_m = 0. Empty means:
    // each biased beacon keeps its own prior and every other beacon borrows
    // the first biased beacon's prior.
    std::vector<BiasModel> candidate_bias_pdfs;
};

struct EstimateResult {
    Point location;
    IndicatorVector indicators;
    double loglik = 0.0;
    int iterations = 0;     // simplex iterations summed over starts/branches
    bool converged = false; // the returned start met conv_tol
    bool ambiguous = false; // a near-equal optimum exists elsewhere
};

// Beacon bounding box inflated by 20% of its per-axis span (at least +-1 m
// on axes where all beacons coincide).
Box default_search_box(const Scenario& scenario);

// The scenario's actual membership: 0 for biased beacons, 1 for the rest.
IndicatorVector true_indicators(const Scenario& scenario);

// Candidate priors actually used for s_m = 0 terms; applies the defaulting
// rule described on EstimatorConfig. Empty when the scenario has no biased
// beacon and the config supplies nothing.
std::vector<BiasModel> resolve_candidates(const Scenario& scenario,
                                          const EstimatorConfig& config);

// One measurement's log-likelihood contribution at candidate location p.
// s_m = 1: Gaussian residual term. s_m = 0: log of the bias-marginalized
// density under the candidate prior; returns -infinity on density
// underflow (a vanishingly unlikely point, not an error).
double loglik_term(const Point& p, int s_m, double r_m, std::size_t m,
                   const Scenario& scenario, const EstimatorConfig& config,
                   const QuadratureSpec& spec = {});

// Sum of per-measurement terms.
double loglik(const Point& p, const IndicatorVector& s,
              const std::vector<double>& r, const Scenario& scenario,
              const EstimatorConfig& config, const QuadratureSpec& spec = {});

// Maximum-likelihood location with the indicator vector fixed to the
// scenario's true membership. Multi-start simplex descent; throws
// OptimizationFailureError when no start converges to a finite optimum.
EstimateResult ml_informed(const std::vector<double>& r,
                           const Scenario& scenario,
                           const EstimatorConfig& config = {},
                           const QuadratureSpec& spec = {});

// Joint maximum-likelihood over location and all 2^M indicator vectors.
// Requires M <= 16 (enumeration guard). Branch optimization failures
// degrade to that branch's best iterate; loglik ties within 1e-12 break
// toward fewer zero flags, then toward the earlier branch.
EstimateResult ml_joint(const std::vector<double>& r, const Scenario& scenario,
                        const EstimatorConfig& config = {},
                        const QuadratureSpec& spec = {});

}  // namespace crbloc
