#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "crbloc/bias_model.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/quadrature.hpp"

namespace crbloc {

// Densities below this floor are treated as zero mass. Ratios formed from
// smaller values are numerically meaningless, so evaluation points whose
// marginal density underflows the floor are reported as outside support.
inline constexpr double kDensityFloor = 1e-300;

// Information matrices with a worse condition number than this are rejected
// as unobservable instead of being inverted into garbage bounds.
inline constexpr double kConditionLimit = 1e12;

// How each beacon's Fisher coefficient is obtained.
//   NumericExact: nested quadrature over the bias prior.
//   ClosedForm:   analytic coefficient; only point-mass and Gaussian priors
//                 have one.
//   Approximate:  first-order small-spread formula, requires kappa < sigma.
//   Discarded:    coefficient forced to 0 (measurement thrown away).
//   Unbiased:     coefficient forced to 1/sigma^2 (bias known and removed).
enum class CoeffMode {
    NumericExact,
    ClosedForm,
    Approximate,
    Discarded,
    Unbiased,
};

// Kebab-case name used by the CLI and CSV output.
const char* coeff_mode_name(CoeffMode mode);

// Inverse of coeff_mode_name; throws Error(ParseError) on unknown names.
CoeffMode parse_coeff_mode(std::string_view name);

// Fisher information matrix together with the per-beacon coefficients that
// produced it. coefficients[m] is A_m for biased beacons and 1/sigma_m^2 for
// unbiased ones (0 where a beacon was discarded).
struct Fim {
    Eigen::MatrixXd matrix;
    std::vector<double> coefficients;
};

struct CrbResult {
    Eigen::MatrixXd crb;
    double mse_bound = 0.0;
    Fim fim;
    std::vector<CoeffMode> modes;
};

// Density primitives in the range-residual domain, t = r - d. Keeping these
// free of geometry lets the estimators reuse them per candidate position.

// p(t) = integral of N(t - b; 0, sigma^2) * prior(b) db. Point-mass,
// uniform, and piecewise-constant priors evaluate exactly (the last two via
// error-function bin sums); other priors integrate by quadrature over the
// prior support clipped to t +- 8 sigma.
double residual_marginal(double t, double sigma, const BiasModel& model,
                         const QuadratureSpec& spec = {});

// integral of (t - b) * N(t - b; 0, sigma^2) * prior(b) db, the numerator
// of the posterior residual mean. Same clipping as residual_marginal.
double residual_alpha_numerator(double t, double sigma, const BiasModel& model,
                                const QuadratureSpec& spec = {});

// Gaussian density of the range r given the bias value b for beacon m.
// Pass b = 0 for unbiased beacons.
double conditional_pdf(double r, std::size_t m, double b,
                       const Scenario& scenario);

// Marginal range density for biased beacon m, the bias integrated out
// against its prior.
double marginal_pdf(double r, std::size_t m, const Scenario& scenario,
                    const QuadratureSpec& spec = {});

// Posterior mean of the range residual r - d_m - b_m given the observed r,
// in meters. Throws Error(OutsideSupport) when the marginal density
// underflows kDensityFloor.
double posterior_mean_alpha(double r, std::size_t m, const Scenario& scenario,
                            const QuadratureSpec& spec = {});

// Gradient of the log range density with respect to the target position:
// sigma^{-2} * alpha_m(r) * q_m for biased beacons and
// sigma^{-2} * (r - d_m) * q_m for unbiased ones.
Eigen::VectorXd score(double r, std::size_t m, const Scenario& scenario,
                      const QuadratureSpec& spec = {});

// Fisher coefficient A_m = sigma^{-4} * E[alpha_m(r)^2] for biased beacon m,
// evaluated by quadrature over r. The outer integral runs over
// [d_m + support_lo - 8 sigma, d_m + support_hi + 8 sigma]; the inner
// integrals run at 100x tighter relative tolerance (same absolute floor) so
// inner error cannot alias as outer convergence.
double coeff_numeric(std::size_t m, const Scenario& scenario,
                     const QuadratureSpec& spec = {});

// Closed-form coefficient: 1/sigma^2 for point-mass priors and
// 1/(sigma^2 + kappa^2) for Gaussian priors. Other priors throw
// Error(NoClosedForm).
double coeff_closed(std::size_t m, const Scenario& scenario);

// First-order approximation sigma^{-2} * (1 - (kappa/sigma)^2). Only valid
// for kappa < sigma; larger spreads throw Error(ApproximationDomain) rather
// than clamping, since a clamped zero would masquerade as a discarded
// measurement.
double coeff_approx(std::size_t m, const Scenario& scenario);

// Per-beacon mode vector with `biased_mode` on every biased beacon and
// Unbiased on the rest. This is what the CLI's --mode flag expands to: the
// named treatment applies to the biased measurements only.
std::vector<CoeffMode> broadcast_modes(const Scenario& scenario,
                                       CoeffMode biased_mode);

// J = sum_m c_m * q_m * q_m^T with c_m selected by modes[m].
Fim fim(const Scenario& scenario, const std::vector<CoeffMode>& modes,
        const QuadratureSpec& spec = {});
Fim fim(const Scenario& scenario, CoeffMode biased_mode,
        const QuadratureSpec& spec = {});

// Inverts a symmetric information matrix. Throws
// Error(UnobservableGeometry) when the matrix is singular or its condition
// number exceeds kConditionLimit.
Eigen::MatrixXd crb_from_fim(const Eigen::MatrixXd& info);

// Bound on the position error covariance: crb = fim^{-1},
// mse_bound = trace(crb).
CrbResult crb(const Scenario& scenario, const std::vector<CoeffMode>& modes,
              const QuadratureSpec& spec = {});
CrbResult crb(const Scenario& scenario, CoeffMode biased_mode,
              const QuadratureSpec& spec = {});

}  // namespace crbloc
