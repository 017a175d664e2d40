#include "crbloc/crb.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "crbloc/errors.hpp"

namespace crbloc {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;
constexpr double kInvSqrt2 = 0.7071067811865475244;

double normal_pdf(double x, double sigma) {
    const double z = x / sigma;
    return kInvSqrt2Pi / sigma * std::exp(-0.5 * z * z);
}

// Standard normal CDF; erfc keeps the lower tail accurate.
double normal_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

// Flat-density bins admit exact marginals: integrating the Gaussian kernel
// against a constant over one bin is a CDF difference, and integrating the
// residual-weighted kernel telescopes to a density difference. Evaluating
// these directly keeps the likelihood hot path cheap and exact.
double step_profile_marginal(double t, double sigma,
                             std::span<const double> edges,
                             std::span<const double> density) {
    double total = 0.0;
    double prev = normal_cdf((t - edges[0]) / sigma);
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double next = normal_cdf((t - edges[i + 1]) / sigma);
        if (density[i] != 0.0) total += density[i] * (prev - next);
        prev = next;
    }
    return std::max(total, 0.0);
}

double step_profile_alpha_numerator(double t, double sigma,
                                    std::span<const double> edges,
                                    std::span<const double> density) {
    const double var = sigma * sigma;
    double total = 0.0;
    double prev = normal_pdf(t - edges[0], sigma);
    for (std::size_t i = 0; i < density.size(); ++i) {
        const double next = normal_pdf(t - edges[i + 1], sigma);
        if (density[i] != 0.0) total += density[i] * var * (next - prev);
        prev = next;
    }
    return total;
}

const BiasModel& model_for(const Scenario& s, std::size_t m) {
    if (m >= s.biased_count) {
        throw std::invalid_argument("beacon is not biased");
    }
    return s.bias_models[m];
}

double inverse_noise_variance(const Scenario& s, std::size_t m) {
    const double sigma = s.noise_std[m];
    return 1.0 / (sigma * sigma);
}

}  // namespace

const char* coeff_mode_name(CoeffMode mode) {
    switch (mode) {
        case CoeffMode::NumericExact: return "numeric";
        case CoeffMode::ClosedForm: return "closed";
        case CoeffMode::Approximate: return "approx";
        case CoeffMode::Discarded: return "discarded";
        case CoeffMode::Unbiased: return "unbiased";
    }
    return "unknown";
}

CoeffMode parse_coeff_mode(std::string_view name) {
    if (name == "numeric") return CoeffMode::NumericExact;
    if (name == "closed") return CoeffMode::ClosedForm;
    if (name == "approx") return CoeffMode::Approximate;
    if (name == "discarded") return CoeffMode::Discarded;
    if (name == "unbiased") return CoeffMode::Unbiased;
    throw Error(ErrorCode::ParseError,
                "unknown coefficient mode '" + std::string(name) +
                    "', expected numeric|closed|approx|discarded|unbiased");
}

namespace {

// Per-bin densities of a piecewise-constant prior, written into a caller
// buffer so the hot path stays allocation-free.
std::span<const double> bin_densities(const PiecewiseConstantBias& pc,
                                      std::vector<double>& scratch) {
    scratch.resize(pc.masses.size());
    for (std::size_t i = 0; i < pc.masses.size(); ++i) {
        scratch[i] = pc.masses[i] / (pc.edges[i + 1] - pc.edges[i]);
    }
    return scratch;
}

// Quadrature fallback for priors without an exact marginal. The prior
// support is clipped to t +- 8 sigma; outside that window the kernel mass
// is below the quadrature tolerance.
template <class Weight>
double prior_kernel_integral(double t, double sigma, const BiasModel& model,
                             const QuadratureSpec& spec, Weight&& weight) {
    const Interval sup = model.support();
    const double margin = kGaussianSupportSigmas * sigma;
    const double lo = std::max(sup.lo, t - margin);
    const double hi = std::min(sup.hi, t + margin);
    if (!(lo < hi)) return 0.0;
    auto f = [t, sigma, &model, &weight](double b) {
        return weight(t - b) * normal_pdf(t - b, sigma) * model.pdf(b);
    };
    return integrate(f, lo, hi, spec, model.quadrature_breakpoints()).value;
}

}  // namespace

double residual_marginal(double t, double sigma, const BiasModel& model,
                         const QuadratureSpec& spec) {
    if (const auto* pm = std::get_if<PointMassBias>(&model.variant())) {
        return normal_pdf(t - pm->value, sigma);
    }
    if (const auto* u = std::get_if<UniformBias>(&model.variant())) {
        const double edges[2] = {u->lo, u->hi};
        const double density[1] = {1.0 / (u->hi - u->lo)};
        return step_profile_marginal(t, sigma, edges, density);
    }
    if (const auto* pc = std::get_if<PiecewiseConstantBias>(&model.variant())) {
        thread_local std::vector<double> scratch;
        return step_profile_marginal(t, sigma, pc->edges,
                                     bin_densities(*pc, scratch));
    }
    return prior_kernel_integral(t, sigma, model, spec,
                                 [](double) { return 1.0; });
}

double residual_alpha_numerator(double t, double sigma, const BiasModel& model,
                                const QuadratureSpec& spec) {
    if (const auto* pm = std::get_if<PointMassBias>(&model.variant())) {
        return (t - pm->value) * normal_pdf(t - pm->value, sigma);
    }
    if (const auto* u = std::get_if<UniformBias>(&model.variant())) {
        const double edges[2] = {u->lo, u->hi};
        const double density[1] = {1.0 / (u->hi - u->lo)};
        return step_profile_alpha_numerator(t, sigma, edges, density);
    }
    if (const auto* pc = std::get_if<PiecewiseConstantBias>(&model.variant())) {
        thread_local std::vector<double> scratch;
        return step_profile_alpha_numerator(t, sigma, pc->edges,
                                            bin_densities(*pc, scratch));
    }
    return prior_kernel_integral(t, sigma, model, spec,
                                 [](double u) { return u; });
}

double conditional_pdf(double r, std::size_t m, double b,
                       const Scenario& scenario) {
    const double d = distance(scenario, m);
    return normal_pdf(r - d - b, scenario.noise_std[m]);
}

double marginal_pdf(double r, std::size_t m, const Scenario& scenario,
                    const QuadratureSpec& spec) {
    const BiasModel& model = model_for(scenario, m);
    const double d = distance(scenario, m);
    return residual_marginal(r - d, scenario.noise_std[m], model, spec);
}

double posterior_mean_alpha(double r, std::size_t m, const Scenario& scenario,
                            const QuadratureSpec& spec) {
    const BiasModel& model = model_for(scenario, m);
    const double d = distance(scenario, m);
    const double sigma = scenario.noise_std[m];
    const double t = r - d;
    const double den = residual_marginal(t, sigma, model, spec);
    if (den < kDensityFloor) {
        std::ostringstream oss;
        oss << "marginal density underflow at range " << r << " for beacon "
            << (m + 1);
        throw Error(ErrorCode::OutsideSupport, oss.str());
    }
    const double num = residual_alpha_numerator(t, sigma, model, spec);
    return num / den;
}

Eigen::VectorXd score(double r, std::size_t m, const Scenario& scenario,
                      const QuadratureSpec& spec) {
    const Eigen::VectorXd q = unit_direction(scenario, m);
    const double inv_var = inverse_noise_variance(scenario, m);
    if (scenario.is_biased(m)) {
        return inv_var * posterior_mean_alpha(r, m, scenario, spec) * q;
    }
    const double d = distance(scenario, m);
    return inv_var * (r - d) * q;
}

double coeff_numeric(std::size_t m, const Scenario& scenario,
                     const QuadratureSpec& spec) {
    const BiasModel& model = model_for(scenario, m);
    const double sigma = scenario.noise_std[m];
    const Interval sup = model.support();
    const double margin = kGaussianSupportSigmas * sigma;
    // Inner integrals run at 100x tighter relative tolerance so their error
    // stays invisible to the outer convergence test. The absolute floor is
    // left alone: near t = E[b] the alpha numerator cancels to rounding
    // scale, and an absolute target under the roundoff of an O(1) integrand
    // just bisects noise until max depth.
    QuadratureSpec inner = spec.tightened(100.0);
    inner.abs_tol = spec.abs_tol;
    auto integrand = [sigma, &model, &inner](double t) {
        const double den = residual_marginal(t, sigma, model, inner);
        if (den < kDensityFloor) return 0.0;
        const double num = residual_alpha_numerator(t, sigma, model, inner);
        return num * num / den;
    };
    // The marginal is smooth, but its curvature concentrates where the prior
    // has kinks; seeding cells there speeds convergence.
    const QuadratureResult outer =
        integrate(integrand, sup.lo - margin, sup.hi + margin, spec,
                  model.quadrature_breakpoints());
    const double inv_var = inverse_noise_variance(scenario, m);
    return inv_var * inv_var * outer.value;
}

double coeff_closed(std::size_t m, const Scenario& scenario) {
    const BiasModel& model = model_for(scenario, m);
    const double sigma = scenario.noise_std[m];
    if (model.is_point_mass()) {
        return 1.0 / (sigma * sigma);
    }
    if (const auto* g = std::get_if<GaussianBias>(&model.variant())) {
        return 1.0 / (sigma * sigma + g->std * g->std);
    }
    throw Error(ErrorCode::NoClosedForm,
                "no closed-form coefficient for this bias family; only "
                "point-mass and gaussian priors have one");
}

double coeff_approx(std::size_t m, const Scenario& scenario) {
    const BiasModel& model = model_for(scenario, m);
    const double sigma = scenario.noise_std[m];
    const double kappa = model.moments().std;
    if (!(kappa < sigma)) {
        std::ostringstream oss;
        oss << "first-order coefficient needs kappa < sigma, got kappa="
            << kappa << " sigma=" << sigma << " for beacon " << (m + 1);
        throw Error(ErrorCode::ApproximationDomain, oss.str());
    }
    const double ratio = kappa / sigma;
    return (1.0 - ratio * ratio) / (sigma * sigma);
}

std::vector<CoeffMode> broadcast_modes(const Scenario& scenario,
                                       CoeffMode biased_mode) {
    std::vector<CoeffMode> modes(scenario.beacon_count(), CoeffMode::Unbiased);
    std::fill_n(modes.begin(), scenario.biased_count, biased_mode);
    return modes;
}

Fim fim(const Scenario& scenario, const std::vector<CoeffMode>& modes,
        const QuadratureSpec& spec) {
    require_valid(scenario);
    if (modes.size() != scenario.beacon_count()) {
        throw std::invalid_argument("one coefficient mode per beacon required");
    }
    const int dim = scenario.dim();
    Fim result;
    result.matrix = Eigen::MatrixXd::Zero(dim, dim);
    result.coefficients.reserve(scenario.beacon_count());
    for (std::size_t m = 0; m < scenario.beacon_count(); ++m) {
        double c = 0.0;
        switch (modes[m]) {
            case CoeffMode::Discarded:
                c = 0.0;
                break;
            case CoeffMode::Unbiased:
                c = inverse_noise_variance(scenario, m);
                break;
            case CoeffMode::NumericExact:
                c = scenario.is_biased(m) ? coeff_numeric(m, scenario, spec)
                                          : inverse_noise_variance(scenario, m);
                break;
            case CoeffMode::ClosedForm:
                c = scenario.is_biased(m) ? coeff_closed(m, scenario)
                                          : inverse_noise_variance(scenario, m);
                break;
            case CoeffMode::Approximate:
                c = scenario.is_biased(m) ? coeff_approx(m, scenario)
                                          : inverse_noise_variance(scenario, m);
                break;
        }
        result.coefficients.push_back(c);
        if (c != 0.0) {
            const Eigen::VectorXd q = unit_direction(scenario, m);
            result.matrix.noalias() += c * q * q.transpose();
        }
    }
    return result;
}

Fim fim(const Scenario& scenario, CoeffMode biased_mode,
        const QuadratureSpec& spec) {
    return fim(scenario, broadcast_modes(scenario, biased_mode), spec);
}

Eigen::MatrixXd crb_from_fim(const Eigen::MatrixXd& info) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(info);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::UnobservableGeometry,
                    "eigendecomposition of the information matrix failed");
    }
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const double lo = lambda.minCoeff();
    const double hi = lambda.maxCoeff();
    if (!(lo > 0.0) || hi / lo > kConditionLimit) {
        std::ostringstream oss;
        oss << "information matrix is not invertible (eigenvalues in ["
            << lo << ", " << hi << "]); the geometry leaves a direction "
            << "unobserved";
        throw Error(ErrorCode::UnobservableGeometry, oss.str());
    }
    const Eigen::MatrixXd inv = solver.eigenvectors() *
                                lambda.cwiseInverse().asDiagonal() *
                                solver.eigenvectors().transpose();
    return 0.5 * (inv + inv.transpose());
}

CrbResult crb(const Scenario& scenario, const std::vector<CoeffMode>& modes,
              const QuadratureSpec& spec) {
    CrbResult result;
    result.fim = fim(scenario, modes, spec);
    result.crb = crb_from_fim(result.fim.matrix);
    result.mse_bound = result.crb.trace();
    result.modes = modes;
    return result;
}

CrbResult crb(const Scenario& scenario, CoeffMode biased_mode,
              const QuadratureSpec& spec) {
    return crb(scenario, broadcast_modes(scenario, biased_mode), spec);
}

}  // namespace crbloc
