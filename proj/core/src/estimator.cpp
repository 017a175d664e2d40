#include "crbloc/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "crbloc/crb.hpp"
#include "crbloc/errors.hpp"
#include "crbloc/nelder_mead.hpp"

namespace crbloc {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Two optima whose log-likelihoods differ by less than this (relative)
// count as an ambiguity.
constexpr double kAmbiguityTol = 1e-9;

// Indicator branches tying within this absolute log-likelihood window are
// resolved toward fewer zero flags.
constexpr double kBranchTieTol = 1e-12;

double gauss_log_term(double resid, double sigma) {
    const double z = resid / sigma;
    return -0.5 * std::log(kTwoPi * sigma * sigma) - 0.5 * z * z;
}

void check_inputs(const std::vector<double>& r, const Scenario& scenario) {
    if (scenario.beacon_count() == 0) {
        throw std::invalid_argument("scenario has no beacons");
    }
    if (r.size() != scenario.beacon_count()) {
        throw std::invalid_argument("one measurement per beacon required");
    }
    if (scenario.noise_std.size() != scenario.beacon_count()) {
        throw std::invalid_argument("one noise std per beacon required");
    }
    for (double sigma : scenario.noise_std) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw std::invalid_argument("noise stds must be positive");
        }
    }
    for (double v : r) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("measurements must be finite");
        }
    }
}

void check_box(const Box& box, int dim) {
    if (box.lo.size() != dim || box.hi.size() != dim) {
        throw std::invalid_argument("search box dimension mismatch");
    }
    for (int i = 0; i < dim; ++i) {
        if (!(box.lo[i] < box.hi[i]) || !std::isfinite(box.lo[i]) ||
            !std::isfinite(box.hi[i])) {
            throw std::invalid_argument("search box must be a nonempty box");
        }
    }
}

double loglik_impl(const Eigen::VectorXd& p, const IndicatorVector& s,
                   const std::vector<double>& r, const Scenario& scenario,
                   const std::vector<BiasModel>& candidates,
                   const QuadratureSpec& spec) {
    double total = 0.0;
    for (std::size_t m = 0; m < scenario.beacon_count(); ++m) {
        const double sigma = scenario.noise_std[m];
        const double d = (p - scenario.beacons[m]).norm();
        const double t = r[m] - d;
        if (s[m]) {
            total += gauss_log_term(t, sigma);
            continue;
        }
        if (m >= candidates.size()) {
            std::ostringstream oss;
            oss << "no candidate bias prior for beacon " << (m + 1);
            throw std::invalid_argument(oss.str());
        }
        const double v = residual_marginal(t, sigma, candidates[m], spec);
        if (v < kDensityFloor) return -kInf;
        total += std::log(v);
    }
    return total;
}

std::vector<Eigen::VectorXd> grid_starts(const Box& box, int g) {
    const int dim = static_cast<int>(box.lo.size());
    std::vector<int> digit(dim, 0);
    std::vector<Eigen::VectorXd> starts;
    while (true) {
        Eigen::VectorXd p(dim);
        for (int i = 0; i < dim; ++i) {
            p[i] = box.lo[i] +
                   digit[i] * (box.hi[i] - box.lo[i]) / (g - 1);
        }
        starts.push_back(std::move(p));
        int axis = 0;
        while (axis < dim && ++digit[axis] == g) {
            digit[axis] = 0;
            ++axis;
        }
        if (axis == dim) break;
    }
    return starts;
}

struct SearchOutcome {
    Eigen::VectorXd location;
    double loglik = -kInf;
    int iterations = 0;
    bool converged = false;
    bool ambiguous = false;
    bool any_success = false;
};

// Multi-start descent: every grid point is scored once, then the best
// spatially distinct dim+1 points get a full simplex polish. Scoring all
// starts but polishing few keeps the cost flat without losing basins.
template <class Obj>
SearchOutcome multistart_maximize(Obj&& negloglik, const Box& box,
                                  const EstimatorConfig& config) {
    if (config.grid < 2) {
        throw std::invalid_argument("grid must be at least 2 points per axis");
    }
    const int dim = static_cast<int>(box.lo.size());
    const std::vector<Eigen::VectorXd> starts = grid_starts(box, config.grid);
    std::vector<double> value(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        value[i] = negloglik(starts[i]);
    }
    std::vector<std::size_t> order(starts.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&value](std::size_t a, std::size_t b) {
                         return value[a] < value[b];
                     });

    const double diag = (box.hi - box.lo).norm();
    const double min_sep = 0.1 * diag;
    const std::size_t polish_count =
        std::min<std::size_t>(static_cast<std::size_t>(dim) + 1,
                              starts.size());
    std::vector<std::size_t> chosen;
    for (std::size_t i : order) {
        if (chosen.size() == polish_count) break;
        bool distinct = true;
        for (std::size_t c : chosen) {
            if ((starts[i] - starts[c]).norm() <= min_sep) {
                distinct = false;
                break;
            }
        }
        if (distinct) chosen.push_back(i);
    }
    for (std::size_t i : order) {
        if (chosen.size() == polish_count) break;
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
            chosen.push_back(i);
        }
    }

    NelderMeadOptions opts;
    opts.conv_tol = config.conv_tol;
    opts.max_iters = config.max_iters;
    opts.initial_step = 0.05 * diag;

    std::vector<NelderMeadResult> runs;
    runs.reserve(chosen.size());
    SearchOutcome out;
    std::size_t best = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
        runs.push_back(nelder_mead(negloglik, starts[chosen[k]], opts));
        const NelderMeadResult& nm = runs.back();
        out.iterations += nm.iterations;
        if (nm.converged && std::isfinite(nm.fx)) out.any_success = true;
        if (k == 0 || nm.fx < runs[best].fx) best = k;
    }
    out.location = runs[best].x;
    out.loglik = -runs[best].fx;
    out.converged = runs[best].converged && std::isfinite(runs[best].fx);
    for (std::size_t k = 0; k < runs.size(); ++k) {
        if (k == best || !std::isfinite(runs[k].fx)) continue;
        const double gap = std::abs(runs[k].fx - runs[best].fx);
        if (gap <= kAmbiguityTol * std::max(1.0, std::abs(runs[best].fx)) &&
            (runs[k].x - runs[best].x).norm() > 100.0 * config.conv_tol) {
            out.ambiguous = true;
            break;
        }
    }
    return out;
}

// Hard wall half a box span beyond the search box: keeps stray simplex
// moves from wandering off to flat likelihood plateaus.
struct Wall {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    explicit Wall(const Box& box)
        : lo(box.lo - 0.5 * (box.hi - box.lo)),
          hi(box.hi + 0.5 * (box.hi - box.lo)) {}

    bool inside(const Eigen::VectorXd& p) const {
        for (int i = 0; i < p.size(); ++i) {
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        }
        return true;
    }
};

Box resolve_box(const Scenario& scenario, const EstimatorConfig& config) {
    Box box = config.search_box ? *config.search_box
                                : default_search_box(scenario);
    check_box(box, scenario.dim());
    return box;
}

}  // namespace

Box default_search_box(const Scenario& scenario) {
    if (scenario.beacons.empty()) {
        throw std::invalid_argument("scenario has no beacons");
    }
    const int dim = scenario.dim();
    Eigen::VectorXd lo = scenario.beacons[0];
    Eigen::VectorXd hi = scenario.beacons[0];
    for (const Point& b : scenario.beacons) {
        lo = lo.cwiseMin(b);
        hi = hi.cwiseMax(b);
    }
    for (int i = 0; i < dim; ++i) {
        const double span = hi[i] - lo[i];
        const double pad = span < 1e-9 ? 1.0 : 0.2 * span;
        lo[i] -= pad;
        hi[i] += pad;
    }
    return Box{std::move(lo), std::move(hi)};
}

IndicatorVector true_indicators(const Scenario& scenario) {
    IndicatorVector s(scenario.beacon_count(), 1);
    std::fill_n(s.begin(), scenario.biased_count, 0);
    return s;
}

std::vector<BiasModel> resolve_candidates(const Scenario& scenario,
                                          const EstimatorConfig& config) {
    if (!config.candidate_bias_pdfs.empty()) {
        if (config.candidate_bias_pdfs.size() != scenario.beacon_count()) {
            throw std::invalid_argument(
                "one candidate bias prior per beacon required");
        }
        return config.candidate_bias_pdfs;
    }
    if (scenario.biased_count == 0) return {};
    std::vector<BiasModel> out;
    out.reserve(scenario.beacon_count());
    for (std::size_t m = 0; m < scenario.beacon_count(); ++m) {
        out.push_back(scenario.is_biased(m) ? scenario.bias_models[m]
                                            : scenario.bias_models[0]);
    }
    return out;
}

double loglik_term(const Point& p, int s_m, double r_m, std::size_t m,
                   const Scenario& scenario, const EstimatorConfig& config,
                   const QuadratureSpec& spec) {
    if (m >= scenario.beacon_count()) {
        throw std::invalid_argument("beacon index out of range");
    }
    const double sigma = scenario.noise_std[m];
    const double d = (p - scenario.beacons[m]).norm();
    const double t = r_m - d;
    if (s_m) return gauss_log_term(t, sigma);
    const std::vector<BiasModel> candidates =
        resolve_candidates(scenario, config);
    if (m >= candidates.size()) {
        std::ostringstream oss;
        oss << "no candidate bias prior for beacon " << (m + 1);
        throw std::invalid_argument(oss.str());
    }
    const double v = residual_marginal(t, sigma, candidates[m], spec);
    return v < kDensityFloor ? -kInf : std::log(v);
}

double loglik(const Point& p, const IndicatorVector& s,
              const std::vector<double>& r, const Scenario& scenario,
              const EstimatorConfig& config, const QuadratureSpec& spec) {
    check_inputs(r, scenario);
    if (s.size() != scenario.beacon_count()) {
        throw std::invalid_argument("one indicator per beacon required");
    }
    return loglik_impl(p, s, r, scenario,
                       resolve_candidates(scenario, config), spec);
}

EstimateResult ml_informed(const std::vector<double>& r,
                           const Scenario& scenario,
                           const EstimatorConfig& config,
                           const QuadratureSpec& spec) {
    check_inputs(r, scenario);
    const std::vector<BiasModel> candidates =
        resolve_candidates(scenario, config);
    const IndicatorVector s = true_indicators(scenario);
    const Box box = resolve_box(scenario, config);
    const Wall wall(box);
    auto objective = [&](const Eigen::VectorXd& p) {
        if (!wall.inside(p)) return kInf;
        return -loglik_impl(p, s, r, scenario, candidates, spec);
    };
    SearchOutcome out = multistart_maximize(objective, box, config);
    if (!out.any_success) {
        std::vector<double> loc(out.location.data(),
                                out.location.data() + out.location.size());
        throw OptimizationFailureError(
            "no start converged to a finite likelihood optimum", std::move(loc),
            out.loglik);
    }
    EstimateResult result;
    result.location = out.location;
    result.indicators = s;
    result.loglik = out.loglik;
    result.iterations = out.iterations;
    result.converged = out.converged;
    result.ambiguous = out.ambiguous;
    return result;
}

EstimateResult ml_joint(const std::vector<double>& r, const Scenario& scenario,
                        const EstimatorConfig& config,
                        const QuadratureSpec& spec) {
    check_inputs(r, scenario);
    const std::size_t count = scenario.beacon_count();
    if (count > 16) {
        std::ostringstream oss;
        oss << "joint estimation enumerates 2^M indicator vectors; M = "
            << count << " exceeds the limit of 16";
        throw Error(ErrorCode::EnumerationTooLarge, oss.str());
    }
    const std::vector<BiasModel> candidates =
        resolve_candidates(scenario, config);
    if (candidates.size() != count) {
        throw std::invalid_argument(
            "joint estimation needs a candidate bias prior for every beacon");
    }
    const Box box = resolve_box(scenario, config);
    const Wall wall(box);

    SearchOutcome best;
    std::uint32_t best_mask = 0;
    int best_zeros = 0;
    bool have_best = false;
    int total_iterations = 0;
    const std::uint32_t mask_end = std::uint32_t{1} << count;
    for (std::uint32_t mask = 0; mask < mask_end; ++mask) {
        IndicatorVector s(count);
        for (std::size_t m = 0; m < count; ++m) {
            s[m] = static_cast<std::uint8_t>((mask >> m) & 1u);
        }
        auto objective = [&](const Eigen::VectorXd& p) {
            if (!wall.inside(p)) return kInf;
            return -loglik_impl(p, s, r, scenario, candidates, spec);
        };
        SearchOutcome out = multistart_maximize(objective, box, config);
        total_iterations += out.iterations;
        const int zeros =
            static_cast<int>(count) - std::popcount(mask);
        const bool take = !have_best ||
                          out.loglik > best.loglik + kBranchTieTol ||
                          (std::abs(out.loglik - best.loglik) <=
                               kBranchTieTol &&
                           zeros < best_zeros);
        if (take) {
            best = std::move(out);
            best_mask = mask;
            best_zeros = zeros;
            have_best = true;
        }
    }

    EstimateResult result;
    result.location = best.location;
    result.indicators.resize(count);
    for (std::size_t m = 0; m < count; ++m) {
        result.indicators[m] =
            static_cast<std::uint8_t>((best_mask >> m) & 1u);
    }
    result.loglik = best.loglik;
    result.iterations = total_iterations;
    result.converged = best.converged;
    result.ambiguous = best.ambiguous;
    return result;
}

}  // namespace crbloc
