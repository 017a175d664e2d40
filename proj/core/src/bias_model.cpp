#include "crbloc/bias_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crbloc/errors.hpp"

namespace crbloc {

namespace {

constexpr double kMassSumTolerance = 1e-9;

void check_finite(double x, const char* what) {
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::InvalidModel,
                    std::string("bias model parameter is not finite: ") + what);
    }
}

}  // namespace

BiasModel BiasModel::point_mass(double value) {
    check_finite(value, "point mass value");
    return BiasModel(PointMassBias{value});
}

BiasModel BiasModel::gaussian(double mean, double std) {
    check_finite(mean, "gaussian mean");
    check_finite(std, "gaussian std");
    if (!(std > 0.0)) {
        throw Error(ErrorCode::InvalidModel, "gaussian bias std must be > 0");
    }
    return BiasModel(GaussianBias{mean, std});
}

BiasModel BiasModel::uniform(double lo, double hi) {
    check_finite(lo, "uniform lo");
    check_finite(hi, "uniform hi");
    if (!(hi > lo)) {
        throw Error(ErrorCode::InvalidModel, "uniform bias needs hi > lo");
    }
    return BiasModel(UniformBias{lo, hi});
}

BiasModel BiasModel::piecewise_constant(std::vector<double> edges,
                                        std::vector<double> masses) {
    if (edges.size() < 2 || masses.size() + 1 != edges.size()) {
        throw Error(ErrorCode::InvalidModel,
                    "piecewise-constant bias needs K+1 edges for K masses");
    }
    for (double e : edges) check_finite(e, "piecewise edge");
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) {
            throw Error(ErrorCode::InvalidModel,
                        "piecewise-constant edges must be strictly increasing");
        }
    }
    double sum = 0.0;
    for (double p : masses) {
        check_finite(p, "piecewise mass");
        if (p < 0.0) {
            throw Error(ErrorCode::InvalidModel,
                        "piecewise-constant masses must be nonnegative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kMassSumTolerance) {
        throw Error(ErrorCode::InvalidModel,
                    "piecewise-constant masses must sum to 1");
    }
    PiecewiseConstantBias pc{std::move(edges), std::move(masses), {}};
    pc.cdf.resize(pc.masses.size());
    std::partial_sum(pc.masses.begin(), pc.masses.end(), pc.cdf.begin());
    pc.cdf.back() = 1.0;
    return BiasModel(std::move(pc));
}

double BiasModel::pdf(double b) const {
    return std::visit(
        [b](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointMassBias>) {
                throw Error(ErrorCode::UnsupportedOperation,
                            "a point-mass bias has no finite density; "
                            "dispatch it analytically");
            } else if constexpr (std::is_same_v<T, GaussianBias>) {
                const double z = (b - m.mean) / m.std;
                return std::exp(-0.5 * z * z) /
                       (m.std * std::sqrt(2.0 * M_PI));
            } else if constexpr (std::is_same_v<T, UniformBias>) {
                return (b >= m.lo && b <= m.hi) ? 1.0 / (m.hi - m.lo) : 0.0;
            } else {
                // bin i covers (edges[i], edges[i+1]]
                if (b <= m.edges.front() || b > m.edges.back()) return 0.0;
                const auto it =
                    std::lower_bound(m.edges.begin(), m.edges.end(), b);
                const std::size_t i =
                    static_cast<std::size_t>(it - m.edges.begin()) - 1;
                return m.masses[i] / (m.edges[i + 1] - m.edges[i]);
            }
        },
        v_);
}

Moments BiasModel::moments() const {
    return std::visit(
        [](const auto& m) -> Moments {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointMassBias>) {
                return Moments{m.value, 0.0};
            } else if constexpr (std::is_same_v<T, GaussianBias>) {
                return Moments{m.mean, m.std};
            } else if constexpr (std::is_same_v<T, UniformBias>) {
                return Moments{0.5 * (m.lo + m.hi),
                               (m.hi - m.lo) / std::sqrt(12.0)};
            } else {
                // mixture of uniforms: mean from bin midpoints, variance from
                // the law of total variance
                double mean = 0.0;
                double second = 0.0;
                for (std::size_t i = 0; i < m.masses.size(); ++i) {
                    const double mid = 0.5 * (m.edges[i] + m.edges[i + 1]);
                    const double w = m.edges[i + 1] - m.edges[i];
                    mean += m.masses[i] * mid;
                    second += m.masses[i] * (mid * mid + w * w / 12.0);
                }
                const double var = std::max(0.0, second - mean * mean);
                return Moments{mean, std::sqrt(var)};
            }
        },
        v_);
}

Interval BiasModel::support() const {
    return std::visit(
        [](const auto& m) -> Interval {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointMassBias>) {
                return Interval{m.value, m.value};
            } else if constexpr (std::is_same_v<T, GaussianBias>) {
                const double half = kGaussianSupportSigmas * m.std;
                return Interval{m.mean - half, m.mean + half};
            } else if constexpr (std::is_same_v<T, UniformBias>) {
                return Interval{m.lo, m.hi};
            } else {
                return Interval{m.edges.front(), m.edges.back()};
            }
        },
        v_);
}

double BiasModel::sample(std::mt19937_64& rng) const {
    return std::visit(
        [&rng](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PointMassBias>) {
                return m.value;
            } else if constexpr (std::is_same_v<T, GaussianBias>) {
                std::normal_distribution<double> dist(m.mean, m.std);
                return dist(rng);
            } else if constexpr (std::is_same_v<T, UniformBias>) {
                std::uniform_real_distribution<double> dist(m.lo, m.hi);
                return dist(rng);
            } else {
                std::uniform_real_distribution<double> dist(0.0, 1.0);
                const double u = dist(rng);
                const auto it =
                    std::lower_bound(m.cdf.begin(), m.cdf.end(), u);
                const std::size_t i = std::min(
                    static_cast<std::size_t>(it - m.cdf.begin()),
                    m.masses.size() - 1);
                const double below = (i == 0) ? 0.0 : m.cdf[i - 1];
                const double frac =
                    (m.masses[i] > 0.0) ? (u - below) / m.masses[i] : 0.0;
                return m.edges[i] + frac * (m.edges[i + 1] - m.edges[i]);
            }
        },
        v_);
}

std::span<const double> BiasModel::quadrature_breakpoints() const {
    if (const auto* pc = std::get_if<PiecewiseConstantBias>(&v_)) {
        return {pc->edges.data(), pc->edges.size()};
    }
    return {};
}

BiasModel table_one_pdf(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw Error(ErrorCode::InvalidModel, "bin width delta must be > 0");
    }
    static constexpr double kMasses[9] = {0.12, 0.03, 0.31, 0.12, 0.24,
                                          0.12, 0.03, 0.0,  0.03};
    std::vector<double> edges(10);
    for (int i = 0; i < 10; ++i) {
        edges[static_cast<std::size_t>(i)] = 0.1 + i * delta;
    }
    return BiasModel::piecewise_constant(
        std::move(edges), std::vector<double>(std::begin(kMasses),
                                              std::end(kMasses)));
}

}  // namespace crbloc
