#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace crbloc {

struct NelderMeadOptions {
    double conv_tol = 1e-6;    // simplex extent that counts as converged
    int max_iters = 500;
    double initial_step = 0.5; // edge length of the starting simplex
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double fx = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Downhill simplex minimizer with the classic reflection/expansion/
// contraction/shrink moves (coefficients 1, 2, 1/2, 1/2). Comparison-only
// handling of objective values keeps infinities usable as barriers. Fully
// deterministic: ties are broken by vertex index.
template <class F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opts = {}) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> xs;
    std::vector<double> fs;
    xs.reserve(n + 1);
    fs.reserve(n + 1);
    xs.push_back(x0);
    fs.push_back(f(x0));
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd v = x0;
        v[i] += opts.initial_step;
        xs.push_back(std::move(v));
        fs.push_back(f(xs.back()));
    }

    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), 0);

    NelderMeadResult result;
    int iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        std::stable_sort(order.begin(), order.end(),
                         [&fs](std::size_t a, std::size_t b) {
                             return fs[a] < fs[b];
                         });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n > 0 ? n - 1 : 0];

        double extent = 0.0;
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            extent = std::max(extent, (xs[i] - xs[best]).norm());
        }
        if (extent < opts.conv_tol) {
            result.converged = true;
            break;
        }

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            if (i != worst) centroid += xs[i];
        }
        centroid /= static_cast<double>(n);

        const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
        const double fr = f(reflected);
        if (fr < fs[best]) {
            const Eigen::VectorXd expanded =
                centroid + 2.0 * (reflected - centroid);
            const double fe = f(expanded);
            if (fe < fr) {
                xs[worst] = expanded;
                fs[worst] = fe;
            } else {
                xs[worst] = reflected;
                fs[worst] = fr;
            }
            continue;
        }
        if (fr < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = fr;
            continue;
        }
        if (fr < fs[worst]) {
            const Eigen::VectorXd contracted =
                centroid + 0.5 * (reflected - centroid);
            const double fc = f(contracted);
            if (fc <= fr) {
                xs[worst] = contracted;
                fs[worst] = fc;
                continue;
            }
        } else {
            const Eigen::VectorXd contracted =
                centroid + 0.5 * (xs[worst] - centroid);
            const double fc = f(contracted);
            if (fc < fs[worst]) {
                xs[worst] = contracted;
                fs[worst] = fc;
                continue;
            }
        }
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
            if (i == best) continue;
            xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
            fs[i] = f(xs[i]);
        }
    }

    const std::size_t best = *std::min_element(
        order.begin(), order.end(),
        [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    result.x = xs[best];
    result.fx = fs[best];
    result.iterations = iter;
    return result;
}

}  // namespace crbloc
