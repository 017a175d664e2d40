#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "crbloc/errors.hpp"

namespace crbloc {

/// Tolerances for the adaptive integrator. The defaults sit two orders of
/// magnitude below the tightest comparison made anywhere in the test suite,
/// so quadrature error never contaminates an oracle check.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 50;

    QuadratureSpec tightened(double factor) const {
        return QuadratureSpec{rel_tol / factor, abs_tol / factor, max_depth};
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

namespace detail {

// Kronrod-15 abscissae on [-1,1]; odd indices and the centre are the embedded
// Gauss-7 nodes.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Cell {
    double a;
    double b;
    double value;
    double err;
    int depth;
};

// Embedded Gauss-7/Kronrod-15 pair on [a,b]. The cell error is the plain
// difference between the two rules, which overestimates the Kronrod error.
template <class F>
inline void eval_cell(F& f, double a, double b, double& value, double& err) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(centre);
    if (!std::isfinite(fc)) {
        throw Error(ErrorCode::DomainError,
                    "integrand evaluated to a non-finite value");
    }
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(centre - dx);
        const double f2 = f(centre + dx);
        if (!std::isfinite(f1) || !std::isfinite(f2)) {
            throw Error(ErrorCode::DomainError,
                        "integrand evaluated to a non-finite value");
        }
        const double fsum = f1 + f2;
        resk += kWgk[i] * fsum;
        if (i & 1) {
            resg += kWg[i / 2] * fsum;
        }
    }
    value = resk * half;
    err = std::abs(resk - resg) * half;
}

inline constexpr std::size_t kMaxCells = 8192;

}  // namespace detail

/// Adaptive bisection with an embedded Gauss-7/Kronrod-15 pair per cell. The
/// worst cell (largest error estimate) is bisected until the summed estimate
/// meets max(rel_tol*|value|, abs_tol). Interior `breakpoints` become
/// mandatory initial subdivisions; pass the bin edges of any piecewise
/// integrand or convergence across the jumps is slow.
template <class F>
QuadratureResult integrate(F&& f, double a, double b,
                           const QuadratureSpec& spec = {},
                           std::span<const double> breakpoints = {}) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw Error(ErrorCode::DomainError,
                    "integration interval must satisfy a < b and be finite");
    }

    std::vector<detail::Cell> cells;
    cells.reserve(breakpoints.size() + 16);

    double prev = a;
    auto push_cell = [&](double lo, double hi) {
        detail::Cell c{lo, hi, 0.0, 0.0, 0};
        detail::eval_cell(f, lo, hi, c.value, c.err);
        cells.push_back(c);
    };
    for (double bp : breakpoints) {
        if (bp > prev && bp < b) {
            push_cell(prev, bp);
            prev = bp;
        }
    }
    push_cell(prev, b);

    for (;;) {
        double total = 0.0;
        double total_err = 0.0;
        std::size_t worst = 0;
        double worst_err = -1.0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            total += cells[i].value;
            total_err += cells[i].err;
            if (cells[i].err > worst_err) {
                worst_err = cells[i].err;
                worst = i;
            }
        }
        const double target =
            std::max(spec.rel_tol * std::abs(total), spec.abs_tol);
        if (total_err <= target) {
            return QuadratureResult{total, total_err};
        }
        if (cells[worst].depth >= spec.max_depth ||
            cells.size() >= detail::kMaxCells) {
            throw ConvergenceFailureError(
                "adaptive quadrature exhausted max depth before reaching "
                "tolerance",
                total, total_err);
        }

        const detail::Cell old = cells[worst];
        const double mid = 0.5 * (old.a + old.b);
        detail::Cell left{old.a, mid, 0.0, 0.0, old.depth + 1};
        detail::Cell right{mid, old.b, 0.0, 0.0, old.depth + 1};
        detail::eval_cell(f, left.a, left.b, left.value, left.err);
        detail::eval_cell(f, right.a, right.b, right.value, right.err);
        cells[worst] = left;
        cells.push_back(right);
    }
}

}  // namespace crbloc
