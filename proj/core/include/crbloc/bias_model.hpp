#pragma once

#include <random>
#include <span>
#include <variant>
#include <vector>

namespace crbloc {

// Bias prior variants. All lengths are in meters.

struct PointMassBias {
    double value;
};

struct GaussianBias {
    double mean;
    double std;
};

struct UniformBias {
    double lo;
    double hi;
};

struct PiecewiseConstantBias {
    std::vector<double> edges;   // strictly increasing, size K+1
    std::vector<double> masses;  // nonnegative, sum to 1, size K
    std::vector<double> cdf;     // cumulative masses, size K (precomputed)
};

struct Moments {
    double mean;
    double std;
};

struct Interval {
    double lo;
    double hi;
};

/// Gaussian priors are treated as supported on mean +/- 8 std for quadrature
/// purposes; the truncated tail mass is below 1e-15. Sampling stays exact.
inline constexpr double kGaussianSupportSigmas = 8.0;

/// Prior PDF of one range bias, with exact moments, support bounds, point
/// evaluation and sampling. Immutable after construction; every operation is
/// const and safe to call concurrently (sample mutates only the caller's rng).
class BiasModel {
  public:
    using Variant = std::variant<PointMassBias, GaussianBias, UniformBias,
                                 PiecewiseConstantBias>;

    static BiasModel point_mass(double value);
    static BiasModel gaussian(double mean, double std);
    static BiasModel uniform(double lo, double hi);
    static BiasModel piecewise_constant(std::vector<double> edges,
                                        std::vector<double> masses);

    /// Density at b, zero outside the support. Piecewise bins are half-open
    /// on the left: bin i covers (edges[i], edges[i+1]].
    /// Throws UnsupportedOperation for a point mass, which has no finite
    /// density; callers dispatch that variant analytically.
    double pdf(double b) const;

    /// Exact closed-form mean and standard deviation.
    Moments moments() const;

    /// Interval outside which the density is zero or negligible.
    Interval support() const;

    /// One draw distributed per the model. Piecewise-constant draws use the
    /// inverse CDF over bins; Gaussian draws are untruncated.
    double sample(std::mt19937_64& rng) const;

    /// Discontinuity locations to hand to the quadrature engine as mandatory
    /// subdivisions. Empty for the smooth variants.
    std::span<const double> quadrature_breakpoints() const;

    bool is_point_mass() const {
        return std::holds_alternative<PointMassBias>(v_);
    }

    const Variant& variant() const { return v_; }

  private:
    explicit BiasModel(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// The measured bias histogram family: ten bin edges 0.1 + i*delta for
/// i = 0..9 and the fixed per-bin masses
/// (0.12, 0.03, 0.31, 0.12, 0.24, 0.12, 0.03, 0, 0.03).
/// Its mean is 0.1 + 3.49*delta and its standard deviation 1.8257*delta.
BiasModel table_one_pdf(double delta);

}  // namespace crbloc
