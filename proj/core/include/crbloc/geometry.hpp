#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "crbloc/bias_model.hpp"

namespace crbloc {

/// Planar/Cartesian coordinates in meters, dim 2 or 3.
using Point = Eigen::VectorXd;

inline Point make_point(std::initializer_list<double> coords) {
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index i = 0;
    for (double c : coords) p[i++] = c;
    return p;
}

/// Distances below this are treated as a coincident target/beacon pair.
inline constexpr double kDegenerateDistance = 1e-9;

/// One localization problem: fixed beacons, one target, per-beacon range
/// noise, and bias priors attached to the first `biased_count` beacons.
/// Beacon indices are 0-based throughout the API; human-readable output is
/// 1-based. Immutable value type; all operations on it are pure.
struct Scenario {
    std::vector<Point> beacons;
    Point target;
    std::vector<double> noise_std;       // sigma_m > 0, meters
    std::size_t biased_count = 0;        // first biased_count beacons are biased
    std::vector<BiasModel> bias_models;  // size biased_count

    int dim() const { return static_cast<int>(target.size()); }
    std::size_t beacon_count() const { return beacons.size(); }
    bool is_biased(std::size_t m) const { return m < biased_count; }
};

/// Euclidean distance between the target and beacon m.
/// Throws DegenerateGeometry when they coincide.
double distance(const Scenario& scenario, std::size_t m);

/// Unit vector from beacon m toward the target.
Eigen::VectorXd unit_direction(const Scenario& scenario, std::size_t m);

/// Every violated scenario invariant, as human-readable reasons.
/// Valid iff the returned list is empty.
std::vector<std::string> validate(const Scenario& scenario);

/// Throws InvalidScenario listing all violations; no-op when valid.
void require_valid(const Scenario& scenario);

/// Builds a Scenario from an arbitrary biased subset by reordering beacons so
/// the biased ones occupy the leading indices (stable within each group).
/// `biased_indices` are 0-based positions into `beacons`; `models[i]` is the
/// prior for `biased_indices[i]`.
Scenario make_scenario(std::vector<Point> beacons, Point target,
                       std::vector<double> noise_std,
                       const std::vector<std::size_t>& biased_indices,
                       std::vector<BiasModel> models);

}  // namespace crbloc
