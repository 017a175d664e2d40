#include "crbloc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crbloc/errors.hpp"

namespace crbloc {

namespace {

void check_index(const Scenario& s, std::size_t m) {
    if (m >= s.beacon_count()) {
        throw std::invalid_argument("beacon index out of range");
    }
}

}  // namespace

double distance(const Scenario& scenario, std::size_t m) {
    check_index(scenario, m);
    const double d = (scenario.target - scenario.beacons[m]).norm();
    if (d < kDegenerateDistance) {
        std::ostringstream oss;
        oss << "target coincides with beacon " << (m + 1);
        throw Error(ErrorCode::DegenerateGeometry, oss.str());
    }
    return d;
}

Eigen::VectorXd unit_direction(const Scenario& scenario, std::size_t m) {
    const double d = distance(scenario, m);
    return (scenario.target - scenario.beacons[m]) / d;
}

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> violations;
    auto add = [&violations](const std::string& msg) {
        violations.push_back(msg);
    };

    const int dim = s.dim();
    if (dim != 2 && dim != 3) {
        add("dimension must be 2 or 3");
        return violations;  // nothing else is meaningful
    }

    const std::size_t min_beacons = (dim == 2) ? 3 : 4;
    if (s.beacon_count() < min_beacons) {
        std::ostringstream oss;
        oss << "too few beacons: " << s.beacon_count() << " < " << min_beacons
            << " required for dim " << dim;
        add(oss.str());
    }

    for (std::size_t m = 0; m < s.beacons.size(); ++m) {
        if (s.beacons[m].size() != dim) {
            std::ostringstream oss;
            oss << "beacon " << (m + 1) << " has dimension "
                << s.beacons[m].size() << ", expected " << dim;
            add(oss.str());
            continue;
        }
        if (!s.beacons[m].allFinite()) {
            std::ostringstream oss;
            oss << "beacon " << (m + 1) << " has non-finite coordinates";
            add(oss.str());
        }
    }
    if (!s.target.allFinite()) {
        add("target has non-finite coordinates");
    }

    if (s.noise_std.size() != s.beacon_count()) {
        std::ostringstream oss;
        oss << "noise_std has " << s.noise_std.size() << " entries for "
            << s.beacon_count() << " beacons";
        add(oss.str());
    } else {
        for (std::size_t m = 0; m < s.noise_std.size(); ++m) {
            if (!(s.noise_std[m] > 0.0) || !std::isfinite(s.noise_std[m])) {
                std::ostringstream oss;
                oss << "non-positive noise std for beacon " << (m + 1);
                add(oss.str());
            }
        }
    }

    for (std::size_t m = 0; m < s.beacons.size(); ++m) {
        if (s.beacons[m].size() != dim || !s.beacons[m].allFinite() ||
            !s.target.allFinite()) {
            continue;
        }
        if ((s.target - s.beacons[m]).norm() < kDegenerateDistance) {
            std::ostringstream oss;
            oss << "target coincides with beacon " << (m + 1);
            add(oss.str());
        }
    }

    if (s.biased_count > s.beacon_count()) {
        add("biased_count exceeds the number of beacons");
    }
    if (s.bias_models.size() != s.biased_count) {
        std::ostringstream oss;
        oss << "bias_models has " << s.bias_models.size() << " entries for "
            << s.biased_count << " biased beacons";
        add(oss.str());
    }

    return violations;
}

void require_valid(const Scenario& scenario) {
    const auto violations = validate(scenario);
    if (violations.empty()) return;
    std::string msg = "invalid scenario:";
    for (const auto& v : violations) {
        msg += " ";
        msg += v;
        msg += ";";
    }
    throw Error(ErrorCode::InvalidScenario, msg);
}

Scenario make_scenario(std::vector<Point> beacons, Point target,
                       std::vector<double> noise_std,
                       const std::vector<std::size_t>& biased_indices,
                       std::vector<BiasModel> models) {
    if (biased_indices.size() != models.size()) {
        throw std::invalid_argument(
            "one bias model is required per biased index");
    }
    if (noise_std.size() != beacons.size()) {
        throw std::invalid_argument("one noise std is required per beacon");
    }
    std::vector<bool> biased(beacons.size(), false);
    for (std::size_t idx : biased_indices) {
        if (idx >= beacons.size()) {
            throw std::invalid_argument("biased index out of range");
        }
        if (biased[idx]) {
            throw std::invalid_argument("duplicate biased index");
        }
        biased[idx] = true;
    }

    // stable permutation: biased beacons first, in their given order
    std::vector<std::size_t> order;
    order.reserve(beacons.size());
    for (std::size_t idx : biased_indices) order.push_back(idx);
    for (std::size_t m = 0; m < beacons.size(); ++m) {
        if (!biased[m]) order.push_back(m);
    }

    Scenario s;
    s.target = std::move(target);
    s.biased_count = biased_indices.size();
    s.bias_models = std::move(models);
    s.beacons.reserve(beacons.size());
    s.noise_std.reserve(noise_std.size());
    for (std::size_t idx : order) {
        s.beacons.push_back(std::move(beacons[idx]));
        s.noise_std.push_back(noise_std[idx]);
    }
    return s;
}

}  // namespace crbloc
