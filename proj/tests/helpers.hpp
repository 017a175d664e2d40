#pragma once

#include <algorithm>
#include <cmath>

#include "crbloc/crbloc.hpp"

namespace crbloc::testing {

// The bundled square deployment: beacons on a 10 m square, target at (3,4),
// unit noise everywhere, beacon 1 biased. Mirrors scenarios/default.json.
inline Scenario square_scenario(BiasModel model = table_one_pdf(0.1)) {
    Scenario s;
    s.beacons = {make_point({0.0, 0.0}), make_point({10.0, 0.0}),
                 make_point({10.0, 10.0}), make_point({0.0, 10.0})};
    s.target = make_point({3.0, 4.0});
    s.noise_std = {1.0, 1.0, 1.0, 1.0};
    s.biased_count = 1;
    s.bias_models.push_back(std::move(model));
    return s;
}

inline Scenario unbiased_square() {
    Scenario s = square_scenario();
    s.biased_count = 0;
    s.bias_models.clear();
    return s;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace crbloc::testing
