#pragma once

#include <string>
#include <vector>

#include "crbloc/crb.hpp"
#include "crbloc/experiments.hpp"

namespace crbloc {

// 12 significant digits: round-trips every tolerance used by the bounds and
// sweeps while keeping files diff-friendly.
std::string format_number(double v);

// Sweep table, LF line endings. Optional columns are left empty where a
// value is undefined; include_mse adds the Monte Carlo columns.
std::string sweep_csv(const std::vector<SweepRecord>& records,
                      bool include_mse);

// Single-bound report: per-beacon coefficients A_1..A_M, CRB entries in
// row-major order, then the trace.
std::string bound_csv(const CrbResult& result);

}  // namespace crbloc
