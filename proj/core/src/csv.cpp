#include "crbloc/csv.hpp"

#include <cmath>
#include <cstdio>

namespace crbloc {

namespace {

std::string cell(double v) {
    return std::isfinite(v) ? format_number(v) : std::string();
}

std::string cell(const std::optional<double>& v) {
    return v ? cell(*v) : std::string();
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string sweep_csv(const std::vector<SweepRecord>& records,
                      bool include_mse) {
    std::string out =
        "delta,kappa_over_sigma,bound_exact,bound_approx,bound_discarded,"
        "bound_unbiased";
    if (include_mse) out += ",mse_informed,mse_joint,trials";
    out += ",status\n";
    for (const SweepRecord& rec : records) {
        out += format_number(rec.delta);
        out += ',';
        out += format_number(rec.kappa_over_sigma);
        out += ',';
        out += cell(rec.bound_exact);
        out += ',';
        out += cell(rec.bound_approx);
        out += ',';
        out += cell(rec.bound_discarded);
        out += ',';
        out += cell(rec.bound_unbiased);
        if (include_mse) {
            out += ',';
            out += cell(rec.mse_informed);
            out += ',';
            out += cell(rec.mse_joint);
            out += ',';
            out += std::to_string(rec.trials);
        }
        out += ',';
        out += rec.status;
        out += '\n';
    }
    return out;
}

std::string bound_csv(const CrbResult& result) {
    std::string header;
    std::string row;
    const std::size_t beacons = result.fim.coefficients.size();
    for (std::size_t m = 0; m < beacons; ++m) {
        header += "A_" + std::to_string(m + 1) + ",";
        row += format_number(result.fim.coefficients[m]);
        row += ',';
    }
    const Eigen::Index dim = result.crb.rows();
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            header += "crb_" + std::to_string(i + 1) + std::to_string(j + 1) +
                      ",";
            row += format_number(result.crb(i, j));
            row += ',';
        }
    }
    header += "mse_bound\n";
    row += format_number(result.mse_bound);
    row += '\n';
    return header + row;
}

}  // namespace crbloc
