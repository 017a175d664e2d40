#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crbloc/crb.hpp"
#include "crbloc/csv.hpp"
#include "crbloc/errors.hpp"
#include "crbloc/experiments.hpp"
#include "crbloc/geometry.hpp"
#include "crbloc/scenario_io.hpp"

namespace {

using namespace crbloc;

// Accepts "a,b,c" lists and "start:step:end" ranges (end inclusive).
std::vector<double> parse_deltas(const std::string& text) {
    std::vector<double> out;
    auto parse_one = [](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError,
                        "cannot parse delta value '" + s + "'");
        }
    };
    if (text.find(':') != std::string::npos) {
        std::istringstream is(text);
        std::string part;
        std::vector<double> parts;
        while (std::getline(is, part, ':')) parts.push_back(parse_one(part));
        if (parts.size() != 3) {
            throw Error(ErrorCode::ParseError,
                        "ranges take the form start:step:end");
        }
        const double start = parts[0], step = parts[1], end = parts[2];
        if (!(step > 0.0) || end < start) {
            throw Error(ErrorCode::ParseError,
                        "range needs step > 0 and end >= start");
        }
        const long count =
            static_cast<long>(std::floor((end - start) / step + 1e-6)) + 1;
        for (long i = 0; i < count; ++i) {
            out.push_back(start + static_cast<double>(i) * step);
        }
    } else {
        std::istringstream is(text);
        std::string part;
        while (std::getline(is, part, ',')) out.push_back(parse_one(part));
    }
    if (out.empty()) {
        throw Error(ErrorCode::ParseError, "empty delta list");
    }
    for (double v : out) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::ParseError, "deltas must be positive");
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << content) || !os.flush()) {
        throw std::runtime_error("cannot write output file '" + path + "'");
    }
}

int report_rows(const std::vector<SweepRecord>& records) {
    long bad = 0;
    for (const SweepRecord& rec : records) {
        if (!rec.ok()) ++bad;
    }
    if (bad > 0) {
        std::cerr << "error[sweep-rows]: " << bad << " of " << records.size()
                  << " sweep rows failed; see the status column\n";
        return 1;
    }
    return 0;
}

int cmd_validate(const std::string& path) {
    const ScenarioBundle bundle = load_scenario(path);
    const std::vector<std::string> violations = validate(bundle.scenario);
    if (violations.empty()) {
        std::cout << "ok\n";
        return 0;
    }
    for (const std::string& v : violations) std::cout << v << "\n";
    return 1;
}

int cmd_bound(const std::string& path, const std::string& mode_name,
              const std::string& out_path) {
    const CoeffMode mode = parse_coeff_mode(mode_name);
    const ScenarioBundle bundle = load_scenario(path);
    require_valid(bundle.scenario);
    const CrbResult result = crb(bundle.scenario, mode, bundle.quadrature);
    if (!out_path.empty()) write_file(out_path, bound_csv(result));
    std::cout << format_number(result.mse_bound) << "\n";
    return 0;
}

int cmd_sweep(const std::string& path, const std::string& deltas_text,
              const std::string& out_path) {
    const ScenarioBundle bundle = load_scenario(path);
    require_valid(bundle.scenario);
    const std::vector<double> deltas = parse_deltas(deltas_text);
    const std::vector<SweepRecord> records =
        run_bound_sweep(bundle.scenario, deltas, bundle.quadrature);
    const std::string csv = sweep_csv(records, false);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
    }
    return report_rows(records);
}

int cmd_ml_mse(const std::string& path, const std::string& deltas_text,
               long trials, std::uint64_t seed, const std::string& out_path) {
    const ScenarioBundle bundle = load_scenario(path);
    require_valid(bundle.scenario);
    const std::vector<double> deltas = parse_deltas(deltas_text);
    const std::vector<SweepRecord> records =
        run_ml_mse(bundle.scenario, deltas, trials, seed, bundle.estimator,
                   bundle.quadrature);
    const std::string csv = sweep_csv(records, true);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(out_path, csv);
    }
    return report_rows(records);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Range-localization error bounds under biased measurements"};
    app.require_subcommand(1);

    std::string path;
    std::string mode = "numeric";
    std::string deltas = "0.1:0.1:1.0";
    std::string out_path;
    long trials = 1000;
    std::uint64_t seed = 1;

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check a scenario file");
    validate_cmd->add_option("path", path, "scenario JSON file")->required();

    CLI::App* bound_cmd =
        app.add_subcommand("bound", "Compute one bound for a scenario");
    bound_cmd->add_option("path", path, "scenario JSON file")->required();
    bound_cmd->add_option("--mode", mode,
                          "numeric|closed|approx|discarded|unbiased");
    bound_cmd->add_option("--out", out_path, "CSV output file");

    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Bound sweep over the bin-profile spacing");
    sweep_cmd->add_option("path", path, "scenario JSON file")->required();
    sweep_cmd->add_option("--deltas", deltas, "list a,b,c or start:step:end");
    sweep_cmd->add_option("--out", out_path, "CSV output file");

    CLI::App* ml_cmd = app.add_subcommand(
        "ml-mse", "Monte Carlo estimator MSE sweep with bounds");
    ml_cmd->add_option("path", path, "scenario JSON file")->required();
    ml_cmd->add_option("--deltas", deltas, "list a,b,c or start:step:end");
    ml_cmd->add_option("--trials", trials, "trials per delta")
        ->check(CLI::PositiveNumber);
    ml_cmd->add_option("--seed", seed, "base RNG seed");
    ml_cmd->add_option("--out", out_path, "CSV output file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return cmd_validate(path);
        if (bound_cmd->parsed()) return cmd_bound(path, mode, out_path);
        if (sweep_cmd->parsed()) return cmd_sweep(path, deltas, out_path);
        if (ml_cmd->parsed()) {
            return cmd_ml_mse(path, deltas, trials, seed, out_path);
        }
    } catch (const crbloc::Error& e) {
        std::cerr << "error[" << crbloc::error_code_name(e.code())
                  << "]: " << e.what() << "\n";
        return e.code() == crbloc::ErrorCode::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error[internal]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
