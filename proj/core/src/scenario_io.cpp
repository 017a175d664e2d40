#include "crbloc/scenario_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crbloc/errors.hpp"

namespace crbloc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::ParseError, message);
}

void reject_unknown(const json& obj,
                    std::initializer_list<const char*> allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail("unknown key '" + it.key() + "' in " + where);
        }
    }
}

double as_number(const json& v, const std::string& what) {
    if (!v.is_number()) fail(what + " must be a number");
    return v.get<double>();
}

std::vector<double> as_number_array(const json& v, const std::string& what) {
    if (!v.is_array()) fail(what + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& e : v) out.push_back(as_number(e, what + " entry"));
    return out;
}

Eigen::VectorXd as_point(const json& v, int dim, const std::string& what) {
    if (!v.is_array() || static_cast<int>(v.size()) != dim) {
        std::ostringstream oss;
        oss << what << " must be an array of " << dim << " numbers";
        fail(oss.str());
    }
    Eigen::VectorXd p(dim);
    for (int i = 0; i < dim; ++i) p[i] = as_number(v[i], what + " entry");
    return p;
}

const json& require_key(const json& obj, const char* key,
                        const std::string& where) {
    if (!obj.contains(key)) {
        fail(where + " is missing '" + key + "'");
    }
    return obj.at(key);
}

BiasModel parse_model(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where + " must be an object");
    const json& type = require_key(v, "type", where);
    if (!type.is_string()) fail(where + " 'type' must be a string");
    const std::string t = type.get<std::string>();
    if (t == "point_mass") {
        reject_unknown(v, {"type", "value"}, where);
        return BiasModel::point_mass(
            as_number(require_key(v, "value", where), where + " 'value'"));
    }
    if (t == "gaussian") {
        reject_unknown(v, {"type", "mean", "std"}, where);
        return BiasModel::gaussian(
            as_number(require_key(v, "mean", where), where + " 'mean'"),
            as_number(require_key(v, "std", where), where + " 'std'"));
    }
    if (t == "uniform") {
        reject_unknown(v, {"type", "lo", "hi"}, where);
        return BiasModel::uniform(
            as_number(require_key(v, "lo", where), where + " 'lo'"),
            as_number(require_key(v, "hi", where), where + " 'hi'"));
    }
    if (t == "piecewise_constant") {
        reject_unknown(v, {"type", "edges", "masses"}, where);
        return BiasModel::piecewise_constant(
            as_number_array(require_key(v, "edges", where), where + " 'edges'"),
            as_number_array(require_key(v, "masses", where),
                            where + " 'masses'"));
    }
    if (t == "table_one") {
        reject_unknown(v, {"type", "delta"}, where);
        return table_one_pdf(
            as_number(require_key(v, "delta", where), where + " 'delta'"));
    }
    fail(where + " has unknown bias model type '" + t + "'");
}

}  // namespace

ScenarioBundle parse_scenario_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("scenario document must be a JSON object");
    reject_unknown(doc,
                   {"dim", "beacons", "target", "noise_std", "biased",
                    "bias_models", "candidate_bias_pdfs", "quadrature",
                    "estimator", "description"},
                   "scenario");

    const json& dim_v = require_key(doc, "dim", "scenario");
    if (!dim_v.is_number_integer()) fail("'dim' must be an integer");
    const int dim = dim_v.get<int>();
    if (dim != 2 && dim != 3) fail("'dim' must be 2 or 3");

    const json& beacons_v = require_key(doc, "beacons", "scenario");
    if (!beacons_v.is_array() || beacons_v.empty()) {
        fail("'beacons' must be a nonempty array");
    }
    std::vector<Point> beacons;
    beacons.reserve(beacons_v.size());
    for (std::size_t i = 0; i < beacons_v.size(); ++i) {
        std::ostringstream oss;
        oss << "beacon " << (i + 1);
        beacons.push_back(as_point(beacons_v[i], dim, oss.str()));
    }
    const std::size_t count = beacons.size();

    const Point target =
        as_point(require_key(doc, "target", "scenario"), dim, "'target'");

    const std::vector<double> noise_std = as_number_array(
        require_key(doc, "noise_std", "scenario"), "'noise_std'");
    if (noise_std.size() != count) {
        fail("'noise_std' must have one entry per beacon");
    }

    std::vector<std::size_t> biased;
    if (doc.contains("biased")) {
        const json& b = doc.at("biased");
        if (!b.is_array()) fail("'biased' must be an array of beacon indices");
        for (const json& e : b) {
            if (!e.is_number_integer()) {
                fail("'biased' entries must be integers");
            }
            const long long idx = e.get<long long>();
            if (idx < 1 || static_cast<std::size_t>(idx) > count) {
                std::ostringstream oss;
                oss << "'biased' index " << idx << " is out of range 1.."
                    << count;
                fail(oss.str());
            }
            biased.push_back(static_cast<std::size_t>(idx) - 1);
        }
    }

    std::vector<BiasModel> models;
    if (doc.contains("bias_models")) {
        const json& ms = doc.at("bias_models");
        if (!ms.is_array()) fail("'bias_models' must be an array");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            std::ostringstream oss;
            oss << "bias model " << (i + 1);
            models.push_back(parse_model(ms[i], oss.str()));
        }
    }
    if (models.size() != biased.size()) {
        fail("'bias_models' must have one entry per 'biased' index");
    }

    ScenarioBundle bundle;
    try {
        bundle.scenario = make_scenario(std::move(beacons), target, noise_std,
                                        biased, std::move(models));
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }

    if (doc.contains("quadrature")) {
        const json& q = doc.at("quadrature");
        if (!q.is_object()) fail("'quadrature' must be an object");
        reject_unknown(q, {"rel_tol", "abs_tol"}, "'quadrature'");
        if (q.contains("rel_tol")) {
            const double v = as_number(q.at("rel_tol"), "'rel_tol'");
            if (!(v > 0.0)) fail("'rel_tol' must be positive");
            bundle.quadrature.rel_tol = v;
        }
        if (q.contains("abs_tol")) {
            const double v = as_number(q.at("abs_tol"), "'abs_tol'");
            if (!(v > 0.0)) fail("'abs_tol' must be positive");
            bundle.quadrature.abs_tol = v;
        }
    }

    if (doc.contains("estimator")) {
        const json& e = doc.at("estimator");
        if (!e.is_object()) fail("'estimator' must be an object");
        reject_unknown(e, {"search_box", "grid", "conv_tol"}, "'estimator'");
        if (e.contains("search_box")) {
            const json& box = e.at("search_box");
            if (!box.is_object()) fail("'search_box' must be an object");
            reject_unknown(box, {"lo", "hi"}, "'search_box'");
            Box sb;
            sb.lo = as_point(require_key(box, "lo", "'search_box'"), dim,
                             "'search_box' 'lo'");
            sb.hi = as_point(require_key(box, "hi", "'search_box'"), dim,
                             "'search_box' 'hi'");
            for (int i = 0; i < dim; ++i) {
                if (!(sb.lo[i] < sb.hi[i])) {
                    fail("'search_box' must satisfy lo < hi on every axis");
                }
            }
            bundle.estimator.search_box = std::move(sb);
        }
        if (e.contains("grid")) {
            const json& g = e.at("grid");
            if (!g.is_number_integer()) fail("'grid' must be an integer");
            const int v = g.get<int>();
            if (v < 2) fail("'grid' must be at least 2");
            bundle.estimator.grid = v;
        }
        if (e.contains("conv_tol")) {
            const double v = as_number(e.at("conv_tol"), "'conv_tol'");
            if (!(v > 0.0)) fail("'conv_tol' must be positive");
            bundle.estimator.conv_tol = v;
        }
    }

    if (doc.contains("candidate_bias_pdfs")) {
        const json& cs = doc.at("candidate_bias_pdfs");
        if (!cs.is_array()) fail("'candidate_bias_pdfs' must be an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            std::ostringstream oss;
            oss << "candidate bias pdf " << (i + 1);
            bundle.estimator.candidate_bias_pdfs.push_back(
                parse_model(cs[i], oss.str()));
        }
    }

    if (doc.contains("description")) {
        const json& d = doc.at("description");
        if (!d.is_string()) fail("'description' must be a string");
        bundle.description = d.get<std::string>();
    }

    return bundle;
}

ScenarioBundle load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail("cannot read scenario file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_json(buffer.str());
}

}  // namespace crbloc
