#include "sehurdle/model_json.hpp"

#include "sehurdle/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sehurdle {

namespace {

const Json& require(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return j.at(key);
}

double number(const Json& j, const std::string& key, const std::string& where) {
    const auto& v = require(j, key, where);
    if (!v.is_number()) {
        throw ParseError(where + ": field '" + key + "' must be a number");
    }
    return v.get<double>();
}

std::string text(const Json& j, const std::string& key, const std::string& where) {
    const auto& v = require(j, key, where);
    if (!v.is_string()) {
        throw ParseError(where + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

} // namespace

Json to_json(const HurdleModelSpec& spec) {
    Json j;
    j["name"] = spec.name;
    Json terms = Json::array({"intercept"});
    if (spec.terms.linear) {
        terms.push_back("linear");
    }
    if (spec.terms.quadratic) {
        terms.push_back("quadratic");
    }
    if (spec.terms.seasonal) {
        terms.push_back("seasonal");
    }
    j["baseline"] = terms;
    j["se"] = spec.self_exciting;
    if (spec.self_exciting) {
        j["kernel"] = kernel_family_name(spec.kernel);
    }
    return j;
}

namespace {

bool is_named_hurdle(const std::string& name) {
    const auto names = hurdle_spec_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

} // namespace

HurdleModelSpec hurdle_spec_from_json(const Json& j) {
    if (j.is_string()) {
        return hurdle_spec_by_name(j.get<std::string>());
    }
    if (!j.is_object()) {
        throw ParseError("hurdle spec must be a name or an object");
    }
    HurdleModelSpec spec;
    const std::string name = j.contains("name") ? text(j, "name", "hurdle spec") : std::string();
    if (is_named_hurdle(name)) {
        spec = hurdle_spec_by_name(name);
    } else if (!j.contains("baseline")) {
        // Not a known name and nothing to build a custom spec from.
        spec = hurdle_spec_by_name(name);
    } else {
        spec.name = name.empty() ? std::string("custom") : name;
        const auto& terms = j.at("baseline");
        if (!terms.is_array()) {
            throw ParseError("hurdle spec: field 'baseline' must be an array of term names");
        }
        for (const auto& t : terms) {
            const auto term = t.is_string() ? t.get<std::string>() : std::string();
            if (term == "intercept") {
                continue;
            }
            if (term == "linear") {
                spec.terms.linear = true;
            } else if (term == "quadratic") {
                spec.terms.quadratic = true;
            } else if (term == "seasonal") {
                spec.terms.seasonal = true;
            } else {
                throw ParseError("hurdle spec: unknown baseline term " + t.dump() +
                                 " (expected intercept, linear, quadratic or seasonal)");
            }
        }
        for (const char* key : {"se", "self_exciting"}) {
            if (j.contains(key)) {
                if (!j.at(key).is_boolean()) {
                    throw ParseError(std::string("hurdle spec: field '") + key + "' must be true or false");
                }
                spec.self_exciting = j.at(key).get<bool>();
            }
        }
    }
    if (j.contains("kernel")) {
        spec.kernel = parse_kernel_family(text(j, "kernel", "hurdle spec"));
    }
    return spec;
}

Json to_json(const CountModelSpec& spec) { return Json{{"variant", spec.name()}}; }

CountModelSpec count_spec_from_json(const Json& j) {
    if (j.is_string()) {
        return count_spec_by_name(j.get<std::string>());
    }
    if (j.is_object() && j.contains("variant")) {
        return count_spec_by_name(text(j, "variant", "count spec"));
    }
    return count_spec_by_name(text(j, "name", "count spec"));
}

Json params_to_json(const HurdleModelSpec& spec, const HurdleParams& params) {
    const auto names = spec.parameter_names();
    const auto values = pack(spec, params);
    Json j = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        j[names[i]] = values[i];
    }
    return j;
}

HurdleParams hurdle_params_from_json(const HurdleModelSpec& spec, const Json& j) {
    std::vector<double> values;
    for (const auto& name : spec.parameter_names()) {
        values.push_back(number(j, name, "hurdle params"));
    }
    try {
        auto p = unpack(spec, values);
        if (p.shot && !(p.shot->alpha >= 0.0)) {
            throw ParseError("hurdle params: field 'alpha' must be >= 0");
        }
        return p;
    } catch (const DomainError& e) {
        throw ParseError(std::string("hurdle params: ") + e.what());
    }
}

Json params_to_json(const CountModelSpec& spec, const CountParams& params) {
    const auto names = spec.parameter_names();
    const auto values = pack(spec, params);
    Json j = Json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        j[names[i]] = values[i];
    }
    return j;
}

CountParams count_params_from_json(const CountModelSpec& spec, const Json& j) {
    std::vector<double> values;
    for (const auto& name : spec.parameter_names()) {
        values.push_back(number(j, name, "count params"));
    }
    auto p = unpack(spec, values);
    if (spec.variant == CountVariant::constant && !(p.s > 1.0)) {
        throw ParseError("count params: field 's' must be > 1");
    }
    if (spec.variant != CountVariant::constant && (!(p.beta_c > 0.0) || !(p.alpha_c >= 0.0) || !(p.mu_c > 1.0))) {
        throw ParseError("count params: need beta_c > 0, alpha_c >= 0 and mu_c > 1");
    }
    return p;
}

Json to_json(const ConvergenceReport& report) {
    Json starts = Json::array();
    for (const auto& s : report.starts) {
        Json item{{"index", s.index}, {"evaluations", s.evaluations}, {"converged", s.converged}};
        item["loglik"] = std::isfinite(s.loglik) ? Json(s.loglik) : Json(nullptr);
        if (!s.error.empty()) {
            item["error"] = s.error;
        }
        starts.push_back(std::move(item));
    }
    return Json{{"method", report.method},         {"converged", report.converged},
                {"iterations", report.iterations}, {"evaluations", report.evaluations},
                {"best_start", report.best_start}, {"starts", std::move(starts)}};
}

namespace {

Json window_json(const WindowInfo& w) {
    return Json{{"start", format_date(w.start)}, {"days", w.days}, {"t_ref", w.t_ref}};
}

} // namespace

Json to_json(const FittedHurdle& fit) {
    Json section;
    section["spec"] = to_json(fit.spec);
    section["params"] = params_to_json(fit.spec, fit.params);
    section["loglik"] = fit.loglik;
    section["aic"] = fit.aic;
    section["k"] = fit.free_parameters;
    section["convergence"] = to_json(fit.report);
    Json j;
    j["format_version"] = kFormatVersion;
    j["hurdle"] = std::move(section);
    j["t_ref"] = fit.window.t_ref;
    j["start"] = format_date(fit.window.start);
    j["window"] = window_json(fit.window);
    return j;
}

Json to_json(const FittedCount& fit) {
    Json section;
    section["spec"] = to_json(fit.spec);
    section["params"] = params_to_json(fit.spec, fit.params);
    section["loglik"] = fit.loglik;
    section["aic"] = fit.aic;
    section["k"] = fit.free_parameters;
    section["boundary"] = fit.boundary;
    section["convergence"] = to_json(fit.report);
    Json j;
    j["format_version"] = kFormatVersion;
    j["count"] = std::move(section);
    j["start"] = format_date(fit.window.start);
    j["window"] = window_json(fit.window);
    return j;
}

ModelDocument model_document_from_json(const Json& j) {
    if (!j.is_object()) {
        throw ParseError("model document must be a JSON object");
    }
    if (j.contains("format_version")) {
        const auto& v = j.at("format_version");
        if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
            throw ParseError("field 'format_version' must be " + std::to_string(kFormatVersion));
        }
    }
    ModelDocument doc;
    if (j.contains("hurdle")) {
        const auto& h = j.at("hurdle");
        const bool sectioned = h.is_object() && h.contains("spec");
        doc.hurdle_spec = hurdle_spec_from_json(sectioned ? h.at("spec") : h);
        if (h.is_object() && h.contains("params")) {
            doc.hurdle_params = hurdle_params_from_json(*doc.hurdle_spec, h.at("params"));
        }
    }
    if (j.contains("count")) {
        const auto& c = j.at("count");
        const bool sectioned = c.is_object() && c.contains("spec");
        doc.count_spec = count_spec_from_json(sectioned ? c.at("spec") : c);
        if (c.is_object() && c.contains("params")) {
            doc.count_params = count_params_from_json(*doc.count_spec, c.at("params"));
        }
    }
    if (!doc.hurdle_spec && !doc.count_spec) {
        throw ParseError("model document needs a 'hurdle' or 'count' section");
    }
    if (j.contains("t_ref")) {
        const auto& v = j.at("t_ref");
        if (!v.is_number_integer() || v.get<long>() < 0) {
            throw ParseError("field 't_ref' must be a non-negative integer");
        }
        doc.t_ref = v.get<long>();
    }
    if (j.contains("start")) {
        doc.start = parse_date(text(j, "start", "model document"));
    }
    return doc;
}

Json to_json(const SimulationModel& model) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["hurdle"] = Json{{"spec", to_json(model.hurdle_spec)},
                       {"params", params_to_json(model.hurdle_spec, conform(model.hurdle_spec, model.hurdle))}};
    if (model.count_spec) {
        j["count"] = Json{{"spec", to_json(*model.count_spec)},
                          {"params", params_to_json(*model.count_spec, model.count)}};
    }
    j["t_ref"] = model.t_ref;
    j["start"] = format_date(model.start);
    return j;
}

SimulationModel simulation_model(const ModelDocument& doc) {
    if (!doc.hurdle_spec || !doc.hurdle_params) {
        throw ParseError("simulation needs a hurdle section with 'params'");
    }
    SimulationModel m;
    m.hurdle_spec = *doc.hurdle_spec;
    m.hurdle = conform(m.hurdle_spec, *doc.hurdle_params);
    if (doc.count_spec) {
        if (!doc.count_params) {
            throw ParseError("count section needs 'params' for simulation");
        }
        m.count_spec = doc.count_spec;
        m.count = *doc.count_params;
    }
    m.t_ref = doc.t_ref;
    if (doc.start) {
        m.start = *doc.start;
    }
    return m;
}

Json to_json(const BacktestReport& report) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["G"] = report.g;
    j["G_count"] = report.g_count;
    j["test_days"] = report.records.size();
    j["training_days"] = report.training_days;
    j["refit_every"] = report.refit_every;
    j["refits"] = report.refit_days.size();
    j["failed_refits"] = report.failed_refits;
    j["warnings"] = report.warnings;
    j["initial_hurdle"] = to_json(report.initial_hurdle);
    j["initial_count"] = to_json(report.initial_count);
    return j;
}

} // namespace sehurdle
