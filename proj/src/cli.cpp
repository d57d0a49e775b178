#include "sehurdle/cli.hpp"

#include "sehurdle/errors.hpp"
#include "sehurdle/forecast.hpp"
#include "sehurdle/kfunction.hpp"
#include "sehurdle/model_json.hpp"
#include "sehurdle/simulate.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace sehurdle::cli {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::string config_digest(std::string_view canonical_config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_config) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

fs::path default_output_dir() {
    const char* dir = std::getenv("SEHURDLE_OUT_DIR");
    return dir != nullptr && *dir != '\0' ? fs::path(dir) : fs::path(".");
}

void write_atomically(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ParseError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            throw ParseError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ParseError("cannot move output into place at '" + path.string() + "': " + ec.message());
    }
}

namespace {

std::ifstream open_input(const std::string& path, const std::string& flag) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(flag + ": cannot read '" + path + "'");
    }
    return in;
}

DailySeries load_series(const std::string& path) {
    auto in = open_input(path, "--input");
    try {
        return read_series_csv(in);
    } catch (const ParseError& e) {
        throw ParseError("--input '" + path + "': " + e.what());
    }
}

Json load_json(const std::string& path, const std::string& flag) {
    auto in = open_input(path, flag);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(flag + " '" + path + "': " + e.what());
    }
}

bool is_hurdle_name(const std::string& name) {
    for (const auto& n : hurdle_spec_names()) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

// A name (BL1..SE6, Cz, Cse, Csi) or a path to a model JSON document.
ModelDocument resolve_model(const std::string& arg, const std::string& flag) {
    if (fs::exists(arg) || arg.ends_with(".json")) {
        try {
            return model_document_from_json(load_json(arg, flag));
        } catch (const ParseError& e) {
            const std::string what = e.what();
            if (what.starts_with(flag)) {
                throw;
            }
            throw ParseError(flag + " '" + arg + "': " + what);
        }
    }
    ModelDocument doc;
    if (is_hurdle_name(arg)) {
        doc.hurdle_spec = hurdle_spec_by_name(arg);
    } else if (arg == "Cz" || arg == "Cse" || arg == "Csi") {
        doc.count_spec = count_spec_by_name(arg);
    } else {
        throw ParseError(flag + ": unknown model '" + arg + "' (expected BL1..BL6, SE1..SE6, Cz, Cse, Csi or a .json file)");
    }
    return doc;
}

fs::path output_path(const std::string& given, const char* default_name) {
    return given.empty() ? default_output_dir() / default_name : fs::path(given);
}

std::string comment_line(std::uint64_t seed, const std::string& digest) {
    return "format_version=" + std::to_string(kFormatVersion) + " seed=" + std::to_string(seed) +
           " config_digest=" + digest;
}

void print_summary(std::ostream& out, const Json& j) { out << j.dump() << '\n'; }

struct IngestArgs {
    std::string input;
    std::string output;
    std::string start;
    std::string end;
};

int run_ingest(const IngestArgs& a, std::ostream& out) {
    auto in = open_input(a.input, "--input");
    std::vector<IncidentRecord> records;
    try {
        records = read_incident_csv(in);
    } catch (const ParseError& e) {
        throw ParseError("--input '" + a.input + "': " + e.what());
    }
    if (records.empty() && (a.start.empty() || a.end.empty())) {
        throw ParseError("--input has no records; give --start and --end to build an empty window");
    }
    Date first = a.start.empty() ? records.front().date : parse_date(a.start);
    Date last = a.end.empty() ? records.front().date : parse_date(a.end);
    for (const auto& r : records) {
        if (a.start.empty() && days_between(r.date, first) > 0) {
            first = r.date;
        }
        if (a.end.empty() && days_between(last, r.date) > 0) {
            last = r.date;
        }
    }
    if (days_between(first, last) < 0) {
        throw ParseError("--start must not be after --end");
    }
    const auto series = ingest_incidents(records, DateRange{first, last});
    const auto path = output_path(a.output, "series.csv");
    std::ostringstream csv;
    write_series_csv(csv, series, "format_version=" + std::to_string(kFormatVersion));
    write_atomically(path, csv.str());
    print_summary(out, Json{{"command", "ingest"},
                            {"output", path.string()},
                            {"start", format_date(series.start_date())},
                            {"days", series.length()},
                            {"event_days", series.event_day_count()},
                            {"events", series.total_events()}});
    return ok;
}

struct FitArgs {
    std::string model;
    std::string input;
    std::string output;
    std::string kernel;
    int starts{5};
    std::uint64_t seed{1};
};

Json flat_summary(const Json& section) {
    Json j;
    const auto& spec = section.at("spec");
    j["model"] = spec.contains("name") ? spec.at("name") : spec.at("variant");
    for (const auto& [k, v] : section.at("params").items()) {
        j[k] = v;
    }
    j["loglik"] = section.at("loglik");
    j["aic"] = section.at("aic");
    j["k"] = section.at("k");
    j["converged"] = section.at("convergence").at("converged");
    return j;
}

int run_fit(const FitArgs& a, std::ostream& out) {
    auto doc = resolve_model(a.model, "--model");
    if (!a.kernel.empty()) {
        if (!doc.hurdle_spec) {
            throw ParseError("--kernel applies only to event-day models");
        }
        doc.hurdle_spec->kernel = parse_kernel_family(a.kernel);
    }
    const auto series = load_series(a.input);

    Json result;
    result["format_version"] = kFormatVersion;
    Json summary{{"command", "fit"}};
    std::vector<Json> sections;
    if (doc.hurdle_spec) {
        FitOptions opts;
        opts.starts = a.starts;
        opts.seed = a.seed;
        opts.t_ref = doc.t_ref;
        const auto fitted = to_json(fit_hurdle(series, *doc.hurdle_spec, opts));
        for (const auto& [k, v] : fitted.items()) {
            result[k] = v;
        }
        sections.push_back(fitted.at("hurdle"));
    }
    if (doc.count_spec) {
        CountFitOptions opts;
        opts.starts = a.starts;
        opts.seed = a.seed;
        const auto fitted = to_json(fit_count(series, *doc.count_spec, opts));
        result["count"] = fitted.at("count");
        if (!result.contains("window")) {
            result["start"] = fitted.at("start");
            result["window"] = fitted.at("window");
        }
        sections.push_back(fitted.at("count"));
    }
    const auto path = output_path(a.output, "model.json");
    write_atomically(path, result.dump(2) + "\n");
    if (sections.size() == 1) {
        const auto flat = flat_summary(sections.front());
        for (const auto& [k, v] : flat.items()) {
            summary[k] = v;
        }
    } else {
        summary["hurdle"] = flat_summary(sections[0]);
        summary["count"] = flat_summary(sections[1]);
    }
    summary["output"] = path.string();
    print_summary(out, summary);
    return ok;
}

struct SimulateArgs {
    std::string model;
    std::string output;
    std::string start;
    long days{0};
    std::uint64_t seed{0};
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    if (a.days < 1) {
        throw ParseError("--days must be >= 1");
    }
    const auto doc = resolve_model(a.model, "--model");
    auto model = simulation_model(doc);
    if (!a.start.empty()) {
        model.start = parse_date(a.start);
    }
    const auto series = simulate(model, a.days, a.seed);
    const std::string digest =
        config_digest("simulate;" + to_json(model).dump() + ";days=" + std::to_string(a.days) +
                      ";seed=" + std::to_string(a.seed));
    std::ostringstream csv;
    write_series_csv(csv, series, comment_line(a.seed, digest));
    const auto path = output_path(a.output, "simulated.csv");
    write_atomically(path, csv.str());
    print_summary(out, Json{{"command", "simulate"},
                            {"output", path.string()},
                            {"days", series.length()},
                            {"event_days", series.event_day_count()},
                            {"events", series.total_events()},
                            {"seed", a.seed},
                            {"config_digest", digest}});
    return ok;
}

struct DiagnoseArgs {
    std::string model;
    std::string input;
    std::string output;
    int sims{1000};
    long max_lag{100};
    int starts{5};
    std::uint64_t seed{0};
};

int run_diagnose(const DiagnoseArgs& a, std::ostream& out) {
    auto doc = resolve_model(a.model, "--model");
    if (!doc.hurdle_spec) {
        throw ParseError("--model: diagnose needs an event-day model");
    }
    const auto series = load_series(a.input);
    if (!doc.hurdle_params) {
        FitOptions opts;
        opts.starts = a.starts;
        opts.seed = a.seed;
        opts.t_ref = doc.t_ref;
        doc.hurdle_params = fit_hurdle(series, *doc.hurdle_spec, opts).params;
    }
    doc.count_spec.reset(); // the K-function only sees event days
    auto model = simulation_model(doc);
    model.start = series.start_date();
    if (model.t_ref == 0) {
        model.t_ref = series.length();
    }

    const auto lags = default_lags(a.max_lag);
    const auto phat = model_probabilities(model, series);
    auto curve = weighted_k(series, phat, lags);
    attach_envelope(curve, bootstrap_envelope(model, series.length(), lags, a.sims, a.seed));

    const std::string digest = config_digest("diagnose;" + to_json(model).dump() + ";sims=" + std::to_string(a.sims) +
                                             ";max_lag=" + std::to_string(a.max_lag) +
                                             ";seed=" + std::to_string(a.seed));
    std::ostringstream csv;
    csv << "# " << comment_line(a.seed, digest) << '\n';
    csv << "lag,khat_minus_t,lo,hi\n";
    for (std::size_t k = 0; k < curve.lags.size(); ++k) {
        csv << curve.lags[k] << ',' << format_double(curve.centered[k]) << ',' << format_double(curve.lo[k]) << ','
            << format_double(curve.hi[k]) << '\n';
    }
    const auto path = output_path(a.output, "kfunction.csv");
    write_atomically(path, csv.str());
    print_summary(out, Json{{"command", "diagnose"},
                            {"output", path.string()},
                            {"lags", curve.lags.size()},
                            {"sims", a.sims},
                            {"coverage", envelope_coverage(curve)},
                            {"lags_above", lags_above_envelope(curve)},
                            {"seed", a.seed},
                            {"config_digest", digest}});
    return ok;
}

struct ForecastArgs {
    std::string input;
    std::string split;
    std::string model{"SE1"};
    std::string count{"Cz"};
    std::string reference{"BL1"};
    std::string count_reference{"Cz"};
    std::string output;
    std::string summary;
    long refit_every{1};
    int starts{5};
    std::uint64_t seed{0};
};

HurdleModelSpec hurdle_spec_arg(const std::string& arg, const std::string& flag) {
    const auto doc = resolve_model(arg, flag);
    if (!doc.hurdle_spec) {
        throw ParseError(flag + ": expected an event-day model");
    }
    return *doc.hurdle_spec;
}

CountModelSpec count_spec_arg(const std::string& arg, const std::string& flag) {
    const auto doc = resolve_model(arg, flag);
    if (!doc.count_spec) {
        throw ParseError(flag + ": expected a count model");
    }
    return *doc.count_spec;
}

int run_forecast(const ForecastArgs& a, std::ostream& out) {
    ForecastOptions opts;
    opts.hurdle = hurdle_spec_arg(a.model, "--model");
    opts.count = count_spec_arg(a.count, "--count");
    opts.reference_hurdle = hurdle_spec_arg(a.reference, "--reference");
    opts.reference_count = count_spec_arg(a.count_reference, "--count-reference");
    opts.refit_every = a.refit_every;
    opts.seed = a.seed;
    opts.starts = a.starts;
    const auto series = load_series(a.input);
    const Date split = parse_date(a.split);
    const long split_day = series.day_of(split);
    if (split_day < 2 || split_day > series.length()) {
        throw ParseError("--split must leave at least one day on each side of the series");
    }
    const auto report = rolling_forecast(series, split_day, opts);

    const std::string digest = config_digest(
        "forecast;model=" + to_json(opts.hurdle).dump() + ";count=" + opts.count.name() +
        ";reference=" + to_json(opts.reference_hurdle).dump() + ";count_reference=" + opts.reference_count.name() +
        ";split=" + a.split + ";refit_every=" + std::to_string(a.refit_every) + ";starts=" + std::to_string(a.starts) +
        ";seed=" + std::to_string(a.seed));
    std::ostringstream csv;
    csv << "# " << comment_line(a.seed, digest) << '\n';
    csv << "date,p_hat,pi_hat,s_t,E_t,Y_t,g_contrib,gc_contrib\n";
    for (const auto& r : report.records) {
        csv << format_date(r.date) << ',' << format_double(r.p_hat) << ',' << format_double(r.pi_hat) << ','
            << format_double(r.s_t) << ',' << r.event << ',' << r.count << ',' << format_double(r.g_contrib) << ','
            << format_double(r.gc_contrib) << '\n';
    }
    const auto csv_path = output_path(a.output, "forecast.csv");
    auto summary_path = a.summary.empty() ? fs::path(csv_path).replace_extension(".json") : fs::path(a.summary);
    auto summary = to_json(report);
    summary["seed"] = a.seed;
    summary["config_digest"] = digest;
    write_atomically(csv_path, csv.str());
    write_atomically(summary_path, summary.dump(2) + "\n");
    print_summary(out, Json{{"command", "forecast"},
                            {"output", csv_path.string()},
                            {"summary", summary_path.string()},
                            {"G", report.g},
                            {"G_count", report.g_count},
                            {"test_days", report.records.size()},
                            {"failed_refits", report.failed_refits},
                            {"seed", a.seed},
                            {"config_digest", digest}});
    return ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-exciting hurdle models for daily event counts"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Aggregate an incident CSV into a daily series");
    ingest_cmd->add_option("--input", ingest.input, "Incident CSV (date[,count])")->required();
    ingest_cmd->add_option("--output", ingest.output, "Daily series CSV");
    ingest_cmd->add_option("--start", ingest.start, "First day of the window (YYYY-MM-DD)");
    ingest_cmd->add_option("--end", ingest.end, "Last day of the window (YYYY-MM-DD)");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Maximum-likelihood fit of a named model or spec file");
    fit_cmd->add_option("--model", fit.model, "BL1..BL6, SE1..SE6, Cz, Cse, Csi or a model JSON")->required();
    fit_cmd->add_option("--input", fit.input, "Daily series CSV")->required();
    fit_cmd->add_option("--output", fit.output, "Fitted model JSON");
    fit_cmd->add_option("--kernel", fit.kernel, "Decay kernel family: nb, geom or pois");
    fit_cmd->add_option("--starts", fit.starts, "Optimizer starts")->check(CLI::PositiveNumber);
    fit_cmd->add_option("--seed", fit.seed, "Seed for start ordering");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate a daily series from a fitted model");
    sim_cmd->add_option("--model", sim.model, "Model JSON with parameters")->required();
    sim_cmd->add_option("--days", sim.days, "Series length")->required();
    sim_cmd->add_option("--seed", sim.seed, "Random seed")->required();
    sim_cmd->add_option("--start", sim.start, "Start date (YYYY-MM-DD)");
    sim_cmd->add_option("--output", sim.output, "Series CSV");

    DiagnoseArgs diag;
    auto* diag_cmd = app.add_subcommand("diagnose", "Weighted K-function with a parametric bootstrap envelope");
    diag_cmd->add_option("--model", diag.model, "Fitted model JSON, or a model name to fit first")->required();
    diag_cmd->add_option("--input", diag.input, "Daily series CSV")->required();
    diag_cmd->add_option("--seed", diag.seed, "Random seed")->required();
    diag_cmd->add_option("--sims", diag.sims, "Bootstrap replicates")->check(CLI::Range(2, 1'000'000));
    diag_cmd->add_option("--max-lag", diag.max_lag, "Largest lag in days")->check(CLI::PositiveNumber);
    diag_cmd->add_option("--starts", diag.starts, "Optimizer starts when fitting")->check(CLI::PositiveNumber);
    diag_cmd->add_option("--output", diag.output, "Curve CSV");

    ForecastArgs fc;
    auto* fc_cmd = app.add_subcommand("forecast", "Rolling one-day-ahead forecast scored against reference models");
    fc_cmd->add_option("--input", fc.input, "Daily series CSV")->required();
    fc_cmd->add_option("--split", fc.split, "First test day (YYYY-MM-DD)")->required();
    fc_cmd->add_option("--seed", fc.seed, "Random seed")->required();
    fc_cmd->add_option("--model", fc.model, "Event-day model");
    fc_cmd->add_option("--count", fc.count, "Count model");
    fc_cmd->add_option("--reference", fc.reference, "Reference event-day model");
    fc_cmd->add_option("--count-reference", fc.count_reference, "Reference count model");
    fc_cmd->add_option("--refit-every", fc.refit_every, "Days between refits")->check(CLI::PositiveNumber);
    fc_cmd->add_option("--starts", fc.starts, "Optimizer starts for the training fit")->check(CLI::PositiveNumber);
    fc_cmd->add_option("--output", fc.output, "Per-day CSV");
    fc_cmd->add_option("--summary", fc.summary, "Summary JSON (default: next to the CSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? ok : usage_error;
    }
    if (threads > 0) {
        omp_set_num_threads(threads);
    }

    try {
        if (*ingest_cmd) {
            return run_ingest(ingest, out);
        }
        if (*fit_cmd) {
            return run_fit(fit, out);
        }
        if (*sim_cmd) {
            return run_simulate(sim, out);
        }
        if (*diag_cmd) {
            return run_diagnose(diag, out);
        }
        return run_forecast(fc, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical_failure;
    }
}

} // namespace sehurdle::cli
