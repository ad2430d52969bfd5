#include "longevity/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace longevity::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

const json* member(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

double number(const json& obj, const char* key, const std::string& path,
              std::optional<double> fallback = std::nullopt) {
    const json* v = member(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path, "is required");
    }
    if (!v->is_number()) fail(path, "must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) fail(path, "must be finite");
    return x;
}

long long integer(const json& obj, const char* key, const std::string& path, long long fallback) {
    const json* v = member(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) fail(path, "must be an integer");
    return v->get<long long>();
}

const json& object_at(const json& obj, const char* key, const std::string& path, bool required) {
    static const json empty = json::object();
    const json* v = member(obj, key);
    if (!v) {
        if (required) fail(path, "is required");
        return empty;
    }
    if (!v->is_object()) fail(path, "must be an object");
    return *v;
}

std::optional<WealthRange> parse_range(const json& obj, const char* key, const std::string& path) {
    const json* v = member(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
        fail(path, "must be null or [lo, hi]");
    }
    return WealthRange{(*v)[0].get<double>(), (*v)[1].get<double>()};
}

}  // namespace

void validate(const ScenarioConfig& c) {
    const auto& s = c.society;
    if (!(s.gamma > 0.0)) fail("society.gamma", "must be > 0");
    if (!(s.alpha >= 0.0)) fail("society.alpha", "must be >= 0");
    if (!(s.child_cost > 0.0)) fail("society.child_cost", "must be > 0");
    if (s.extension_cost && !(*s.extension_cost > 0.0)) {
        fail("society.extension_cost", "must be > 0 or null");
    }

    const auto& i = c.initial;
    switch (i.kind) {
        case InitialConfig::Kind::Gaussian:
            if (!(i.sigma > 0.0)) fail("initial.sigma", "must be > 0");
            if (i.n_points < 2) fail("initial.n_points", "must be >= 2");
            if (!(std::max(i.truncate_below, i.mean - 5.0 * i.sigma) < i.mean + 5.0 * i.sigma) ||
                !(i.mean + 5.0 * i.sigma > 0.0)) {
                fail("initial", "gaussian support is empty after truncation");
            }
            break;
        case InitialConfig::Kind::Point:
            if (!(i.wealth >= 0.0)) fail("initial.wealth", "must be >= 0");
            break;
        case InitialConfig::Kind::Points:
            if (i.points.empty()) fail("initial.points", "must not be empty");
            for (const auto& p : i.points) {
                if (!(p.wealth >= 0.0)) fail("initial.points", "wealth values must be >= 0");
                if (!(p.weight >= 0.0)) fail("initial.points", "weights must be >= 0");
            }
            break;
    }

    const auto& r = c.run;
    if (r.generations < 1) fail("run.generations", "must be >= 1");
    if (r.bins < 1) fail("run.bins", "must be >= 1");
    if (r.hist_range && !(r.hist_range->lo < r.hist_range->hi)) {
        fail("run.hist_range", "must satisfy lo < hi");
    }
    if (r.smooth_window < 1 || r.smooth_window % 2 == 0) {
        fail("run.smooth_window", "must be odd and >= 1");
    }
    if (!(r.prominence > 0.0 && r.prominence < 1.0)) fail("run.prominence", "must lie in (0, 1)");
    for (int t : r.hist_generations) {
        if (t < 0) fail("run.hist_generations", "entries must be >= 0");
    }

    if (c.output.directory.empty()) fail("output.directory", "must not be empty");
    for (const auto& f : c.output.formats) {
        if (f != "csv" && f != "json") fail("output.formats", "unknown format '" + f + "'");
    }
}

ScenarioConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    ScenarioConfig c;

    const json& society = object_at(doc, "society", "society", true);
    c.society.gamma = number(society, "gamma", "society.gamma");
    c.society.alpha = number(society, "alpha", "society.alpha");
    c.society.child_cost = number(society, "child_cost", "society.child_cost");
    if (member(society, "extension_cost")) {
        c.society.extension_cost = number(society, "extension_cost", "society.extension_cost");
    }

    const json& initial = object_at(doc, "initial", "initial", true);
    const json* kind = member(initial, "kind");
    if (!kind || !kind->is_string()) fail("initial.kind", "must be \"gaussian\", \"point\" or \"points\"");
    const auto k = kind->get<std::string>();
    if (k == "gaussian") {
        c.initial.kind = InitialConfig::Kind::Gaussian;
        c.initial.mean = number(initial, "mean", "initial.mean");
        c.initial.sigma = number(initial, "sigma", "initial.sigma");
        const long long n = integer(initial, "n_points", "initial.n_points", 2001);
        if (n < 2) fail("initial.n_points", "must be >= 2");
        c.initial.n_points = static_cast<std::size_t>(n);
        c.initial.truncate_below = number(initial, "truncate_below", "initial.truncate_below", 0.0);
    } else if (k == "point") {
        c.initial.kind = InitialConfig::Kind::Point;
        c.initial.wealth = number(initial, "wealth", "initial.wealth");
    } else if (k == "points") {
        c.initial.kind = InitialConfig::Kind::Points;
        const json* pts = member(initial, "points");
        if (!pts || !pts->is_array()) fail("initial.points", "must be a list of [wealth, weight]");
        for (const auto& p : *pts) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                fail("initial.points", "entries must be [wealth, weight]");
            }
            c.initial.points.push_back({p[0].get<double>(), p[1].get<double>()});
        }
    } else {
        fail("initial.kind", "must be \"gaussian\", \"point\" or \"points\"");
    }

    const json& run = object_at(doc, "run", "run", false);
    c.run.generations = static_cast<int>(integer(run, "generations", "run.generations", 8));
    const long long bins = integer(run, "bins", "run.bins", 100);
    if (bins < 1) fail("run.bins", "must be >= 1");
    c.run.bins = static_cast<std::size_t>(bins);
    c.run.hist_range = parse_range(run, "hist_range", "run.hist_range");
    const long long window = integer(run, "smooth_window", "run.smooth_window", 3);
    if (window < 1) fail("run.smooth_window", "must be odd and >= 1");
    c.run.smooth_window = static_cast<std::size_t>(window);
    c.run.prominence = number(run, "prominence", "run.prominence", 0.05);
    if (const json* dumps = member(run, "hist_generations")) {
        if (!dumps->is_array()) fail("run.hist_generations", "must be a list of integers");
        c.run.hist_generations.clear();
        for (const auto& t : *dumps) {
            if (!t.is_number_integer()) fail("run.hist_generations", "must be a list of integers");
            c.run.hist_generations.push_back(t.get<int>());
        }
    }
    const long long workers = integer(run, "workers", "run.workers", 1);
    if (workers < 0) fail("run.workers", "must be >= 0");
    c.run.workers = static_cast<unsigned>(workers);

    const json& output = object_at(doc, "output", "output", false);
    if (const json* dir = member(output, "directory")) {
        if (!dir->is_string()) fail("output.directory", "must be a string");
        c.output.directory = dir->get<std::string>();
    }
    if (const json* formats = member(output, "formats")) {
        if (!formats->is_array()) fail("output.formats", "must be a list of strings");
        c.output.formats.clear();
        for (const auto& f : *formats) {
            if (!f.is_string()) fail("output.formats", "must be a list of strings");
            c.output.formats.push_back(f.get<std::string>());
        }
    }

    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        throw ConfigError("config: invalid JSON: " + std::string(e.what()));
    }
    return parse_config(doc);
}

WealthEnsemble ScenarioConfig::initial_ensemble() const {
    switch (initial.kind) {
        case InitialConfig::Kind::Gaussian:
            return init_gaussian(initial.mean, initial.sigma, initial.n_points,
                                 initial.truncate_below);
        case InitialConfig::Kind::Point:
            return point_mass(initial.wealth);
        case InitialConfig::Kind::Points: {
            WealthEnsemble e;
            e.points = initial.points;
            longevity::validate(e);
            return e;
        }
    }
    return {};
}

EvolveOptions ScenarioConfig::evolve_options() const {
    EvolveOptions o;
    o.histogram = HistogramSpec{run.bins, run.hist_range};
    o.workers = run.workers;
    return o;
}

}  // namespace longevity::cli
