#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "longevity/population.hpp"

namespace longevity::cli {

// Bad flags or configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Filesystem failure; maps to exit code 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InitialConfig {
    enum class Kind { Gaussian, Point, Points };
    Kind kind = Kind::Gaussian;
    double mean = 2.0;
    double sigma = 1.0;
    std::size_t n_points = 2001;
    double truncate_below = 0.0;
    double wealth = 0.0;                 // kind == Point
    std::vector<WeightedPoint> points;   // kind == Points
};

struct RunConfig {
    int generations = 8;
    std::size_t bins = 100;
    std::optional<WealthRange> hist_range;
    std::size_t smooth_window = 3;
    double prominence = 0.05;
    std::vector<int> hist_generations{0, 1, 2, 4, 8};
    unsigned workers = 1;
};

struct OutputConfig {
    std::filesystem::path directory = "out";
    std::vector<std::string> formats{"csv"};
};

struct ScenarioConfig {
    SocietyParams society;
    InitialConfig initial;
    RunConfig run;
    OutputConfig output;

    WealthEnsemble initial_ensemble() const;
    EvolveOptions evolve_options() const;
    ModeOptions mode_options() const { return {run.smooth_window, run.prominence}; }
};

// Throws ConfigError with the dotted path of the offending field.
ScenarioConfig parse_config(const nlohmann::json& doc);

// Throws IoError when the file cannot be read, ConfigError when it does not
// parse or validate.
ScenarioConfig load_config(const std::filesystem::path& path);

// Re-runs field validation, e.g. after flag overrides.
void validate(const ScenarioConfig& config);

}  // namespace longevity::cli
