#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "longevity/phase.hpp"

namespace longevity::cli {

struct StepArgs {
    double m = 0.0;
    SocietyParams society;
};

struct SimulateArgs {
    std::filesystem::path config;
    std::optional<std::filesystem::path> out_dir;
    std::optional<int> generations;
    std::optional<std::size_t> bins;
    std::optional<unsigned> workers;
};

struct TunnelArgs {
    double gamma = 2.0;
    double alpha = 0.0;
    double e_over_c = 1.5;
};

struct PhaseDiagramArgs {
    AxisRange gamma_range{1.0, 3.0};
    AxisRange e_over_c_range{0.0, 5.0};
    double alpha = 0.0;
    std::size_t gamma_resolution = 500;
    std::size_t e_over_c_resolution = 500;
    std::filesystem::path out = "phase_diagram.csv";
    unsigned workers = 1;
};

struct ProfitSweepArgs {
    std::filesystem::path config;
    double e_min = 0.5;
    double e_max = 6.0;
    double e_step = 0.05;
    std::vector<int> slices{1, 2, 4};
    std::optional<std::filesystem::path> out_dir;
    std::optional<unsigned> workers;
};

struct FertilitySweepArgs {
    double gamma_from = 1.6;
    double gamma_to = 1.4;
    double alpha = 0.0;
    double child_cost = 1.0;
    std::optional<double> m;  // defaults to 1e6 * child_cost
    int steps = 40;           // grid intervals; steps + 1 rows
    std::optional<std::filesystem::path> out;  // standard output when absent
};

// Each command writes its report to `out` and throws ConfigError (exit 1)
// or IoError (exit 2) on failure.
void cmd_step(const StepArgs& args, std::ostream& out);
void cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
void cmd_tunnel_check(const TunnelArgs& args, std::ostream& out);
void cmd_phase_diagram(const PhaseDiagramArgs& args, std::ostream& out);
void cmd_profit_sweep(const ProfitSweepArgs& args, std::ostream& out);
void cmd_fertility_sweep(const FertilitySweepArgs& args, std::ostream& out);

// Sidecar written next to the phase-diagram CSV.
std::filesystem::path gamma_n_sidecar(const std::filesystem::path& csv);

// Parses argv (argv[0] is the program name) and runs the subcommand.
// Returns the process exit code: 0 ok, 1 bad flags/config, 2 runtime or I/O.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace longevity::cli
