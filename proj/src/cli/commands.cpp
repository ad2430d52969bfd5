#include "longevity/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "longevity/cli/config.hpp"
#include "longevity/cli/output.hpp"
#include "longevity/economics.hpp"

namespace longevity::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void check_society(const SocietyParams& s) {
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

json optional_number(const std::optional<double>& x) {
    return x ? json_number(*x) : json(nullptr);
}

std::string timeseries_csv(const std::vector<GenerationRecord>& records) {
    CsvTable table({"t", "population", "fertility", "mean_wealth", "frac_below_mstar",
                    "frac_mortal_fertile", "frac_barrier", "frac_immortal", "profit"});
    for (const auto& r : records) {
        table.add_row({std::to_string(r.t), format_number(r.population),
                       format_number(r.fertility), format_number(r.mean_wealth),
                       format_number(r.frac_below_mstar), format_number(r.frac_mortal_fertile),
                       format_number(r.frac_barrier), format_number(r.frac_immortal),
                       format_number(r.profit)});
    }
    return table.str();
}

std::string histogram_csv(const Histogram& h) {
    CsvTable table({"bin_lo", "bin_hi", "weight"});
    for (std::size_t i = 0; i < h.bins(); ++i) {
        table.add_row({format_number(h.bin_edges[i]), format_number(h.bin_edges[i + 1]),
                       format_number(h.bin_weights[i])});
    }
    return table.str();
}

json society_json(const SocietyParams& s) {
    return json{{"gamma", s.gamma},
                {"alpha", s.alpha},
                {"child_cost", s.child_cost},
                {"extension_cost", optional_number(s.extension_cost)}};
}

}  // namespace

void cmd_step(const StepArgs& args, std::ostream& out) {
    check_society(args.society);
    if (!std::isfinite(args.m) || args.m < 0.0) throw ConfigError("--m: must be finite and >= 0");

    const StepOutcome o = step(args.m, args.society);
    const CriticalWealths cw = critical_wealths(args.society);
    json doc;
    doc["m"] = args.m;
    doc["k"] = o.k;
    doc["m_prime"] = o.m_prime;
    doc["extended"] = o.extended;
    doc["pension"] = o.pension_per_adult;
    doc["regime"] = to_string(classify(args.m, cw));
    doc["m_star"] = json_number(cw.m_star);
    doc["m1"] = optional_number(cw.m1);
    doc["m2"] = optional_number(cw.m2);
    out << doc.dump(2) << '\n';
}

void cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
    ScenarioConfig config = load_config(args.config);
    if (args.out_dir) config.output.directory = *args.out_dir;
    if (args.generations) config.run.generations = *args.generations;
    if (args.bins) config.run.bins = *args.bins;
    if (args.workers) config.run.workers = *args.workers;
    validate(config);

    for (const auto& w : validation_warnings(config.society)) err << "warning: " << w << '\n';

    const auto records = simulate(config.society, config.initial_ensemble(),
                                  config.run.generations, config.evolve_options());
    const ModeOptions modes = config.mode_options();
    const std::set<int> dumps(config.run.hist_generations.begin(),
                              config.run.hist_generations.end());
    const fs::path dir = config.output.directory;
    const auto wants = [&](const char* f) {
        return std::find(config.output.formats.begin(), config.output.formats.end(), f) !=
               config.output.formats.end();
    };

    if (wants("csv")) {
        write_file_atomic(dir / "timeseries.csv", timeseries_csv(records));
        for (int t : dumps) {
            if (t > config.run.generations) continue;
            write_file_atomic(dir / ("hist_t" + std::to_string(t) + ".csv"),
                              histogram_csv(records[static_cast<std::size_t>(t)].histogram));
        }
    }
    if (wants("json")) {
        json doc;
        doc["society"] = society_json(config.society);
        json rows = json::array();
        for (const auto& r : records) {
            rows.push_back({{"t", r.t},
                            {"population", r.population},
                            {"fertility", r.fertility},
                            {"mean_wealth", r.mean_wealth},
                            {"frac_below_mstar", r.frac_below_mstar},
                            {"frac_mortal_fertile", r.frac_mortal_fertile},
                            {"frac_barrier", r.frac_barrier},
                            {"frac_immortal", r.frac_immortal},
                            {"profit", r.profit},
                            {"modes", count_modes(r.histogram, modes)}});
        }
        doc["records"] = std::move(rows);
        write_file_atomic(dir / "summary.json", doc.dump(2) + "\n");
    }

    for (int t : dumps) {
        if (t > config.run.generations) continue;
        const auto& r = records[static_cast<std::size_t>(t)];
        out << "t=" << t << " population=" << format_number(r.population)
            << " modes=" << count_modes(r.histogram, modes) << '\n';
    }
}

void cmd_tunnel_check(const TunnelArgs& args, std::ostream& out) {
    if (!std::isfinite(args.gamma) || !(args.gamma > 0.0)) throw ConfigError("--gamma: must be > 0");
    if (!std::isfinite(args.alpha) || !(args.alpha >= 0.0)) throw ConfigError("--alpha: must be >= 0");
    if (!std::isfinite(args.e_over_c) || !(args.e_over_c > 0.0)) {
        throw ConfigError("--e-over-c: must be > 0");
    }
    const PhasePoint p{args.gamma, args.alpha, args.e_over_c};
    const bool analytic = can_tunnel(p);
    const bool dynamic = tunnel_check_dynamic(SocietyParams{p.gamma, p.alpha, 1.0, p.e_over_c});
    const auto island = island_index(p);

    out << "tunnel=" << (analytic ? "yes" : "no") << '\n';
    out << "island=" << (island ? std::to_string(*island) : "none") << '\n';
    out << "dynamic_agrees=" << (analytic == dynamic ? "yes" : "no") << '\n';
    if (args.alpha == 0.0) {
        if (island) {
            if (const auto b = island_boundaries(*island, args.gamma)) {
                out << "island_lo=" << format_number(b->lo) << '\n';
                out << "island_hi=" << format_number(b->hi) << '\n';
            }
        } else {
            out << "island_bounds=none\n";
        }
    }
}

fs::path gamma_n_sidecar(const fs::path& csv) {
    fs::path p = csv;
    p.replace_extension(".gamma_n.json");
    return p;
}

void cmd_phase_diagram(const PhaseDiagramArgs& args, std::ostream& out) {
    const auto check_range = [](const AxisRange& r, const char* flag) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo < 0.0 || !(r.lo < r.hi)) {
            throw ConfigError(std::string(flag) + ": must be finite, non-negative, lo < hi");
        }
    };
    check_range(args.gamma_range, "--gamma-range");
    check_range(args.e_over_c_range, "--eoc-range");
    if (!std::isfinite(args.alpha) || args.alpha < 0.0) throw ConfigError("--alpha: must be >= 0");
    if (args.gamma_resolution < 2 || args.e_over_c_resolution < 2) {
        throw ConfigError("--resolution: must be >= 2 per axis");
    }

    const PhaseGrid grid = phase_grid(args.gamma_range, args.e_over_c_range, args.alpha,
                                      args.gamma_resolution, args.e_over_c_resolution,
                                      args.workers);
    CsvTable table({"gamma", "e_over_c", "island"});
    std::size_t tunneling = 0;
    for (std::size_t i = 0; i < grid.gammas.size(); ++i) {
        for (std::size_t j = 0; j < grid.e_over_cs.size(); ++j) {
            const auto& cell = grid.at(i, j);
            if (cell) ++tunneling;
            table.add_row({format_number(grid.gammas[i]), format_number(grid.e_over_cs[j]),
                           cell ? std::to_string(*cell) : std::string()});
        }
    }
    write_file_atomic(args.out, table.str());

    json sidecar;
    sidecar["alpha"] = args.alpha;
    json starts = json::array();
    for (int n = 1; n <= 5; ++n) starts.push_back({{"n", n}, {"gamma", gamma_n(n)}});
    sidecar["gamma_n"] = std::move(starts);
    write_file_atomic(gamma_n_sidecar(args.out), sidecar.dump(2) + "\n");

    out << "cells=" << table.rows() << " tunneling=" << tunneling << '\n';
}

void cmd_profit_sweep(const ProfitSweepArgs& args, std::ostream& out) {
    ScenarioConfig config = load_config(args.config);
    if (!config.society.extension_cost) {
        throw ConfigError(
            "society.extension_cost: an E sweep requires extension economics; "
            "set extension_cost (the sweep overrides its value)");
    }
    if (args.out_dir) config.output.directory = *args.out_dir;
    if (args.workers) config.run.workers = *args.workers;
    if (args.slices.empty()) throw ConfigError("--slices: must not be empty");
    std::vector<int> slices = args.slices;
    std::sort(slices.begin(), slices.end());
    slices.erase(std::unique(slices.begin(), slices.end()), slices.end());
    if (slices.front() < 1) throw ConfigError("--slices: entries must be >= 1");

    std::vector<double> grid;
    try {
        grid = e_grid(args.e_min, args.e_max, args.e_step);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--e-min/--e-max/--e-step: ") + e.what());
    }

    const ProfitCurve curve = profit_sweep(config.society.without_extension(), grid,
                                           config.initial_ensemble(), slices,
                                           config.evolve_options());

    std::vector<std::string> header{"E"};
    for (int t : curve.slices) header.push_back("profit_t" + std::to_string(t));
    CsvTable table(header);
    for (std::size_t j = 0; j < curve.e_values.size(); ++j) {
        std::vector<std::string> row{format_number(curve.e_values[j])};
        for (const auto& slice : curve.profit_by_slice) row.push_back(format_number(slice[j]));
        table.add_row(std::move(row));
    }
    const fs::path dir = config.output.directory;
    write_file_atomic(dir / "profit.csv", table.str());

    json sidecar;
    json rows = json::array();
    for (std::size_t s = 0; s < curve.slices.size(); ++s) {
        rows.push_back({{"t", curve.slices[s]}, {"argmax_e", curve.argmax_by_slice[s]}});
        out << "t=" << curve.slices[s] << " argmax_E=" << format_number(curve.argmax_by_slice[s])
            << '\n';
    }
    sidecar["society"] = society_json(config.society.without_extension());
    sidecar["argmax"] = std::move(rows);
    write_file_atomic(dir / "profit_argmax.json", sidecar.dump(2) + "\n");
}

void cmd_fertility_sweep(const FertilitySweepArgs& args, std::ostream& out) {
    if (!std::isfinite(args.gamma_from) || !std::isfinite(args.gamma_to) ||
        !(args.gamma_from > 0.0) || !(args.gamma_to > 0.0)) {
        throw ConfigError("--gamma-range: both ends must be finite and > 0");
    }
    if (!std::isfinite(args.alpha) || args.alpha < 0.0) throw ConfigError("--alpha: must be >= 0");
    if (!std::isfinite(args.child_cost) || !(args.child_cost > 0.0)) {
        throw ConfigError("--child-cost: must be > 0");
    }
    if (args.steps < 1) throw ConfigError("--steps: must be >= 1");
    const double m = args.m.value_or(1e6 * args.child_cost);
    if (!std::isfinite(m) || m < 0.0) throw ConfigError("--m: must be finite and >= 0");

    CsvTable table({"gamma", "k"});
    for (int i = 0; i <= args.steps; ++i) {
        const double gamma = args.gamma_from + (args.gamma_to - args.gamma_from) *
                                                   (static_cast<double>(i) / args.steps);
        const SocietyParams s{gamma, args.alpha, args.child_cost, std::nullopt};
        table.add_row({format_number(gamma), std::to_string(basic_step(m, s).k)});
    }
    if (args.out) {
        write_file_atomic(*args.out, table.str());
    } else {
        out << table.str();
    }
}

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generational wealth, fertility and life-extension simulator"};
    app.require_subcommand(1);

    StepArgs step_args;
    std::optional<double> step_e;
    auto* step_cmd = app.add_subcommand("step", "One generation for a pair at wealth m");
    step_cmd->add_option("--m", step_args.m, "Inherited wealth")->required();
    step_cmd->add_option("--gamma", step_args.society.gamma, "Growth factor")->required();
    step_cmd->add_option("--alpha", step_args.society.alpha, "Pension fraction")->required();
    step_cmd->add_option("--child-cost", step_args.society.child_cost, "Cost C per child")->required();
    step_cmd->add_option("--extension-cost", step_e, "Life extension price E");

    SimulateArgs sim_args;
    std::optional<std::string> sim_out;
    auto* sim_cmd = app.add_subcommand("simulate", "Evolve a wealth ensemble from a JSON config");
    sim_cmd->add_option("config", sim_args.config, "Scenario config (JSON)")->required();
    sim_cmd->add_option("--out-dir", sim_out, "Override output.directory");
    sim_cmd->add_option("--generations", sim_args.generations, "Override run.generations");
    sim_cmd->add_option("--bins", sim_args.bins, "Override run.bins");
    sim_cmd->add_option("--workers", sim_args.workers, "Worker threads (0 = all cores)");

    TunnelArgs tunnel_args;
    auto* tunnel_cmd = app.add_subcommand("tunnel-check", "Can mortals tunnel into immortality?");
    tunnel_cmd->add_option("--gamma", tunnel_args.gamma)->required();
    tunnel_cmd->add_option("--alpha", tunnel_args.alpha)->required();
    tunnel_cmd->add_option("--e-over-c", tunnel_args.e_over_c)->required();

    PhaseDiagramArgs phase_args;
    std::vector<double> gamma_range, eoc_range;
    std::vector<std::size_t> resolution;
    std::string phase_out = phase_args.out.string();
    auto* phase_cmd = app.add_subcommand("phase-diagram", "Rasterise tunneling islands");
    phase_cmd->add_option("--gamma-range", gamma_range, "lo,hi")->delimiter(',')->expected(2);
    phase_cmd->add_option("--eoc-range", eoc_range, "lo,hi of E/C")->delimiter(',')->expected(2);
    phase_cmd->add_option("--alpha", phase_args.alpha);
    phase_cmd->add_option("--resolution", resolution, "N or Ngamma,Neoc")
        ->delimiter(',')
        ->expected(1, 2);
    phase_cmd->add_option("--out", phase_out, "Grid CSV path");
    phase_cmd->add_option("--workers", phase_args.workers, "Worker threads (0 = all cores)");

    ProfitSweepArgs profit_args;
    std::optional<std::string> profit_out;
    std::optional<unsigned> profit_workers;
    auto* profit_cmd = app.add_subcommand("profit-sweep", "Vendor profit as a function of E");
    profit_cmd->add_option("config", profit_args.config, "Scenario config (JSON)")->required();
    profit_cmd->add_option("--e-min", profit_args.e_min);
    profit_cmd->add_option("--e-max", profit_args.e_max);
    profit_cmd->add_option("--e-step", profit_args.e_step);
    profit_cmd->add_option("--slices", profit_args.slices, "Generation slices, e.g. 1,2,4")
        ->delimiter(',');
    profit_cmd->add_option("--out-dir", profit_out, "Override output.directory");
    profit_cmd->add_option("--workers", profit_workers, "Worker threads (0 = all cores)");

    FertilitySweepArgs fert_args;
    std::vector<double> fert_range;
    std::optional<std::string> fert_out;
    auto* fert_cmd = app.add_subcommand("fertility-sweep", "Children per pair across gamma");
    fert_cmd->add_option("--gamma-range", fert_range, "from,to")->delimiter(',')->expected(2);
    fert_cmd->add_option("--alpha", fert_args.alpha);
    fert_cmd->add_option("--child-cost", fert_args.child_cost);
    fert_cmd->add_option("--m", fert_args.m, "Wealth (default 1e6 * C)");
    fert_cmd->add_option("--steps", fert_args.steps, "Grid intervals");
    fert_cmd->add_option("--out", fert_out, "CSV path (default: standard output)");

    std::vector<const char*> raw;
    raw.reserve(argv.size());
    for (const auto& a : argv) raw.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (*step_cmd) {
            step_args.society.extension_cost = step_e;
            cmd_step(step_args, out);
        } else if (*sim_cmd) {
            if (sim_out) sim_args.out_dir = *sim_out;
            cmd_simulate(sim_args, out, err);
        } else if (*tunnel_cmd) {
            cmd_tunnel_check(tunnel_args, out);
        } else if (*phase_cmd) {
            if (!gamma_range.empty()) phase_args.gamma_range = {gamma_range[0], gamma_range[1]};
            if (!eoc_range.empty()) phase_args.e_over_c_range = {eoc_range[0], eoc_range[1]};
            if (!resolution.empty()) {
                phase_args.gamma_resolution = resolution[0];
                phase_args.e_over_c_resolution = resolution.size() > 1 ? resolution[1] : resolution[0];
            }
            phase_args.out = phase_out;
            cmd_phase_diagram(phase_args, out);
        } else if (*profit_cmd) {
            if (profit_out) profit_args.out_dir = *profit_out;
            profit_args.workers = profit_workers;
            cmd_profit_sweep(profit_args, out);
        } else if (*fert_cmd) {
            if (!fert_range.empty()) {
                fert_args.gamma_from = fert_range[0];
                fert_args.gamma_to = fert_range[1];
            }
            if (fert_out) fert_args.out = *fert_out;
            cmd_fertility_sweep(fert_args, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

}  // namespace longevity::cli
