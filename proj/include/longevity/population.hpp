#pragma once

// Weighted-point wealth ensembles and their generation-by-generation
// evolution. Each point carries an expected head count; the dynamics are a
// deterministic map, so a point never splits and the ensemble never grows.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "longevity/dynamics.hpp"

namespace longevity {

struct WeightedPoint {
    Wealth wealth = 0.0;
    double weight = 0.0;

    bool operator==(const WeightedPoint&) const = default;
};

struct WealthEnsemble {
    std::vector<WeightedPoint> points;
    int generation = 0;

    double total_weight() const;
    // Weighted mean wealth; 0 for an extinct ensemble.
    double mean_wealth() const;
    bool extinct() const { return !(total_weight() > 0.0); }
};

// Throws std::invalid_argument on negative/non-finite wealth or weight.
void validate(const WealthEnsemble& ensemble);

struct WealthRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct Histogram {
    std::vector<double> bin_edges;    // size bins + 1, strictly ascending
    std::vector<double> bin_weights;  // size bins

    std::size_t bins() const { return bin_weights.size(); }
    double total() const;
};

struct HistogramSpec {
    std::size_t bins = 100;
    std::optional<WealthRange> range;  // data-derived when absent
};

struct GenerationRecord {
    int t = 0;
    double population = 0.0;
    double fertility = 0.0;
    double mean_wealth = 0.0;
    double frac_below_mstar = 0.0;
    double frac_mortal_fertile = 0.0;
    double frac_barrier = 0.0;
    double frac_immortal = 0.0;
    double profit = 0.0;  // E times the weight buying extension this generation
    Histogram histogram;
};

struct EvolveOptions {
    HistogramSpec histogram;
    // Points closer than merge_tolerance * max(1, wealth) are merged.
    double merge_tolerance = 1e-9;
    // Points carrying less than prune_fraction of the total are dropped, as
    // long as the dropped weight stays under prune_budget of the total.
    double prune_fraction = 1e-12;
    double prune_budget = 1e-9;
    unsigned workers = 1;
};

// Midpoint quadrature of a Gaussian on [max(truncate_below, mean - 5 sigma),
// mean + 5 sigma], normalised to unit total weight.
WealthEnsemble init_gaussian(Wealth mean, double sigma, std::size_t n_points,
                             Wealth truncate_below = 0.0);

WealthEnsemble point_mass(Wealth m, double weight = 1.0);

// Observables of `ensemble` as it enters a generation.
GenerationRecord observe(const WealthEnsemble& ensemble, const SocietyParams& params,
                         const HistogramSpec& hist);

// Applies one step to every point. Extended pairs keep their adults, so
// their weight becomes w * (1 + k/2); otherwise w * k/2, and a point with
// k = 0 disappears. Output order follows input order; no merging.
std::pair<WealthEnsemble, GenerationRecord> evolve_generation(
    const WealthEnsemble& ensemble, const SocietyParams& params,
    const EvolveOptions& options = {});

// Sorts by wealth, merges near-coincident points, and prunes negligible ones.
WealthEnsemble consolidate(WealthEnsemble ensemble, const EvolveOptions& options = {});

// Records for t = 0 .. generations (generations + 1 entries). The initial
// ensemble is consolidated before the first step.
std::vector<GenerationRecord> simulate(const SocietyParams& params,
                                       const WealthEnsemble& initial, int generations,
                                       const EvolveOptions& options = {});

double fertility_rate(const WealthEnsemble& ensemble, const SocietyParams& params);

// floor(2 (gamma - alpha)): the large-wealth fertility ceiling of mortals.
int asymptotic_fertility(const SocietyParams& params);

Histogram histogram(const WealthEnsemble& ensemble, std::size_t n_bins,
                    std::optional<WealthRange> range = std::nullopt);

struct ModeOptions {
    std::size_t smooth_window = 3;
    double prominence = 0.05;
};

// Peaks of the moving-average-smoothed bin weights that reach
// prominence * max and are separated from every higher peak by a dip below
// half their own height.
int count_modes(const Histogram& hist, const ModeOptions& options = {});

}  // namespace longevity
