#pragma once

// Revenue of life-extension vendors. Manufacturing cost is taken as
// negligible, so profit equals revenue: E per individual per generation.

#include <vector>

#include "longevity/population.hpp"

namespace longevity {

struct ProfitCurve {
    std::vector<double> e_values;                  // ascending
    std::vector<int> slices;                       // ascending generation counts
    std::vector<std::vector<double>> profit_by_slice;  // [slice][E index], cumulative
    std::vector<double> argmax_by_slice;
};

// E times the weight of individuals who can afford extension (gamma m >= E).
double generation_profit(const WealthEnsemble& ensemble, const SocietyParams& params);

// e_min, e_min + step, ... while <= e_max (with a 1e-9 step slack).
std::vector<double> e_grid(double e_min, double e_max, double step);

// Cumulative profit through slice t sums the purchases of generations
// 0 .. t-1, so slice 1 is the initial ensemble's purchases.
ProfitCurve profit_sweep(const SocietyParams& base, const std::vector<double>& e_values,
                         const WealthEnsemble& initial, const std::vector<int>& slices,
                         const EvolveOptions& options = {});

// Ties go to the smaller E. Throws std::out_of_range for an unknown slice.
double profit_argmax(const ProfitCurve& curve, int slice);

}  // namespace longevity
