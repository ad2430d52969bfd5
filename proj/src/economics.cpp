#include "longevity/economics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "longevity/parallel.hpp"

namespace longevity {

double generation_profit(const WealthEnsemble& ensemble, const SocietyParams& params) {
    if (!params.extension_cost) {
        throw std::invalid_argument("generation_profit requires an extension cost");
    }
    const double e = *params.extension_cost;
    double buyers = 0.0;
    for (const auto& p : ensemble.points) {
        if (params.gamma * p.wealth >= e) buyers += p.weight;
    }
    return e * buyers;
}

std::vector<double> e_grid(double e_min, double e_max, double step) {
    if (!std::isfinite(e_min) || !std::isfinite(e_max) || !std::isfinite(step)) {
        throw std::invalid_argument("E grid bounds must be finite");
    }
    if (!(e_min > 0.0)) throw std::invalid_argument("E grid minimum must be > 0");
    if (!(step > 0.0)) throw std::invalid_argument("E grid step must be > 0");
    if (e_max < e_min) throw std::invalid_argument("E grid maximum must be >= minimum");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i) {
        const double e = e_min + static_cast<double>(i) * step;
        if (e > e_max + 1e-9 * step) break;
        out.push_back(e);
    }
    return out;
}

ProfitCurve profit_sweep(const SocietyParams& base, const std::vector<double>& e_values,
                         const WealthEnsemble& initial, const std::vector<int>& slices,
                         const EvolveOptions& options) {
    if (e_values.empty()) throw std::invalid_argument("profit sweep needs at least one E");
    if (slices.empty()) throw std::invalid_argument("profit sweep needs at least one slice");
    if (!std::is_sorted(e_values.begin(), e_values.end())) {
        throw std::invalid_argument("E grid must be ascending");
    }
    if (!std::is_sorted(slices.begin(), slices.end()) || slices.front() < 1) {
        throw std::invalid_argument("slices must be ascending and >= 1");
    }
    validate(initial);

    ProfitCurve curve;
    curve.e_values = e_values;
    curve.slices = slices;
    curve.profit_by_slice.assign(slices.size(), std::vector<double>(e_values.size(), 0.0));

    EvolveOptions inner = options;
    inner.workers = 1;
    inner.histogram = HistogramSpec{1, std::nullopt};
    const int depth = slices.back();

    parallel_for(e_values.size(), options.workers, [&](std::size_t j) {
        const SocietyParams params = base.with_extension(e_values[j]);
        validate(params);
        const auto records = simulate(params, initial, depth, inner);
        double cumulative = 0.0;
        std::size_t s = 0;
        for (int t = 1; t <= depth; ++t) {
            cumulative += records[static_cast<std::size_t>(t - 1)].profit;
            while (s < slices.size() && slices[s] == t) {
                curve.profit_by_slice[s][j] = cumulative;
                ++s;
            }
        }
    });

    for (int slice : slices) curve.argmax_by_slice.push_back(profit_argmax(curve, slice));
    return curve;
}

double profit_argmax(const ProfitCurve& curve, int slice) {
    const auto it = std::find(curve.slices.begin(), curve.slices.end(), slice);
    if (it == curve.slices.end()) throw std::out_of_range("slice not present in profit curve");
    const auto& row = curve.profit_by_slice[static_cast<std::size_t>(it - curve.slices.begin())];
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j] > row[best]) best = j;
    }
    return curve.e_values.at(best);
}

}  // namespace longevity
