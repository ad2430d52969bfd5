#include "longevity/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "longevity/parallel.hpp"

namespace longevity {

double WealthEnsemble::total_weight() const {
    double total = 0.0;
    for (const auto& p : points) total += p.weight;
    return total;
}

double WealthEnsemble::mean_wealth() const {
    double total = 0.0;
    double moment = 0.0;
    for (const auto& p : points) {
        total += p.weight;
        moment += p.weight * p.wealth;
    }
    return total > 0.0 ? moment / total : 0.0;
}

void validate(const WealthEnsemble& ensemble) {
    for (const auto& p : ensemble.points) {
        if (!std::isfinite(p.wealth) || p.wealth < 0.0) {
            throw std::invalid_argument("ensemble wealth values must be finite and >= 0");
        }
        if (!std::isfinite(p.weight) || p.weight < 0.0) {
            throw std::invalid_argument("ensemble weights must be finite and >= 0");
        }
    }
    if (ensemble.generation < 0) {
        throw std::invalid_argument("ensemble generation must be >= 0");
    }
}

double Histogram::total() const {
    return std::accumulate(bin_weights.begin(), bin_weights.end(), 0.0);
}

WealthEnsemble init_gaussian(Wealth mean, double sigma, std::size_t n_points,
                             Wealth truncate_below) {
    if (!std::isfinite(mean) || !std::isfinite(sigma) || !(sigma > 0.0)) {
        throw std::invalid_argument("gaussian sigma must be finite and > 0");
    }
    if (n_points < 2) throw std::invalid_argument("gaussian n_points must be >= 2");
    if (!std::isfinite(truncate_below)) {
        throw std::invalid_argument("gaussian truncate_below must be finite");
    }
    // Wealth is non-negative regardless of the requested truncation.
    const double lo = std::max({truncate_below, mean - 5.0 * sigma, 0.0});
    const double hi = mean + 5.0 * sigma;
    if (!(lo < hi)) throw std::invalid_argument("gaussian support is empty after truncation");

    const double h = (hi - lo) / static_cast<double>(n_points);
    WealthEnsemble out;
    out.points.reserve(n_points);
    double total = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double x = lo + (static_cast<double>(i) + 0.5) * h;
        const double z = (x - mean) / sigma;
        const double w = std::exp(-0.5 * z * z);
        out.points.push_back({x, w});
        total += w;
    }
    for (auto& p : out.points) p.weight /= total;
    return out;
}

WealthEnsemble point_mass(Wealth m, double weight) {
    WealthEnsemble out;
    out.points.push_back({m, weight});
    validate(out);
    return out;
}

namespace {

std::vector<StepOutcome> step_all(const WealthEnsemble& ensemble, const SocietyParams& params,
                                  unsigned workers) {
    std::vector<StepOutcome> outcomes(ensemble.points.size());
    parallel_for(outcomes.size(), workers,
                 [&](std::size_t i) { outcomes[i] = step(ensemble.points[i].wealth, params); });
    return outcomes;
}

GenerationRecord observe_with(const WealthEnsemble& ensemble, const SocietyParams& params,
                              const std::vector<StepOutcome>& outcomes,
                              const HistogramSpec& hist) {
    const CriticalWealths cw = critical_wealths(params);
    GenerationRecord rec;
    rec.t = ensemble.generation;

    double total = 0.0, kids = 0.0, moment = 0.0, purchases = 0.0;
    double below = 0.0, fertile = 0.0, barrier = 0.0, immortal = 0.0;
    for (std::size_t i = 0; i < ensemble.points.size(); ++i) {
        const auto& p = ensemble.points[i];
        const auto& o = outcomes[i];
        total += p.weight;
        kids += p.weight * static_cast<double>(o.k);
        moment += p.weight * p.wealth;
        if (o.extended) purchases += p.weight;
        switch (classify(p.wealth, cw)) {
            case Regime::BelowReproduction: below += p.weight; break;
            case Regime::MortalFertile: fertile += p.weight; break;
            case Regime::Barrier: barrier += p.weight; break;
            case Regime::Immortal: immortal += p.weight; break;
        }
    }
    rec.population = total;
    if (total > 0.0) {
        rec.fertility = kids / total;
        rec.mean_wealth = moment / total;
        rec.frac_below_mstar = below / total;
        rec.frac_mortal_fertile = fertile / total;
        rec.frac_barrier = barrier / total;
        rec.frac_immortal = immortal / total;
    }
    rec.profit = params.extension_cost ? *params.extension_cost * purchases : 0.0;
    rec.histogram = histogram(ensemble, hist.bins, hist.range);
    return rec;
}

}  // namespace

GenerationRecord observe(const WealthEnsemble& ensemble, const SocietyParams& params,
                         const HistogramSpec& hist) {
    return observe_with(ensemble, params, step_all(ensemble, params, 1), hist);
}

std::pair<WealthEnsemble, GenerationRecord> evolve_generation(const WealthEnsemble& ensemble,
                                                              const SocietyParams& params,
                                                              const EvolveOptions& options) {
    validate(params);
    validate(ensemble);
    const auto outcomes = step_all(ensemble, params, options.workers);
    GenerationRecord rec = observe_with(ensemble, params, outcomes, options.histogram);

    WealthEnsemble next;
    next.generation = ensemble.generation + 1;
    next.points.reserve(ensemble.points.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        const double w = ensemble.points[i].weight;
        const double heirs = static_cast<double>(o.k) / 2.0;
        if (o.extended) {
            next.points.push_back({o.m_prime, w * (1.0 + heirs)});
        } else if (o.k >= 1) {
            next.points.push_back({o.m_prime, w * heirs});
        }
    }
    return {std::move(next), std::move(rec)};
}

WealthEnsemble consolidate(WealthEnsemble ensemble, const EvolveOptions& options) {
    auto& pts = ensemble.points;
    std::erase_if(pts, [](const WeightedPoint& p) { return !(p.weight > 0.0); });
    std::sort(pts.begin(), pts.end(), [](const WeightedPoint& a, const WeightedPoint& b) {
        return a.wealth < b.wealth || (a.wealth == b.wealth && a.weight < b.weight);
    });

    std::vector<WeightedPoint> merged;
    merged.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size();) {
        const double anchor = pts[i].wealth;
        const double reach = options.merge_tolerance * std::max(1.0, anchor);
        double weight = 0.0, moment = 0.0;
        std::size_t j = i;
        for (; j < pts.size() && pts[j].wealth - anchor <= reach; ++j) {
            weight += pts[j].weight;
            moment += pts[j].weight * pts[j].wealth;
        }
        merged.push_back({j - i == 1 ? anchor : moment / weight, weight});
        i = j;
    }

    double total = 0.0;
    for (const auto& p : merged) total += p.weight;
    const double threshold = options.prune_fraction * total;
    const double budget = options.prune_budget * total;

    std::vector<std::size_t> light;
    for (std::size_t i = 0; i < merged.size(); ++i) {
        if (merged[i].weight < threshold) light.push_back(i);
    }
    std::stable_sort(light.begin(), light.end(), [&](std::size_t a, std::size_t b) {
        return merged[a].weight < merged[b].weight;
    });
    std::vector<bool> drop(merged.size(), false);
    double dropped = 0.0;
    for (std::size_t i : light) {
        if (dropped + merged[i].weight > budget) break;
        dropped += merged[i].weight;
        drop[i] = true;
    }

    pts.clear();
    for (std::size_t i = 0; i < merged.size(); ++i) {
        if (!drop[i]) pts.push_back(merged[i]);
    }
    return ensemble;
}

std::vector<GenerationRecord> simulate(const SocietyParams& params, const WealthEnsemble& initial,
                                       int generations, const EvolveOptions& options) {
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    validate(params);
    validate(initial);

    std::vector<GenerationRecord> records;
    records.reserve(static_cast<std::size_t>(generations) + 1);
    WealthEnsemble current = consolidate(initial, options);
    for (int t = 0; t < generations; ++t) {
        auto [next, rec] = evolve_generation(current, params, options);
        records.push_back(std::move(rec));
        current = consolidate(std::move(next), options);
    }
    records.push_back(observe_with(current, params, step_all(current, params, options.workers),
                                   options.histogram));
    return records;
}

double fertility_rate(const WealthEnsemble& ensemble, const SocietyParams& params) {
    double total = 0.0, kids = 0.0;
    for (const auto& p : ensemble.points) {
        total += p.weight;
        kids += p.weight * static_cast<double>(step(p.wealth, params).k);
    }
    if (!(total > 0.0)) throw std::invalid_argument("fertility_rate of an extinct ensemble");
    return kids / total;
}

int asymptotic_fertility(const SocietyParams& params) {
    if (!(2.0 * params.gamma - 2.0 * params.alpha - 1.0 > 0.0)) {
        throw std::invalid_argument("asymptotic_fertility requires 2*gamma - 2*alpha - 1 > 0");
    }
    return static_cast<int>(floor_with_tolerance(2.0 * (params.gamma - params.alpha)));
}

Histogram histogram(const WealthEnsemble& ensemble, std::size_t n_bins,
                    std::optional<WealthRange> range) {
    if (n_bins < 1) throw std::invalid_argument("histogram needs at least one bin");
    WealthRange r;
    if (range) {
        r = *range;
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
            throw std::invalid_argument("degenerate histogram range");
        }
    } else {
        bool any = false;
        for (const auto& p : ensemble.points) {
            if (!(p.weight > 0.0)) continue;
            r.lo = any ? std::min(r.lo, p.wealth) : p.wealth;
            r.hi = any ? std::max(r.hi, p.wealth) : p.wealth;
            any = true;
        }
        if (!any) {
            r = {0.0, 1.0};
        } else if (!(r.lo < r.hi)) {
            r = {r.lo - 0.5, r.lo + 0.5};
        }
    }

    Histogram h;
    const double n = static_cast<double>(n_bins);
    const double width = (r.hi - r.lo) / n;
    h.bin_edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) {
        h.bin_edges[i] = r.lo + (r.hi - r.lo) * (static_cast<double>(i) / n);
    }
    h.bin_edges.back() = r.hi;
    for (std::size_t i = 1; i <= n_bins; ++i) {
        if (!(h.bin_edges[i] > h.bin_edges[i - 1])) {
            throw std::invalid_argument("degenerate histogram range");
        }
    }

    h.bin_weights.assign(n_bins, 0.0);
    for (const auto& p : ensemble.points) {
        const double pos = std::floor((p.wealth - r.lo) / width);
        std::size_t idx = 0;
        if (pos >= n) {
            idx = n_bins - 1;
        } else if (pos > 0.0) {
            idx = static_cast<std::size_t>(pos);
        }
        h.bin_weights[idx] += p.weight;
    }
    return h;
}

int count_modes(const Histogram& hist, const ModeOptions& options) {
    if (options.smooth_window < 1 || options.smooth_window % 2 == 0) {
        throw std::invalid_argument("smooth_window must be odd and >= 1");
    }
    if (!(options.prominence > 0.0 && options.prominence < 1.0)) {
        throw std::invalid_argument("prominence must lie in (0, 1)");
    }
    const auto& raw = hist.bin_weights;
    const std::size_t n = raw.size();
    if (n == 0) return 0;

    const std::size_t half = options.smooth_window / 2;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i >= half ? i - half : 0;
        const std::size_t b = std::min(n - 1, i + half);
        double sum = 0.0;
        for (std::size_t j = a; j <= b; ++j) sum += raw[j];
        s[i] = sum / static_cast<double>(b - a + 1);
    }
    const double top = *std::max_element(s.begin(), s.end());
    if (!(top > 0.0)) return 0;

    struct Peak {
        double height;
        std::size_t index;
    };
    std::vector<Peak> peaks;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && s[j + 1] == s[i]) ++j;
        const bool above_left = i == 0 || s[i] > s[i - 1];
        const bool above_right = j + 1 == n || s[i] > s[j + 1];
        if (above_left && above_right && s[i] >= options.prominence * top) {
            peaks.push_back({s[i], i});
        }
        i = j + 1;
    }
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        return a.height > b.height || (a.height == b.height && a.index < b.index);
    });

    std::vector<Peak> accepted;
    for (const auto& p : peaks) {
        bool separated = true;
        for (const auto& q : accepted) {
            const auto lo = std::min(p.index, q.index);
            const auto hi = std::max(p.index, q.index);
            const double dip = *std::min_element(s.begin() + static_cast<std::ptrdiff_t>(lo),
                                                 s.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
            if (dip >= 0.5 * p.height) {
                separated = false;
                break;
            }
        }
        if (separated) accepted.push_back(p);
    }
    return static_cast<int>(accepted.size());
}

}  // namespace longevity
