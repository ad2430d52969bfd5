#include "longevity/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "longevity/parallel.hpp"

namespace longevity {

namespace {

bool usable(const PhasePoint& p) {
    return std::isfinite(p.gamma) && std::isfinite(p.alpha) && std::isfinite(p.e_over_c) &&
           p.gamma > 1.0 && p.e_over_c > 0.0;
}

// floor(2r(g-a)/(g+r)): children of a mortal pair at m1.
double children_at_m1(const PhasePoint& p) {
    const double r = p.e_over_c;
    return floor_with_tolerance(2.0 * r * (p.gamma - p.alpha) / (p.gamma + r));
}

}  // namespace

bool can_tunnel_threshold_form(const PhasePoint& p) {
    if (!usable(p)) return false;
    // Work in units of C.
    const SocietyParams unit{p.gamma, p.alpha, 1.0, p.e_over_c};
    const CriticalWealths cw = critical_wealths(unit);
    const double m1 = *cw.m1;
    const double m2 = *cw.m2;
    if (!(cw.m_star < m1)) return false;
    const double disposable = 2.0 * m1 * (p.gamma - p.alpha);
    return disposable / (1.0 + m2) >= floor_with_tolerance(disposable / (1.0 + m1));
}

bool can_tunnel_ratio_form(const PhasePoint& p) {
    if (!usable(p)) return false;
    const double g = p.gamma;
    const double r = p.e_over_c;
    const double lhs = 2.0 * r * (g - p.alpha) / (g + r * g / (g - 1.0));
    const double kids = children_at_m1(p);
    return lhs >= kids && kids >= 1.0;
}

bool can_tunnel(const PhasePoint& p) { return can_tunnel_ratio_form(p); }

std::optional<int> island_index(const PhasePoint& p) {
    if (!can_tunnel(p)) return std::nullopt;
    return static_cast<int>(children_at_m1(p));
}

double gamma_n(int n) {
    if (n < 0) throw std::invalid_argument("island index n must be >= 0");
    const double nn = static_cast<double>(n);
    return (1.0 + std::sqrt(1.0 + 2.0 * nn * (nn + 1.0))) / 2.0;
}

IslandSpec island_spec(int n) {
    if (n < 1) throw std::invalid_argument("island index n must be >= 1");
    return {n, gamma_n(n)};
}

std::optional<IslandBounds> island_boundaries(int n, double gamma) {
    if (n < 1) throw std::invalid_argument("island index n must be >= 1");
    if (!(gamma >= gamma_n(n))) return std::nullopt;
    const double nn = static_cast<double>(n);
    const double hi_den = 2.0 * gamma - nn - 1.0;
    const double lo_den = 2.0 * gamma * (gamma - 1.0) - nn * gamma;
    if (!(hi_den > 0.0) || !(lo_den > 0.0)) return std::nullopt;
    IslandBounds b{nn * gamma * (gamma - 1.0) / lo_den, (nn + 1.0) * gamma / hi_den};
    if (b.lo > b.hi) return std::nullopt;
    return b;
}

bool tunnel_check_dynamic(const SocietyParams& params, double epsilon) {
    if (!params.extension_cost) {
        throw std::invalid_argument("tunnel_check_dynamic requires an extension cost");
    }
    const CriticalWealths cw = critical_wealths(params);
    if (!std::isfinite(*cw.m2)) return false;
    const StepOutcome out = step(*cw.m1 * (1.0 - epsilon), params);
    return out.m_prime >= *cw.m2;
}

std::vector<double> linspace(AxisRange range, std::size_t points) {
    if (points < 2) throw std::invalid_argument("grid resolution must be >= 2");
    if (!std::isfinite(range.lo) || !std::isfinite(range.hi) || !(range.lo <= range.hi)) {
        throw std::invalid_argument("grid range must be finite with lo <= hi");
    }
    std::vector<double> out(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = range.lo + (range.hi - range.lo) * (static_cast<double>(i) / last);
    }
    out.back() = range.hi;
    return out;
}

PhaseGrid phase_grid(AxisRange gamma_range, AxisRange e_over_c_range, double alpha,
                     std::size_t gamma_resolution, std::size_t e_over_c_resolution,
                     unsigned workers) {
    PhaseGrid grid;
    grid.gammas = linspace(gamma_range, gamma_resolution);
    grid.e_over_cs = linspace(e_over_c_range, e_over_c_resolution);
    grid.islands.resize(grid.gammas.size() * grid.e_over_cs.size());
    const std::size_t cols = grid.e_over_cs.size();
    parallel_for(grid.gammas.size(), workers, [&](std::size_t row) {
        for (std::size_t col = 0; col < cols; ++col) {
            grid.islands[row * cols + col] =
                island_index({grid.gammas[row], alpha, grid.e_over_cs[col]});
        }
    });
    return grid;
}

std::optional<Wealth> immortal_fertility_threshold(const SocietyParams& params) {
    if (!params.extension_cost) {
        throw std::invalid_argument("immortal_fertility_threshold requires an extension cost");
    }
    if (!(params.gamma > 1.5)) return std::nullopt;
    return (params.child_cost + 2.0 * *params.extension_cost) / (2.0 * params.gamma - 3.0);
}

}  // namespace longevity
