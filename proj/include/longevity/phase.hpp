#pragma once

// Where in (gamma, E/C) space can descendants of mortals cross the barrier
// [m1, m2) in a single generation? The answer only depends on the ratio E/C
// because every threshold scales linearly with C.

#include <cstddef>
#include <optional>
#include <vector>

#include "longevity/dynamics.hpp"

namespace longevity {

struct PhasePoint {
    double gamma = 1.0;
    double alpha = 0.0;
    double e_over_c = 1.0;
};

struct IslandSpec {
    int n = 1;
    double gamma_start = 1.0;
};

struct IslandBounds {
    double lo;  // E/C on the lower boundary curve
    double hi;  // E/C on the upper boundary curve
};

// Tunneling condition stated in wealth terms: m* < m1 and the inheritance
// of a pair sitting just below m1 reaches m2.
bool can_tunnel_threshold_form(const PhasePoint& p);

// The same condition rewritten in the ratio E/C:
//   2r(g-a) / (g + r g/(g-1)) >= floor(2r(g-a)/(g+r)) >= 1.
bool can_tunnel_ratio_form(const PhasePoint& p);

// Membership is defined by the ratio form; false for gamma <= 1.
bool can_tunnel(const PhasePoint& p);

std::optional<int> island_index(const PhasePoint& p);

// Closed-form island edges for alpha = 0. Membership is lo <= E/C < hi; the
// returned pair is the closure of that set. Absent when gamma < gamma_n(n)
// or a boundary denominator is not positive.
std::optional<IslandBounds> island_boundaries(int n, double gamma);

// (1 + sqrt(1 + 2n(n+1))) / 2; n = 1 gives the golden mean.
double gamma_n(int n);
IslandSpec island_spec(int n);

// Evaluates the step map at m1 (1 - epsilon) and tests m' >= m2.
bool tunnel_check_dynamic(const SocietyParams& params, double epsilon = 1e-9);

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct PhaseGrid {
    std::vector<double> gammas;     // row coordinate
    std::vector<double> e_over_cs;  // column coordinate
    std::vector<std::optional<int>> islands;  // row-major, gamma outer

    const std::optional<int>& at(std::size_t row, std::size_t col) const {
        return islands[row * e_over_cs.size() + col];
    }
};

// Inclusive linear grid, resolution points per axis (>= 2).
std::vector<double> linspace(AxisRange range, std::size_t points);

PhaseGrid phase_grid(AxisRange gamma_range, AxisRange e_over_c_range, double alpha,
                     std::size_t gamma_resolution, std::size_t e_over_c_resolution,
                     unsigned workers = 1);

// (C + 2E) / (2 gamma - 3), the wealth from which extended pairs have
// children; absent for gamma <= 3/2.
std::optional<Wealth> immortal_fertility_threshold(const SocietyParams& params);

}  // namespace longevity
