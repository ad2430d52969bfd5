#include "longevity/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace longevity {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_wealth(Wealth m) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
        throw std::invalid_argument("wealth m must be finite and >= 0");
    }
}

StepOutcome lineage_ends(Wealth m, const SocietyParams& params) {
    return StepOutcome{0, 0.0, false, params.alpha * m};
}

}  // namespace

void validate(const SocietyParams& params) {
    if (!std::isfinite(params.gamma) || !(params.gamma > 0.0)) {
        throw std::invalid_argument("gamma must be finite and > 0");
    }
    if (!std::isfinite(params.alpha) || !(params.alpha >= 0.0)) {
        throw std::invalid_argument("alpha must be finite and >= 0");
    }
    if (!std::isfinite(params.child_cost) || !(params.child_cost > 0.0)) {
        throw std::invalid_argument("child_cost must be finite and > 0");
    }
    if (params.extension_cost &&
        (!std::isfinite(*params.extension_cost) || !(*params.extension_cost > 0.0))) {
        throw std::invalid_argument("extension_cost must be finite and > 0 when present");
    }
}

std::vector<std::string> validation_warnings(const SocietyParams& params) {
    std::vector<std::string> out;
    if (2.0 * params.gamma - 2.0 * params.alpha - 1.0 <= 0.0) {
        out.emplace_back("2*gamma - 2*alpha - 1 <= 0: m* is infinite and no wealth level reproduces");
    }
    if (params.has_extension() && params.gamma <= 1.0) {
        out.emplace_back("gamma <= 1: immortality threshold m2 is infinite");
    }
    return out;
}

CriticalWealths critical_wealths(const SocietyParams& params) {
    CriticalWealths cw{};
    const double denom = 2.0 * params.gamma - 2.0 * params.alpha - 1.0;
    cw.m_star = denom > 0.0 ? params.child_cost / denom : kInf;
    if (params.extension_cost) {
        const double e = *params.extension_cost;
        cw.m1 = e / params.gamma;
        cw.m2 = params.gamma > 1.0 ? e / (params.gamma - 1.0) : kInf;
    }
    return cw;
}

Regime classify(Wealth m, const CriticalWealths& cw) {
    if (cw.m2 && m >= *cw.m2) return Regime::Immortal;
    if (cw.m1 && m >= *cw.m1) return Regime::Barrier;
    if (m >= cw.m_star) return Regime::MortalFertile;
    return Regime::BelowReproduction;
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::BelowReproduction: return "below_mstar";
        case Regime::MortalFertile: return "mortal_fertile";
        case Regime::Barrier: return "barrier";
        case Regime::Immortal: return "immortal";
    }
    return "unknown";
}

double floor_with_tolerance(double x) { return std::floor(x + kFloorTolerance); }

StepOutcome basic_step(Wealth m, const SocietyParams& params) {
    require_wealth(m);
    const CriticalWealths cw = critical_wealths(params);
    if (m < cw.m_star) return lineage_ends(m, params);

    const double disposable = 2.0 * m * (params.gamma - params.alpha);
    const double k = floor_with_tolerance(disposable / (params.child_cost + m));
    // k >= 1 analytically for m >= m*; guard against rounding at m == m*.
    if (k < 1.0) return lineage_ends(m, params);

    StepOutcome out;
    out.k = static_cast<std::int64_t>(k);
    out.m_prime = disposable / k - params.child_cost;
    out.extended = false;
    out.pension_per_adult = params.alpha * m;
    return out;
}

StepOutcome extended_step(Wealth m, const SocietyParams& params) {
    if (!params.extension_cost) {
        throw std::logic_error("extended_step requires an extension cost");
    }
    require_wealth(m);
    const double e = *params.extension_cost;
    const double g = params.gamma;
    if (g * m < e) return basic_step(m, params);

    // Negative below m2, where the pair still extends but has no children.
    const double raw = (2.0 * g * m - 2.0 * e - 2.0 * m) / (params.child_cost + m);
    const double k = std::max(0.0, floor_with_tolerance(raw));

    StepOutcome out;
    out.k = static_cast<std::int64_t>(k);
    out.m_prime = (2.0 * g * m - 2.0 * e - k * params.child_cost) / (k + 2.0);
    out.extended = true;
    out.pension_per_adult = 0.0;
    return out;
}

StepOutcome step(Wealth m, const SocietyParams& params) {
    if (params.extension_cost) return extended_step(m, params);
    return basic_step(m, params);
}

StepOutcome oracle_step(Wealth m, const SocietyParams& params) {
    require_wealth(m);
    const double g = params.gamma;
    const double c = params.child_cost;
    const bool extends = params.extension_cost && g * m >= *params.extension_cost;
    const double e = extends ? *params.extension_cost : 0.0;

    // Inheritance per heir when a pair has `kids` children.
    auto inheritance = [&](double kids) {
        if (extends) return (2.0 * g * m - 2.0 * e - kids * c) / (kids + 2.0);
        return (2.0 * g * m - kids * c - 2.0 * params.alpha * m) / kids;
    };
    const double slack = kFloorTolerance * (c + m);

    // m' falls strictly as kids grows, so qualifying counts form a prefix
    // of 1..ceiling and the scan may stop at the first failure.
    const double ceiling = std::floor(2.0 * g * m / c);
    double best = 0.0;
    for (double kids = 1.0; kids <= ceiling; kids += 1.0) {
        if (inheritance(kids) < m - slack) break;
        best = kids;
    }

    if (best >= 1.0) {
        return StepOutcome{static_cast<std::int64_t>(best), inheritance(best), extends,
                           extends ? 0.0 : params.alpha * m};
    }
    if (extends) return StepOutcome{0, g * m - e, true, 0.0};
    return StepOutcome{0, 0.0, false, params.alpha * m};
}

double budget_residual(Wealth m, const SocietyParams& params, const StepOutcome& outcome) {
    const double k = static_cast<double>(outcome.k);
    const double income = 2.0 * params.gamma * m;
    double spent = 0.0;
    if (outcome.extended) {
        spent = 2.0 * *params.extension_cost + k * params.child_cost + (k + 2.0) * outcome.m_prime;
    } else if (outcome.k >= 1) {
        spent = k * params.child_cost + k * outcome.m_prime + 2.0 * params.alpha * m;
    } else {
        return 0.0;
    }
    const double scale = std::max(income, std::numeric_limits<double>::min());
    return std::abs(income - spent) / scale;
}

}  // namespace longevity
