#pragma once

// Single-generation dynamics of the wealth/fertility model, with and without
// repeatable life extension.
//
// A pair whose members each inherited wealth m grows its capital 2m by the
// factor gamma and spends it on k children (C each, plus an inheritance m'
// each) and either two pensions alpha*m or, when gamma*m >= E, a life
// extension for both adults who then restart with wealth m'. The number of
// children is the largest k that keeps m' >= m.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace longevity {

using Wealth = double;

struct SocietyParams {
    double gamma = 1.0;        // growth factor per generation
    double alpha = 0.0;        // pension fraction of initial wealth
    double child_cost = 1.0;   // C
    std::optional<double> extension_cost;  // E; absent = no life extension

    bool has_extension() const { return extension_cost.has_value(); }
    SocietyParams with_extension(double e) const {
        SocietyParams p = *this;
        p.extension_cost = e;
        return p;
    }
    SocietyParams without_extension() const {
        SocietyParams p = *this;
        p.extension_cost.reset();
        return p;
    }
};

// Throws std::invalid_argument naming the offending field.
void validate(const SocietyParams& params);

// Non-fatal findings, e.g. a society in which no wealth level reproduces.
std::vector<std::string> validation_warnings(const SocietyParams& params);

struct CriticalWealths {
    Wealth m_star;               // reproduction threshold, may be +inf
    std::optional<Wealth> m1;    // extension affordability E/gamma
    std::optional<Wealth> m2;    // immortality E/(gamma-1), +inf for gamma <= 1
};

CriticalWealths critical_wealths(const SocietyParams& params);

enum class Regime {
    BelowReproduction,  // [0, m*)
    MortalFertile,      // [m*, m1)
    Barrier,            // [m1, m2): extension bought, wealth declines
    Immortal,           // [m2, inf)
};

Regime classify(Wealth m, const CriticalWealths& cw);
const char* to_string(Regime r);

struct StepOutcome {
    std::int64_t k = 0;          // children per pair
    Wealth m_prime = 0.0;        // wealth of each child (and surviving adult)
    bool extended = false;       // pair bought life extension this cycle
    Wealth pension_per_adult = 0.0;

    bool operator==(const StepOutcome&) const = default;
};

// floor(x + 1e-12): analytically integral ratios must not fall one short.
double floor_with_tolerance(double x);

inline constexpr double kFloorTolerance = 1e-12;

// Mortal dynamics only; any extension cost is ignored.
StepOutcome basic_step(Wealth m, const SocietyParams& params);

// Requires an extension cost. Falls back to basic_step when gamma*m < E.
StepOutcome extended_step(Wealth m, const SocietyParams& params);

// Dispatches on the presence of E and on affordability.
StepOutcome step(Wealth m, const SocietyParams& params);

// Brute-force reference: scans candidate child counts and solves the budget
// identity for each, independently of the closed-form child count.
StepOutcome oracle_step(Wealth m, const SocietyParams& params);

// Relative residual of the budget identity that applies to `outcome`, or 0
// when the lineage ended (no identity constrains m').
double budget_residual(Wealth m, const SocietyParams& params, const StepOutcome& outcome);

}  // namespace longevity
