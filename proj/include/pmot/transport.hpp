#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "pmot/measure.hpp"

namespace pmot {

// Index value marking the virtual diagonal endpoint of a plan edge.
inline constexpr std::size_t diagonal_index = std::numeric_limits<std::size_t>::max();

struct PlanEdge {
    std::size_t source;  // atom index into the first measure, or diagonal_index
    std::size_t target;  // atom index into the second measure, or diagonal_index
    double mass;
};

// A transport plan between two measures, in canonical form: every edge
// carries positive mass, no edge joins the diagonal to itself, and indices
// refer to the canonical (sorted, merged) atom order of each measure.
struct TransportPlan {
    std::vector<PlanEdge> edges;
    Exponent cost_power;
};

// A measure extended with mass parked on the diagonal so that a pair of
// measures can be compared by balanced transport.
struct AugmentedMeasure {
    std::vector<WeightedAtom> atoms;
    double diagonal_mass;

    double total_mass() const;
};

// Adds diagonal mass to each measure so both reach mu(plane) + nu(plane).
std::pair<AugmentedMeasure, AugmentedMeasure> augment(const PersistenceMeasure& mu,
                                                      const PersistenceMeasure& nu);

// Optimal partial transport distance with ground cost rho^p, computed exactly
// on the augmented balanced problem. Requires finite p.
double ot_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p);

// The p-th power of ot_distance, straight from the solver. Avoids the
// round trip through the 1/p root when powers are what gets accumulated.
double ot_cost_power(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p);

// An optimal plan realizing ot_distance(mu, nu, p)^p.
TransportPlan optimal_plan(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p);

// Cost of a plan between the two measures it refers to, under its exponent.
double plan_cost(const TransportPlan& plan, const PersistenceMeasure& mu,
                 const PersistenceMeasure& nu);

// Largest relative violation of the marginal constraints; 0 means the plan
// moves exactly mu onto nu (excess on either side goes to the diagonal).
double plan_marginal_gap(const TransportPlan& plan, const PersistenceMeasure& mu,
                         const PersistenceMeasure& nu);

// Smallest achievable sup edge cost over perfect matchings that may also park
// points on the diagonal. Defined for integer masses only; the result is
// exactly one of the candidate matrix entries.
double bottleneck_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu);

// JSON export: {"p": ..., "cost": ..., "edges": [{"src", "tgt", "mass"}, ...]}
// where src/tgt is an atom index or the string "DIAG".
std::string plan_to_json(const TransportPlan& plan, const PersistenceMeasure& mu,
                         const PersistenceMeasure& nu);

}  // namespace pmot
