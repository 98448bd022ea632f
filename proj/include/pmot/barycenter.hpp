#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "pmot/measure.hpp"
#include "pmot/transport.hpp"

namespace pmot {

// Weighted family of measures to average, with a strictly convex cost
// exponent. p == 1 is rejected: the minimizer would be a median-type object
// and the alternating scheme below has no uniqueness to lean on.
struct BarycenterProblem {
    std::vector<PersistenceMeasure> inputs;
    std::vector<double> weights;
    double p;

    BarycenterProblem(std::vector<PersistenceMeasure> inputs_, std::vector<double> weights_,
                      double p_);

    // Upper bound on the mass any energy minimizer can carry.
    double total_input_mass() const;
};

struct GroupEntry {
    std::size_t target;  // atom index in that input, or diagonal_index
    double mass;
};

// For one candidate atom: what it is matched to in every input measure.
struct AtomGrouping {
    std::vector<std::vector<GroupEntry>> per_input;
};

struct BarycenterState {
    PersistenceMeasure candidate;
    std::vector<AtomGrouping> groupings;  // aligned with candidate.atoms()
    double energy;
    std::vector<double> energy_trace;  // energy after each sweep, first entry is the seed's
    bool converged;
};

// Weighted transport energy of a candidate measure against the problem inputs.
double frechet_energy(const PersistenceMeasure& candidate, const BarycenterProblem& problem);

// Minimizer of y -> sum_i weights[i] * rho(points[i], y)^p over the quotient
// plane (off-diagonal points plus the diagonal element). Exact for p == 2 via
// case analysis over which inputs are matched directly; other p start the
// search from every case's p == 2 solution. Exhaustive over cases up to 16
// off-diagonal inputs, heuristic beyond.
QuotientPoint localized_candidate(std::span<const QuotientPoint> points,
                                  std::span<const double> weights, double p);

struct FrechetOptions {
    int max_iterations = 100;
    double tolerance = 1e-10;  // stop when an energy sweep gains less than this
};

// Alternating minimization from an initial candidate: optimal plans against
// every input, then each candidate atom moves to the localized minimizer of
// its matched mass. Atoms matched entirely to the diagonal are dropped.
// The energy trace never increases.
BarycenterState frechet_mean(const BarycenterProblem& problem, const PersistenceMeasure& init,
                             const FrechetOptions& options = {});

// Runs frechet_mean seeded from every input plus `random_seeds` perturbed
// inputs drawn from rng, and keeps the lowest-energy state.
BarycenterState multistart_frechet_mean(const BarycenterProblem& problem, std::mt19937_64& rng,
                                        int random_seeds = 1, const FrechetOptions& options = {});

// Exact minimizer for small families of diagrams (integer masses): inputs are
// padded with diagonal copies to equal cardinality m, every grouping of one
// point per input is localized to a candidate, and a linear program picks the
// optimal integral combination. Requires m^N <= 100000.
PersistenceMeasure exact_barycenter_lp(const BarycenterProblem& problem);

}  // namespace pmot
