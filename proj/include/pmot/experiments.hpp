#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "pmot/measure.hpp"

namespace pmot {

struct ExperimentConfig {
    std::vector<int> n_values;      // sample sizes, each >= 2
    int trials = 100;               // independent repetitions per n, >= 1
    double p = 2.0;                 // transport exponent, finite
    int limit_atoms = 1000;         // discretization size of the limit, >= 1
    std::uint64_t seed = 0;

    void validate() const;
};

/// Degree-0 Rips diagram of points on the line: one finite bar (0, gap) per
// gap between consecutive sorted points. The infinite bar is not represented.
PersistenceMeasure rips_h0_diagram_1d(std::vector<double> points);

// Diagram of the sample rescaled by n, one atom (0, n * gap) of mass 1/n per
// gap; total mass (n-1)/n.
PersistenceMeasure rescaled_empirical_measure(std::vector<double> sample);

// Draws n uniform points on [0, 1] from rng and builds the rescaled measure.
PersistenceMeasure sample_rescaled_empirical_measure(int n, std::mt19937_64& rng);

// Midpoint quantile discretization of the limiting gap law (unit-rate
// exponential): m atoms (0, -log(1 - (j - 1/2)/m)), each of mass 1/m.
PersistenceMeasure limit_measure_discretization(int m);

struct ExperimentRow {
    int n;
    double median, p10, p90;
};

// Distance of the rescaled empirical measure to the discretized limit, per n
// over independent trials; rows ascend in n. Every trial derives its own
// generator from (seed, n, trial), so results do not depend on scheduling.
std::vector<ExperimentRow> convergence_experiment(const ExperimentConfig& config);

// Order statistic with linear interpolation between ranks; q in [0, 1],
// values must be sorted.
double percentile(std::span<const double> sorted_values, double q);

std::uint64_t derive_stream_seed(std::uint64_t seed, int n, int trial);

// CSV table "n,median,p10,p90" preceded by the configuration echoed as a
// JSON comment line.
void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          std::span<const ExperimentRow> rows);

}  // namespace pmot
