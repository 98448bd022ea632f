#include "pmot/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "pmot/io.hpp"
#include "pmot/transport.hpp"

namespace pmot {

void ExperimentConfig::validate() const {
    if (n_values.empty())
        throw std::invalid_argument("experiment: need at least one sample size");
    for (int n : n_values)
        if (n < 2)
            throw std::invalid_argument("experiment: sample sizes must be >= 2, got " +
                                        std::to_string(n));
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (!std::isfinite(p) || p < 1.0)
        throw std::invalid_argument("experiment: need finite p >= 1");
    if (limit_atoms < 1)
        throw std::invalid_argument("experiment: limit discretization needs >= 1 atoms");
}

PersistenceMeasure rips_h0_diagram_1d(std::vector<double> points) {
    if (points.size() < 2)
        throw std::invalid_argument("rips_h0_diagram_1d: need at least 2 points, got " +
                                    std::to_string(points.size()));
    std::sort(points.begin(), points.end());
    std::vector<WeightedAtom> atoms;
    atoms.reserve(points.size() - 1);
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const double gap = points[i + 1] - points[i];
        if (gap > 0.0) atoms.push_back({PlanarPoint(0.0, gap), 1.0});
    }
    return PersistenceMeasure(std::move(atoms));
}

PersistenceMeasure rescaled_empirical_measure(std::vector<double> sample) {
    const auto n = sample.size();
    if (n < 2)
        throw std::invalid_argument("rescaled_empirical_measure: need at least 2 points");
    std::sort(sample.begin(), sample.end());
    std::vector<WeightedAtom> atoms;
    atoms.reserve(n - 1);
    const double mass = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double gap = sample[i + 1] - sample[i];
        if (gap > 0.0) atoms.push_back({PlanarPoint(0.0, static_cast<double>(n) * gap), mass});
    }
    return PersistenceMeasure(std::move(atoms));
}

PersistenceMeasure sample_rescaled_empirical_measure(int n, std::mt19937_64& rng) {
    if (n < 2) throw std::invalid_argument("sample_rescaled_empirical_measure: need n >= 2");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> sample(static_cast<std::size_t>(n));
    for (auto& x : sample) x = unit(rng);
    return rescaled_empirical_measure(std::move(sample));
}

PersistenceMeasure limit_measure_discretization(int m) {
    if (m < 1) throw std::invalid_argument("limit_measure_discretization: need m >= 1");
    std::vector<WeightedAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(m));
    const double mass = 1.0 / static_cast<double>(m);
    for (int j = 1; j <= m; ++j) {
        const double q = (static_cast<double>(j) - 0.5) / static_cast<double>(m);
        atoms.push_back({PlanarPoint(0.0, -std::log1p(-q)), mass});
    }
    return PersistenceMeasure(std::move(atoms));
}

double percentile(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty()) throw std::invalid_argument("percentile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile: q must be in [0,1]");
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::uint64_t derive_stream_seed(std::uint64_t seed, int n, int trial) {
    // splitmix64 over the packed identifiers; decorrelates the streams
    std::uint64_t z = seed ^ (static_cast<std::uint64_t>(n) << 32) ^
                      static_cast<std::uint64_t>(static_cast<std::uint32_t>(trial));
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    return mix(mix(z));
}

std::vector<ExperimentRow> convergence_experiment(const ExperimentConfig& config) {
    config.validate();
    auto ns = config.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

    const auto limit = limit_measure_discretization(config.limit_atoms);
    std::vector<ExperimentRow> rows;
    rows.reserve(ns.size());
    std::vector<double> distances(static_cast<std::size_t>(config.trials));
    for (int n : ns) {
        for (int trial = 0; trial < config.trials; ++trial) {
            std::mt19937_64 rng(derive_stream_seed(config.seed, n, trial));
            const auto empirical = sample_rescaled_empirical_measure(n, rng);
            distances[static_cast<std::size_t>(trial)] =
                ot_distance(empirical, limit, Exponent(config.p));
        }
        std::sort(distances.begin(), distances.end());
        rows.push_back({n, percentile(distances, 0.5), percentile(distances, 0.1),
                        percentile(distances, 0.9)});
    }
    return rows;
}

void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          std::span<const ExperimentRow> rows) {
    nlohmann::json echo;
    echo["n"] = config.n_values;
    echo["trials"] = config.trials;
    echo["p"] = config.p;
    echo["m"] = config.limit_atoms;
    echo["seed"] = config.seed;
    out << "# " << echo.dump() << "\n";
    out << "n,median,p10,p90\n";
    for (const auto& r : rows)
        out << r.n << ',' << format_double(r.median) << ',' << format_double(r.p10) << ','
            << format_double(r.p90) << '\n';
}

}  // namespace pmot
