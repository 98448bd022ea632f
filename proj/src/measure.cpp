#include "pmot/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pmot {

PersistenceMeasure::PersistenceMeasure(std::vector<WeightedAtom> atoms) {
    for (const auto& a : atoms) {
        if (!std::isfinite(a.mass) || a.mass <= 0.0)
            throw std::invalid_argument("PersistenceMeasure: atom mass must be positive and finite, got " +
                                        std::to_string(a.mass));
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const WeightedAtom& a, const WeightedAtom& b) { return a.point < b.point; });
    atoms_.reserve(atoms.size());
    for (const auto& a : atoms) {
        if (!atoms_.empty() && atoms_.back().point == a.point)
            atoms_.back().mass += a.mass;
        else
            atoms_.push_back(a);
    }
    for (const auto& a : atoms_) total_mass_ += a.mass;
}

double total_persistence(const PersistenceMeasure& mu, Exponent p) {
    if (mu.empty()) return 0.0;
    if (!p.is_finite()) {
        double worst = 0.0;
        for (const auto& a : mu.atoms()) worst = std::max(worst, distance_to_diagonal(a.point));
        return worst;
    }
    double sum = 0.0;
    for (const auto& a : mu.atoms())
        sum += a.mass * power(distance_to_diagonal(a.point), p.value());
    return sum;
}

PersistenceMeasure truncate(const PersistenceMeasure& mu, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("truncate: radius must be positive, got " + std::to_string(r));
    std::vector<WeightedAtom> kept;
    for (const auto& a : mu.atoms())
        if (distance_to_diagonal(a.point) > r) kept.push_back(a);
    return PersistenceMeasure(std::move(kept));
}

PersistenceMeasure mean_measure(std::span<const PersistenceMeasure> measures,
                                std::span<const double> weights) {
    if (measures.empty())
        throw std::invalid_argument("mean_measure: need at least one measure");
    if (measures.size() != weights.size())
        throw std::invalid_argument("mean_measure: got " + std::to_string(measures.size()) +
                                    " measures but " + std::to_string(weights.size()) + " weights");
    double sum = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0)
            throw std::invalid_argument("mean_measure: weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("mean_measure: weights must sum to 1, got " + std::to_string(sum));

    std::vector<WeightedAtom> combined;
    for (std::size_t i = 0; i < measures.size(); ++i) {
        if (weights[i] == 0.0) continue;
        for (const auto& a : measures[i].atoms())
            combined.push_back({a.point, weights[i] * a.mass});
    }
    return PersistenceMeasure(std::move(combined));
}

}  // namespace pmot
