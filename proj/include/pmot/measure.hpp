#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pmot/geometry.hpp"

namespace pmot {

struct WeightedAtom {
    PlanarPoint point;
    double mass;

    friend bool operator==(const WeightedAtom& a, const WeightedAtom& b) {
        return a.point == b.point && a.mass == b.mass;
    }
};

// A finite nonnegative combination of off-diagonal Dirac masses. Atoms are
// merged on exact coordinate equality and kept sorted by (birth, death), so
// equal measures compare equal and atom indices are canonical. Immutable
// after construction.
class PersistenceMeasure {
public:
    PersistenceMeasure() = default;
    explicit PersistenceMeasure(std::vector<WeightedAtom> atoms);

    const std::vector<WeightedAtom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    double total_mass() const { return total_mass_; }

    friend bool operator==(const PersistenceMeasure& a, const PersistenceMeasure& b) {
        return a.atoms_ == b.atoms_;
    }

private:
    std::vector<WeightedAtom> atoms_;
    double total_mass_ = 0.0;
};

// Integral of the p-th power of the distance to the diagonal. For infinite p,
// the largest diagonal distance over the support. Zero for the empty measure.
double total_persistence(const PersistenceMeasure& mu, Exponent p);

// Keeps only atoms strictly farther than r from the diagonal. r must be > 0.
PersistenceMeasure truncate(const PersistenceMeasure& mu, double r);

// Weighted sum of measures. Weights must be nonnegative and sum to 1.
PersistenceMeasure mean_measure(std::span<const PersistenceMeasure> measures,
                                std::span<const double> weights);

}  // namespace pmot
