#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmot {

inline constexpr double sqrt2 = 1.41421356237309504880168872420969808;

// A point strictly above the diagonal of the birth/death plane.
// Infinite or NaN coordinates and points on or below the diagonal are
// rejected at construction, so a PlanarPoint is always usable downstream.
struct PlanarPoint {
    double birth;
    double death;

    PlanarPoint(double b, double d) : birth(b), death(d) {
        if (!std::isfinite(b) || !std::isfinite(d))
            throw std::invalid_argument("PlanarPoint: coordinates must be finite, got (" +
                                        std::to_string(b) + ", " + std::to_string(d) + ")");
        if (!(d > b))
            throw std::invalid_argument("PlanarPoint: death must exceed birth, got (" +
                                        std::to_string(b) + ", " + std::to_string(d) + ")");
    }

    friend bool operator==(const PlanarPoint& a, const PlanarPoint& b) {
        return a.birth == b.birth && a.death == b.death;
    }
    friend bool operator<(const PlanarPoint& a, const PlanarPoint& b) {
        if (a.birth != b.birth) return a.birth < b.birth;
        return a.death < b.death;
    }
};

inline double euclidean_distance(const PlanarPoint& a, const PlanarPoint& b) {
    const double dx = a.birth - b.birth;
    const double dy = a.death - b.death;
    return std::sqrt(dx * dx + dy * dy);
}

// Distance to the diagonal, i.e. to the nearest point with birth == death.
inline double distance_to_diagonal(const PlanarPoint& x) {
    return (x.death - x.birth) / sqrt2;
}

// A point of the quotient plane: either a proper off-diagonal point or the
// diagonal itself, collapsed to a single element.
class QuotientPoint {
public:
    QuotientPoint(const PlanarPoint& p) : diagonal_(false), point_(p) {}

    static QuotientPoint diagonal() { return QuotientPoint(); }

    bool is_diagonal() const { return diagonal_; }

    const PlanarPoint& point() const {
        if (diagonal_) throw std::logic_error("QuotientPoint: diagonal element has no coordinates");
        return point_;
    }

    double persistence_distance() const {
        return diagonal_ ? 0.0 : distance_to_diagonal(point_);
    }

    friend bool operator==(const QuotientPoint& a, const QuotientPoint& b) {
        if (a.diagonal_ != b.diagonal_) return false;
        return a.diagonal_ || a.point_ == b.point_;
    }

private:
    QuotientPoint() : diagonal_(true), point_(0.0, 1.0) {}

    bool diagonal_;
    PlanarPoint point_;  // meaningless when diagonal_
};

// Metric on the quotient plane: two points are either matched directly or
// each sent to the diagonal, whichever is cheaper.
inline double ground_distance(const QuotientPoint& a, const QuotientPoint& b) {
    if (a.is_diagonal() && b.is_diagonal()) return 0.0;
    if (a.is_diagonal()) return distance_to_diagonal(b.point());
    if (b.is_diagonal()) return distance_to_diagonal(a.point());
    const double direct = euclidean_distance(a.point(), b.point());
    const double via_diagonal = distance_to_diagonal(a.point()) + distance_to_diagonal(b.point());
    return std::min(direct, via_diagonal);
}

// pow with fast paths for the exponents used throughout; keeps cost
// evaluation consistent between the solvers and the summary statistics.
inline double power(double base, double p) {
    if (p == 1.0) return base;
    if (p == 2.0) return base * base;
    if (p == 3.0) return base * base * base;
    return std::pow(base, p);
}

// Transport cost exponent: a real p >= 1 or infinity.
class Exponent {
public:
    Exponent(double p) : value_(p) {
        if (std::isnan(p) || p < 1.0)
            throw std::invalid_argument("Exponent: need p >= 1, got " + std::to_string(p));
    }

    static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(value_); }
    double value() const { return value_; }

private:
    double value_;
};

}  // namespace pmot
