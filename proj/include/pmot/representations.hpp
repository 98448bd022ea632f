#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "pmot/measure.hpp"

namespace pmot {

// Evaluation lattice for 1D summaries (silhouettes, curves).
struct Grid1D {
    double t_min, t_max;
    std::size_t samples;

    Grid1D(double t_min_, double t_max_, std::size_t samples_);
    double node(std::size_t i) const;
};

// Evaluation lattice for 2D summaries (surfaces). Values are indexed
// row-major with the x index outermost: value[ix * ny + iy].
struct Grid2D {
    double x_min, x_max, y_min, y_max;
    std::size_t nx, ny;

    Grid2D(double x_min_, double x_max_, double y_min_, double y_max_, std::size_t nx_,
           std::size_t ny_);
    double node_x(std::size_t i) const;
    double node_y(std::size_t j) const;
};

struct SurfaceConfig {
    double bandwidth;     // Gaussian kernel width, > 0
    double weight_power;  // persistence weight exponent, >= 1
};

// Kernel sum weighted by persistence: each atom contributes
// mass * d(atom, diagonal)^p * exp(-|atom - node|^2 / (2 bandwidth^2)).
std::vector<double> persistence_surface(const PersistenceMeasure& mu, const SurfaceConfig& config,
                                        const Grid2D& grid);

// Tent sum: each atom contributes mass * d(atom, diagonal)^(p-1) * tent(atom, t)
// where the tent peaks at the bar midpoint with height half the bar length.
std::vector<double> silhouette(const PersistenceMeasure& mu, double p, const Grid1D& grid);

// Weighted rank curve: atoms alive at t (birth <= t <= death) contribute
// mass * d(atom, diagonal)^(p - 1/q). p = q = 1 counts live mass.
std::vector<double> betti_curve(const PersistenceMeasure& mu, double p, double q,
                                const Grid1D& grid);

using FeatureFunction = std::function<double(const PlanarPoint&)>;

// sup over the family of |mu(f) - nu(f)|.
double lipschitz_feature_gap(const PersistenceMeasure& mu, const PersistenceMeasure& nu,
                             std::span<const FeatureFunction> features);

// The stock 1-Lipschitz family t -> min(d(., diagonal), t), one feature per cap.
std::vector<FeatureFunction> capped_persistence_features(std::span<const double> caps);

// CSV writers. The surface goes out row-major, one x row per line, with the
// grid bounds echoed in a leading comment; curves go out as "t value" lines.
void write_surface_csv(std::ostream& out, const Grid2D& grid, std::span<const double> values);
void write_curve_csv(std::ostream& out, const Grid1D& grid, std::span<const double> values);

}  // namespace pmot
