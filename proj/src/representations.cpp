#include "pmot/representations.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "pmot/io.hpp"

namespace pmot {

namespace {

void check_axis(double lo, double hi, std::size_t n, const char* axis) {
    if (!(lo < hi))
        throw std::invalid_argument(std::string("grid: ") + axis + " bounds must be ordered, got [" +
                                    format_double(lo) + ", " + format_double(hi) + "]");
    if (n < 1) throw std::invalid_argument(std::string("grid: ") + axis + " needs at least 1 sample");
}

double axis_node(double lo, double hi, std::size_t n, std::size_t i) {
    if (n == 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

Grid1D::Grid1D(double t_min_, double t_max_, std::size_t samples_)
    : t_min(t_min_), t_max(t_max_), samples(samples_) {
    check_axis(t_min, t_max, samples, "t");
}

double Grid1D::node(std::size_t i) const { return axis_node(t_min, t_max, samples, i); }

Grid2D::Grid2D(double x_min_, double x_max_, double y_min_, double y_max_, std::size_t nx_,
               std::size_t ny_)
    : x_min(x_min_), x_max(x_max_), y_min(y_min_), y_max(y_max_), nx(nx_), ny(ny_) {
    check_axis(x_min, x_max, nx, "x");
    check_axis(y_min, y_max, ny, "y");
}

double Grid2D::node_x(std::size_t i) const { return axis_node(x_min, x_max, nx, i); }
double Grid2D::node_y(std::size_t j) const { return axis_node(y_min, y_max, ny, j); }

std::vector<double> persistence_surface(const PersistenceMeasure& mu, const SurfaceConfig& config,
                                        const Grid2D& grid) {
    if (!(config.bandwidth > 0.0))
        throw std::invalid_argument("persistence_surface: bandwidth must be positive");
    if (!(config.weight_power >= 1.0))
        throw std::invalid_argument("persistence_surface: weight power must be >= 1");

    std::vector<double> values(grid.nx * grid.ny, 0.0);
    const double inv_two_s2 = 1.0 / (2.0 * config.bandwidth * config.bandwidth);
    for (const auto& a : mu.atoms()) {
        const double weight = a.mass * power(distance_to_diagonal(a.point), config.weight_power);
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const double dx = a.point.birth - grid.node_x(i);
            double* row = values.data() + i * grid.ny;
            for (std::size_t j = 0; j < grid.ny; ++j) {
                const double dy = a.point.death - grid.node_y(j);
                row[j] += weight * std::exp(-(dx * dx + dy * dy) * inv_two_s2);
            }
        }
    }
    return values;
}

std::vector<double> silhouette(const PersistenceMeasure& mu, double p, const Grid1D& grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("silhouette: need p >= 1");
    std::vector<double> values(grid.samples, 0.0);
    for (const auto& a : mu.atoms()) {
        const double weight = a.mass * power(distance_to_diagonal(a.point), p - 1.0);
        const double mid = (a.point.birth + a.point.death) / 2.0;
        const double half = (a.point.death - a.point.birth) / 2.0;
        for (std::size_t i = 0; i < grid.samples; ++i) {
            const double tent = half - std::abs(grid.node(i) - mid);
            if (tent > 0.0) values[i] += weight * tent;
        }
    }
    return values;
}

std::vector<double> betti_curve(const PersistenceMeasure& mu, double p, double q,
                                const Grid1D& grid) {
    if (!(p >= 1.0)) throw std::invalid_argument("betti_curve: need p >= 1");
    if (!(q >= 1.0)) throw std::invalid_argument("betti_curve: need q >= 1");
    std::vector<double> values(grid.samples, 0.0);
    for (const auto& a : mu.atoms()) {
        const double weight = a.mass * power(distance_to_diagonal(a.point), p - 1.0 / q);
        for (std::size_t i = 0; i < grid.samples; ++i) {
            const double t = grid.node(i);
            if (a.point.birth <= t && t <= a.point.death) values[i] += weight;
        }
    }
    return values;
}

double lipschitz_feature_gap(const PersistenceMeasure& mu, const PersistenceMeasure& nu,
                             std::span<const FeatureFunction> features) {
    double gap = 0.0;
    for (const auto& f : features) {
        double integral = 0.0;
        for (const auto& a : mu.atoms()) integral += a.mass * f(a.point);
        for (const auto& b : nu.atoms()) integral -= b.mass * f(b.point);
        gap = std::max(gap, std::abs(integral));
    }
    return gap;
}

std::vector<FeatureFunction> capped_persistence_features(std::span<const double> caps) {
    std::vector<FeatureFunction> out;
    out.reserve(caps.size());
    for (double cap : caps) {
        if (!(cap >= 0.0))
            throw std::invalid_argument("capped_persistence_features: caps must be >= 0");
        out.push_back([cap](const PlanarPoint& x) {
            return std::min(distance_to_diagonal(x), cap);
        });
    }
    return out;
}

void write_surface_csv(std::ostream& out, const Grid2D& grid, std::span<const double> values) {
    if (values.size() != grid.nx * grid.ny)
        throw std::invalid_argument("write_surface_csv: value count does not match grid");
    out << "# surface x:[" << format_double(grid.x_min) << "," << format_double(grid.x_max)
        << "] nx=" << grid.nx << " y:[" << format_double(grid.y_min) << ","
        << format_double(grid.y_max) << "] ny=" << grid.ny << "\n";
    for (std::size_t i = 0; i < grid.nx; ++i) {
        for (std::size_t j = 0; j < grid.ny; ++j) {
            if (j) out << ',';
            out << format_double(values[i * grid.ny + j]);
        }
        out << '\n';
    }
}

void write_curve_csv(std::ostream& out, const Grid1D& grid, std::span<const double> values) {
    if (values.size() != grid.samples)
        throw std::invalid_argument("write_curve_csv: value count does not match grid");
    for (std::size_t i = 0; i < grid.samples; ++i)
        out << format_double(grid.node(i)) << ' ' << format_double(values[i]) << '\n';
}

}  // namespace pmot
