#include "pmot/transport.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "pmot/io.hpp"
#include "pmot/transport_simplex.hpp"

namespace pmot {

namespace {

// Strict weak order on measures; used to pick a canonical argument order so
// that distance(a, b) and distance(b, a) run the identical computation.
bool measure_less(const PersistenceMeasure& a, const PersistenceMeasure& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a.atoms()[i];
        const auto& y = b.atoms()[i];
        if (x.point.birth != y.point.birth) return x.point.birth < y.point.birth;
        if (x.point.death != y.point.death) return x.point.death < y.point.death;
        if (x.mass != y.mass) return x.mass < y.mass;
    }
    return false;
}

double rho_points(const PlanarPoint& a, const PlanarPoint& b) {
    return std::min(euclidean_distance(a, b),
                    distance_to_diagonal(a) + distance_to_diagonal(b));
}

// Solves the augmented balanced problem for (mu, nu) in this orientation and
// returns the plan in canonical edge order together with the cost summed in
// that order.
struct SolvedPair {
    std::vector<PlanEdge> edges;
    double cost_pow;
};

SolvedPair solve_pair(const PersistenceMeasure& mu, const PersistenceMeasure& nu, double p) {
    SolvedPair out{{}, 0.0};
    const auto& xs = mu.atoms();
    const auto& ys = nu.atoms();
    const std::size_t n = xs.size(), m = ys.size();
    if (n == 0 && m == 0) return out;

    // rows: atoms of mu, then a diagonal row holding nu's total mass
    const bool diag_row = nu.total_mass() > 0.0;
    const bool diag_col = mu.total_mass() > 0.0;
    const std::size_t rows = n + (diag_row ? 1 : 0);
    const std::size_t cols = m + (diag_col ? 1 : 0);

    std::vector<double> cost(rows * cols);
    for (std::size_t i = 0; i < n; ++i) {
        double* row = cost.data() + i * cols;
        for (std::size_t j = 0; j < m; ++j) row[j] = power(rho_points(xs[i].point, ys[j].point), p);
        if (diag_col) row[m] = power(distance_to_diagonal(xs[i].point), p);
    }
    if (diag_row) {
        double* row = cost.data() + n * cols;
        for (std::size_t j = 0; j < m; ++j) row[j] = power(distance_to_diagonal(ys[j].point), p);
        if (diag_col) row[m] = 0.0;
    }

    std::vector<double> supply(rows), demand(cols);
    for (std::size_t i = 0; i < n; ++i) supply[i] = xs[i].mass;
    if (diag_row) supply[n] = nu.total_mass();
    for (std::size_t j = 0; j < m; ++j) demand[j] = ys[j].mass;
    if (diag_col) demand[m] = mu.total_mass();

    const auto solved = solve_transportation(cost, rows, cols, supply, demand);
    for (const auto& f : solved.flows) {
        const std::size_t src = f.row < n ? f.row : diagonal_index;
        const std::size_t tgt = f.col < m ? f.col : diagonal_index;
        if (src == diagonal_index && tgt == diagonal_index) continue;
        out.edges.push_back({src, tgt, f.amount});
    }
    // solver flows arrive sorted by (row, col); diagonal_index sorts last
    for (const auto& e : out.edges)
        out.cost_pow += e.mass * cost[(e.source == diagonal_index ? n : e.source) * cols +
                                      (e.target == diagonal_index ? m : e.target)];
    return out;
}

double edge_cost_pow(const PlanEdge& e, const PersistenceMeasure& mu,
                     const PersistenceMeasure& nu, double p) {
    if (e.source == diagonal_index && e.target == diagonal_index) return 0.0;
    if (e.source == diagonal_index)
        return power(distance_to_diagonal(nu.atoms().at(e.target).point), p);
    if (e.target == diagonal_index)
        return power(distance_to_diagonal(mu.atoms().at(e.source).point), p);
    return power(rho_points(mu.atoms().at(e.source).point, nu.atoms().at(e.target).point), p);
}

void require_finite(const Exponent& p, const char* who) {
    if (!p.is_finite())
        throw std::invalid_argument(std::string(who) + ": exponent must be finite");
}

}  // namespace

double AugmentedMeasure::total_mass() const {
    double t = diagonal_mass;
    for (const auto& a : atoms) t += a.mass;
    return t;
}

std::pair<AugmentedMeasure, AugmentedMeasure> augment(const PersistenceMeasure& mu,
                                                      const PersistenceMeasure& nu) {
    AugmentedMeasure a{mu.atoms(), nu.total_mass()};
    AugmentedMeasure b{nu.atoms(), mu.total_mass()};
    return {std::move(a), std::move(b)};
}

double ot_cost_power(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p) {
    require_finite(p, "ot_cost_power");
    const bool swap = measure_less(nu, mu);
    const auto solved = swap ? solve_pair(nu, mu, p.value()) : solve_pair(mu, nu, p.value());
    return std::max(solved.cost_pow, 0.0);
}

double ot_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p) {
    require_finite(p, "ot_distance");
    const double c = ot_cost_power(mu, nu, p);
    return p.value() == 1.0 ? c : std::pow(c, 1.0 / p.value());
}

TransportPlan optimal_plan(const PersistenceMeasure& mu, const PersistenceMeasure& nu, Exponent p) {
    require_finite(p, "optimal_plan");
    const bool swap = measure_less(nu, mu);
    auto solved = swap ? solve_pair(nu, mu, p.value()) : solve_pair(mu, nu, p.value());
    if (swap) {
        for (auto& e : solved.edges) std::swap(e.source, e.target);
        std::sort(solved.edges.begin(), solved.edges.end(), [](const PlanEdge& a, const PlanEdge& b) {
            return a.source != b.source ? a.source < b.source : a.target < b.target;
        });
    }
    return TransportPlan{std::move(solved.edges), p};
}

double plan_cost(const TransportPlan& plan, const PersistenceMeasure& mu,
                 const PersistenceMeasure& nu) {
    require_finite(plan.cost_power, "plan_cost");
    double total = 0.0;
    for (const auto& e : plan.edges) {
        if (!(e.mass > 0.0)) throw std::invalid_argument("plan_cost: edge mass must be positive");
        total += e.mass * edge_cost_pow(e, mu, nu, plan.cost_power.value());
    }
    return total;
}

double plan_marginal_gap(const TransportPlan& plan, const PersistenceMeasure& mu,
                         const PersistenceMeasure& nu) {
    std::vector<double> out_mass(mu.size(), 0.0), in_mass(nu.size(), 0.0);
    for (const auto& e : plan.edges) {
        if (e.source != diagonal_index) out_mass.at(e.source) += e.mass;
        if (e.target != diagonal_index) in_mass.at(e.target) += e.mass;
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        gap = std::max(gap, std::abs(out_mass[i] - mu.atoms()[i].mass) / mu.atoms()[i].mass);
    for (std::size_t j = 0; j < nu.size(); ++j)
        gap = std::max(gap, std::abs(in_mass[j] - nu.atoms()[j].mass) / nu.atoms()[j].mass);
    return gap;
}

namespace {

// Hopcroft-Karp maximum matching on an implicit threshold graph. Left side:
// atoms of a then one slot per atom of b; right side: atoms of b then one
// slot per atom of a. Slots absorb whatever is parked on the diagonal.
class ThresholdMatcher {
public:
    ThresholdMatcher(const std::vector<PlanarPoint>& a, const std::vector<PlanarPoint>& b)
        : a_(a), b_(b), n_(a.size()), m_(b.size()), left_(n_ + m_), right_(m_ + n_) {
        dd_a_.reserve(n_);
        dd_b_.reserve(m_);
        for (const auto& x : a_) dd_a_.push_back(distance_to_diagonal(x));
        for (const auto& y : b_) dd_b_.push_back(distance_to_diagonal(y));
    }

    bool perfect_matching_at(double t) {
        match_l_.assign(left_, -1);
        match_r_.assign(right_, -1);
        adj_.assign(left_, {});
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < m_; ++j)
                if (euclidean_distance(a_[i], b_[j]) <= t) adj_[i].push_back(static_cast<int>(j));
            if (dd_a_[i] <= t)
                for (std::size_t s = 0; s < n_; ++s) adj_[i].push_back(static_cast<int>(m_ + s));
        }
        for (std::size_t s = 0; s < m_; ++s) {
            auto& row = adj_[n_ + s];
            for (std::size_t j = 0; j < m_; ++j)
                if (dd_b_[j] <= t) row.push_back(static_cast<int>(j));
            for (std::size_t r = 0; r < n_; ++r) row.push_back(static_cast<int>(m_ + r));
        }

        std::size_t matched = 0;
        while (bfs_layers()) {
            for (std::size_t l = 0; l < left_; ++l)
                if (match_l_[l] < 0 && dfs_augment(static_cast<int>(l))) ++matched;
        }
        return matched == left_;
    }

private:
    bool bfs_layers() {
        std::queue<int> q;
        dist_.assign(left_, -1);
        for (std::size_t l = 0; l < left_; ++l)
            if (match_l_[l] < 0) {
                dist_[l] = 0;
                q.push(static_cast<int>(l));
            }
        bool reachable = false;
        while (!q.empty()) {
            const int l = q.front();
            q.pop();
            for (int r : adj_[l]) {
                const int nl = match_r_[r];
                if (nl < 0)
                    reachable = true;
                else if (dist_[nl] < 0) {
                    dist_[nl] = dist_[l] + 1;
                    q.push(nl);
                }
            }
        }
        return reachable;
    }

    bool dfs_augment(int l) {
        for (int r : adj_[l]) {
            const int nl = match_r_[r];
            if (nl < 0 || (dist_[nl] == dist_[l] + 1 && dfs_augment(nl))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = -1;
        return false;
    }

    const std::vector<PlanarPoint>& a_;
    const std::vector<PlanarPoint>& b_;
    std::size_t n_, m_, left_, right_;
    std::vector<double> dd_a_, dd_b_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> match_l_, match_r_, dist_;
};

std::vector<PlanarPoint> expand_integer_atoms(const PersistenceMeasure& mu) {
    std::vector<PlanarPoint> out;
    for (const auto& a : mu.atoms()) {
        const double r = std::round(a.mass);
        if (r < 1.0 || std::abs(a.mass - r) > 1e-9)
            throw std::invalid_argument(
                "bottleneck_distance: defined for diagrams only; atom mass " +
                format_double(a.mass) + " is not a positive integer");
        for (long k = 0; k < static_cast<long>(r); ++k) out.push_back(a.point);
    }
    return out;
}

}  // namespace

double bottleneck_distance(const PersistenceMeasure& mu, const PersistenceMeasure& nu) {
    const bool swap = measure_less(nu, mu);
    const auto a = expand_integer_atoms(swap ? nu : mu);
    const auto b = expand_integer_atoms(swap ? mu : nu);

    std::vector<double> candidates{0.0};
    for (const auto& x : a) candidates.push_back(distance_to_diagonal(x));
    for (const auto& y : b) candidates.push_back(distance_to_diagonal(y));
    for (const auto& x : a)
        for (const auto& y : b) candidates.push_back(euclidean_distance(x, y));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    ThresholdMatcher matcher(a, b);
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (matcher.perfect_matching_at(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

std::string plan_to_json(const TransportPlan& plan, const PersistenceMeasure& mu,
                         const PersistenceMeasure& nu) {
    nlohmann::json j;
    j["p"] = plan.cost_power.value();
    j["cost"] = plan_cost(plan, mu, nu);
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : plan.edges) {
        nlohmann::json je;
        je["src"] = e.source == diagonal_index ? nlohmann::json("DIAG") : nlohmann::json(e.source);
        je["tgt"] = e.target == diagonal_index ? nlohmann::json("DIAG") : nlohmann::json(e.target);
        je["mass"] = e.mass;
        edges.push_back(std::move(je));
    }
    return j.dump(2);
}

}  // namespace pmot
