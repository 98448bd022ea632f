#include "pmot/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmot {

namespace {

// Basis cells live in stable slots so adjacency lists survive pivots.
struct Basis {
    std::vector<int> cell_row, cell_col;
    std::vector<double> cell_flow;
    std::vector<char> used;
    std::vector<int> free_slots;
    std::vector<std::vector<int>> adj;  // node -> incident cell slots; cols offset by n
    std::size_t n, m;

    Basis(std::size_t n_, std::size_t m_) : n(n_), m(m_) { adj.resize(n + m); }

    int add(int i, int j, double flow) {
        int slot;
        if (!free_slots.empty()) {
            slot = free_slots.back();
            free_slots.pop_back();
            cell_row[slot] = i;
            cell_col[slot] = j;
            cell_flow[slot] = flow;
            used[slot] = 1;
        } else {
            slot = static_cast<int>(cell_row.size());
            cell_row.push_back(i);
            cell_col.push_back(j);
            cell_flow.push_back(flow);
            used.push_back(1);
        }
        adj[i].push_back(slot);
        adj[n + j].push_back(slot);
        return slot;
    }

    void remove(int slot) {
        used[slot] = 0;
        detach(adj[cell_row[slot]], slot);
        detach(adj[n + cell_col[slot]], slot);
        free_slots.push_back(slot);
    }

    static void detach(std::vector<int>& list, int slot) {
        for (auto& s : list)
            if (s == slot) {
                s = list.back();
                list.pop_back();
                return;
            }
    }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t k) : parent(k) {
        for (std::size_t i = 0; i < k; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

class Simplex {
public:
    Simplex(const std::vector<double>& cost, std::size_t n, std::size_t m,
            std::vector<double> supply, std::vector<double> demand)
        : cost_(cost), n_(n), m_(m), supply_(std::move(supply)), demand_(std::move(demand)),
          basis_(n, m), u_(n), v_(m), parent_node_(n + m), parent_cell_(n + m) {
        double peak = 0.0;
        for (double c : cost_) peak = std::max(peak, std::abs(c));
        cost_tol_ = 1e-11 * (1.0 + peak);
        double mass_peak = 0.0;
        for (double s : supply_) mass_peak = std::max(mass_peak, s);
        for (double d : demand_) mass_peak = std::max(mass_peak, d);
        mass_tiny_ = 1e-13 * mass_peak;
    }

    TransportSolution run() {
        initial_solution();
        complete_tree();

        const std::size_t cells = n_ * m_;
        const std::size_t block = std::min<std::size_t>(cells, 8192);
        const long max_pivots = 400 * static_cast<long>(n_ + m_) + 20000;
        const long stall_limit = 3 * static_cast<long>(n_ + m_) + 50;
        long pivots = 0, stalled = 0;
        bool bland = false;
        std::size_t cursor = 0;

        compute_duals();
        while (true) {
            // Block pricing: take the most negative reduced cost seen in the
            // next block that contains one; a clean full sweep means optimal.
            // After a long degenerate stall switch to Bland's rule (first
            // improving cell in index order), which cannot cycle.
            int enter_i = -1, enter_j = -1;
            std::size_t scanned = 0;
            if (bland) cursor = 0;
            while (scanned < cells) {
                double best = -cost_tol_;
                const std::size_t stop = std::min(cells, cursor + block);
                for (std::size_t idx = cursor; idx < stop; ++idx) {
                    const std::size_t i = idx / m_;
                    const double rc = cost_[idx] - u_[i] - v_[idx % m_];
                    if (rc < best) {
                        best = rc;
                        enter_i = static_cast<int>(i);
                        enter_j = static_cast<int>(idx % m_);
                        if (bland) break;
                    }
                }
                scanned += stop - cursor;
                cursor = stop == cells ? 0 : stop;
                if (enter_i >= 0) break;
            }
            if (enter_i < 0) break;

            const double theta = pivot(enter_i, enter_j);
            compute_duals();
            if (theta <= mass_tiny_) {
                if (++stalled > stall_limit) bland = true;
            } else {
                stalled = 0;
            }
            if (++pivots > max_pivots)
                throw std::runtime_error("transport solver: pivot limit exceeded (" +
                                         std::to_string(max_pivots) + ")");
        }
        return collect();
    }

private:
    void initial_solution() {
        std::vector<double> rs = supply_, rd = demand_;
        std::vector<char> col_open(m_, 1);
        std::size_t open = m_;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* row = cost_.data() + i * m_;
            while (rs[i] > mass_tiny_) {
                if (open == 0) break;  // imbalance residue, below tolerance by contract
                std::size_t jbest = m_;
                double cbest = std::numeric_limits<double>::infinity();
                for (std::size_t j = 0; j < m_; ++j)
                    if (col_open[j] && row[j] < cbest) {
                        cbest = row[j];
                        jbest = j;
                    }
                const double t = std::min(rs[i], rd[jbest]);
                basis_.add(static_cast<int>(i), static_cast<int>(jbest), t);
                rs[i] -= t;
                rd[jbest] -= t;
                if (rd[jbest] <= mass_tiny_) {
                    rd[jbest] = 0.0;
                    col_open[jbest] = 0;
                    --open;
                }
                if (rs[i] <= mass_tiny_) rs[i] = 0.0;
            }
        }
    }

    // The greedy start is a forest; join its components with zero flows to get
    // a spanning tree basis of n + m - 1 cells.
    void complete_tree() {
        UnionFind uf(n_ + m_);
        std::size_t count = 0;
        for (std::size_t s = 0; s < basis_.used.size(); ++s)
            if (basis_.used[s]) {
                uf.unite(basis_.cell_row[s], static_cast<int>(n_) + basis_.cell_col[s]);
                ++count;
            }
        for (std::size_t i = 0; i < n_ && count + 1 < n_ + m_; ++i)
            for (std::size_t j = 0; j < m_ && count + 1 < n_ + m_; ++j)
                if (uf.unite(static_cast<int>(i), static_cast<int>(n_ + j))) {
                    basis_.add(static_cast<int>(i), static_cast<int>(j), 0.0);
                    ++count;
                }
    }

    void compute_duals() {
        // one BFS over the basis tree rooted at row 0
        visit_stack_.clear();
        visited_.assign(n_ + m_, 0);
        u_[0] = 0.0;
        visited_[0] = 1;
        visit_stack_.push_back(0);
        while (!visit_stack_.empty()) {
            const int node = visit_stack_.back();
            visit_stack_.pop_back();
            for (int slot : basis_.adj[node]) {
                const int i = basis_.cell_row[slot];
                const int other = (node == i) ? static_cast<int>(n_) + basis_.cell_col[slot] : i;
                if (visited_[other]) continue;
                visited_[other] = 1;
                const double c = cost_[static_cast<std::size_t>(i) * m_ + basis_.cell_col[slot]];
                if (other >= static_cast<int>(n_))
                    v_[other - n_] = c - u_[i];
                else
                    u_[other] = c - v_[basis_.cell_col[slot]];
                visit_stack_.push_back(other);
            }
        }
    }

    double pivot(int enter_i, int enter_j) {
        // unique tree path from the entering row to the entering column
        std::fill(parent_cell_.begin(), parent_cell_.end(), -1);
        parent_cell_[enter_i] = -2;
        visit_stack_.clear();
        visit_stack_.push_back(enter_i);
        const int target = static_cast<int>(n_) + enter_j;
        while (!visit_stack_.empty() && parent_cell_[target] == -1) {
            const int node = visit_stack_.back();
            visit_stack_.pop_back();
            for (int slot : basis_.adj[node]) {
                const int i = basis_.cell_row[slot];
                const int other = (node == i) ? static_cast<int>(n_) + basis_.cell_col[slot] : i;
                if (parent_cell_[other] != -1) continue;
                parent_cell_[other] = slot;
                parent_node_[other] = node;
                visit_stack_.push_back(other);
                if (other == target) break;
            }
        }
        if (parent_cell_[target] == -1)
            throw std::runtime_error("transport solver: basis lost connectivity");

        // odd positions counted from the entering cell give up flow
        path_.clear();
        for (int node = target; node != enter_i; node = parent_node_[node])
            path_.push_back(parent_cell_[node]);

        double theta = std::numeric_limits<double>::infinity();
        int leave = -1;
        for (std::size_t k = 0; k < path_.size(); ++k) {
            if (k % 2 == 1) continue;  // path_ runs col-end first; even entries are the minus cells
            const int slot = path_[k];
            if (basis_.cell_flow[slot] < theta ||
                (basis_.cell_flow[slot] == theta && leave >= 0 && cell_key(slot) < cell_key(leave))) {
                theta = basis_.cell_flow[slot];
                leave = slot;
            }
        }

        for (std::size_t k = 0; k < path_.size(); ++k) {
            const int slot = path_[k];
            if (k % 2 == 0) {
                basis_.cell_flow[slot] -= theta;
                if (basis_.cell_flow[slot] < 0.0) basis_.cell_flow[slot] = 0.0;
            } else {
                basis_.cell_flow[slot] += theta;
            }
        }
        basis_.remove(leave);
        basis_.add(enter_i, enter_j, theta);
        return theta;
    }

    long cell_key(int slot) const {
        return static_cast<long>(basis_.cell_row[slot]) * static_cast<long>(m_) +
               basis_.cell_col[slot];
    }

    TransportSolution collect() const {
        TransportSolution out;
        out.cost = 0.0;
        for (std::size_t s = 0; s < basis_.used.size(); ++s) {
            if (!basis_.used[s] || basis_.cell_flow[s] <= 0.0) continue;
            const auto i = static_cast<std::size_t>(basis_.cell_row[s]);
            const auto j = static_cast<std::size_t>(basis_.cell_col[s]);
            out.flows.push_back({i, j, basis_.cell_flow[s]});
            out.cost += basis_.cell_flow[s] * cost_[i * m_ + j];
        }
        std::sort(out.flows.begin(), out.flows.end(), [](const FlowEdge& a, const FlowEdge& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        return out;
    }

    const std::vector<double>& cost_;
    std::size_t n_, m_;
    std::vector<double> supply_, demand_;
    Basis basis_;
    std::vector<double> u_, v_;
    std::vector<int> parent_node_, parent_cell_;
    std::vector<int> path_;
    std::vector<int> visit_stack_;
    std::vector<char> visited_;
    double cost_tol_ = 0.0;
    double mass_tiny_ = 0.0;
};

}  // namespace

TransportSolution solve_transportation(const std::vector<double>& cost,
                                       std::size_t rows, std::size_t cols,
                                       std::vector<double> supply,
                                       std::vector<double> demand) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("solve_transportation: empty side");
    if (cost.size() != rows * cols)
        throw std::invalid_argument("solve_transportation: cost matrix size mismatch");
    if (supply.size() != rows || demand.size() != cols)
        throw std::invalid_argument("solve_transportation: supply/demand size mismatch");
    double s_total = 0.0, d_total = 0.0;
    for (double s : supply) {
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("solve_transportation: supplies must be positive");
        s_total += s;
    }
    for (double d : demand) {
        if (!(d > 0.0) || !std::isfinite(d))
            throw std::invalid_argument("solve_transportation: demands must be positive");
        d_total += d;
    }
    if (std::abs(s_total - d_total) > 1e-9 * std::max({s_total, d_total, 1.0}))
        throw std::invalid_argument("solve_transportation: totals differ by " +
                                    std::to_string(s_total - d_total));
    return Simplex(cost, rows, cols, std::move(supply), std::move(demand)).run();
}

}  // namespace pmot
