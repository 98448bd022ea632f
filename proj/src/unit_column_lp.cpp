#include "unit_column_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pmot::detail {

namespace {

class RevisedSimplex {
public:
    explicit RevisedSimplex(const SparseLp& lp)
        : lp_(lp), rows_(lp.rows), vars_(lp.columns.size()),
          binv_(rows_ * rows_, 0.0), xb_(lp.rhs), basis_(rows_), y_(rows_), d_(rows_) {
        for (std::size_t r = 0; r < rows_; ++r) {
            binv_[r * rows_ + r] = 1.0;                        // artificial identity basis
            basis_[r] = static_cast<int>(vars_ + r);
            if (lp.rhs[r] < 0.0)
                throw std::invalid_argument("unit_column_lp: rhs must be nonnegative");
        }
    }

    LpSolution solve() {
        run_phase(true);
        double infeasibility = 0.0;
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] >= static_cast<int>(vars_)) infeasibility += std::abs(xb_[r]);
        if (infeasibility > 1e-8)
            throw std::runtime_error("unit_column_lp: infeasible, residual " +
                                     std::to_string(infeasibility));
        run_phase(false);

        LpSolution out{std::vector<double>(vars_, 0.0), 0.0};
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] < static_cast<int>(vars_)) out.x[basis_[r]] = std::max(xb_[r], 0.0);
        for (std::size_t j = 0; j < vars_; ++j) out.objective += lp_.cost[j] * out.x[j];
        return out;
    }

private:
    double variable_cost(std::size_t j, bool phase1) const {
        // artificials cost 1 in phase 1 and nothing in phase 2, where they can
        // only remain basic at level zero
        if (j >= vars_) return phase1 ? 1.0 : 0.0;
        return phase1 ? 0.0 : lp_.cost[j];
    }

    void compute_y(bool phase1) {
        for (std::size_t r = 0; r < rows_; ++r) {
            double acc = 0.0;
            for (std::size_t i = 0; i < rows_; ++i)
                acc += variable_cost(basis_[i], phase1) * binv_[i * rows_ + r];
            y_[r] = acc;
        }
    }

    double reduced_cost(std::size_t j, bool phase1) const {
        double rc = variable_cost(j, phase1);
        for (const auto& [r, a] : lp_.columns[j]) rc -= y_[r] * a;
        return rc;
    }

    void column_direction(std::size_t j) {
        std::fill(d_.begin(), d_.end(), 0.0);
        for (const auto& [r, a] : lp_.columns[j])
            for (std::size_t i = 0; i < rows_; ++i) d_[i] += binv_[i * rows_ + r] * a;
    }

    void run_phase(bool phase1) {
        const long max_iter = 200 * static_cast<long>(rows_) + 5000;
        const long stall_limit = 2 * static_cast<long>(rows_) + 50;
        long iter = 0, stalled = 0;
        bool bland = false;
        const double tol = 1e-10;

        while (true) {
            compute_y(phase1);
            int enter = -1;
            double best = -tol;
            for (std::size_t j = 0; j < vars_; ++j) {
                const double rc = reduced_cost(j, phase1);
                if (rc < best) {
                    enter = static_cast<int>(j);
                    if (bland) break;
                    best = rc;
                }
            }
            if (enter < 0) break;

            column_direction(static_cast<std::size_t>(enter));

            // A basic artificial whose direction entry is nonzero leaves first;
            // this keeps artificials pinned at zero once phase 1 is done.
            int leave = -1;
            for (std::size_t r = 0; r < rows_ && !phase1; ++r)
                if (basis_[r] >= static_cast<int>(vars_) && std::abs(d_[r]) > 1e-9) {
                    leave = static_cast<int>(r);
                    break;
                }
            double theta = 0.0;
            if (leave < 0) {
                theta = std::numeric_limits<double>::infinity();
                for (std::size_t r = 0; r < rows_; ++r) {
                    if (d_[r] <= 1e-11) continue;
                    const double ratio = xb_[r] / d_[r];
                    if (ratio < theta - 1e-15 ||
                        (ratio < theta + 1e-15 && leave >= 0 && basis_[r] < basis_[leave])) {
                        theta = ratio;
                        leave = static_cast<int>(r);
                    }
                }
                if (leave < 0)
                    throw std::runtime_error("unit_column_lp: unbounded direction");
            }

            pivot(static_cast<std::size_t>(leave), static_cast<std::size_t>(enter), theta);

            if (theta <= 1e-13) {
                if (++stalled > stall_limit) bland = true;
            } else {
                stalled = 0;
            }
            if (++iter > max_iter)
                throw std::runtime_error("unit_column_lp: iteration limit exceeded");
        }
    }

    void pivot(std::size_t leave, std::size_t enter, double theta) {
        const double dl = d_[leave];
        if (std::abs(dl) < 1e-13)
            throw std::runtime_error("unit_column_lp: degenerate pivot element");
        double* lrow = binv_.data() + leave * rows_;
        for (std::size_t r = 0; r < rows_; ++r) lrow[r] /= dl;
        xb_[leave] /= dl;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == leave || d_[i] == 0.0) continue;
            const double f = d_[i];
            double* row = binv_.data() + i * rows_;
            for (std::size_t r = 0; r < rows_; ++r) row[r] -= f * lrow[r];
            xb_[i] -= f * xb_[leave];
            if (xb_[i] < 0.0 && xb_[i] > -1e-11) xb_[i] = 0.0;
        }
        (void)theta;
        basis_[leave] = static_cast<int>(enter);
    }

    const SparseLp& lp_;
    std::size_t rows_, vars_;
    std::vector<double> binv_, xb_;
    std::vector<int> basis_;
    std::vector<double> y_, d_;
};

void validate(const SparseLp& lp) {
    if (lp.rows == 0 || lp.columns.empty())
        throw std::invalid_argument("unit_column_lp: empty program");
    if (lp.cost.size() != lp.columns.size() || lp.rhs.size() != lp.rows)
        throw std::invalid_argument("unit_column_lp: inconsistent sizes");
    for (const auto& col : lp.columns)
        for (const auto& [r, a] : col) {
            if (r < 0 || static_cast<std::size_t>(r) >= lp.rows)
                throw std::invalid_argument("unit_column_lp: row id out of range");
            if (!std::isfinite(a))
                throw std::invalid_argument("unit_column_lp: non-finite coefficient");
        }
}

}  // namespace

LpSolution solve_unit_column_lp(const UnitColumnLp& lp) {
    SparseLp general;
    general.rows = lp.rows;
    general.cost = lp.cost;
    general.rhs = lp.rhs;
    general.columns.reserve(lp.columns.size());
    for (const auto& col : lp.columns) {
        std::vector<std::pair<int, double>> entries;
        entries.reserve(col.size());
        for (int r : col) entries.emplace_back(r, 1.0);
        general.columns.push_back(std::move(entries));
    }
    validate(general);
    return RevisedSimplex(general).solve();
}

LpSolution solve_sparse_lp(const SparseLp& lp) {
    validate(lp);
    return RevisedSimplex(lp).solve();
}

}  // namespace pmot::detail
