#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace pmot::detail {

// Equality-form linear program
//   minimize c.x  subject to  A x = b, x >= 0
// where every column of A is a 0/1 indicator of a few rows. Solved by a
// two-phase revised simplex with a dense basis inverse; small instances only.
struct UnitColumnLp {
    std::size_t rows = 0;
    std::vector<std::vector<int>> columns;  // per variable: distinct row ids hit by that column
    std::vector<double> cost;
    std::vector<double> rhs;
};

// Same solver with explicit signed coefficients per column entry.
struct SparseLp {
    std::size_t rows = 0;
    std::vector<std::vector<std::pair<int, double>>> columns;  // per variable: (row, coefficient)
    std::vector<double> cost;
    std::vector<double> rhs;
};

struct LpSolution {
    std::vector<double> x;
    double objective;
};

LpSolution solve_unit_column_lp(const UnitColumnLp& lp);
LpSolution solve_sparse_lp(const SparseLp& lp);

}  // namespace pmot::detail
