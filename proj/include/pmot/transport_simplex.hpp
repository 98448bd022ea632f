#pragma once

#include <cstddef>
#include <vector>

namespace pmot {

struct FlowEdge {
    std::size_t row;
    std::size_t col;
    double amount;
};

struct TransportSolution {
    std::vector<FlowEdge> flows;  // positive-flow cells of an optimal vertex
    double cost;
};

// Exact solver for the balanced transportation problem
//   minimize   sum_ij cost[i*cols + j] * x_ij
//   subject to sum_j x_ij = supply[i],  sum_i x_ij = demand[j],  x >= 0
// via the primal simplex on the basis tree. Supplies and demands must be
// positive with equal totals (up to roundoff; a residue below 1e-9 of the
// total is absorbed). Flows of the returned vertex satisfy the marginals to
// machine accuracy of the inputs.
TransportSolution solve_transportation(const std::vector<double>& cost,
                                       std::size_t rows, std::size_t cols,
                                       std::vector<double> supply,
                                       std::vector<double> demand);

}  // namespace pmot
