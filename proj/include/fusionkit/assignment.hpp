#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace fusionkit {

/// Dense cost matrix; +inf marks a forbidden pairing. NaN is rejected.
using CostMatrix = Eigen::MatrixXd;

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

struct Assignment {
    /// (row, col) pairs sorted by row.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    double cost = 0.0;

    /// Column assigned to each row, in row order. Only meaningful when rows <= cols.
    [[nodiscard]] std::vector<std::size_t> columns() const;

    bool operator==(const Assignment& other) const { return pairs == other.pairs; }
};

/// Minimum-cost assignment. With rows <= cols every row is assigned; with
/// rows > cols every column is. Among optimal assignments (cost ties within
/// 1e-12 relative) the lexicographically smallest column sequence is returned.
/// Throws InfeasibleError when no finite assignment exists.
Assignment hungarian(const CostMatrix& cost);

/// Ranked assignments in non-decreasing cost, at most k of them, via Murty's
/// include/exclude partitioning. Returns an empty sequence when no finite
/// assignment exists. Requires rows <= cols.
std::vector<Assignment> murty_k_best(const CostMatrix& cost, std::size_t k);

/// Sum of the selected entries, accumulated in row order.
double assignment_cost(const CostMatrix& cost, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

}  // namespace fusionkit
