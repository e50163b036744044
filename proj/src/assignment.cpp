#include "fusionkit/assignment.hpp"

#include "fusionkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>

namespace fusionkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Shortest augmenting path solver for rows <= cols, keeping the dual
/// potentials so callers can test edge tightness.
struct LsapSolution {
    std::vector<std::size_t> row_to_col;
    std::vector<double> u;  // row potentials
    std::vector<double> v;  // column potentials
};

std::optional<LsapSolution> solve_lsap(const CostMatrix& a) {
    const auto n = static_cast<std::size_t>(a.rows());
    const auto m = static_cast<std::size_t>(a.cols());
    LsapSolution out;
    if (n == 0) {
        out.v.assign(m, 0.0);
        return out;
    }
    // 1-based arrays; column 0 is the virtual source.
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = a(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (j1 == 0 || delta == kInf) return std::nullopt;
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    out.row_to_col.assign(n, 0);
    for (std::size_t j = 1; j <= m; ++j) {
        if (p[j] != 0) out.row_to_col[p[j] - 1] = j - 1;
    }
    out.u.assign(u.begin() + 1, u.end());
    out.v.assign(v.begin() + 1, v.end());
    return out;
}

void check_no_nan(const CostMatrix& cost) {
    if (cost.array().isNaN().any()) throw DomainError("cost matrix contains NaN");
    if ((cost.array() == -kInf).any()) throw DomainError("cost matrix contains -inf");
}

/// Solves the subproblem with some rows already pinned to columns and some
/// (row, col) pairs forbidden. Returns the full row -> col map.
std::optional<std::vector<std::size_t>> solve_constrained(
    const CostMatrix& cost, const std::vector<long>& pinned,
    const std::vector<std::pair<std::size_t, std::size_t>>& excluded) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto m = static_cast<std::size_t>(cost.cols());
    std::vector<char> col_taken(m, 0);
    std::vector<std::size_t> free_rows;
    for (std::size_t r = 0; r < n; ++r) {
        if (pinned[r] >= 0) {
            col_taken[static_cast<std::size_t>(pinned[r])] = 1;
        } else {
            free_rows.push_back(r);
        }
    }
    std::vector<std::size_t> free_cols;
    std::vector<long> col_index(m, -1);
    for (std::size_t c = 0; c < m; ++c) {
        if (!col_taken[c]) {
            col_index[c] = static_cast<long>(free_cols.size());
            free_cols.push_back(c);
        }
    }
    std::vector<long> row_index(n, -1);
    for (std::size_t i = 0; i < free_rows.size(); ++i) row_index[free_rows[i]] = static_cast<long>(i);

    CostMatrix sub(static_cast<Eigen::Index>(free_rows.size()), static_cast<Eigen::Index>(free_cols.size()));
    for (std::size_t i = 0; i < free_rows.size(); ++i) {
        for (std::size_t j = 0; j < free_cols.size(); ++j) {
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                cost(static_cast<Eigen::Index>(free_rows[i]), static_cast<Eigen::Index>(free_cols[j]));
        }
    }
    for (const auto& [r, c] : excluded) {
        if (row_index[r] >= 0 && col_index[c] >= 0) sub(row_index[r], col_index[c]) = kInf;
    }
    const auto sol = solve_lsap(sub);
    if (!sol) return std::nullopt;
    std::vector<std::size_t> full(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (pinned[r] >= 0) full[r] = static_cast<std::size_t>(pinned[r]);
    }
    for (std::size_t i = 0; i < free_rows.size(); ++i) full[free_rows[i]] = free_cols[sol->row_to_col[i]];
    for (std::size_t r = 0; r < n; ++r) {
        if (!std::isfinite(cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(full[r])))) return std::nullopt;
    }
    return full;
}

Assignment make_assignment(const CostMatrix& cost, const std::vector<std::size_t>& row_to_col) {
    Assignment a;
    a.pairs.reserve(row_to_col.size());
    for (std::size_t r = 0; r < row_to_col.size(); ++r) a.pairs.emplace_back(r, row_to_col[r]);
    a.cost = assignment_cost(cost, a.pairs);
    return a;
}

Assignment hungarian_wide(const CostMatrix& cost) {
    const auto n = static_cast<std::size_t>(cost.rows());
    const auto sol = solve_lsap(cost);
    if (!sol) throw InfeasibleError("no finite assignment exists");
    std::vector<std::size_t> current = sol->row_to_col;
    const double optimum = assignment_cost(cost, make_assignment(cost, current).pairs);
    if (!std::isfinite(optimum)) throw InfeasibleError("no finite assignment exists");

    double scale = 1.0;
    for (Eigen::Index i = 0; i < cost.size(); ++i) {
        const double x = cost.data()[i];
        if (std::isfinite(x)) scale = std::max(scale, std::abs(x));
    }
    const double tight_tol = 1e-9 * scale;
    const double tie_tol = 1e-12 * std::max(1.0, std::abs(optimum));

    // Walk rows in order; for each, move to the smallest column that still
    // admits an optimal completion. Only dual-tight edges can be part of an
    // optimal assignment, which keeps this cheap when there are no ties.
    std::vector<long> pinned(n, -1);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < current[r]; ++c) {
            const double entry = cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            if (!std::isfinite(entry)) continue;
            if (std::abs(entry - sol->u[r] - sol->v[c]) > tight_tol) continue;
            bool taken = false;
            for (std::size_t q = 0; q < r; ++q) taken = taken || current[q] == c;
            if (taken) continue;
            auto trial = pinned;
            trial[r] = static_cast<long>(c);
            const auto full = solve_constrained(cost, trial, {});
            if (!full) continue;
            if (assignment_cost(cost, make_assignment(cost, *full).pairs) <= optimum + tie_tol) {
                current = *full;
                break;
            }
        }
        pinned[r] = static_cast<long>(current[r]);
    }
    return make_assignment(cost, current);
}

struct MurtyNode {
    std::vector<long> pinned;
    std::vector<std::pair<std::size_t, std::size_t>> excluded;
    std::vector<std::size_t> solution;
    double cost = 0.0;
    std::size_t sequence = 0;
};

struct NodeOrder {
    bool operator()(const MurtyNode& a, const MurtyNode& b) const {
        if (a.cost != b.cost) return a.cost > b.cost;
        return a.sequence > b.sequence;
    }
};

}  // namespace

std::vector<std::size_t> Assignment::columns() const {
    std::vector<std::size_t> out;
    out.reserve(pairs.size());
    for (const auto& [r, c] : pairs) out.push_back(c);
    return out;
}

double assignment_cost(const CostMatrix& cost, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    double total = 0.0;
    for (const auto& [r, c] : pairs) total += cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return total;
}

Assignment hungarian(const CostMatrix& cost) {
    check_no_nan(cost);
    if (cost.rows() <= cost.cols()) return hungarian_wide(cost);
    const CostMatrix transposed = cost.transpose();
    const Assignment t = hungarian_wide(transposed);
    Assignment out;
    for (const auto& [r, c] : t.pairs) out.pairs.emplace_back(c, r);
    std::sort(out.pairs.begin(), out.pairs.end());
    out.cost = assignment_cost(cost, out.pairs);
    return out;
}

std::vector<Assignment> murty_k_best(const CostMatrix& cost, std::size_t k) {
    check_no_nan(cost);
    if (cost.rows() > cost.cols()) throw DomainError("murty_k_best requires rows <= cols");
    if (k == 0) throw DomainError("k must be positive");
    const auto n = static_cast<std::size_t>(cost.rows());

    std::vector<Assignment> out;
    std::priority_queue<MurtyNode, std::vector<MurtyNode>, NodeOrder> queue;
    std::size_t sequence = 0;

    MurtyNode root;
    root.pinned.assign(n, -1);
    const auto root_solution = solve_constrained(cost, root.pinned, {});
    if (!root_solution) return out;
    root.solution = *root_solution;
    root.cost = assignment_cost(cost, make_assignment(cost, root.solution).pairs);
    root.sequence = sequence++;
    queue.push(std::move(root));

    while (!queue.empty() && out.size() < k) {
        MurtyNode node = queue.top();
        queue.pop();
        out.push_back(make_assignment(cost, node.solution));
        if (out.size() == k) break;

        // Partition the remaining solution space of this node.
        std::vector<long> pinned = node.pinned;
        for (std::size_t r = 0; r < n; ++r) {
            if (node.pinned[r] >= 0) continue;
            MurtyNode child;
            child.pinned = pinned;
            child.excluded = node.excluded;
            child.excluded.emplace_back(r, node.solution[r]);
            pinned[r] = static_cast<long>(node.solution[r]);

            const auto sol = solve_constrained(cost, child.pinned, child.excluded);
            if (!sol) continue;
            child.solution = *sol;
            child.cost = assignment_cost(cost, make_assignment(cost, child.solution).pairs);
            child.sequence = sequence++;
            queue.push(std::move(child));
        }
    }
    return out;
}

}  // namespace fusionkit
