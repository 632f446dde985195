#include "sfsort/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfsort {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path assignment with dual potentials. Expects
// rows <= cols and assigns every row. Returns row -> col.
std::vector<int> solve_rectangular(const Eigen::MatrixXd& costs) {
    const int n = static_cast<int>(costs.rows());
    const int m = static_cast<int>(costs.cols());

    // 1-based internally; col_to_row[0] is the virtual root of each path.
    std::vector<double> row_potential(n + 1, 0.0);
    std::vector<double> col_potential(m + 1, 0.0);
    std::vector<int> col_to_row(m + 1, 0);
    std::vector<int> path_prev(m + 1, 0);

    for (int i = 1; i <= n; ++i) {
        col_to_row[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(m + 1, kInf);
        std::vector<bool> visited(m + 1, false);
        do {
            visited[j0] = true;
            const int i0 = col_to_row[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= m; ++j) {
                if (visited[j]) {
                    continue;
                }
                const double reduced =
                    costs(i0 - 1, j - 1) - row_potential[i0] - col_potential[j];
                if (reduced < min_slack[j]) {
                    min_slack[j] = reduced;
                    path_prev[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (visited[j]) {
                    row_potential[col_to_row[j]] += delta;
                    col_potential[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_to_row[j0] != 0);
        // Unwind the augmenting path.
        do {
            const int j1 = path_prev[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j) {
        if (col_to_row[j] != 0) {
            row_to_col[col_to_row[j] - 1] = j - 1;
        }
    }
    return row_to_col;
}

// Cost-neutral pairwise swaps toward the lexicographically smallest match
// set. Resolves ties such as uniform matrices deterministically.
void canonicalize(std::vector<int>& row_to_col, const Eigen::MatrixXd& costs) {
    const int n = static_cast<int>(row_to_col.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < n; ++a) {
            if (row_to_col[a] < 0) {
                continue;
            }
            for (int b = a + 1; b < n; ++b) {
                if (row_to_col[b] < 0) {
                    continue;
                }
                const int ja = row_to_col[a];
                const int jb = row_to_col[b];
                if (jb < ja &&
                    costs(a, jb) + costs(b, ja) == costs(a, ja) + costs(b, jb)) {
                    std::swap(row_to_col[a], row_to_col[b]);
                    changed = true;
                }
            }
        }
    }
}

}  // namespace

MatchResult solve(const Eigen::MatrixXd& costs, double max_cost) {
    if (!costs.allFinite()) {
        throw std::invalid_argument("assignment: non-finite cost entry");
    }
    if (!std::isfinite(max_cost)) {
        throw std::invalid_argument("assignment: non-finite max_cost");
    }

    const int rows = static_cast<int>(costs.rows());
    const int cols = static_cast<int>(costs.cols());

    MatchResult result;
    if (rows == 0 || cols == 0) {
        for (int i = 0; i < rows; ++i) {
            result.unmatched_rows.push_back(i);
        }
        for (int j = 0; j < cols; ++j) {
            result.unmatched_cols.push_back(j);
        }
        return result;
    }

    std::vector<int> row_to_col(rows, -1);
    if (rows <= cols) {
        row_to_col = solve_rectangular(costs);
    } else {
        const Eigen::MatrixXd transposed = costs.transpose();
        const std::vector<int> col_to_row = solve_rectangular(transposed);
        for (int j = 0; j < cols; ++j) {
            if (col_to_row[j] >= 0) {
                row_to_col[col_to_row[j]] = j;
            }
        }
    }
    canonicalize(row_to_col, costs);

    std::vector<bool> col_matched(cols, false);
    for (int i = 0; i < rows; ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && costs(i, j) <= max_cost) {
            result.matches.push_back({i, j, costs(i, j)});
            col_matched[j] = true;
        } else {
            result.unmatched_rows.push_back(i);
        }
    }
    for (int j = 0; j < cols; ++j) {
        if (!col_matched[j]) {
            result.unmatched_cols.push_back(j);
        }
    }
    return result;
}

}  // namespace sfsort
