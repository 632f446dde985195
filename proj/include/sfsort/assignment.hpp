#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <tuple>
#include <vector>

namespace sfsort {

/**
 * Outcome of a gated assignment: one-to-one matches plus the leftover rows
 * and columns. Indices are unique across the three lists, so every row and
 * column of the input appears exactly once.
 */
struct MatchResult {
    struct Match {
        int row;
        int col;
        double cost;

        auto operator<=>(const Match&) const = default;
    };

    std::vector<Match> matches;
    std::vector<int> unmatched_rows;
    std::vector<int> unmatched_cols;

    double total_cost() const {
        double sum = 0.0;
        for (const Match& m : matches) {
            sum += m.cost;
        }
        return sum;
    }
};

/**
 * Minimum-cost bipartite matching (Jonker-Volgenant style shortest
 * augmenting paths) with cost gating.
 *
 * Solves the full rectangular matrix first, then strips matched pairs whose
 * cost exceeds max_cost into the unmatched lists. Matches are reported in
 * ascending row order. Equal-cost solutions are canonicalized toward the
 * lexicographically smallest (row, col) set.
 *
 * Throws std::invalid_argument on non-finite matrix entries or max_cost.
 */
MatchResult solve(const Eigen::MatrixXd& costs, double max_cost);

}  // namespace sfsort
