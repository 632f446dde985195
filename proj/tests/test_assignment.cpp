#include "sfsort/assignment.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

using namespace sfsort;

namespace {

// Exhaustive minimum over all maximal partial assignments: permute the
// larger side and take the cheapest prefix pairing.
double brute_force_min_cost(const Eigen::MatrixXd& costs) {
    const int rows = static_cast<int>(costs.rows());
    const int cols = static_cast<int>(costs.cols());
    if (rows == 0 || cols == 0) {
        return 0.0;
    }
    const int n = std::min(rows, cols);
    const int m = std::max(rows, cols);
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += rows <= cols ? costs(i, perm[i]) : costs(perm[i], i);
        }
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = unit(rng);
        }
    }
    return m;
}

void check_partition(const MatchResult& result, int rows, int cols) {
    std::vector<int> row_seen(rows, 0);
    std::vector<int> col_seen(cols, 0);
    for (const auto& match : result.matches) {
        ++row_seen[match.row];
        ++col_seen[match.col];
    }
    for (const int row : result.unmatched_rows) {
        ++row_seen[row];
    }
    for (const int col : result.unmatched_cols) {
        ++col_seen[col];
    }
    for (int i = 0; i < rows; ++i) {
        ASSERT_EQ(row_seen[i], 1) << "row " << i;
    }
    for (int j = 0; j < cols; ++j) {
        ASSERT_EQ(col_seen[j], 1) << "col " << j;
    }
}

}  // namespace

TEST(Assignment, SingleZeroCell) {
    Eigen::MatrixXd costs(1, 1);
    costs << 0.0;
    const MatchResult result = solve(costs, 1.0);
    ASSERT_EQ(result.matches.size(), 1u);
    EXPECT_EQ(result.matches[0].row, 0);
    EXPECT_EQ(result.matches[0].col, 0);
    EXPECT_DOUBLE_EQ(result.matches[0].cost, 0.0);
    EXPECT_TRUE(result.unmatched_rows.empty());
    EXPECT_TRUE(result.unmatched_cols.empty());
}

TEST(Assignment, DiagonalDominant) {
    Eigen::MatrixXd costs(2, 2);
    costs << 0.1, 0.9, 0.9, 0.1;
    const MatchResult result = solve(costs, 1.0);
    ASSERT_EQ(result.matches.size(), 2u);
    EXPECT_EQ(result.matches[0].col, 0);
    EXPECT_EQ(result.matches[1].col, 1);
    EXPECT_NEAR(result.total_cost(), 0.2, 1e-12);
}

TEST(Assignment, GatingRejectsExpensivePair) {
    Eigen::MatrixXd costs(1, 1);
    costs << 0.7;
    const MatchResult result = solve(costs, 0.5);
    EXPECT_TRUE(result.matches.empty());
    ASSERT_EQ(result.unmatched_rows.size(), 1u);
    ASSERT_EQ(result.unmatched_cols.size(), 1u);
    EXPECT_EQ(result.unmatched_rows[0], 0);
    EXPECT_EQ(result.unmatched_cols[0], 0);
}

TEST(Assignment, GatingBoundaryIsInclusive) {
    Eigen::MatrixXd costs(1, 1);
    costs << 0.5;
    const MatchResult result = solve(costs, 0.5);
    EXPECT_EQ(result.matches.size(), 1u);
}

TEST(Assignment, EmptyMatrix) {
    const MatchResult r1 = solve(Eigen::MatrixXd(0, 3), 1.0);
    EXPECT_TRUE(r1.matches.empty());
    EXPECT_EQ(r1.unmatched_cols.size(), 3u);
    const MatchResult r2 = solve(Eigen::MatrixXd(2, 0), 1.0);
    EXPECT_TRUE(r2.matches.empty());
    EXPECT_EQ(r2.unmatched_rows.size(), 2u);
}

TEST(Assignment, RejectsNonFiniteInput) {
    Eigen::MatrixXd costs(1, 2);
    costs << 0.0, std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(solve(costs, 1.0), std::invalid_argument);
    costs(0, 1) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(solve(costs, 1.0), std::invalid_argument);
    Eigen::MatrixXd ok(1, 1);
    ok << 0.0;
    EXPECT_THROW(solve(ok, std::numeric_limits<double>::infinity()), std::invalid_argument);
}

TEST(Assignment, OptimalOnRandomFiveByFive) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::MatrixXd costs = random_matrix(rng, 5, 5);
        const MatchResult result = solve(costs, 1e9);
        ASSERT_EQ(result.matches.size(), 5u);
        ASSERT_NEAR(result.total_cost(), brute_force_min_cost(costs), 1e-9);
    }
}

TEST(Assignment, OptimalOnRandomRectangles) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> dim(1, 7);
    for (int trial = 0; trial < 1000; ++trial) {
        const int rows = dim(rng);
        const int cols = dim(rng);
        const Eigen::MatrixXd costs = random_matrix(rng, rows, cols);
        const MatchResult result = solve(costs, 1e9);
        ASSERT_EQ(result.matches.size(), static_cast<std::size_t>(std::min(rows, cols)));
        ASSERT_NEAR(result.total_cost(), brute_force_min_cost(costs), 1e-9);
        check_partition(result, rows, cols);
    }
}

TEST(Assignment, PermutationEquivariance) {
    std::mt19937_64 rng(13);
    const Eigen::MatrixXd costs = random_matrix(rng, 6, 6);
    const MatchResult base = solve(costs, 1e9);

    std::vector<int> perm(6);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd permuted(6, 6);
    for (int i = 0; i < 6; ++i) {
        permuted.row(i) = costs.row(perm[i]);
    }
    const MatchResult shuffled = solve(permuted, 1e9);

    std::vector<int> base_col_of_row(6, -1);
    for (const auto& match : base.matches) {
        base_col_of_row[match.row] = match.col;
    }
    for (const auto& match : shuffled.matches) {
        EXPECT_EQ(match.col, base_col_of_row[perm[match.row]]);
    }
}

TEST(Assignment, DeterministicAcrossRuns) {
    std::mt19937_64 rng(14);
    const Eigen::MatrixXd costs = random_matrix(rng, 7, 5);
    const MatchResult a = solve(costs, 0.8);
    const MatchResult b = solve(costs, 0.8);
    EXPECT_EQ(a.matches, b.matches);
    EXPECT_EQ(a.unmatched_rows, b.unmatched_rows);
    EXPECT_EQ(a.unmatched_cols, b.unmatched_cols);
}

TEST(Assignment, TieBreaksLexicographically) {
    // All-equal costs admit every permutation; the canonical result is the
    // diagonal.
    const Eigen::MatrixXd costs = Eigen::MatrixXd::Constant(3, 3, 0.25);
    const MatchResult result = solve(costs, 1.0);
    ASSERT_EQ(result.matches.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(result.matches[i].row, i);
        EXPECT_EQ(result.matches[i].col, i);
    }
}

TEST(Assignment, MatchesSortedByRow) {
    std::mt19937_64 rng(15);
    const Eigen::MatrixXd costs = random_matrix(rng, 6, 8);
    const MatchResult result = solve(costs, 1e9);
    EXPECT_TRUE(std::is_sorted(result.matches.begin(), result.matches.end(),
                               [](const auto& a, const auto& b) { return a.row < b.row; }));
}
