#include "ma2scale/csv.hpp"
#include "ma2scale/errors.hpp"
#include "ma2scale/sparse.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

using namespace ma2;

namespace {

std::vector<std::vector<double>> to_dense(const SparseMatrix& A) {
    std::vector<std::vector<double>> M(static_cast<std::size_t>(A.rows),
                                       std::vector<double>(static_cast<std::size_t>(A.cols), 0.0));
    for (int r = 0; r < A.rows; ++r)
        for (int k = A.row_ptr[static_cast<std::size_t>(r)]; k < A.row_ptr[static_cast<std::size_t>(r) + 1]; ++k)
            M[static_cast<std::size_t>(r)][static_cast<std::size_t>(A.col_idx[static_cast<std::size_t>(k)])] =
                A.values[static_cast<std::size_t>(k)];
    return M;
}

std::vector<double> dense_solve(std::vector<std::vector<double>> M, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(M[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(M[static_cast<std::size_t>(col)], M[static_cast<std::size_t>(piv)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        for (int r = col + 1; r < n; ++r) {
            const double f = M[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                             M[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c < n; ++c)
                M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * M[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c)
            s -= M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
        x[static_cast<std::size_t>(r)] = s / M[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    return x;
}

SparseMatrix random_diag_dominant(int n, double fill, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    std::vector<SparseMatrix::Triplet> trips;
    std::vector<double> row_abs(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            if (r == c || prob(rng) > fill) continue;
            const double v = uni(rng);
            trips.push_back({r, c, v});
            row_abs[static_cast<std::size_t>(r)] += std::abs(v);
        }
    for (int r = 0; r < n; ++r)
        trips.push_back({r, r, row_abs[static_cast<std::size_t>(r)] + 1.0});
    return SparseMatrix::from_triplets(n, n, std::move(trips));
}

} // namespace

TEST_SUITE("sparse") {

TEST_CASE("triplet construction merges duplicates and sorts columns") {
    auto A = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
    A.validate();
    CHECK(A.nnz() == 3);
    CHECK(A.col_idx[0] == 0);
    CHECK(A.col_idx[1] == 2);
    CHECK(A.values[1] == doctest::Approx(1.5));
}

TEST_CASE("spmv basics") {
    const auto I = SparseMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
    const std::vector<double> x{1.0, -2.0, 3.0};
    CHECK(spmv(I, x) == x);

    const auto Z = SparseMatrix::from_triplets(3, 3, {});
    for (double v : spmv(Z, x)) CHECK(v == 0.0);

    CHECK_THROWS_AS(spmv(I, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("spmv matches dense product on random matrices") {
    std::mt19937_64 rng(7);
    const auto A = random_diag_dominant(50, 0.1, rng);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(50);
    for (double& v : x) v = uni(rng);
    const auto y = spmv(A, x);
    const auto M = to_dense(A);
    for (int r = 0; r < 50; ++r) {
        double s = 0.0;
        for (int c = 0; c < 50; ++c) s += M[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * x[static_cast<std::size_t>(c)];
        CHECK(y[static_cast<std::size_t>(r)] == doctest::Approx(s).epsilon(1e-12));
    }
}

TEST_CASE("solve: identity and diagonal") {
    const auto I = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {1, 1, 1}});
    const std::vector<double> b{3.0, -4.0};
    CHECK(solve_sparse(I, b) == b);

    const auto D = SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {1, 1, 4}});
    const auto x = solve_sparse(D, std::vector<double>{2.0, 8.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));

    const int n = 40;
    std::vector<SparseMatrix::Triplet> trips;
    std::vector<double> rhs;
    for (int i = 0; i < n; ++i) {
        trips.push_back({i, i, static_cast<double>(i + 1)});
        rhs.push_back(2.0 * (i + 1));
    }
    const auto Dn = SparseMatrix::from_triplets(n, n, std::move(trips));
    for (double v : cg_solve(Dn, rhs)) CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("solve: random diagonally dominant vs dense oracle") {
    std::mt19937_64 rng(99);
    const auto A = random_diag_dominant(100, 0.1, rng);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> b(100);
    for (double& v : b) v = uni(rng);
    const auto x = solve_sparse(A, b);
    const auto oracle = dense_solve(to_dense(A), b);
    for (std::size_t i = 0; i < oracle.size(); ++i)
        CHECK(x[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("cg: 1d poisson analog vs thomas oracle") {
    const int n = 60;
    std::vector<SparseMatrix::Triplet> trips;
    for (int i = 0; i < n; ++i) {
        trips.push_back({i, i, 2.0});
        if (i > 0) trips.push_back({i, i - 1, -1.0});
        if (i + 1 < n) trips.push_back({i, i + 1, -1.0});
    }
    const auto A = SparseMatrix::from_triplets(n, n, std::move(trips));
    std::vector<double> b(static_cast<std::size_t>(n), 1.0);

    // Thomas algorithm
    std::vector<double> c(static_cast<std::size_t>(n), -1.0), d(static_cast<std::size_t>(n), 2.0), rhs = b;
    for (int i = 1; i < n; ++i) {
        const double w = -1.0 / d[static_cast<std::size_t>(i - 1)];
        d[static_cast<std::size_t>(i)] -= w * (-1.0);
        rhs[static_cast<std::size_t>(i)] -= w * rhs[static_cast<std::size_t>(i - 1)];
    }
    std::vector<double> oracle(static_cast<std::size_t>(n));
    oracle[static_cast<std::size_t>(n - 1)] = rhs[static_cast<std::size_t>(n - 1)] / d[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i)
        oracle[static_cast<std::size_t>(i)] =
            (rhs[static_cast<std::size_t>(i)] + oracle[static_cast<std::size_t>(i + 1)]) / d[static_cast<std::size_t>(i)];

    const auto x = cg_solve(A, b);
    for (int i = 0; i < n; ++i)
        CHECK(x[static_cast<std::size_t>(i)] == doctest::Approx(oracle[static_cast<std::size_t>(i)]).epsilon(1e-10));
}

TEST_CASE("singular matrix is reported") {
    const auto S = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(solve_sparse(S, std::vector<double>{1.0, 2.0}), LinearSolverError);
}

TEST_CASE("coordinate dump") {
    const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.5}, {1, 0, -2.0}});
    const auto path = std::filesystem::temp_directory_path() / "ma2scale_matrix.txt";
    A.dump_coordinate(path);
    const auto lines = read_lines(path.string());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "0 0 1.5");
    CHECK(lines[1] == "1 0 -2");
}

} // TEST_SUITE
