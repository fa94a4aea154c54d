#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace ma2 {

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row; duplicate triplets are summed during construction.
struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows+1
    std::vector<int> col_idx;
    std::vector<double> values;

    struct Triplet {
        int row, col;
        double value;
    };

    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int nnz() const { return static_cast<int>(values.size()); }
    /// Throws on structurally invalid CSR data.
    void validate() const;

    /// Coordinate text dump (row col value per line) for debugging.
    void dump_coordinate(const std::filesystem::path& path) const;
};

/// y = A x.
std::vector<double> spmv(const SparseMatrix& A, std::span<const double> x);

/// Direct sparse LU solve. Throws LinearSolverError on numerical singularity.
std::vector<double> factor_and_solve(const SparseMatrix& A, std::span<const double> b);

/// Jacobi-preconditioned conjugate gradient for SPD matrices.
std::vector<double> cg_solve(const SparseMatrix& A, std::span<const double> b,
                             double rel_tol = 1e-12, int max_iter = 20000);

/// General solve used by the Newton iteration: direct factorization first,
/// diagonally preconditioned BiCGSTAB as fallback. The result satisfies
/// ||Ax-b||_2 <= 1e-10 ||b||_2 or a LinearSolverError is thrown.
std::vector<double> solve_sparse(const SparseMatrix& A, std::span<const double> b);

} // namespace ma2
