#pragma once

#include <functional>
#include <vector>

#include "core.hpp"

namespace bsfem {

/// Square CSR matrix with sorted, unique column indices per row.
class SparseMatrix {
public:
    SparseMatrix() = default;

    static SparseMatrix from_triplets(int n,
                                      const std::vector<std::tuple<int, int, double>>& triplets);

    int dim() const { return n_; }
    const std::vector<int>& row_offsets() const { return row_offsets_; }
    const std::vector<int>& column_indices() const { return column_indices_; }
    const std::vector<double>& values() const { return values_; }

    std::vector<double> multiply(const std::vector<double>& x) const;
    double coeff(int row, int col) const;
    std::vector<double> diagonal() const;

private:
    int n_ = 0;
    std::vector<int> row_offsets_{0};
    std::vector<int> column_indices_;
    std::vector<double> values_;
};

enum class Preconditioner { None, Jacobi };

struct CgResult {
    std::vector<double> x;
    int iterations = 0;
    double final_residual = 0.0;  // ||b - Ax|| / ||b||
    bool converged = false;
};

struct CgOptions {
    double tol = 1e-10;  // relative residual target
    int max_iter = -1;   // defaults to 20 * n
    Preconditioner precond = Preconditioner::Jacobi;
    const std::vector<double>* initial_guess = nullptr;
    // Called with the current iterate after each update; used by tests.
    std::function<void(const std::vector<double>&)> observer;
};

/// Preconditioned conjugate gradients for SPD systems. Throws
/// IndefiniteMatrix when a search direction has non-positive curvature;
/// returns the best iterate with converged = false when max_iter is hit.
CgResult conjugate_gradient(const SparseMatrix& a, const std::vector<double>& b,
                            const CgOptions& options = {});

}  // namespace bsfem
