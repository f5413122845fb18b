#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace spinscat {

struct SolveReport {
  std::string method;           // "direct" | "iterative"
  double residual_norm = 0.0;   // ||A x - b||_2 / ||b||_2, recomputed
  int iterations = 0;           // 0 for direct
  double elapsed_seconds = 0.0;
  std::optional<double> condition_estimate;  // 1-norm estimate, direct only
};

// Zero pivot during LU elimination (matrix singular to working precision).
class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, int pivot)
      : std::runtime_error(what), pivot_index(pivot) {}
  int pivot_index;  // 0-based index of the offending pivot
};

// Iterative solve hit its iteration budget; carries the best iterate seen.
class IterationError : public std::runtime_error {
 public:
  IterationError(const std::string& what, Eigen::VectorXcd best_iterate,
                 double best_residual, int iters)
      : std::runtime_error(what),
        best(std::move(best_iterate)),
        residual(best_residual),
        iterations(iters) {}
  Eigen::VectorXcd best;
  double residual;
  int iterations;
};

// LU factors (LAPACK zgetrf layout). Immutable after construction; concurrent
// back-solves on one factorization are safe.
struct LuFactorization {
  Eigen::MatrixXcd lu;
  Eigen::VectorXi ipiv;
  double anorm = 0.0;  // 1-norm of the original matrix, for rcond
};

// Factors A in place of the passed copy (move in to avoid the copy).
LuFactorization lu_factor(Eigen::MatrixXcd a);
Eigen::VectorXcd lu_solve(const LuFactorization& f, Eigen::VectorXcd b,
                          char trans = 'N');
Eigen::MatrixXcd lu_solve_many(const LuFactorization& f, Eigen::MatrixXcd b,
                               char trans = 'N');
// Reciprocal 1-norm condition estimate of the factored matrix.
double lu_rcond(const LuFactorization& f);

// LU with partial pivoting; the report's residual is recomputed from A, x, b.
std::pair<Eigen::VectorXcd, SolveReport> direct_solve(
    const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b);

using ApplyFn = std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>;

// Restarted GMRES (modified Gram-Schmidt Arnoldi, Givens rotations). Returns
// once the recomputed relative residual is <= tol; throws IterationError with
// the best iterate when the budget runs out.
std::pair<Eigen::VectorXcd, SolveReport> gmres_solve(const ApplyFn& apply,
                                                     const Eigen::VectorXcd& b,
                                                     double tol = 1e-8,
                                                     int restart = 80,
                                                     int max_iters = 2000);

enum class SigmaMethod { automatic, svd, inverse_iteration };

// sigma_min(A): full SVD for n <= 4096 (or when forced), otherwise inverse
// iteration on A^H A driven by one LU factorization of A.
double smallest_singular_value(const Eigen::MatrixXcd& a, double tol = 1e-6,
                               SigmaMethod method = SigmaMethod::automatic);

// Same, but destroys the passed matrix (no working copy; for matrices at the
// memory budget).
double smallest_singular_value_inplace(Eigen::MatrixXcd& a, double tol = 1e-6,
                                       SigmaMethod method = SigmaMethod::automatic);

}  // namespace spinscat
