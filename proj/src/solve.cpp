#include "spinscat/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <random>

namespace {

using cplx = std::complex<double>;

extern "C" {
void zgetrf_(const int* m, const int* n, cplx* a, const int* lda, int* ipiv,
             int* info);
void zgetrs_(const char* trans, const int* n, const int* nrhs, const cplx* a,
             const int* lda, const int* ipiv, cplx* b, const int* ldb,
             int* info);
void zgecon_(const char* norm, const int* n, const cplx* a, const int* lda,
             const double* anorm, double* rcond, cplx* work, double* rwork,
             int* info);
void zgesdd_(const char* jobz, const int* m, const int* n, cplx* a,
             const int* lda, double* s, cplx* u, const int* ldu, cplx* vt,
             const int* ldvt, cplx* work, const int* lwork, double* rwork,
             int* iwork, int* info);
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

namespace spinscat {

LuFactorization lu_factor(Eigen::MatrixXcd a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("lu_factor: matrix not square");
  const int n = static_cast<int>(a.rows());
  LuFactorization f;
  f.anorm = a.cwiseAbs().colwise().sum().maxCoeff();
  f.lu = std::move(a);
  f.ipiv.resize(n);
  int info = 0;
  zgetrf_(&n, &n, f.lu.data(), &n, f.ipiv.data(), &info);
  if (info < 0) throw std::runtime_error("lu_factor: bad argument to zgetrf");
  if (info > 0)
    throw SingularMatrixError(
        "lu_factor: exactly singular, zero pivot at index " +
            std::to_string(info - 1),
        info - 1);
  // zgetrf only reports exactly-zero pivots; catch pivots at roundoff level
  // (rank deficiency washed into ~eps by the blocked updates) as well.
  const double tiny =
      n * std::numeric_limits<double>::epsilon() * std::max(f.anorm, 1.0);
  for (int i = 0; i < n; ++i)
    if (std::abs(f.lu(i, i)) <= tiny)
      throw SingularMatrixError(
          "lu_factor: singular to working precision, pivot " +
              std::to_string(std::abs(f.lu(i, i))) + " at index " +
              std::to_string(i),
          i);
  return f;
}

Eigen::MatrixXcd lu_solve_many(const LuFactorization& f, Eigen::MatrixXcd b,
                               char trans) {
  const int n = static_cast<int>(f.lu.rows());
  const int nrhs = static_cast<int>(b.cols());
  if (b.rows() != n) throw std::invalid_argument("lu_solve: size mismatch");
  int info = 0;
  zgetrs_(&trans, &n, &nrhs, f.lu.data(), &n, f.ipiv.data(), b.data(), &n,
          &info);
  if (info != 0) throw std::runtime_error("lu_solve: zgetrs failed");
  return b;
}

Eigen::VectorXcd lu_solve(const LuFactorization& f, Eigen::VectorXcd b,
                          char trans) {
  return lu_solve_many(f, std::move(b), trans);
}

double lu_rcond(const LuFactorization& f) {
  const int n = static_cast<int>(f.lu.rows());
  double rcond = 0.0;
  Eigen::VectorXcd work(2 * n);
  Eigen::VectorXd rwork(2 * n);
  int info = 0;
  const char norm = '1';
  zgecon_(&norm, &n, f.lu.data(), &n, &f.anorm, &rcond, work.data(),
          rwork.data(), &info);
  if (info != 0) throw std::runtime_error("lu_rcond: zgecon failed");
  return rcond;
}

std::pair<Eigen::VectorXcd, SolveReport> direct_solve(
    const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("direct_solve: size mismatch");
  if (!a.allFinite() || !b.allFinite())
    throw std::invalid_argument("direct_solve: non-finite entries");
  const double t0 = now_seconds();
  LuFactorization f = lu_factor(a);
  Eigen::VectorXcd x = lu_solve(f, b);
  SolveReport rep;
  rep.method = "direct";
  rep.iterations = 0;
  const double bn = b.norm();
  rep.residual_norm = bn > 0 ? (a * x - b).norm() / bn : (a * x).norm();
  const double rcond = lu_rcond(f);
  if (rcond > 0) rep.condition_estimate = 1.0 / rcond;
  rep.elapsed_seconds = now_seconds() - t0;
  return {std::move(x), std::move(rep)};
}

std::pair<Eigen::VectorXcd, SolveReport> gmres_solve(const ApplyFn& apply,
                                                     const Eigen::VectorXcd& b,
                                                     double tol, int restart,
                                                     int max_iters) {
  if (tol <= 0) throw std::invalid_argument("gmres_solve: tol must be positive");
  if (restart < 1 || max_iters < 1)
    throw std::invalid_argument("gmres_solve: bad iteration limits");
  const double t0 = now_seconds();
  const auto n = b.size();
  const double bnorm = b.norm();
  SolveReport rep;
  rep.method = "iterative";

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(n);
  if (bnorm == 0.0) {
    rep.residual_norm = 0.0;
    rep.elapsed_seconds = now_seconds() - t0;
    return {std::move(x), std::move(rep)};
  }

  Eigen::VectorXcd best = x;
  double best_res = 1.0;
  int iters = 0;

  while (iters < max_iters) {
    Eigen::VectorXcd r = b - apply(x);
    double beta = r.norm();
    if (beta / bnorm <= tol) break;

    const int m = std::min(restart, max_iters - iters);
    Eigen::MatrixXcd v(n, m + 1);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(m + 1, m);
    Eigen::VectorXcd cs(m), sn(m);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m + 1);
    v.col(0) = r / beta;
    g[0] = beta;

    int j = 0;
    for (; j < m; ++j) {
      Eigen::VectorXcd w = apply(v.col(j));
      for (int l = 0; l <= j; ++l) {
        h(l, j) = v.col(l).dot(w);  // sesquilinear, as Arnoldi wants
        w -= h(l, j) * v.col(l);
      }
      const double hsub = w.norm();
      h(j + 1, j) = hsub;
      // previously accumulated Givens rotations
      for (int l = 0; l < j; ++l) {
        const cplx tmp =
            std::conj(cs[l]) * h(l, j) + std::conj(sn[l]) * h(l + 1, j);
        h(l + 1, j) = -sn[l] * h(l, j) + cs[l] * h(l + 1, j);
        h(l, j) = tmp;
      }
      // new rotation zeroing h(j+1, j)
      const double denom =
          std::sqrt(std::norm(h(j, j)) + std::norm(h(j + 1, j)));
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h(j, j) / denom;
        sn[j] = h(j + 1, j) / denom;
      }
      h(j, j) = std::conj(cs[j]) * h(j, j) + std::conj(sn[j]) * h(j + 1, j);
      h(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = std::conj(cs[j]) * g[j];
      ++iters;
      // hsub == 0 is the happy breakdown: the Krylov space is invariant.
      if (std::abs(g[j + 1]) / bnorm <= tol || hsub == 0.0 ||
          iters >= max_iters) {
        ++j;
        break;
      }
      v.col(j + 1) = w / hsub;
    }

    // back substitution on the j x j triangle
    Eigen::VectorXcd y(j);
    for (int row = j - 1; row >= 0; --row) {
      cplx s = g[row];
      for (int col = row + 1; col < j; ++col) s -= h(row, col) * y[col];
      y[row] = s / h(row, row);
    }
    x += v.leftCols(j) * y;

    const double res = (b - apply(x)).norm() / bnorm;
    if (res < best_res) {
      best_res = res;
      best = x;
    }
    if (res <= tol) break;
  }

  const double final_res = (b - apply(x)).norm() / bnorm;
  if (final_res < best_res) {
    best_res = final_res;
    best = x;
  }
  if (best_res > tol)
    throw IterationError("gmres_solve: no convergence to tol " +
                             std::to_string(tol) + " within " +
                             std::to_string(max_iters) + " iterations",
                         std::move(best), best_res, iters);
  rep.iterations = iters;
  rep.residual_norm = best_res;
  rep.elapsed_seconds = now_seconds() - t0;
  return {std::move(best), std::move(rep)};
}

namespace {

double sigma_min_svd(Eigen::MatrixXcd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXd s(n);
  Eigen::VectorXd rwork(std::max(1, 7 * n));
  Eigen::VectorXi iwork(8 * n);
  int info = 0;
  const char jobz = 'N';
  const int one = 1;
  cplx wkopt;
  int lwork = -1;
  zgesdd_(&jobz, &n, &n, a.data(), &n, s.data(), nullptr, &one, nullptr, &one,
          &wkopt, &lwork, rwork.data(), iwork.data(), &info);
  if (info != 0) throw std::runtime_error("sigma_min: zgesdd workspace query failed");
  lwork = static_cast<int>(wkopt.real());
  Eigen::VectorXcd work(lwork);
  zgesdd_(&jobz, &n, &n, a.data(), &n, s.data(), nullptr, &one, nullptr, &one,
          work.data(), &lwork, rwork.data(), iwork.data(), &info);
  if (info != 0) throw std::runtime_error("sigma_min: zgesdd failed");
  return s[n - 1];
}

double sigma_min_inverse_iteration(Eigen::MatrixXcd& a, double tol) {
  const int n = static_cast<int>(a.rows());
  LuFactorization f = lu_factor(std::move(a));
  std::mt19937 rng(987654321u);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
  v /= v.norm();
  // power iteration on (A^H A)^{-1} = A^{-1} A^{-H}
  double sigma = 0.0, prev = -1.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXcd w = lu_solve(f, v, 'C');
    w = lu_solve(f, std::move(w), 'N');
    const double lambda = w.norm();
    if (lambda == 0.0) throw std::runtime_error("sigma_min: iteration collapsed");
    sigma = 1.0 / std::sqrt(lambda);
    v = w / lambda;
    if (prev >= 0 && std::abs(sigma - prev) <= tol * sigma) return sigma;
    prev = sigma;
  }
  return sigma;  // best available estimate after the iteration cap
}

}  // namespace

double smallest_singular_value_inplace(Eigen::MatrixXcd& a, double tol,
                                       SigmaMethod method) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("smallest_singular_value: matrix not square");
  const int n = static_cast<int>(a.rows());
  const bool use_svd = method == SigmaMethod::svd ||
                       (method == SigmaMethod::automatic && n <= 4096);
  if (use_svd) return sigma_min_svd(std::move(a));
  return sigma_min_inverse_iteration(a, tol);
}

double smallest_singular_value(const Eigen::MatrixXcd& a, double tol,
                               SigmaMethod method) {
  Eigen::MatrixXcd copy = a;
  return smallest_singular_value_inplace(copy, tol, method);
}

}  // namespace spinscat
