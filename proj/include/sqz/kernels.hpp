#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sqz {

// Symmetric positive-definite sparse matrix in CSR form (full storage, the
// diagonal included). Assembled from 5-point Laplace stencils with Dirichlet
// data folded into the right-hand side.
struct SparseSpd {
  std::int64_t n = 0;
  std::vector<std::int64_t> row_ptr;  // size n+1
  std::vector<std::int32_t> col;
  std::vector<double> val;
};

struct CgResult {
  std::vector<double> x;
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// OpenMP-parallel kernels. All reductions accumulate fixed-size chunks in
// index order, so results are bit-identical for any thread count.
namespace kernels {

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Jacobi-preconditioned conjugate gradient. Throws SolverError when the
// relative residual fails to reach rel_tol within max_iter iterations.
CgResult cg_solve(const SparseSpd& a, std::span<const double> b,
                  double rel_tol, int max_iter = 0);

// Serial reference implementations, kept for testing and benchmarking the
// parallel kernels against.
namespace serial {
void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
CgResult cg_solve(const SparseSpd& a, std::span<const double> b,
                  double rel_tol, int max_iter = 0);
}  // namespace serial

}  // namespace kernels
}  // namespace sqz
