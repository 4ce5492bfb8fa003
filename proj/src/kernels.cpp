#include "sqz/kernels.hpp"

#include <cmath>
#include <cstddef>

#include "sqz/errors.hpp"

namespace sqz::kernels {

namespace {
constexpr std::int64_t kDotChunk = 4096;
// below this size the OpenMP region launch costs more than the loop
constexpr std::int64_t kParallelThreshold = 1 << 15;

template <class Dot, class Spmv, class Axpy>
CgResult cg_impl(const SparseSpd& a, std::span<const double> b, double rel_tol,
                 int max_iter, Dot dot_fn, Spmv spmv_fn, Axpy axpy_fn) {
  const std::int64_t n = a.n;
  if (max_iter <= 0) max_iter = static_cast<int>(4 * n + 100);

  // Jacobi preconditioner from the CSR diagonal.
  std::vector<double> dinv(n, 1.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      if (a.col[k] == i && a.val[k] != 0.0) dinv[i] = 1.0 / a.val[k];
    }
  }

  CgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);

  const double bnorm = std::sqrt(dot_fn(b, b));
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  for (std::int64_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot_fn(r, z);
  double rnorm = std::sqrt(dot_fn(r, r));

  int it = 0;
  while (rnorm / bnorm > rel_tol && it < max_iter) {
    spmv_fn(a, p, std::span<double>(ap));
    const double pap = dot_fn(p, ap);
    if (!(pap > 0.0))
      throw SolverError("cg_solve: matrix not positive definite", rnorm / bnorm);
    const double alpha = rz / pap;
    axpy_fn(alpha, p, std::span<double>(res.x));
    axpy_fn(-alpha, ap, std::span<double>(r));
    for (std::int64_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot_fn(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::int64_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rnorm = std::sqrt(dot_fn(r, r));
    ++it;
  }
  res.iterations = it;
  res.rel_residual = rnorm / bnorm;
  res.converged = res.rel_residual <= rel_tol;
  if (!res.converged)
    throw SolverError("cg_solve: no convergence within iteration cap",
                      res.rel_residual);
  return res;
}
}  // namespace

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = a.n;
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::int64_t n = static_cast<std::int64_t>(a.size());
  const std::int64_t nchunks = (n + kDotChunk - 1) / kDotChunk;
  std::vector<double> partial(static_cast<std::size_t>(nchunks), 0.0);
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::int64_t c = 0; c < nchunks; ++c) {
    const std::int64_t lo = c * kDotChunk;
    const std::int64_t hi = std::min(n, lo + kDotChunk);
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[c] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;  // fixed order: reproducible
  return total;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

CgResult cg_solve(const SparseSpd& a, std::span<const double> b, double rel_tol,
                  int max_iter) {
  return cg_impl(
      a, b, rel_tol, max_iter,
      [](std::span<const double> u, std::span<const double> v) { return dot(u, v); },
      [](const SparseSpd& m, std::span<const double> x, std::span<double> y) {
        spmv(m, x, y);
      },
      [](double al, std::span<const double> x, std::span<double> y) {
        axpy(al, x, y);
      });
}

namespace serial {

void spmv(const SparseSpd& a, std::span<const double> x, std::span<double> y) {
  for (std::int64_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::int64_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      s += a.val[k] * x[a.col[k]];
    y[i] = s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

CgResult cg_solve(const SparseSpd& a, std::span<const double> b, double rel_tol,
                  int max_iter) {
  return cg_impl(
      a, b, rel_tol, max_iter,
      [](std::span<const double> u, std::span<const double> v) {
        return serial::dot(u, v);
      },
      [](const SparseSpd& m, std::span<const double> x, std::span<double> y) {
        serial::spmv(m, x, y);
      },
      [](double al, std::span<const double> x, std::span<double> y) {
        serial::axpy(al, x, y);
      });
}

}  // namespace serial
}  // namespace sqz::kernels
