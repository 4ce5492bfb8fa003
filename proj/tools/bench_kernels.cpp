// Benchmark of the OpenMP solver kernels against the serial reference on
// annulus condenser solves and raw spmv/dot sweeps.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sqz/domains.hpp"
#include "sqz/grid.hpp"
#include "sqz/kernels.hpp"
#include "sqz/modulus.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Assembled {
  sqz::SparseSpd a;
  std::vector<double> b;
};

Assembled assemble_annulus(int rows) {
  using namespace sqz;
  const GridCondenser g = rasterize(make_annulus(0.2), rows, GridKind::log_polar);
  // mirror of the solver assembly: field unknowns with plate data folded in
  Assembled out;
  const std::int64_t ncells = std::int64_t(g.rows) * g.cols;
  std::vector<std::int32_t> unknown(ncells, -1);
  std::vector<std::int64_t> cells;
  for (std::int64_t c = 0; c < ncells; ++c)
    if (g.cell[c] == CellState::field) {
      unknown[c] = static_cast<std::int32_t>(cells.size());
      cells.push_back(c);
    }
  const double wr = g.dcol / g.drow, wc = g.drow / g.dcol;
  out.a.n = static_cast<std::int64_t>(cells.size());
  out.a.row_ptr.assign(out.a.n + 1, 0);
  out.b.assign(out.a.n, 0.0);
  std::vector<std::int32_t> col;
  std::vector<double> val;
  for (std::int64_t u = 0; u < out.a.n; ++u) {
    const std::int64_t c = cells[u];
    const int i = static_cast<int>(c / g.cols), j = static_cast<int>(c % g.cols);
    double diag = 0.0;
    col.push_back(static_cast<std::int32_t>(u));
    val.push_back(0.0);
    const std::size_t diag_pos = val.size() - 1;
    int entries = 1;
    for (std::uint8_t d = 0; d < 4; ++d) {
      int ni, nj;
      if (!g.neighbor(i, j, d, ni, nj)) continue;
      const double w = d >= 2 ? wr : wc;
      const CellState s = g.at(ni, nj);
      if (s == CellState::excluded) continue;
      diag += w;
      if (s == CellState::field) {
        col.push_back(unknown[g.idx(ni, nj)]);
        val.push_back(-w);
        ++entries;
      } else if (s == CellState::plate1) {
        out.b[u] += w;
      }
    }
    val[diag_pos] = diag;
    out.a.row_ptr[u + 1] = out.a.row_ptr[u] + entries;
  }
  out.a.col = std::move(col);
  out.a.val = std::move(val);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int rows = 256, reps = 3;
  for (int i = 1; i + 1 < argc; i += 2) {
    if (!std::strcmp(argv[i], "--rows")) rows = std::atoi(argv[i + 1]);
    if (!std::strcmp(argv[i], "--cols")) (void)argv[i + 1];  // grid derives cols
    if (!std::strcmp(argv[i], "--reps")) reps = std::atoi(argv[i + 1]);
  }

  Assembled sys = assemble_annulus(rows);
  std::printf("annulus condenser system: n = %lld unknowns, reps = %d\n",
              static_cast<long long>(sys.a.n), reps);
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif

  std::vector<double> x(sys.a.n, 1.0), y(sys.a.n);
  const int spmv_reps = 200;

  auto t0 = Clock::now();
  for (int r = 0; r < spmv_reps; ++r) sqz::kernels::serial::spmv(sys.a, x, y);
  const double t_serial_spmv = seconds_since(t0) / spmv_reps;

  t0 = Clock::now();
  for (int r = 0; r < spmv_reps; ++r) sqz::kernels::spmv(sys.a, x, y);
  const double t_omp_spmv = seconds_since(t0) / spmv_reps;

  double cg_serial = 0.0, cg_omp = 0.0;
  int iters = 0;
  for (int r = 0; r < reps; ++r) {
    t0 = Clock::now();
    auto res = sqz::kernels::serial::cg_solve(sys.a, sys.b, 1e-10);
    cg_serial += seconds_since(t0);
    t0 = Clock::now();
    auto res2 = sqz::kernels::cg_solve(sys.a, sys.b, 1e-10);
    cg_omp += seconds_since(t0);
    iters = res2.iterations;
    double maxdiff = 0.0;
    for (std::int64_t i = 0; i < sys.a.n; ++i)
      maxdiff = std::max(maxdiff, std::abs(res.x[i] - res2.x[i]));
    if (maxdiff > 1e-8) {
      std::printf("MISMATCH serial vs omp: %g\n", maxdiff);
      return 1;
    }
  }
  cg_serial /= reps;
  cg_omp /= reps;

  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
  std::printf("%-22s %12.3f %12.3f %8.2fx\n", "spmv", 1e3 * t_serial_spmv,
              1e3 * t_omp_spmv, t_serial_spmv / t_omp_spmv);
  std::printf("%-22s %12.3f %12.3f %8.2fx   (%d iterations)\n", "cg_solve",
              1e3 * cg_serial, 1e3 * cg_omp, cg_serial / cg_omp, iters);
  return 0;
}
