#include "sqz/grid.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "sqz/errors.hpp"

namespace sqz {

double wrap_angle(double t) {
  t = std::fmod(t, 2.0 * M_PI);
  if (t < 0.0) t += 2.0 * M_PI;
  return t;
}

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

Complex GridCondenser::center_z(int i, int j) const {
  const double rc = row_coord(i), cc = col_coord(j);
  if (kind == GridKind::log_polar) return std::polar(std::exp(rc), cc);
  return Complex(cc, rc);  // cartesian: (x, y) = (col, row)
}

bool GridCondenser::neighbor(int i, int j, std::uint8_t d, int& ni, int& nj) const {
  ni = i;
  nj = j;
  switch (d) {
    case kDirColPlus: nj = j + 1; break;
    case kDirColMinus: nj = j - 1; break;
    case kDirRowPlus: ni = i + 1; break;
    default: ni = i - 1; break;
  }
  if (ni < 0 || ni >= rows) return false;
  if (nj < 0 || nj >= cols) {
    if (!periodic_cols) return false;
    nj = (nj + cols) % cols;
  }
  return true;
}

std::int64_t GridCondenser::count(CellState s) const {
  std::int64_t n = 0;
  for (CellState c : cell)
    if (c == s) ++n;
  return n;
}

PotentialField solve_dirichlet(const GridCondenser& g, const BoundaryValueFn& data,
                               const ToleranceConfig& tol) {
  tol.validate();
  const std::int64_t ncells = std::int64_t(g.rows) * g.cols;

  // flat (cell, dir) -> fix index; hashing is too slow in optimizer loops
  std::vector<std::int32_t> fix_at(ncells * 4, -1);
  for (std::size_t k = 0; k < g.fixes.size(); ++k)
    fix_at[g.fixes[k].cell * 4 + g.fixes[k].dir] = static_cast<std::int32_t>(k);

  std::vector<std::int32_t> unknown(ncells, -1);
  std::vector<std::int64_t> cell_of;
  for (std::int64_t c = 0; c < ncells; ++c)
    if (g.cell[c] == CellState::field) {
      unknown[c] = static_cast<std::int32_t>(cell_of.size());
      cell_of.push_back(c);
    }
  const std::int64_t n = static_cast<std::int64_t>(cell_of.size());
  if (n == 0) throw TopologyError("solve_dirichlet: no field cells");

  const double w_row = g.dcol / g.drow;  // conductance of a row-direction edge
  const double w_col = g.drow / g.dcol;

  SparseSpd a;
  a.n = n;
  a.row_ptr.assign(n + 1, 0);
  std::vector<double> rhs(n, 0.0);

  // Two passes: count entries, then fill.
  std::vector<std::array<std::int32_t, 4>> nbr_unknown(n);
  std::vector<double> diag(n, 0.0);
  for (std::int64_t u = 0; u < n; ++u) {
    const std::int64_t c = cell_of[u];
    const int i = static_cast<int>(c / g.cols), j = static_cast<int>(c % g.cols);
    int cnt = 0;
    for (std::uint8_t d = 0; d < 4; ++d) {
      nbr_unknown[u][d] = -1;
      const double w = (d >= 2) ? w_row : w_col;
      const std::int32_t fi = fix_at[c * 4 + d];
      if (fi >= 0) {
        const EdgeFix& f = g.fixes[fi];
        const double wf = w / f.frac;
        diag[u] += wf;
        rhs[u] += wf * data(f.plate, f.at);
        continue;
      }
      int ni, nj;
      if (!g.neighbor(i, j, d, ni, nj)) continue;  // Neumann at grid border
      const CellState s = g.at(ni, nj);
      if (s == CellState::excluded) continue;      // Neumann at excluded frontier
      if (s == CellState::field) {
        diag[u] += w;
        nbr_unknown[u][d] = unknown[g.idx(ni, nj)];
        ++cnt;
      } else {
        diag[u] += w;
        rhs[u] += w * data(s, g.center_z(ni, nj));
      }
    }
    a.row_ptr[u + 1] = cnt + 1;  // neighbors + diagonal
  }
  for (std::int64_t u = 0; u < n; ++u) a.row_ptr[u + 1] += a.row_ptr[u];
  a.col.resize(a.row_ptr[n]);
  a.val.resize(a.row_ptr[n]);
  for (std::int64_t u = 0; u < n; ++u) {
    std::int64_t k = a.row_ptr[u];
    a.col[k] = static_cast<std::int32_t>(u);
    a.val[k] = diag[u];
    ++k;
    for (std::uint8_t d = 0; d < 4; ++d) {
      if (nbr_unknown[u][d] < 0) continue;
      const double w = (d >= 2) ? w_row : w_col;
      a.col[k] = nbr_unknown[u][d];
      a.val[k] = -w;
      ++k;
    }
  }

  CgResult cg = kernels::cg_solve(a, rhs, tol.solver_rel_tol);

  PotentialField out;
  out.cg_iterations = cg.iterations;
  out.cg_residual = cg.rel_residual;
  out.u.assign(ncells, kNaN);
  for (std::int64_t c = 0; c < ncells; ++c) {
    const CellState s = g.cell[c];
    if (s == CellState::field)
      out.u[c] = cg.x[unknown[c]];
    else if (s != CellState::excluded)
      out.u[c] = data(s, g.center_z(static_cast<int>(c / g.cols), static_cast<int>(c % g.cols)));
  }

  // Dirichlet energy: field-field edges once (positive directions), boundary
  // edges from the field side.
  double energy = 0.0;
  for (std::int64_t u = 0; u < n; ++u) {
    const std::int64_t c = cell_of[u];
    const int i = static_cast<int>(c / g.cols), j = static_cast<int>(c % g.cols);
    const double uc = out.u[c];
    for (std::uint8_t d = 0; d < 4; ++d) {
      const double w = (d >= 2) ? w_row : w_col;
      const std::int32_t fi = fix_at[c * 4 + d];
      if (fi >= 0) {
        const EdgeFix& f = g.fixes[fi];
        const double du = uc - data(f.plate, f.at);
        energy += (w / f.frac) * du * du;
        continue;
      }
      int ni, nj;
      if (!g.neighbor(i, j, d, ni, nj)) continue;
      const CellState s = g.at(ni, nj);
      if (s == CellState::excluded) continue;
      if (s == CellState::field) {
        if (d == kDirColPlus || d == kDirRowPlus) {  // count each interior edge once
          const double du = uc - out.u[g.idx(ni, nj)];
          energy += w * du * du;
        }
      } else {
        const double du = uc - out.u[g.idx(ni, nj)];
        energy += w * du * du;
      }
    }
  }
  out.energy = energy;
  return out;
}

namespace {
// Shared walk over field->plate boundary edges; calls fn(flux, theta).
template <class Fn>
void for_each_boundary_flux(const GridCondenser& g, const PotentialField& f,
                            CellState plate, Fn&& fn) {
  std::unordered_map<std::int64_t, const EdgeFix*> fix_of;
  for (const EdgeFix& e : g.fixes) fix_of[e.cell * 4 + e.dir] = &e;
  const double w_row = g.dcol / g.drow, w_col = g.drow / g.dcol;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      const std::int64_t c = g.idx(i, j);
      if (g.cell[c] != CellState::field) continue;
      for (std::uint8_t d = 0; d < 4; ++d) {
        const double w = (d >= 2) ? w_row : w_col;
        auto it = fix_of.find(c * 4 + d);
        if (it != fix_of.end()) {
          const EdgeFix& e = *it->second;
          if (e.plate != plate) continue;
          const double val = plate == CellState::plate1 ? 1.0 : 0.0;
          fn((w / e.frac) * (val - f.u[c]), wrap_angle(std::arg(e.at)));
          continue;
        }
        int ni, nj;
        if (!g.neighbor(i, j, d, ni, nj)) continue;
        if (g.at(ni, nj) != plate) continue;
        const double val = plate == CellState::plate1 ? 1.0 : 0.0;
        fn(w * (val - f.u[c]), wrap_angle(std::arg(g.center_z(ni, nj))));
      }
    }
}
}  // namespace

double plate_flux_in_sector(const GridCondenser& g, const PotentialField& f,
                            CellState plate, double theta_lo, double theta_hi) {
  const double lo = wrap_angle(theta_lo);
  double hi = wrap_angle(theta_hi);
  const bool full = std::abs(theta_hi - theta_lo) >= 2.0 * M_PI - 1e-14;
  double flux = 0.0;
  for_each_boundary_flux(g, f, plate, [&](double df, double th) {
    bool in;
    if (full)
      in = true;
    else if (lo <= hi)
      in = th >= lo && th < hi;
    else
      in = th >= lo || th < hi;  // sector wrapping through 0
    if (in) flux += df;
  });
  return flux;
}

double plate_flux_total(const GridCondenser& g, const PotentialField& f, CellState plate) {
  double flux = 0.0;
  for_each_boundary_flux(g, f, plate, [&](double df, double) { flux += df; });
  return flux;
}

double interpolate(const GridCondenser& g, const std::vector<double>& u,
                   double row_coord, double col_coord) {
  double fi = (row_coord - g.row0) / g.drow;
  double fj = (col_coord - g.col0) / g.dcol;
  if (g.periodic_cols) {
    const double span = g.cols;
    fj = std::fmod(fj, span);
    if (fj < 0) fj += span;
  }
  int i0 = static_cast<int>(std::floor(fi));
  int j0 = static_cast<int>(std::floor(fj));
  i0 = std::max(0, std::min(g.rows - 2, i0));
  const double ti = fi - i0;
  const double tj = fj - j0;
  auto val = [&](int i, int j) {
    if (g.periodic_cols) j = (j % g.cols + g.cols) % g.cols;
    j = std::max(0, std::min(g.cols - 1, j));
    return u[g.idx(i, j)];
  };
  const double v00 = val(i0, j0), v01 = val(i0, j0 + 1);
  const double v10 = val(i0 + 1, j0), v11 = val(i0 + 1, j0 + 1);
  if (std::isnan(v00) || std::isnan(v01) || std::isnan(v10) || std::isnan(v11))
    throw std::domain_error("interpolate: point too close to an excluded cell");
  return (1 - ti) * ((1 - tj) * v00 + tj * v01) + ti * ((1 - tj) * v10 + tj * v11);
}

double bottom_row_mean(const GridCondenser& g, const std::vector<double>& u) {
  double s = 0.0;
  for (int j = 0; j < g.cols; ++j) {
    const double v = u[g.idx(0, j)];
    if (std::isnan(v))
      throw TopologyError("bottom_row_mean: bottom row not fully interior");
    s += v;
  }
  return s / g.cols;
}

namespace {
std::int64_t flood(const GridCondenser& g, std::vector<std::uint8_t>& seen,
                   std::int64_t start, bool (*pred)(CellState)) {
  std::queue<std::int64_t> q;
  q.push(start);
  seen[start] = 1;
  std::int64_t n = 0;
  while (!q.empty()) {
    const std::int64_t c = q.front();
    q.pop();
    ++n;
    const int i = static_cast<int>(c / g.cols), j = static_cast<int>(c % g.cols);
    for (std::uint8_t d = 0; d < 4; ++d) {
      int ni, nj;
      if (!g.neighbor(i, j, d, ni, nj)) continue;
      const std::int64_t nc = g.idx(ni, nj);
      if (!seen[nc] && pred(g.cell[nc])) {
        seen[nc] = 1;
        q.push(nc);
      }
    }
  }
  return n;
}
}  // namespace

bool field_connected(const GridCondenser& g) {
  const std::int64_t total = g.count(CellState::field);
  if (total == 0) return false;
  std::vector<std::uint8_t> seen(g.cell.size(), 0);
  std::int64_t start = -1;
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(g.cell.size()); ++c)
    if (g.cell[c] == CellState::field) {
      start = c;
      break;
    }
  const std::int64_t reached =
      flood(g, seen, start, [](CellState s) { return s == CellState::field; });
  return reached == total;
}

bool field_touches(const GridCondenser& g, CellState plate) {
  std::unordered_map<std::int64_t, const EdgeFix*> fix_of;
  for (const EdgeFix& e : g.fixes)
    if (e.plate == plate) fix_of[e.cell * 4 + e.dir] = &e;
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      if (g.at(i, j) != CellState::field) continue;
      for (std::uint8_t d = 0; d < 4; ++d) {
        if (fix_of.count(g.idx(i, j) * 4 + d)) return true;
        int ni, nj;
        if (!g.neighbor(i, j, d, ni, nj)) continue;
        if (g.at(ni, nj) == plate) return true;
      }
    }
  return false;
}

bool plates_adjacent(const GridCondenser& g) {
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      if (g.at(i, j) != CellState::plate0) continue;
      for (std::uint8_t d = 0; d < 4; ++d) {
        int ni, nj;
        if (!g.neighbor(i, j, d, ni, nj)) continue;
        if (g.at(ni, nj) == CellState::plate1) return true;
      }
    }
  return false;
}

bool complement_touches_border(const GridCondenser& g) {
  auto not_field = [](CellState s) { return s != CellState::field; };
  std::vector<std::uint8_t> seen(g.cell.size(), 0);
  // Seed from every non-field border cell, then check all non-field cells
  // were reached. (Columns wrap on periodic grids, so only rows 0 and
  // rows-1 form the border there.)
  for (int i = 0; i < g.rows; ++i)
    for (int j = 0; j < g.cols; ++j) {
      const bool border =
          i == 0 || i == g.rows - 1 || (!g.periodic_cols && (j == 0 || j == g.cols - 1));
      const std::int64_t c = g.idx(i, j);
      if (border && !seen[c] && not_field(g.cell[c]))
        flood(g, seen, c, [](CellState s) { return s != CellState::field; });
    }
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(g.cell.size()); ++c)
    if (g.cell[c] != CellState::field && !seen[c]) return false;
  return true;
}

}  // namespace sqz
