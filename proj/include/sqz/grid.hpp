#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sqz/kernels.hpp"
#include "sqz/numerics.hpp"

namespace sqz {

enum class GridKind { cartesian, log_polar };
enum class CellState : std::uint8_t { field, plate0, plate1, excluded };

// Normalizes an angle into [0, 2pi).
double wrap_angle(double t);

// Directions for cell neighbors / edge fixes.
enum : std::uint8_t { kDirColPlus = 0, kDirColMinus = 1, kDirRowPlus = 2, kDirRowMinus = 3 };

// Sub-cell Dirichlet correction: the plate boundary crosses the edge leaving
// `cell` in direction `dir` at `frac` grid steps from the cell center
// (frac in (0, 1.6]; it may pass the neighbor's center when the boundary lies
// on the far cell edge). `at` is the crossing point in the z-plane.
struct EdgeFix {
  std::int64_t cell;
  std::uint8_t dir;
  double frac;
  CellState plate;
  Complex at;
};

// Discretized condenser on a cartesian or log-polar grid. Cell (i,j) center
// has chart coordinates (row0 + i*drow, col0 + j*dcol); for log-polar grids
// the chart is (sigma, theta) = (log rho, arg z) and columns wrap.
struct GridCondenser {
  GridKind kind = GridKind::log_polar;
  int rows = 0, cols = 0;
  double row0 = 0.0, col0 = 0.0;
  double drow = 0.0, dcol = 0.0;
  bool periodic_cols = false;
  std::vector<CellState> cell;
  std::vector<EdgeFix> fixes;

  std::int64_t idx(int i, int j) const { return std::int64_t(i) * cols + j; }
  CellState at(int i, int j) const { return cell[idx(i, j)]; }
  double row_coord(int i) const { return row0 + i * drow; }
  double col_coord(int j) const { return col0 + j * dcol; }
  Complex center_z(int i, int j) const;

  // Neighbor in direction d; returns false when it leaves the grid.
  bool neighbor(int i, int j, std::uint8_t d, int& ni, int& nj) const;

  std::int64_t count(CellState s) const;
};

// Dirichlet data on the plates: value as a function of plate label and the
// point where the condition is imposed.
using BoundaryValueFn = std::function<double(CellState plate, Complex at)>;

inline BoundaryValueFn condenser_potential() {
  return [](CellState plate, Complex) { return plate == CellState::plate1 ? 1.0 : 0.0; };
}

struct PotentialField {
  std::vector<double> u;   // rows*cols; NaN on excluded cells
  double energy = 0.0;     // discrete Dirichlet energy of the solution
  int cg_iterations = 0;
  double cg_residual = 0.0;
};

// Assembles the 5-point system over field cells (edge fixes replace the
// frontier conductances) and solves it by preconditioned CG.
PotentialField solve_dirichlet(const GridCondenser& g, const BoundaryValueFn& data,
                               const ToleranceConfig& tol = {});

// Net flux from the field into `plate` through boundary edges whose crossing
// angle lies in [theta_lo, theta_hi) (log-polar grids; angles tested mod 2pi).
double plate_flux_in_sector(const GridCondenser& g, const PotentialField& f,
                            CellState plate, double theta_lo, double theta_hi);
double plate_flux_total(const GridCondenser& g, const PotentialField& f, CellState plate);

// Bilinear interpolation of the cell-centered array at chart coordinates.
double interpolate(const GridCondenser& g, const std::vector<double>& u,
                   double row_coord, double col_coord);

// Mean over the bottom-most grid row (all cells must be field); equals the
// value at the puncture for functions harmonic across it.
double bottom_row_mean(const GridCondenser& g, const std::vector<double>& u);

// Topology probes.
bool field_connected(const GridCondenser& g);
bool field_touches(const GridCondenser& g, CellState plate);
bool plates_adjacent(const GridCondenser& g);
// True when every plate/excluded component reaches the grid border (i.e. the
// field region is simply connected in the chart).
bool complement_touches_border(const GridCondenser& g);

}  // namespace sqz
