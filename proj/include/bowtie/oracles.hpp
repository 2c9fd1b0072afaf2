#pragma once

#include <string>
#include <vector>

#include "bowtie/bie.hpp"
#include "bowtie/fields.hpp"

namespace bowtie {

struct OracleReport {
  std::string oracle_name;
  double max_abs_error = 0;
  double max_rel_error = 0;
  int sample_count = 0;
  double runtime_seconds = 0;

  std::string to_json() const;
};

/// Exact exterior solution for a floating conducting disk with a dipole
/// emitter: the free dipole plus a single reflected image dipole at the
/// inverse point. Validated against the circular-harmonics series before use.
struct DiskOracle {
  Vec2 center;
  double radius = 1.0;
  Vec2 a{0.0, 1.0};  // dipole direction, unit
  Vec2 source;       // dipole location, outside the closed disk

  void validate() const;
  Vec2 image_point() const;
  Vec2 image_moment() const;
  double boundary_constant() const;  // value of u on the circle
  double potential(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

/// Truncated circular-harmonics solution of the same problem; independent of
/// the image construction (Fourier data on the circle, exterior decay modes).
struct DiskSeriesOracle {
  DiskOracle problem;
  int n_modes = 2000;
  std::vector<double> ac, as;  // cos/sin Fourier data of the free field
  double mean = 0;

  static DiskSeriesOracle build(const DiskOracle& problem, int n_modes = 2000);
  double potential(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

/// max |image - series| for potential and gradient over n points at the
/// given standoff factors (anti-hallucination gate for the oracle itself)
OracleReport disk_oracle_self_check(const DiskOracle& problem, int n_points,
                                    int n_modes = 2000);

/// Harmonic manufactured solution sum c_i N_{p_i} with sum c_i = 0 and all
/// poles strictly inside inclusions; its trace feeds the Dirichlet solver.
struct ManufacturedSolution {
  std::vector<Vec2> poles;
  std::vector<double> coefficients;

  void validate(const BowtieConfig& config, int n_components) const;
  double potential(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

/// Dirichlet solve with the manufactured trace on the given mesh.
SolveResult solve_manufactured(std::shared_ptr<const PanelMesh> mesh,
                               const ManufacturedSolution& exact,
                               const MeshParams& params = {});

/// Coarse 5-point finite-difference reference on a box, boundary data from
/// the BIE solution, staircase inclusions. Solves for the emitter-free
/// correction so the dipole singularity never meets the grid.
struct FdGrid {
  int n = 0;          // nodes per side
  double h = 0;       // spacing
  Vec2 origin;        // lower-left corner
  std::vector<double> u;      // full solution, row-major, masked cells hold c_j
  std::vector<uint8_t> mask;  // 1 = inside an inclusion

  double at(int i, int j) const { return u[j * n + i]; }
  Vec2 point(int i, int j) const { return {origin.x + i * h, origin.y + j * h}; }
  /// bilinear interpolation at an unmasked location
  double interpolate(const Vec2& x) const;
  void write_binary(const std::string& path_prefix) const;
};

FdGrid fd_reference_solve(const SolveResult& bie, double box_halfwidth,
                          int grid_n);

}  // namespace bowtie
