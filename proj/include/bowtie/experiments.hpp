#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/bie.hpp"
#include "bowtie/fields.hpp"

namespace bowtie {

enum class CaseId { case1, case2, case3, single_inclusion, background };

std::string case_name(CaseId c);
CaseId case_from_string(const std::string& s);

struct SweepConfig {
  CaseId case_id = CaseId::case1;
  double alpha = 1.5707963267948966;
  double p = 0.0;  // emitter height (case 3 needs p != 0)
  std::vector<double> epsilons = {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  // mesh: panels_per_side <= 0 means the eps-dependent default
  MeshParams mesh{-1, 5.0, 8, 3e15};
  // ray from the vertex along the exterior bisector, radii in units of eps
  int ray_vertex = 2;
  std::vector<double> relative_radii;     // defaults per case when empty
  double fit_window_lo = 0.0, fit_window_hi = 0.0;  // r/eps; defaults per case
  // band thresholds (recorded in the report, never silently changed)
  double band_midrange = 3.0;
  double band_gap = 2.0;
  double band_case2 = 3.0;
  double band_upper = 3.0;
  double slope_tol_spatial = 0.02;
  double slope_tol_eps = 0.1;

  void apply_defaults();
  std::string canonical_text() const;  // hashed into the report
};

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double window_lo = 0, window_hi = 0;
  int n_points = 0;
  bool accepted = false;  // r_squared >= 0.999
};

/// Ordinary least squares of log(value) against log(abscissa).
ExponentFit fit_exponent(const std::vector<double>& abscissa,
                         const std::vector<double>& values);

struct Band {
  std::string name;
  double min_value = 0;
  double max_value = 0;
  double threshold = 0;
  bool pass = false;
  double ratio() const { return min_value > 0 ? max_value / min_value : -1.0; }
};

struct EpsilonEntry {
  double epsilon = 0;
  int panels_per_side = 0;
  int nodes = 0;
  std::vector<double> constants;
  double gap = 0;
  ExponentFit spatial_fit;
  double corrected_point_value = 0;  // |grad u| * |X-V|^{1-beta} at the fixed point
  double scaled_sup = 0;             // case-2 sup |grad u| |X - eps e|^2
  double upper_ratio_sup = 0;        // sup |grad u| / bound
  double q_gap_scaled = 0;           // (lambda2-lambda1) |log eps|
  double u_gap_scaled = 0;           // (c2-c1) eps |log eps|
  double flux_scaled_min = 0;        // min (-1)^j dnu q * eps |log eps| near V
  double midrange_min = 0, midrange_max = 0;  // |grad u| |X| eps |log eps|
  double a1 = 0;
  bool a1_stable = false;
};

struct Report {
  SweepConfig config;
  std::string config_hash;
  std::vector<EpsilonEntry> entries;
  ExponentFit cross_fit;
  std::vector<Band> bands;
  std::vector<FieldSample> samples;
  bool pass = false;
  std::vector<std::string> failures;

  std::string to_json() const;
  /// report.json, samples.csv and gnuplot .dat files under dir
  void write(const std::string& dir) const;
};

/// |grad u| samples along a ray out of the vertex, radii in units of eps.
std::vector<FieldSample> ray_profile(const SolveResult& result, int vertex_id,
                                     const Vec2& direction,
                                     const std::vector<double>& relative_radii);
/// Exterior bisector of the vertex (into the gap).
Vec2 bisector_direction(int vertex_id);

Report epsilon_sweep(const SweepConfig& config);
Report gap_measurements(const SweepConfig& config);
/// sup over samples of |grad u| / bound with the case-specific bound
double upper_bound_ratio(const SolveResult& result,
                         const std::vector<Vec2>& samples);
std::vector<Vec2> upper_bound_sample_points(const BowtieConfig& config);

/// thread cap: BOWTIE_THREADS, clamped to [1, hardware]
int thread_budget();

}  // namespace bowtie
