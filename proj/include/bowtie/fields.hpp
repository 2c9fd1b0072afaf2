#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bowtie/bie.hpp"

namespace bowtie {

enum class RegimeTag { near_vertex, mid_range, far, transition };

std::string regime_name(RegimeTag tag);
/// near_vertex: within 0.1*eps of a vertex; mid_range: 10*eps*|log eps| <
/// |X| < 0.3; far: |X| >= 0.3; transition covers the remaining annulus.
RegimeTag classify_regime(const Vec2& x, const BowtieConfig& config);

struct FieldSample {
  Vec2 point;
  double u = 0;
  Vec2 grad_u;
  double dist_v1 = 0;
  double dist_v2 = 0;  // -1 on single-inclusion geometries
  double dist_emitter = 0;
  RegimeTag regime = RegimeTag::transition;
};

/// Full solution (particular part included) at an exterior point.
double eval_potential(const SolveResult& result, const Vec2& x);
Vec2 eval_gradient(const SolveResult& result, const Vec2& x);
FieldSample sample_field(const SolveResult& result, const Vec2& x);
void write_samples_csv(const std::vector<FieldSample>& samples,
                       const std::string& path);

/// Exterior normal derivative at a mesh node; nodes within 0.005*eps arc
/// distance of a corner are refused (empty optional).
std::optional<double> normal_derivative_on_boundary(const SolveResult& result,
                                                    int node_index);

struct CornerCoefficient {
  int vertex_id = 0;
  double a1 = 0;
  double arc_radius = 0;
  double truncation_estimate = 0;  // relative size of the next mode
  double halving_change = 0;       // |a1(r/2) - a1(r)| / |a1(r)|
  bool stable = false;             // halving change below 5 percent
};

/// Leading corner Fourier coefficient of the scaled trace
/// eps*(u - c_j) on the arc of radius arc_radius about V_j.
CornerCoefficient extract_corner_coefficient(const SolveResult& result,
                                             int vertex_id, double arc_radius);
/// Same extraction from an arbitrary trace (used with synthetic fields).
CornerCoefficient extract_corner_coefficient_fn(
    const std::function<double(const Vec2&)>& trace, const BowtieConfig& config,
    int vertex_id, double arc_radius, double scale_epsilon);

/// Max over samples of |grad sigma - grad(a.grad N) + grad v| where
/// sigma = u - gap_ratio * q; exact in the continuum.
double sigma_consistency(const SolveResult& u_result,
                         const SolveResult& q_result,
                         const SolveResult& v_result,
                         const std::vector<Vec2>& samples);

}  // namespace bowtie
