#pragma once

#include <vector>

#include "bowtie/geometry.hpp"
#include "bowtie/vec2.hpp"

namespace bowtie {

/// Corner exponents of the aperture angle: beta = pi/(2*pi - alpha) governs
/// the exterior corner singularity, gamma = pi/(pi - alpha) the gap wedge.
struct Exponents {
  double beta = 0;
  double gamma = 0;
};

Exponents exponents(double alpha);

/// Dipole emitter: unit direction a, location eps*(0, p) on the x2-axis.
struct DipoleSpec {
  Vec2 a{0.0, 1.0};
  double epsilon = 0.1;
  double p = 0.0;

  Vec2 location() const { return {0.0, epsilon * p}; }
  void validate() const;
};

/// Free-space log potential N_p(X) = log|X - p| / (2*pi).
double newton_potential(const Vec2& x, const Vec2& p0);
Vec2 grad_newton_potential(const Vec2& x, const Vec2& p0);

/// Dipole field a . grad N_loc and its gradient (Hessian of N applied to a).
double dipole_potential(const Vec2& x, const DipoleSpec& spec);
Vec2 dipole_gradient(const Vec2& x, const DipoleSpec& spec);
// same, with an explicit source point (used by oracles)
double dipole_potential_at(const Vec2& x, const Vec2& a, const Vec2& loc);
Vec2 dipole_gradient_at(const Vec2& x, const Vec2& a, const Vec2& loc);

/// Leading corner singular function B_j = r^beta sin(beta*theta) in the
/// scaled frame, and its Cartesian gradient (|grad B_j| = beta r^{beta-1}).
double corner_singular_B(const Vec2& y, int vertex_id, const BowtieConfig& config);
Vec2 grad_corner_singular_B(const Vec2& y, int vertex_id,
                            const BowtieConfig& config);

/// Angle function phi at Q = (0, -tan(alpha/2)/2), evenly extended in y2;
/// phi = 0 on the upper edge of Gamma_1 and pi - alpha on the upper edge of
/// Gamma_2. |grad phi| = 1/|Y - Q| in the closed upper half plane.
double angle_phi(const Vec2& y, const BowtieConfig& config);
Vec2 grad_angle_phi(const Vec2& y, const BowtieConfig& config);
Vec2 phi_pole(const BowtieConfig& config);  // Q

/// Level set of d2 N_{eps e}: circle through the emitter with center on the
/// x2-axis; value = 1/(4*pi*zeta) with zeta the signed center offset.
struct LevelCircle {
  double value = 0;
  Vec2 center;
  double radius = 0;
};

LevelCircle level_circle_for_value(double value, const DipoleSpec& spec);
/// max |d2 N - value| over n equispaced circle points (verification hook)
double verify_level_circle(const LevelCircle& circle, const DipoleSpec& spec,
                           int n_points = 8);

/// Extremal values of d2 N_{eps e} on the inclusion boundary (Lemma-style
/// smallest-circle construction, closed-form quadratics, no iteration).
struct ExtremalPoints {
  Vec2 max_points[2];  // scaled-frame contact points (left, right)
  Vec2 min_points[2];
  Vec2 max_points_phys[2];  // eps * contact
  Vec2 min_points_phys[2];
  double max_value = 0;  // of d2 N_{eps e}, scales like 1/eps
  double min_value = 0;
  double zeta_above = 0;  // circle parameters in the scaled frame
  double zeta_below = 0;
  bool min_at_vertices = false;  // true under condition (A)
};

ExtremalPoints extremal_boundary_points(const BowtieConfig& config,
                                        const DipoleSpec& spec);

}  // namespace bowtie
