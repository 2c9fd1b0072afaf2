#include "bowtie/analytic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
}

Exponents exponents(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi))
    throw std::invalid_argument("exponents: alpha must lie in (0, pi)");
  return {kPi / (2.0 * kPi - alpha), kPi / (kPi - alpha)};
}

void DipoleSpec::validate() const {
  if (std::abs(a.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("DipoleSpec: direction must be a unit vector");
  if (std::abs(p) > 1.0)
    throw std::invalid_argument("DipoleSpec: |p| must not exceed 1");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("DipoleSpec: epsilon must be positive");
}

double newton_potential(const Vec2& x, const Vec2& p0) {
  const Vec2 r = x - p0;
  double n2 = r.norm2();
  if (n2 == 0.0)
    throw std::invalid_argument("newton_potential: X coincides with the pole");
  return 0.25 * std::log(n2) / kPi;  // log|r|/(2 pi)
}

Vec2 grad_newton_potential(const Vec2& x, const Vec2& p0) {
  const Vec2 r = x - p0;
  double n2 = r.norm2();
  if (n2 == 0.0)
    throw std::invalid_argument("grad_newton_potential: X coincides with the pole");
  return r / (2.0 * kPi * n2);
}

double dipole_potential_at(const Vec2& x, const Vec2& a, const Vec2& loc) {
  return a.dot(grad_newton_potential(x, loc));
}

Vec2 dipole_gradient_at(const Vec2& x, const Vec2& a, const Vec2& loc) {
  const Vec2 r = x - loc;
  double n2 = r.norm2();
  if (n2 == 0.0)
    throw std::invalid_argument("dipole_gradient: X coincides with the emitter");
  // Hessian of the log kernel is a scaled reflection: (a - 2(a.rhat)rhat)/(2 pi r^2)
  const Vec2 rh = r / std::sqrt(n2);
  return (a - rh * (2.0 * a.dot(rh))) / (2.0 * kPi * n2);
}

double dipole_potential(const Vec2& x, const DipoleSpec& spec) {
  spec.validate();
  return dipole_potential_at(x, spec.a, spec.location());
}

Vec2 dipole_gradient(const Vec2& x, const DipoleSpec& spec) {
  spec.validate();
  return dipole_gradient_at(x, spec.a, spec.location());
}

double corner_singular_B(const Vec2& y, int vertex_id,
                         const BowtieConfig& config) {
  const PolarChart pc = polar_about_vertex(y, vertex_id, config);
  const double beta = exponents(config.alpha).beta;
  return std::pow(pc.r, beta) * std::sin(beta * pc.theta);
}

Vec2 grad_corner_singular_B(const Vec2& y, int vertex_id,
                            const BowtieConfig& config) {
  const PolarChart pc = polar_about_vertex(y, vertex_id, config);
  if (pc.r == 0.0)
    throw std::invalid_argument("grad_corner_singular_B: gradient undefined at the vertex");
  const double beta = exponents(config.alpha).beta;
  const double mag = beta * std::pow(pc.r, beta - 1.0);
  const Vec2 er = polar_direction(pc.theta, vertex_id, config);
  const Vec2 et = er.perp() * double(polar_orientation(vertex_id));
  return er * (mag * std::sin(beta * pc.theta)) +
         et * (mag * std::cos(beta * pc.theta));
}

Vec2 phi_pole(const BowtieConfig& config) {
  return {0.0, -0.5 * std::tan(config.half_aperture())};
}

double angle_phi(const Vec2& y, const BowtieConfig& config) {
  const double A = config.half_aperture();
  const Vec2 q = phi_pole(config);
  const Vec2 ym{y.x, std::abs(y.y)};  // even extension in y2
  if (inside_scaled_cone(ym, 1, config) || inside_scaled_cone(ym, 2, config))
    throw std::invalid_argument("angle_phi: point inside a cone");
  const Vec2 rel = ym - q;
  if (rel.norm2() == 0.0)
    throw std::invalid_argument("angle_phi: point coincides with Q");
  double phi = (kPi - A) - std::atan2(rel.y, rel.x);
  const double span = kPi - config.alpha;
  if (phi < 0.0) phi = (phi > -1e-12) ? 0.0 : phi;
  if (phi > span) phi = (phi - span < 1e-12) ? span : phi;
  if (phi < 0.0 || phi > span)
    throw std::invalid_argument("angle_phi: point outside the admissible wedge");
  return phi;
}

Vec2 grad_angle_phi(const Vec2& y, const BowtieConfig& config) {
  angle_phi(y, config);  // run validations
  const Vec2 q = phi_pole(config);
  const Vec2 ym{y.x, std::abs(y.y)};
  const Vec2 rel = ym - q;
  const double n2 = rel.norm2();
  Vec2 g{rel.y / n2, -rel.x / n2};
  if (y.y < 0.0) g.y = -g.y;  // even extension
  return g;
}

LevelCircle level_circle_for_value(double value, const DipoleSpec& spec) {
  if (value == 0.0)
    throw std::invalid_argument(
        "level_circle_for_value: the zero level set is a line, not a circle");
  const double zeta = 1.0 / (4.0 * kPi * value);
  LevelCircle c;
  c.value = value;
  c.center = {0.0, spec.epsilon * spec.p + zeta};
  c.radius = std::abs(zeta);
  return c;
}

double verify_level_circle(const LevelCircle& circle, const DipoleSpec& spec,
                           int n_points) {
  const Vec2 e = spec.location();
  double worst = 0.0;
  for (int k = 0; k < n_points; ++k) {
    double ang = 2.0 * kPi * (k + 0.37) / n_points;  // avoid the puncture at e
    Vec2 x = circle.center + Vec2{std::cos(ang), std::sin(ang)} * circle.radius;
    if (dist(x, e) < 1e-13 * circle.radius) continue;
    Vec2 r = x - e;
    double v = r.y / (2.0 * kPi * r.norm2());
    worst = std::max(worst, std::abs(v - circle.value));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Extremal circles (smallest circle through e contacting the edges)

namespace {

struct Contact {
  double zeta = std::numeric_limits<double>::infinity();
  Vec2 point;
  bool at_vertex = false;
};

// Contact parameter along one edge ray for the family of circles through
// e = (0,p) with center (0, p + sgn*zeta): zeta(s) = |P(s)-e|^2 / (2 sgn (P_y - p)).
// Interior minima satisfy d_y s^2 + 2 c s + (2 b c - |S-e|^2 d_y) = 0 with
// b = d.(S-e), c = S_y - p.
Contact ray_min_zeta(const Vec2& S, const Vec2& d, const Vec2& e, double sgn) {
  Contact best;
  auto consider = [&](double s) {
    if (s < 0.0) return;
    Vec2 P = S + d * s;
    double denom = sgn * (P.y - e.y);
    if (denom <= 0.0) return;
    double zeta = (P - e).norm2() / (2.0 * denom);
    if (zeta < best.zeta) {
      best.zeta = zeta;
      best.point = P;
      best.at_vertex = (s == 0.0);
    }
  };
  consider(0.0);
  const double b = d.dot(S - e);
  const double c = S.y - e.y;
  const double q0 = 2.0 * b * c - (S - e).norm2() * d.y;
  if (d.y != 0.0) {
    double disc = 4.0 * c * c - 4.0 * d.y * q0;
    if (disc >= 0.0) {
      double sq = std::sqrt(disc);
      consider((-2.0 * c + sq) / (2.0 * d.y));
      consider((-2.0 * c - sq) / (2.0 * d.y));
    }
  } else if (c != 0.0) {
    consider(-q0 / (2.0 * c));
  }
  return best;
}

}  // namespace

ExtremalPoints extremal_boundary_points(const BowtieConfig& config,
                                        const DipoleSpec& spec) {
  config.validate();
  spec.validate();
  if (spec.p == 0.0)
    throw std::invalid_argument("extremal_boundary_points: p = 0 is excluded");

  // mirror for p < 0: reflect in x2 and swap extremes at the end
  const bool flipped = spec.p < 0.0;
  const double p = std::abs(spec.p);
  const Vec2 e{0.0, p};
  const double A = config.half_aperture();

  struct Edge {
    Vec2 S, d;
  };
  const Edge edges[4] = {
      {{-0.5, 0.0}, {-std::cos(A), std::sin(A)}},
      {{-0.5, 0.0}, {-std::cos(A), -std::sin(A)}},
      {{0.5, 0.0}, {std::cos(A), std::sin(A)}},
      {{0.5, 0.0}, {std::cos(A), -std::sin(A)}},
  };

  auto family_min = [&](double sgn) {
    Contact best;
    for (const Edge& ed : edges) {
      Contact c = ray_min_zeta(ed.S, ed.d, e, sgn);
      if (c.zeta < best.zeta) best = c;
    }
    return best;
  };

  Contact up = family_min(+1.0);   // positive values, maximum
  Contact down = family_min(-1.0); // negative values, minimum
  if (!std::isfinite(up.zeta) || !std::isfinite(down.zeta))
    throw std::runtime_error("extremal_boundary_points: no contact found");

  ExtremalPoints out;
  out.zeta_above = up.zeta;
  out.zeta_below = down.zeta;
  out.min_at_vertices = down.at_vertex;

  auto mirror_pair = [&](const Vec2& c, Vec2 dst[2]) {
    // contacts come in x2-symmetric pairs; report (left, right)
    Vec2 other{-c.x, c.y};
    if (c.x <= other.x) {
      dst[0] = c;
      dst[1] = other;
    } else {
      dst[0] = other;
      dst[1] = c;
    }
  };
  mirror_pair(up.point, out.max_points);
  mirror_pair(down.point, out.min_points);

  double vmax = 1.0 / (4.0 * kPi * up.zeta);
  double vmin = -1.0 / (4.0 * kPi * down.zeta);
  if (flipped) {
    // d2 N is odd under the reflection, so extremes swap and change sign
    std::swap(vmax, vmin);
    vmax = -vmax;
    vmin = -vmin;
    std::swap(out.max_points, out.min_points);
    std::swap(out.zeta_above, out.zeta_below);
    for (Vec2* pts : {out.max_points, out.min_points}) {
      pts[0].y = -pts[0].y;
      pts[1].y = -pts[1].y;
    }
  }
  out.max_value = vmax / spec.epsilon;
  out.min_value = vmin / spec.epsilon;
  for (int i = 0; i < 2; ++i) {
    out.max_points_phys[i] = out.max_points[i] * spec.epsilon;
    out.min_points_phys[i] = out.min_points[i] * spec.epsilon;
  }
  return out;
}

}  // namespace bowtie
