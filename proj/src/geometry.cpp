#include "bowtie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "bowtie/gauss.hpp"
#include "bowtie/io.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kEdgeTol = 1e-12;

double wrap_2pi(double a) {
  a = std::fmod(a, 2 * kPi);
  if (a < 0) a += 2 * kPi;
  return a;
}
}  // namespace

void BowtieConfig::validate() const {
  if (!(alpha > 0.0 && alpha < kPi))
    throw std::invalid_argument("BowtieConfig: alpha must lie in (0, pi)");
  if (!(epsilon > 0.0 && epsilon < 0.25))
    throw std::invalid_argument("BowtieConfig: epsilon must lie in (0, 1/4)");
  if (epsilon >= 2.0 * std::tan(0.5 * alpha))
    throw std::invalid_argument(
        "BowtieConfig: epsilon >= 2*tan(alpha/2), inclusions capture the gap");
  if (!(mu > 1.0))
    throw std::invalid_argument("BowtieConfig: mu must exceed 1");
  if (!(cap_fillet > 0.0 && cap_fillet <= 0.5))
    throw std::invalid_argument("BowtieConfig: cap_fillet must lie in (0, 1/2]");
}

double BowtieConfig::cap_radius() const {
  // smallest vertex-centered cap whose fillets stay outside B_mu, keeping the
  // boundary exactly conical inside B_mu
  const double rf = fillet_radius();
  return rf + std::hypot(edge_length(), rf);
}

Vec2 BowtieConfig::vertex(int component) const {
  return {component == 1 ? -0.5 * epsilon : 0.5 * epsilon, 0.0};
}

Vec2 BowtieConfig::scaled_vertex(int component) const {
  return {component == 1 ? -0.5 : 0.5, 0.0};
}

// ---------------------------------------------------------------------------
// Panel geometry

Vec2 Panel::point_at(double tau) const {
  if (kind == Kind::line) {
    double s = 0.5 * (1.0 + tau);
    return a + (b - a) * s;
  }
  double ang = ang_a + 0.5 * (tau + 1.0) * (ang_b - ang_a);
  return center + Vec2{radius * std::cos(ang), radius * std::sin(ang)};
}

Vec2 Panel::tangent_at(double tau) const {
  if (kind == Kind::line) return (b - a).normalized();
  double ang = ang_a + 0.5 * (tau + 1.0) * (ang_b - ang_a);
  double sgn = (ang_b > ang_a) ? 1.0 : -1.0;
  return Vec2{-std::sin(ang), std::cos(ang)} * sgn;
}

double Panel::chord_factor(double t, double s) const {
  if (kind == Kind::line) return 0.5 * length;
  double u = 0.25 * (ang_b - ang_a) * (t - s);
  double sinc = (std::abs(u) < 1e-4) ? 1.0 - u * u / 6.0 : std::sin(u) / u;
  return 0.5 * length * std::abs(sinc);
}

double Panel::distance_to(const Vec2& p, double t0, double t1) const {
  if (kind == Kind::line) {
    Vec2 pa = point_at(t0), pb = point_at(t1);
    Vec2 d = pb - pa;
    double l2 = d.norm2();
    double t = (l2 > 0) ? std::clamp((p - pa).dot(d) / l2, 0.0, 1.0) : 0.0;
    return dist(p, pa + d * t);
  }
  double a0 = ang_a + 0.5 * (t0 + 1.0) * (ang_b - ang_a);
  double a1 = ang_a + 0.5 * (t1 + 1.0) * (ang_b - ang_a);
  if (a0 > a1) std::swap(a0, a1);
  Vec2 rel = p - center;
  double ang = std::atan2(rel.y, rel.x);
  // bring ang as close as possible into [a0, a1] modulo 2*pi
  double k = std::round((0.5 * (a0 + a1) - ang) / (2 * kPi));
  ang += 2 * kPi * k;
  if (ang >= a0 && ang <= a1) return std::abs(rel.norm() - radius);
  return std::min(dist(p, point_at(t0)), dist(p, point_at(t1)));
}

// ---------------------------------------------------------------------------
// Mesh construction

namespace {

Panel make_line(const Vec2& a, const Vec2& b, int comp) {
  Panel p;
  p.kind = Panel::Kind::line;
  p.a = a;
  p.b = b;
  p.component = comp;
  p.length = dist(a, b);
  return p;
}

Panel make_arc(const Vec2& center, double radius, double ang_a, double ang_b,
               int comp) {
  Panel p;
  p.kind = Panel::Kind::arc;
  p.center = center;
  p.radius = radius;
  p.ang_a = ang_a;
  p.ang_b = ang_b;
  p.component = comp;
  p.length = radius * std::abs(ang_b - ang_a);
  p.a = p.point_at(-1.0);
  p.b = p.point_at(1.0);
  return p;
}

void append_arc_split(std::vector<Panel>& out, const Vec2& c, double R,
                      double a0, double a1, int n, int comp) {
  for (int k = 0; k < n; ++k) {
    double u0 = a0 + (a1 - a0) * k / n;
    double u1 = a0 + (a1 - a0) * (k + 1) / n;
    out.push_back(make_arc(c, R, u0, u1, comp));
  }
}

// mirror a panel across the x1-axis (y -> -y); traversal direction flips
Panel mirror_x1(const Panel& p) {
  Panel m = p;
  m.a = {p.b.x, -p.b.y};
  m.b = {p.a.x, -p.a.y};
  if (p.kind == Panel::Kind::arc) {
    m.center = {p.center.x, -p.center.y};
    m.ang_a = -p.ang_b;
    m.ang_b = -p.ang_a;
  }
  return m;
}

// mirror a panel across the x2-axis (x -> -x); traversal direction flips
Panel mirror_x2(const Panel& p, int new_comp) {
  Panel m = p;
  m.component = new_comp;
  m.a = {-p.b.x, p.b.y};
  m.b = {-p.a.x, p.a.y};
  if (p.kind == Panel::Kind::arc) {
    m.center = {-p.center.x, p.center.y};
    m.ang_a = kPi - p.ang_b;
    m.ang_b = kPi - p.ang_a;
  }
  return m;
}

// Right inclusion traversed counterclockwise starting at V2: graded lower
// edge out of the vertex, lower fillet, cap, upper fillet, graded upper edge
// back into the vertex. Upper half is the exact mirror of the lower half.
std::vector<Panel> build_right_inclusion(const BowtieConfig& cfg,
                                         int panels_per_side, double grading,
                                         int comp) {
  const double A = cfg.half_aperture();
  const Vec2 V = cfg.vertex(2);
  const double t_edge = cfg.edge_length();
  const double rf = cfg.fillet_radius();
  const double Rc = cfg.cap_radius();

  const Vec2 dir_low{std::cos(A), -std::sin(A)};
  const Vec2 m_low = dir_low.perp();  // interior side of the lower edge

  const Vec2 Te = V + dir_low * t_edge;
  const Vec2 Cf = Te + m_low * rf;
  const Vec2 Tc = V + (Cf - V).normalized() * Rc;

  std::vector<Panel> lower;
  // graded edge panels, smallest at the vertex
  for (int k = 1; k <= panels_per_side; ++k) {
    double s0 = t_edge * std::pow(double(k - 1) / panels_per_side, grading);
    double s1 = t_edge * std::pow(double(k) / panels_per_side, grading);
    lower.push_back(make_line(V + dir_low * s0, V + dir_low * s1, comp));
  }
  const double target_len =
      t_edge * (1.0 - std::pow(double(panels_per_side - 1) / panels_per_side,
                               grading));
  // lower fillet, sweep CCW from the edge tangency to the cap tangency
  {
    double fa = std::atan2((Te - Cf).y, (Te - Cf).x);
    double fb = std::atan2((Tc - Cf).y, (Tc - Cf).x);
    while (fb <= fa) fb += 2 * kPi;
    double len = rf * (fb - fa);
    int nf = std::max(2, (int)std::lround(len / target_len));
    append_arc_split(lower, Cf, rf, fa, fb, nf, comp);
  }
  // lower half of the cap, up to the far pole on the x1-axis
  {
    double ca = std::atan2((Tc - V).y, (Tc - V).x);  // in (-A, 0)
    double len = Rc * (0.0 - ca);
    int nc = std::max(4, (int)std::lround(len / target_len));
    append_arc_split(lower, V, Rc, ca, 0.0, nc, comp);
  }

  std::vector<Panel> loop = lower;
  for (auto it = lower.rbegin(); it != lower.rend(); ++it)
    loop.push_back(mirror_x1(*it));
  return loop;
}

// Reverse a mirrored loop so it runs counterclockwise again.
std::vector<Panel> reverse_loop(std::vector<Panel> loop) {
  std::reverse(loop.begin(), loop.end());
  return loop;
}

void finalize_mesh(PanelMesh& mesh) {
  const GaussRule& gr = gauss_legendre(mesh.nodes_per_panel);
  mesh.component_length.assign(mesh.n_components, 0.0);

  // cumulative arc length per component; every loop starts at its corner
  std::vector<double> panel_start(mesh.panels.size(), 0.0);
  {
    std::vector<double> acc(mesh.n_components + 1, 0.0);
    for (size_t i = 0; i < mesh.panels.size(); ++i) {
      int c = mesh.panels[i].component;
      panel_start[i] = acc[c];
      acc[c] += mesh.panels[i].length;
    }
    for (int c = 1; c <= mesh.n_components; ++c)
      mesh.component_length[c - 1] = acc[c];
  }

  int node = 0;
  for (size_t i = 0; i < mesh.panels.size(); ++i) {
    Panel& p = mesh.panels[i];
    p.first_node = node;
    const double total = mesh.component_length[p.component - 1];
    double mid_s = panel_start[i] + 0.5 * p.length;
    p.arc_coord =
        mesh.has_corners ? std::min(mid_s, total - mid_s) : 0.5 * total;
    for (int m = 0; m < mesh.nodes_per_panel; ++m) {
      double tau = gr.nodes[m];
      mesh.node_pos.push_back(p.point_at(tau));
      mesh.node_normal.push_back(p.inward_normal_at(tau));
      mesh.node_weight.push_back(gr.weights[m] * 0.5 * p.length);
      double s = panel_start[i] + 0.5 * (tau + 1.0) * p.length;
      mesh.node_arc.push_back(mesh.has_corners ? std::min(s, total - s)
                                               : 0.5 * total);
      mesh.node_component.push_back(p.component);
      mesh.node_panel.push_back(static_cast<int>(i));
      mesh.node_tau.push_back(tau);
      ++node;
    }
  }
}

}  // namespace

PanelMesh build_bowtie_boundary(const BowtieConfig& config, int panels_per_side,
                                double grading, int nodes_per_panel) {
  config.validate();
  if (panels_per_side < 8)
    throw std::invalid_argument("build_bowtie_boundary: panels_per_side < 8");
  if (grading < 1.0)
    throw std::invalid_argument("build_bowtie_boundary: grading < 1");
  if (nodes_per_panel < 2)
    throw std::invalid_argument("build_bowtie_boundary: nodes_per_panel < 2");

  PanelMesh mesh;
  mesh.config = config;
  mesh.nodes_per_panel = nodes_per_panel;
  mesh.grading = grading;
  mesh.n_components = 2;
  mesh.has_corners = true;

  auto right = build_right_inclusion(config, panels_per_side, grading, 2);
  std::vector<Panel> left;
  left.reserve(right.size());
  for (const Panel& p : right) left.push_back(mirror_x2(p, 1));
  left = reverse_loop(std::move(left));

  mesh.panels = std::move(left);
  mesh.panels.insert(mesh.panels.end(), right.begin(), right.end());
  mesh.corners = {config.vertex(1), config.vertex(2)};
  mesh.corner_component = {1, 2};
  finalize_mesh(mesh);
  return mesh;
}

PanelMesh build_single_inclusion_boundary(const BowtieConfig& config,
                                          int panels_per_side, double grading,
                                          int nodes_per_panel) {
  config.validate();
  if (panels_per_side < 8)
    throw std::invalid_argument("build_single_inclusion_boundary: panels_per_side < 8");
  if (grading < 1.0)
    throw std::invalid_argument("build_single_inclusion_boundary: grading < 1");

  PanelMesh mesh;
  mesh.config = config;
  mesh.nodes_per_panel = nodes_per_panel;
  mesh.grading = grading;
  mesh.n_components = 1;
  mesh.has_corners = true;

  auto right = build_right_inclusion(config, panels_per_side, grading, 1);
  std::vector<Panel> left;
  left.reserve(right.size());
  for (const Panel& p : right) left.push_back(mirror_x2(p, 1));
  mesh.panels = reverse_loop(std::move(left));
  mesh.corners = {config.vertex(1)};
  mesh.corner_component = {1};
  finalize_mesh(mesh);
  return mesh;
}

PanelMesh build_disk_boundary(const Vec2& center, double radius, int n_panels,
                              int nodes_per_panel) {
  if (n_panels < 4)
    throw std::invalid_argument("build_disk_boundary: n_panels < 4");
  if (radius <= 0) throw std::invalid_argument("build_disk_boundary: radius <= 0");
  PanelMesh mesh;
  mesh.nodes_per_panel = nodes_per_panel;
  mesh.grading = 1.0;
  mesh.n_components = 1;
  mesh.has_corners = false;
  append_arc_split(mesh.panels, center, radius, 0.0, 2 * kPi, n_panels, 1);
  finalize_mesh(mesh);
  return mesh;
}

uint64_t PanelMesh::hash() const {
  uint64_t h = fnv1a_init();
  for (const Vec2& p : node_pos) {
    h = fnv1a(h, p.x);
    h = fnv1a(h, p.y);
  }
  for (double w : node_weight) h = fnv1a(h, w);
  return h;
}

double PanelMesh::min_panel_length() const {
  double m = panels.empty() ? 0.0 : panels.front().length;
  for (const Panel& p : panels) m = std::min(m, p.length);
  return m;
}

double PanelMesh::distance_to_boundary(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Panel& pan : panels) d = std::min(d, pan.distance_to(p));
  return d;
}

double PanelMesh::local_panel_length(const Vec2& p) const {
  double d = std::numeric_limits<double>::infinity();
  double len = 0.0;
  for (const Panel& pan : panels) {
    double dd = pan.distance_to(p);
    if (dd < d) {
      d = dd;
      len = pan.length;
    }
  }
  return len;
}

void PanelMesh::write_csv(const std::string& path) const {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "x,y,nx,ny,weight,component_id,arc_coordinate\n");
  for (int i = 0; i < total_nodes(); ++i) {
    std::fprintf(f, "%s,%s,%s,%s,%s,%d,%s\n", fmt_g17(node_pos[i].x).c_str(),
                 fmt_g17(node_pos[i].y).c_str(), fmt_g17(node_normal[i].x).c_str(),
                 fmt_g17(node_normal[i].y).c_str(), fmt_g17(node_weight[i]).c_str(),
                 node_component[i], fmt_g17(node_arc[i]).c_str());
  }
  std::fclose(f);
}

// ---------------------------------------------------------------------------
// Polar charts about the vertices (scaled frame)

PolarChart polar_about_vertex(const Vec2& y, int vertex_id,
                              const BowtieConfig& config) {
  if (vertex_id != 1 && vertex_id != 2)
    throw std::invalid_argument("polar_about_vertex: vertex_id must be 1 or 2");
  const double A = config.half_aperture();
  const Vec2 S = config.scaled_vertex(vertex_id);
  const Vec2 rel = y - S;
  const double r = rel.norm();
  double raw = std::atan2(rel.y, rel.x);
  // angle from the upper edge, sweeping the exterior
  double theta = (vertex_id == 2) ? raw - A : (kPi - A) - raw;
  theta = wrap_2pi(theta);
  const double span = 2 * kPi - config.alpha;
  if (theta > span) {
    if (theta - span < kEdgeTol)
      theta = span;
    else if (2 * kPi - theta < kEdgeTol)
      theta = 0.0;
    else
      throw std::invalid_argument("polar_about_vertex: point inside the cone");
  }
  return {vertex_id, r, theta};
}

int polar_orientation(int vertex_id) { return vertex_id == 2 ? +1 : -1; }

Vec2 polar_direction(double theta, int vertex_id, const BowtieConfig& config) {
  const double A = config.half_aperture();
  double raw = (vertex_id == 2) ? theta + A : (kPi - A) - theta;
  return {std::cos(raw), std::sin(raw)};
}

Vec2 polar_to_point(double r, double theta, int vertex_id,
                    const BowtieConfig& config) {
  return config.scaled_vertex(vertex_id) +
         polar_direction(theta, vertex_id, config) * r;
}

// ---------------------------------------------------------------------------
// Membership

bool inside_scaled_cone(const Vec2& y, int component,
                        const BowtieConfig& config) {
  const double tanA = std::tan(config.half_aperture());
  if (component == 2) return y.x > 0.5 && std::abs(y.y) < tanA * (y.x - 0.5);
  return y.x < -0.5 && std::abs(y.y) < -tanA * (y.x + 0.5);
}

namespace {

// exact test for the right inclusion; the left one mirrors x
bool inside_right_inclusion(const Vec2& x, const BowtieConfig& cfg) {
  const double A = cfg.half_aperture();
  const Vec2 V = cfg.vertex(2);
  const Vec2 z = x - V;
  const double tanA = std::tan(A);
  if (!(z.x > 0.0 && std::abs(z.y) < tanA * z.x)) return false;
  const double Rc = cfg.cap_radius();
  if (z.norm2() >= Rc * Rc) return false;
  // fillet cut at the upper junction; lower is the mirror image
  const double rf = cfg.fillet_radius();
  const double t_edge = cfg.edge_length();
  const Vec2 d_up{std::cos(A), std::sin(A)};
  const Vec2 m_up{std::sin(A), -std::cos(A)};  // interior side of the upper edge
  const Vec2 Te = V + d_up * t_edge;
  const Vec2 Cf = Te + m_up * rf;
  const Vec2 Tc = V + (Cf - V).normalized() * Rc;
  const Vec2 corner = V + d_up * Rc;  // unrounded edge/cap corner
  auto cut_by = [&](const Vec2& te, const Vec2& tc, const Vec2& cf,
                    const Vec2& pc) {
    // beyond the chord (corner side) and outside the fillet disk
    Vec2 chord = tc - te;
    double side_p = chord.cross(x - te);
    double side_c = chord.cross(pc - te);
    if (side_p * side_c <= 0.0) return false;
    return dist(x, cf) > rf;
  };
  if (cut_by(Te, Tc, Cf, corner)) return false;
  const Vec2 Te2{Te.x, -Te.y}, Tc2{Tc.x, -Tc.y}, Cf2{Cf.x, -Cf.y},
      corner2{corner.x, -corner.y};
  if (cut_by(Te2, Tc2, Cf2, corner2)) return false;
  return true;
}

}  // namespace

bool inside_inclusion(const Vec2& x, int component, const BowtieConfig& config) {
  if (component == 2) return inside_right_inclusion(x, config);
  return inside_right_inclusion({-x.x, x.y}, config);
}

bool inside_any_inclusion(const Vec2& x, const BowtieConfig& config) {
  return inside_inclusion(x, 1, config) || inside_inclusion(x, 2, config);
}

// ---------------------------------------------------------------------------
// Condition (A)

ConditionAResult check_condition_a(const BowtieConfig& config, double p) {
  config.validate();
  if (p == 0.0)
    throw std::invalid_argument("check_condition_a: p = 0 is excluded");
  if (std::abs(p) > 1.0)
    throw std::invalid_argument("check_condition_a: |p| must not exceed 1");

  ConditionAResult res;
  const double cy = (p * p - 0.25) / (2.0 * p);
  res.circle_center = {0.0, cy};
  res.circle_radius = std::hypot(cy, 0.5);

  const double A = config.half_aperture();
  struct Ray {
    int component;
    int edge;
    Vec2 origin;
    Vec2 dir;
  };
  const Ray rays[4] = {
      {1, +1, {-0.5, 0.0}, {-std::cos(A), std::sin(A)}},
      {1, -1, {-0.5, 0.0}, {-std::cos(A), -std::sin(A)}},
      {2, +1, {0.5, 0.0}, {std::cos(A), std::sin(A)}},
      {2, -1, {0.5, 0.0}, {std::cos(A), -std::sin(A)}},
  };
  // each ray origin lies on the circle, so the second intersection is
  // s = -2 d.(S - C); a hit means s > 0 beyond the vertex tolerance
  for (const Ray& ray : rays) {
    double s = -2.0 * ray.dir.dot(ray.origin - res.circle_center);
    if (s > kEdgeTol) {
      res.hits.push_back({ray.component, ray.edge, s, ray.origin + ray.dir * s});
    }
  }
  res.holds = res.hits.empty();
  return res;
}

bool scale_relation_check(const BowtieConfig& config, const Vec2& y) {
  const Vec2 x = y * config.epsilon;
  if (x.norm() >= config.mu)
    throw std::invalid_argument("scale_relation_check: |eps*Y| must be < mu");
  bool in_cone = inside_scaled_cone(y, 1, config) ||
                 inside_scaled_cone(y, 2, config);
  return in_cone == inside_any_inclusion(x, config);
}

}  // namespace bowtie
