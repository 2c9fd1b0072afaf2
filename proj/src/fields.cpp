#include "bowtie/fields.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "bowtie/gauss.hpp"
#include "bowtie/io.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string regime_name(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::near_vertex: return "near_vertex";
    case RegimeTag::mid_range: return "mid_range";
    case RegimeTag::far: return "far";
    case RegimeTag::transition: return "transition";
  }
  return "?";
}

RegimeTag classify_regime(const Vec2& x, const BowtieConfig& config) {
  const double eps = config.epsilon;
  double dv = std::min(dist(x, config.vertex(1)), dist(x, config.vertex(2)));
  if (dv <= 0.1 * eps) return RegimeTag::near_vertex;
  double r = x.norm();
  if (r >= 0.3) return RegimeTag::far;
  if (r > 10.0 * eps * std::abs(std::log(eps))) return RegimeTag::mid_range;
  return RegimeTag::transition;
}

static void check_eval_point(const SolveResult& res, const Vec2& x) {
  const ProblemSpec& spec = res.spec;
  if (res.mesh->has_corners) {
    if (res.mesh->n_components == 2) {
      if (inside_any_inclusion(x, spec.geometry))
        throw std::invalid_argument("eval: point inside an inclusion");
    } else if (inside_inclusion(x, 1, spec.geometry)) {
      throw std::invalid_argument("eval: point inside the inclusion");
    }
  }
  if (spec.has_particular() && spec.kind != ProblemKind::background_linear) {
    if (dist(x, spec.dipole.location()) < 1e-12)
      throw std::invalid_argument("eval: point too close to the emitter");
  }
}

double eval_potential(const SolveResult& res, const Vec2& x) {
  check_eval_point(res, x);
  double u = layer_potential(*res.mesh, res.density, x);
  u += res.spec.u_particular(x);
  if (res.spec.kind == ProblemKind::auxiliary_v) u += res.c_infinity;
  return u;
}

Vec2 eval_gradient(const SolveResult& res, const Vec2& x) {
  check_eval_point(res, x);
  Vec2 g = layer_gradient(*res.mesh, res.density, x);
  return g + res.spec.grad_u_particular(x);
}

FieldSample sample_field(const SolveResult& res, const Vec2& x) {
  FieldSample s;
  s.point = x;
  s.u = eval_potential(res, x);
  s.grad_u = eval_gradient(res, x);
  const BowtieConfig& cfg = res.spec.geometry;
  s.dist_v1 = dist(x, cfg.vertex(1));
  s.dist_v2 = res.mesh->n_components == 2 ? dist(x, cfg.vertex(2)) : -1.0;
  s.dist_emitter = res.spec.has_particular() &&
                           res.spec.kind != ProblemKind::background_linear
                       ? dist(x, res.spec.dipole.location())
                       : -1.0;
  s.regime = classify_regime(x, cfg);
  return s;
}

void write_samples_csv(const std::vector<FieldSample>& samples,
                       const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "x,y,u,ux,uy,dist_V1,dist_V2,dist_emitter,regime_tag\n");
  for (const FieldSample& s : samples) {
    std::fprintf(f, "%s,%s,%s,%s,%s,%s,%s,%s,%s\n", fmt_g17(s.point.x).c_str(),
                 fmt_g17(s.point.y).c_str(), fmt_g17(s.u).c_str(),
                 fmt_g17(s.grad_u.x).c_str(), fmt_g17(s.grad_u.y).c_str(),
                 fmt_g17(s.dist_v1).c_str(), fmt_g17(s.dist_v2).c_str(),
                 fmt_g17(s.dist_emitter).c_str(),
                 regime_name(s.regime).c_str());
  }
  std::fclose(f);
}

std::optional<double> normal_derivative_on_boundary(const SolveResult& res,
                                                    int node_index) {
  const PanelMesh& m = *res.mesh;
  if (node_index < 0 || node_index >= m.total_nodes())
    throw std::out_of_range("normal_derivative_on_boundary: bad node index");
  if (m.has_corners &&
      m.node_arc[node_index] < 0.005 * res.spec.geometry.epsilon)
    return std::nullopt;
  return boundary_normal_derivative(res, node_index);
}

// ---------------------------------------------------------------------------
// Corner Fourier coefficient

namespace {

double arc_mode_integral(const std::function<double(const Vec2&)>& trace,
                         const BowtieConfig& config, int vertex_id,
                         double r_scaled, double scale_epsilon, int mode) {
  // int_0^{2 pi - alpha} trace(Y(r, theta)) sin(mode * beta * theta) dtheta,
  // normalized against r^{mode*beta}; 64-point Gauss
  const double span = 2.0 * kPi - config.alpha;
  const double beta = exponents(config.alpha).beta;
  const GaussRule& gr = gauss_legendre(64);
  const Vec2 v_phys = config.vertex(vertex_id);
  const Vec2 s_scaled = config.scaled_vertex(vertex_id);
  double acc = 0.0;
  for (size_t k = 0; k < gr.nodes.size(); ++k) {
    double theta = 0.5 * (gr.nodes[k] + 1.0) * span;
    double w = 0.5 * span * gr.weights[k];
    Vec2 y = polar_to_point(r_scaled, theta, vertex_id, config);
    Vec2 x = v_phys + (y - s_scaled) * scale_epsilon;
    acc += w * trace(x) * std::sin(mode * beta * theta);
  }
  return 2.0 * acc / (span * std::pow(r_scaled, mode * beta));
}

}  // namespace

CornerCoefficient extract_corner_coefficient_fn(
    const std::function<double(const Vec2&)>& trace, const BowtieConfig& config,
    int vertex_id, double arc_radius, double scale_epsilon) {
  if (!(arc_radius > 0))
    throw std::invalid_argument("extract_corner_coefficient: arc_radius <= 0");
  const double r_scaled = arc_radius / scale_epsilon;
  auto scaled_trace = [&](const Vec2& x) { return scale_epsilon * trace(x); };
  CornerCoefficient cc;
  cc.vertex_id = vertex_id;
  cc.arc_radius = arc_radius;
  cc.a1 = arc_mode_integral(scaled_trace, config, vertex_id, r_scaled,
                            scale_epsilon, 1);
  double a2 = arc_mode_integral(scaled_trace, config, vertex_id, r_scaled,
                                scale_epsilon, 2);
  const double beta = exponents(config.alpha).beta;
  cc.truncation_estimate =
      std::abs(a2) * std::pow(r_scaled, beta) / std::max(std::abs(cc.a1), 1e-300);
  double a1_half = arc_mode_integral(scaled_trace, config, vertex_id,
                                     0.5 * r_scaled, scale_epsilon, 1);
  cc.halving_change =
      std::abs(a1_half - cc.a1) / std::max(std::abs(cc.a1), 1e-300);
  cc.stable = cc.halving_change < 0.05;
  return cc;
}

CornerCoefficient extract_corner_coefficient(const SolveResult& res,
                                             int vertex_id, double arc_radius) {
  const BowtieConfig& cfg = res.spec.geometry;
  if (arc_radius > 0.2 * cfg.epsilon)
    throw std::invalid_argument(
        "extract_corner_coefficient: arc_radius must be <= 0.2*epsilon");
  if (vertex_id < 1 || vertex_id > res.mesh->n_components)
    throw std::invalid_argument("extract_corner_coefficient: bad vertex id");
  double c_ref = 0.0;
  if (!res.constants.empty())
    c_ref = res.constants[std::min<size_t>(vertex_id, res.constants.size()) - 1];
  auto trace = [&](const Vec2& x) { return eval_potential(res, x) - c_ref; };
  CornerCoefficient cc = extract_corner_coefficient_fn(
      trace, cfg, vertex_id, arc_radius, cfg.epsilon);
  if (!cc.stable)
    std::fprintf(stderr,
                 "extract_corner_coefficient: warning, halving change %.3g\n",
                 cc.halving_change);
  return cc;
}

// ---------------------------------------------------------------------------
// Decomposition identity

double sigma_consistency(const SolveResult& u_res, const SolveResult& q_res,
                         const SolveResult& v_res,
                         const std::vector<Vec2>& samples) {
  uint64_t h = u_res.mesh->hash();
  if (q_res.mesh->hash() != h || v_res.mesh->hash() != h)
    throw std::invalid_argument("sigma_consistency: results on different meshes");
  if (u_res.spec.kind != ProblemKind::emitter ||
      q_res.spec.kind != ProblemKind::capacity_q ||
      v_res.spec.kind != ProblemKind::auxiliary_v)
    throw std::invalid_argument("sigma_consistency: wrong problem kinds");

  const double gap_u = u_res.constants[1] - u_res.constants[0];
  const double gap_q = q_res.constants[1] - q_res.constants[0];
  const double ratio = gap_u / gap_q;

  // grad sigma - grad(a.grad N) + grad v reduces to layer fields only; the
  // particular parts cancel exactly, so no large-value subtraction occurs
  double worst = 0.0;
  const PanelMesh& m = *u_res.mesh;
  for (const Vec2& x : samples) {
    Vec2 g = layer_gradient(m, u_res.density, x) -
             layer_gradient(m, q_res.density, x) * ratio +
             layer_gradient(m, v_res.density, x);
    worst = std::max(worst, g.norm());
  }
  return worst;
}

}  // namespace bowtie
