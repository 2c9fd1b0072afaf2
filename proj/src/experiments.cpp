#include "bowtie/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bowtie/io.hpp"
#include "json.hpp"

namespace bowtie {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return out;
}
}  // namespace

std::string case_name(CaseId c) {
  switch (c) {
    case CaseId::case1: return "case1";
    case CaseId::case2: return "case2";
    case CaseId::case3: return "case3";
    case CaseId::single_inclusion: return "single";
    case CaseId::background: return "background";
  }
  return "?";
}

CaseId case_from_string(const std::string& s) {
  if (s == "case1" || s == "1") return CaseId::case1;
  if (s == "case2" || s == "2") return CaseId::case2;
  if (s == "case3" || s == "3") return CaseId::case3;
  if (s == "single" || s == "single_inclusion") return CaseId::single_inclusion;
  if (s == "background") return CaseId::background;
  throw std::invalid_argument("unknown case: " + s);
}

void SweepConfig::apply_defaults() {
  if (case_id == CaseId::case3 && p == 0.0) p = 0.5;
  if (case_id == CaseId::case2) p = 0.0;
  if (case_id == CaseId::single_inclusion) ray_vertex = 1;
  if (fit_window_lo <= 0.0 || fit_window_hi <= 0.0) {
    if (case_id == CaseId::case3) {
      fit_window_lo = 3e-5;
      fit_window_hi = 3e-4;
    } else {
      fit_window_lo = 1e-3;
      fit_window_hi = 6e-3;
    }
  }
  if (relative_radii.empty())
    relative_radii = log_spaced(fit_window_lo, 1e-1, 25);
  if (epsilons.empty())
    epsilons = {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
}

std::string SweepConfig::canonical_text() const {
  std::ostringstream ss;
  ss << "case=" << case_name(case_id) << "\n";
  ss << "alpha=" << fmt_g17(alpha) << "\n";
  ss << "p=" << fmt_g17(p) << "\n";
  ss << "epsilons=";
  for (size_t i = 0; i < epsilons.size(); ++i)
    ss << (i ? "," : "") << fmt_g17(epsilons[i]);
  ss << "\n";
  ss << "panels_per_side=" << mesh.panels_per_side << "\n";
  ss << "grading=" << fmt_g17(mesh.grading) << "\n";
  ss << "nodes_per_panel=" << mesh.nodes_per_panel << "\n";
  ss << "ray_vertex=" << ray_vertex << "\n";
  ss << "relative_radii=";
  for (size_t i = 0; i < relative_radii.size(); ++i)
    ss << (i ? "," : "") << fmt_g17(relative_radii[i]);
  ss << "\n";
  ss << "fit_window=" << fmt_g17(fit_window_lo) << "," << fmt_g17(fit_window_hi)
     << "\n";
  ss << "band_midrange=" << fmt_g17(band_midrange) << "\n";
  ss << "band_gap=" << fmt_g17(band_gap) << "\n";
  ss << "band_case2=" << fmt_g17(band_case2) << "\n";
  ss << "band_upper=" << fmt_g17(band_upper) << "\n";
  ss << "slope_tol_spatial=" << fmt_g17(slope_tol_spatial) << "\n";
  ss << "slope_tol_eps=" << fmt_g17(slope_tol_eps) << "\n";
  return ss.str();
}

int thread_budget() {
  int hw = (int)std::thread::hardware_concurrency();
  if (hw < 1) hw = 1;
  const char* env = std::getenv("BOWTIE_THREADS");
  if (!env) return hw;
  int v = std::atoi(env);
  if (v < 1) v = 1;
  return std::min(v, hw);
}

namespace {
template <class F>
void parallel_over(int n, F&& f) {
  int threads = std::min(thread_budget(), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
    });
  }
  for (auto& th : pool) th.join();
}
}  // namespace

// ---------------------------------------------------------------------------
// Fitting

ExponentFit fit_exponent(const std::vector<double>& abscissa,
                         const std::vector<double>& values) {
  if (abscissa.size() != values.size())
    throw std::invalid_argument("fit_exponent: size mismatch");
  const int n = (int)abscissa.size();
  if (n < 5) throw std::invalid_argument("fit_exponent: need at least 5 samples");
  double lo = abscissa[0], hi = abscissa[0];
  for (int i = 0; i < n; ++i) {
    if (!(abscissa[i] > 0) || !(values[i] > 0))
      throw std::invalid_argument("fit_exponent: nonpositive data");
    lo = std::min(lo, abscissa[i]);
    hi = std::max(hi, abscissa[i]);
  }
  if (lo == hi) throw std::invalid_argument("fit_exponent: degenerate abscissa");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    double x = std::log(abscissa[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  ExponentFit fit;
  fit.n_points = n;
  fit.window_lo = lo;
  fit.window_hi = hi;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_tot = syy - sy * sy / n;
  double ss_res = 0;
  for (int i = 0; i < n; ++i) {
    double y = std::log(values[i]);
    double yh = fit.intercept + fit.slope * std::log(abscissa[i]);
    ss_res += (y - yh) * (y - yh);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  fit.accepted = fit.r_squared >= 0.999;
  return fit;
}

// ---------------------------------------------------------------------------
// Profiles and sample sets

Vec2 bisector_direction(int vertex_id) {
  return vertex_id == 2 ? Vec2{-1.0, 0.0} : Vec2{1.0, 0.0};
}

std::vector<FieldSample> ray_profile(const SolveResult& result, int vertex_id,
                                     const Vec2& direction,
                                     const std::vector<double>& radii) {
  const BowtieConfig& cfg = result.spec.geometry;
  const Vec2 v = cfg.vertex(vertex_id);
  const Vec2 d = direction.normalized();
  std::vector<FieldSample> out;
  out.reserve(radii.size());
  for (double rel : radii) {
    Vec2 x = v + d * (rel * cfg.epsilon);
    bool inside = result.mesh->n_components == 2
                      ? inside_any_inclusion(x, cfg)
                      : inside_inclusion(x, 1, cfg);
    if (inside)
      throw std::invalid_argument("ray_profile: ray leaves the exterior region");
    out.push_back(sample_field(result, x));
  }
  return out;
}

std::vector<Vec2> upper_bound_sample_points(const BowtieConfig& cfg) {
  std::vector<Vec2> pts;
  const double eps = cfg.epsilon;
  const double radii[] = {0.5 * eps, eps,  2.0 * eps, 5.0 * eps,
                          0.1,       0.2,  0.5};
  for (double r : radii) {
    if (r >= 1.0) continue;
    for (int k = 0; k < 16; ++k) {
      double ang = 2.0 * kPi * (k + 0.5) / 16.0;
      Vec2 x{r * std::cos(ang), r * std::sin(ang)};
      if (inside_any_inclusion(x, cfg)) continue;
      if (std::min(dist(x, cfg.vertex(1)), dist(x, cfg.vertex(2))) < 0.12 * eps)
        continue;
      pts.push_back(x);
    }
  }
  return pts;
}

double upper_bound_ratio(const SolveResult& result,
                         const std::vector<Vec2>& samples) {
  const ProblemSpec& spec = result.spec;
  const double eps = spec.geometry.epsilon;
  const double logeps = std::abs(std::log(eps));
  const Vec2 e = spec.dipole.location();
  const bool horizontal = std::abs(spec.dipole.a.x) > 0.5;  // case 1
  double sup = 0.0;
  for (const Vec2& x : samples) {
    if (dist(x, e) < 0.05 * eps) continue;
    double g = eval_gradient(result, x).norm();
    double bound = 1.0 / (x - e).norm2();
    if (horizontal) bound += 1.0 / (eps * logeps * (x.norm() + eps));
    sup = std::max(sup, g / bound);
  }
  return sup;
}

// ---------------------------------------------------------------------------
// Sweeps

namespace {

ProblemSpec spec_for(const SweepConfig& cfg, double eps) {
  switch (cfg.case_id) {
    case CaseId::case1:
      return ProblemSpec::emitter_case(1, cfg.alpha, eps, cfg.p);
    case CaseId::case2:
      return ProblemSpec::emitter_case(2, cfg.alpha, eps, 0.0);
    case CaseId::case3:
      return ProblemSpec::emitter_case(3, cfg.alpha, eps, cfg.p);
    case CaseId::single_inclusion:
      return ProblemSpec::single(cfg.alpha, eps);
    case CaseId::background:
      return ProblemSpec::background(cfg.alpha, eps, {1.0, 0.0});
  }
  throw std::logic_error("unreachable");
}

MeshParams mesh_for(const SweepConfig& cfg, double eps) {
  MeshParams mp = cfg.mesh;
  if (mp.panels_per_side <= 0) mp.panels_per_side = default_panels_per_side(eps);
  if (mp.grading <= 0) mp.grading = default_grading(cfg.alpha);
  return mp;
}

std::vector<Vec2> midrange_points(const BowtieConfig& cfg) {
  std::vector<Vec2> pts;
  const double eps = cfg.epsilon;
  double lo = 10.0 * eps * std::abs(std::log(eps)) * 1.05;
  double hi = 0.28;
  if (lo >= hi) return pts;
  for (double r : log_spaced(lo, hi, 10)) {
    pts.push_back({0.0, r});
    pts.push_back({r / std::sqrt(2.0), r / std::sqrt(2.0)});
  }
  return pts;
}

}  // namespace

Report epsilon_sweep(const SweepConfig& config_in) {
  SweepConfig config = config_in;
  config.apply_defaults();
  const double beta = exponents(config.alpha).beta;

  Report rep;
  rep.config = config;
  {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  (unsigned long long)fnv1a(fnv1a_init(), config.canonical_text()));
    rep.config_hash = buf;
  }

  const int ne = (int)config.epsilons.size();
  rep.entries.assign(ne, {});
  std::vector<std::vector<FieldSample>> all_samples(ne);
  std::vector<std::string> errors(ne);

  parallel_over(ne, [&](int i) {
    const double eps = config.epsilons[i];
    EpsilonEntry& ent = rep.entries[i];
    ent.epsilon = eps;
    try {
      ProblemSpec spec = spec_for(config, eps);
      MeshParams mp = mesh_for(config, eps);
      ent.panels_per_side = mp.panels_per_side;
      SolveResult sol = solve_problem(spec, mp);
      ent.nodes = sol.mesh->total_nodes();
      ent.constants = sol.constants;
      ent.gap = sol.gap();

      const int vtx = config.case_id == CaseId::single_inclusion
                          ? 1
                          : config.ray_vertex;
      auto profile =
          ray_profile(sol, vtx, bisector_direction(vtx), config.relative_radii);
      all_samples[i] = profile;

      // spatial fit inside the window
      std::vector<double> rr, gg;
      const Vec2 v = spec.geometry.vertex(vtx);
      for (const FieldSample& s : profile) {
        double rel = dist(s.point, v) / eps;
        if (rel >= config.fit_window_lo * 0.999 &&
            rel <= config.fit_window_hi * 1.001) {
          rr.push_back(dist(s.point, v));
          gg.push_back(s.grad_u.norm());
        }
      }
      if (rr.size() >= 5) ent.spatial_fit = fit_exponent(rr, gg);

      // fixed relative point, singular factor removed
      {
        Vec2 x = v + bisector_direction(vtx) * (0.01 * eps);
        double g = eval_gradient(sol, x).norm();
        ent.corrected_point_value = g * std::pow(dist(x, v), 1.0 - beta);
      }

      if (config.case_id == CaseId::case2) {
        const Vec2 e = spec.dipole.location();
        double sup = 0.0;
        for (const FieldSample& s : profile)
          sup = std::max(sup, s.grad_u.norm() * (s.point - e).norm2());
        for (double r : {2.0 * eps, 0.1, 0.2}) {
          for (int k = 0; k < 16; ++k) {
            double ang = 2.0 * kPi * (k + 0.5) / 16.0;
            Vec2 x{r * std::cos(ang), r * std::sin(ang)};
            if (inside_any_inclusion(x, spec.geometry)) continue;
            if (std::min(dist(x, spec.geometry.vertex(1)),
                         dist(x, spec.geometry.vertex(2))) < 0.12 * eps)
              continue;
            sup = std::max(sup,
                           eval_gradient(sol, x).norm() * (x - e).norm2());
          }
        }
        ent.scaled_sup = sup;
      }

      if (config.case_id == CaseId::case1 || config.case_id == CaseId::case3) {
        ent.upper_ratio_sup =
            upper_bound_ratio(sol, upper_bound_sample_points(spec.geometry));
      }

      if (config.case_id == CaseId::case1) {
        double mn = 0, mx = 0;
        bool first = true;
        const double scale = eps * std::abs(std::log(eps));
        for (const Vec2& x : midrange_points(spec.geometry)) {
          double val = eval_gradient(sol, x).norm() * x.norm() * scale;
          if (first) {
            mn = mx = val;
            first = false;
          } else {
            mn = std::min(mn, val);
            mx = std::max(mx, val);
          }
        }
        ent.midrange_min = mn;
        ent.midrange_max = mx;
      }

      if (config.case_id == CaseId::case3 ||
          config.case_id == CaseId::single_inclusion) {
        CornerCoefficient cc = extract_corner_coefficient(
            sol, config.case_id == CaseId::case3 ? 2 : 1, 0.1 * eps);
        ent.a1 = cc.a1;
        ent.a1_stable = cc.stable;
      }
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  for (int i = 0; i < ne; ++i) {
    if (!errors[i].empty())
      rep.failures.push_back("epsilon " + fmt_g17(config.epsilons[i]) + ": " +
                             errors[i]);
    for (const FieldSample& s : all_samples[i]) rep.samples.push_back(s);
  }

  // cross-eps fit
  std::vector<double> es, vals;
  for (const EpsilonEntry& ent : rep.entries) {
    double v = config.case_id == CaseId::case2 ? ent.scaled_sup
                                               : ent.corrected_point_value;
    if (v > 0) {
      es.push_back(ent.epsilon);
      vals.push_back(v);
    }
  }
  if (es.size() >= 5) rep.cross_fit = fit_exponent(es, vals);

  // verdicts
  bool ok = rep.failures.empty();
  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      rep.failures.push_back(what);
    }
  };

  const bool wants_spatial = config.case_id == CaseId::case1 ||
                             config.case_id == CaseId::case3 ||
                             config.case_id == CaseId::single_inclusion;
  if (wants_spatial) {
    for (const EpsilonEntry& ent : rep.entries) {
      if (ent.spatial_fit.n_points == 0) continue;
      expect(std::abs(ent.spatial_fit.slope - (beta - 1.0)) <=
                 config.slope_tol_spatial,
             "spatial slope off target at epsilon " + fmt_g17(ent.epsilon) +
                 " (got " + fmt_g17(ent.spatial_fit.slope) + ")");
    }
    if (rep.cross_fit.n_points > 0)
      expect(std::abs(rep.cross_fit.slope - (-(1.0 + beta))) <=
                 config.slope_tol_eps,
             "cross-eps slope off target (got " + fmt_g17(rep.cross_fit.slope) +
                 ")");
  }
  if (config.case_id == CaseId::case2 && rep.cross_fit.n_points > 0) {
    expect(std::abs(rep.cross_fit.slope) <= config.slope_tol_eps,
           "case-2 sup slope not flat (got " + fmt_g17(rep.cross_fit.slope) +
               ")");
  }

  auto add_band = [&](const std::string& name, double mn, double mx,
                      double threshold) {
    Band b;
    b.name = name;
    b.min_value = mn;
    b.max_value = mx;
    b.threshold = threshold;
    b.pass = mn > 0 && mx / mn < threshold;
    rep.bands.push_back(b);
    expect(b.pass, "band '" + name + "' ratio " + fmt_g17(b.ratio()) +
                       " exceeds " + fmt_g17(threshold));
  };

  if (config.case_id == CaseId::case1) {
    double mn = 0, mx = 0;
    bool first = true;
    for (const EpsilonEntry& ent : rep.entries) {
      if (ent.midrange_max <= 0) continue;  // empty mid-range window
      if (first) {
        mn = ent.midrange_min;
        mx = ent.midrange_max;
        first = false;
      } else {
        mn = std::min(mn, ent.midrange_min);
        mx = std::max(mx, ent.midrange_max);
      }
    }
    if (!first) add_band("midrange_scaled_gradient", mn, mx, config.band_midrange);
  }
  if (config.case_id == CaseId::case2) {
    double mn = 1e300, mx = 0;
    for (const EpsilonEntry& ent : rep.entries) {
      mn = std::min(mn, ent.scaled_sup);
      mx = std::max(mx, ent.scaled_sup);
    }
    add_band("case2_scaled_sup", mn, mx, config.band_case2);
  }
  if (config.case_id == CaseId::case1 || config.case_id == CaseId::case3) {
    double mn = 1e300, mx = 0;
    for (const EpsilonEntry& ent : rep.entries) {
      if (ent.upper_ratio_sup <= 0) continue;
      mn = std::min(mn, ent.upper_ratio_sup);
      mx = std::max(mx, ent.upper_ratio_sup);
    }
    add_band("upper_bound_ratio", mn, mx, config.band_upper);
  }
  if (config.case_id == CaseId::case3) {
    double mn = 1e300, mx = 0;
    for (const EpsilonEntry& ent : rep.entries) {
      expect(ent.a1 < 0, "a1 not negative at epsilon " + fmt_g17(ent.epsilon));
      expect(ent.a1_stable,
             "a1 unstable under radius halving at epsilon " + fmt_g17(ent.epsilon));
      mn = std::min(mn, std::abs(ent.a1));
      mx = std::max(mx, std::abs(ent.a1));
    }
    add_band("a1_magnitude", mn, mx, 2.0);
  }
  if (config.case_id == CaseId::case3) {
    for (const EpsilonEntry& ent : rep.entries)
      expect(std::abs(ent.gap) < 1e-10,
             "case-3 potential gap nonzero at epsilon " + fmt_g17(ent.epsilon));
  }

  rep.pass = ok;
  return rep;
}

Report gap_measurements(const SweepConfig& config_in) {
  SweepConfig config = config_in;
  config.apply_defaults();

  Report rep;
  rep.config = config;
  {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  (unsigned long long)fnv1a(fnv1a_init(),
                                            "gaps\n" + config.canonical_text()));
    rep.config_hash = buf;
  }
  const int ne = (int)config.epsilons.size();
  rep.entries.assign(ne, {});
  std::vector<std::string> errors(ne);

  parallel_over(ne, [&](int i) {
    const double eps = config.epsilons[i];
    EpsilonEntry& ent = rep.entries[i];
    ent.epsilon = eps;
    try {
      MeshParams mp = mesh_for(config, eps);
      ent.panels_per_side = mp.panels_per_side;
      const double logeps = std::abs(std::log(eps));

      auto mesh = std::make_shared<PanelMesh>(build_bowtie_boundary(
          BowtieConfig{config.alpha, eps, 1.5, 0.1, true}, mp.panels_per_side,
          mp.grading > 0 ? mp.grading : default_grading(config.alpha),
          mp.nodes_per_panel));

      ProblemSpec qspec = ProblemSpec::capacity(config.alpha, eps);
      SolveResult q = solve(assemble(mesh, qspec, mp), mp);
      ent.q_gap_scaled = (q.constants[1] - q.constants[0]) * logeps;

      // near-vertex flux strength, nodes with arc distance in (0.01, 0.1)*eps
      double flux_min = 1e300;
      const PanelMesh& m = *mesh;
      for (int k = 0; k < m.total_nodes(); ++k) {
        if (m.node_arc[k] <= 0.01 * eps || m.node_arc[k] >= 0.1 * eps) continue;
        auto dn = normal_derivative_on_boundary(q, k);
        if (!dn) continue;
        double sgn = m.node_component[k] == 1 ? -1.0 : 1.0;
        flux_min = std::min(flux_min, sgn * (*dn) * eps * logeps);
      }
      ent.flux_scaled_min = flux_min;

      int emitter_case = config.case_id == CaseId::case3 ? 3 : 1;
      ProblemSpec uspec =
          ProblemSpec::emitter_case(emitter_case, config.alpha, eps, config.p);
      SolveResult u = solve(assemble(mesh, uspec, mp), mp);
      ent.constants = u.constants;
      ent.gap = u.gap();
      ent.u_gap_scaled = u.gap() * eps * logeps;
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });

  bool ok = true;
  for (int i = 0; i < ne; ++i)
    if (!errors[i].empty()) {
      ok = false;
      rep.failures.push_back("epsilon " + fmt_g17(config.epsilons[i]) + ": " +
                             errors[i]);
    }

  auto expect = [&](bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      rep.failures.push_back(what);
    }
  };
  auto add_band = [&](const std::string& name, double mn, double mx,
                      double threshold) {
    Band b;
    b.name = name;
    b.min_value = mn;
    b.max_value = mx;
    b.threshold = threshold;
    b.pass = mn > 0 && mx / mn < threshold;
    rep.bands.push_back(b);
    expect(b.pass, "band '" + name + "' ratio " + fmt_g17(b.ratio()) +
                       " exceeds " + fmt_g17(threshold));
  };

  double qmn = 1e300, qmx = 0, fmn = 1e300, fmx = 0;
  for (const EpsilonEntry& ent : rep.entries) {
    qmn = std::min(qmn, ent.q_gap_scaled);
    qmx = std::max(qmx, ent.q_gap_scaled);
    fmn = std::min(fmn, ent.flux_scaled_min);
    fmx = std::max(fmx, ent.flux_scaled_min);
  }
  add_band("q_gap_scaled", qmn, qmx, config.band_gap);
  add_band("near_vertex_flux_scaled", fmn, fmx, 3.0);

  if (config.case_id == CaseId::case3) {
    for (const EpsilonEntry& ent : rep.entries)
      expect(std::abs(ent.gap) < 1e-10,
             "case-3 gap nonzero at epsilon " + fmt_g17(ent.epsilon));
  } else {
    double umn = 1e300, umx = 0;
    for (const EpsilonEntry& ent : rep.entries) {
      umn = std::min(umn, ent.u_gap_scaled);
      umx = std::max(umx, ent.u_gap_scaled);
    }
    add_band("u_gap_scaled", umn, umx, config.band_gap);
  }

  rep.pass = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Report output

std::string Report::to_json() const {
  nlohmann::json j;
  j["config_text"] = config.canonical_text();
  j["config_hash"] = config_hash;
  j["case"] = case_name(config.case_id);
  nlohmann::json ents = nlohmann::json::array();
  for (const EpsilonEntry& e : entries) {
    nlohmann::json je;
    je["epsilon"] = e.epsilon;
    je["panels_per_side"] = e.panels_per_side;
    je["nodes"] = e.nodes;
    je["constants"] = e.constants;
    je["gap"] = e.gap;
    je["spatial_fit"] = {{"slope", e.spatial_fit.slope},
                         {"intercept", e.spatial_fit.intercept},
                         {"r_squared", e.spatial_fit.r_squared},
                         {"n_points", e.spatial_fit.n_points},
                         {"window", {e.spatial_fit.window_lo, e.spatial_fit.window_hi}}};
    je["corrected_point_value"] = e.corrected_point_value;
    je["scaled_sup"] = e.scaled_sup;
    je["upper_ratio_sup"] = e.upper_ratio_sup;
    je["q_gap_scaled"] = e.q_gap_scaled;
    je["u_gap_scaled"] = e.u_gap_scaled;
    je["flux_scaled_min"] = e.flux_scaled_min;
    je["midrange"] = {e.midrange_min, e.midrange_max};
    je["a1"] = e.a1;
    je["a1_stable"] = e.a1_stable;
    ents.push_back(je);
  }
  j["per_epsilon"] = ents;
  j["cross_fit"] = {{"slope", cross_fit.slope},
                    {"intercept", cross_fit.intercept},
                    {"r_squared", cross_fit.r_squared},
                    {"n_points", cross_fit.n_points}};
  nlohmann::json bj = nlohmann::json::array();
  for (const Band& b : bands)
    bj.push_back({{"name", b.name},
                  {"min", b.min_value},
                  {"max", b.max_value},
                  {"ratio", b.ratio()},
                  {"threshold", b.threshold},
                  {"pass", b.pass}});
  j["bands"] = bj;
  j["failures"] = failures;
  j["pass"] = pass;
  return j.dump(2);
}

void Report::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_text_file(dir + "/report.json", to_json());
  write_samples_csv(samples, dir + "/samples.csv");

  // cross fit data: eps vs corrected ordinate
  std::ostringstream cross;
  for (const EpsilonEntry& e : entries) {
    double v = config.case_id == CaseId::case2 ? e.scaled_sup
                                               : e.corrected_point_value;
    cross << fmt_g17(e.epsilon) << " " << fmt_g17(v) << "\n";
  }
  write_text_file(dir + "/cross.dat", cross.str());
  // per-epsilon profile .dat from the sample list (grouped in radii order)
  size_t idx = 0;
  size_t per = config.relative_radii.size();
  for (size_t i = 0; i < entries.size() && idx + per <= samples.size(); ++i) {
    std::ostringstream prof;
    for (size_t k = 0; k < per; ++k) {
      const FieldSample& s = samples[idx + k];
      double r = s.dist_v2 >= 0 ? std::min(s.dist_v1, s.dist_v2) : s.dist_v1;
      prof << fmt_g17(r) << " " << fmt_g17(s.grad_u.norm()) << "\n";
    }
    idx += per;
    char name[64];
    std::snprintf(name, sizeof name, "/profile_eps_%02zu.dat", i);
    write_text_file(dir + name, prof.str());
  }
}

}  // namespace bowtie
