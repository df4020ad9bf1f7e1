#pragma once

// Attractor identification for a single initial condition: transient
// integration, equilibrium-proximity tests, Poincare return-map detection of
// limit cycles on the predator nullcline, and single-shooting Newton
// refinement of detected cycles.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mht/equilibria.hpp"
#include "mht/integrate.hpp"

namespace mht {

enum class AttractorKind { InteriorPoint, InteriorCycle, Origin, PreyExtinctPoint, Undetermined };

inline const char* attractor_kind_name(AttractorKind k) {
  switch (k) {
    case AttractorKind::InteriorPoint:   return "interior_point";
    case AttractorKind::InteriorCycle:   return "interior_cycle";
    case AttractorKind::Origin:          return "origin";
    case AttractorKind::PreyExtinctPoint: return "prey_extinct_point";
    case AttractorKind::Undetermined:    return "undetermined";
  }
  return "?";
}

/// The fate of an initial condition. The anchor is reported in dimensional
/// units; for cycles it is a point on the Poincare section and `period` is
/// the dimensional return time.
struct AttractorLabel {
  AttractorKind kind = AttractorKind::Undetermined;
  State anchor;
  std::optional<double> period;
  std::string diagnostics;
};

struct DetectOptions {
  IntegrateOptions integ;
  double max_clock = 0.0;           // integration-frame time budget; 0 => frame default
  std::uint64_t max_steps = 300'000;
  double point_proximity = 1e-7;    // componentwise, relative to 1+|eq|
  double cycle_detect_tol = 1e-3;   // crossing-stream convergence before refinement
  bool refine_cycles = true;
};

struct CycleRefineOptions {
  IntegrateOptions integ;
  int max_iters = 30;
  double residual_tol = 1e-9;
  std::uint64_t max_steps_per_return = 400'000;
  double max_clock_per_return = 0.0;  // 0 => frame default
  bool reverse_time = false;          // refine against the reversed flow (unstable cycles)
  double period_hint = 0.0;
};

struct RefinedCycle {
  bool converged = false;
  State anchor;            // on the section, dimensional units
  double period = 0.0;     // dimensional return time
  double multiplier = 0.0; // forward-time Poincare map derivative at the fixed point
  double residual = 0.0;   // |R(xi) - xi| in the integration frame
  std::string note;
};

namespace detail {

/// Uniform access to a variant's integration frame: field, section, frames.
struct FlowContext {
  ModelVariant variant;
  DimensionalParams dp;
  NonDimParams np;       // valid when rescaled
  bool rescaled;
  double reverse = 1.0;  // -1 for reversed time

  static FlowContext make(ModelVariant v, const DimensionalParams& p, bool reverse_time) {
    FlowContext c;
    c.variant = v;
    c.dp = p;
    c.rescaled = has_rescaled_form(v);
    if (c.rescaled) c.np = nondimensionalize(p);
    c.reverse = reverse_time ? -1.0 : 1.0;
    return c;
  }

  void rhs(double, const StateVec<2>& y, StateVec<2>& dy) const {
    const double floor = (!rescaled && singular_at_zero_prey(variant)) ? 1e-300 : 0.0;
    const State x{std::max(y[0], floor), std::max(y[1], 0.0),
                  rescaled ? Frame::Rescaled : Frame::Dimensional};
    const auto d = rescaled ? vector_field_rescaled(variant, x, np) : vector_field(variant, x, dp);
    dy[0] = reverse * d[0];
    dy[1] = reverse * d[1];
  }

  /// Predator-nullcline section: zero when the predator sits exactly on its
  /// prey-dependent carrying capacity.
  double section(const StateVec<2>& y) const {
    if (rescaled) return y[1] - (y[0] + (variant == ModelVariant::MhtAlleeAltFood ? np.C : 0.0));
    return y[1] - (dp.n * y[0] + (has_alt_food(variant) ? dp.c : 0.0));
  }

  /// Predator coordinate of the section at a given prey coordinate.
  double section_predator(double prey) const {
    if (rescaled) return prey + (variant == ModelVariant::MhtAlleeAltFood ? np.C : 0.0);
    return dp.n * prey + (has_alt_food(variant) ? dp.c : 0.0);
  }

  State to_dim(const StateVec<2>& y) const {
    if (!rescaled) return State{y[0], y[1], Frame::Dimensional};
    return State{y[0] * dp.K, y[1] * dp.n * dp.K, Frame::Dimensional};
  }

  State ic_to_frame(const State& ic) const {
    return rescaled ? to_rescaled(ic, dp) : to_dimensional(ic, dp);
  }

  double default_clock() const { return rescaled ? 5e12 : 4000.0; }

  /// Dimensional time elapsed along one rescaled lap from `start`, by
  /// integrating the clock factor over the orbit (used for cycle periods).
  double dimensional_lap_time(const StateVec<2>& start, double tau_lap, double rtol) const {
    if (!rescaled) return tau_lap;
    auto rhs3 = [this](double, const StateVec<3>& y, StateVec<3>& dy) {
      const State x{std::max(y[0], 0.0), std::max(y[1], 0.0), Frame::Rescaled};
      const auto d = vector_field_rescaled(variant, x, np);
      dy[0] = reverse * d[0];
      dy[1] = reverse * d[1];
      dy[2] = rescaled_time_factor(variant, x.prey, np, dp.r, dp.K);
    };
    Dopri5<3, decltype(rhs3)> st(rhs3, rtol, 1e-14);
    st.clamp_first_quadrant(2);
    st.reset(0.0, {start[0], start[1], 0.0});
    while (st.time() < tau_lap) {
      st.limit_step_to(tau_lap);
      if (!st.step()) break;
    }
    return st.state()[2];
  }
};

struct SectionCrossing {
  double time;
  double prey;
};

/// Detect and refine a rising section crossing within the last accepted step.
template <typename Stepper>
inline std::optional<SectionCrossing> rising_crossing(const FlowContext& ctx,
                                                      const Stepper& st) {
  const double g0 = ctx.section(st.prev_state());
  const double g1 = ctx.section(st.state());
  if (!(g0 < 0 && g1 >= 0)) return std::nullopt;
  double lo = 0, hi = 1;
  StateVec<2> w;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    st.dense(mid, w);
    if (ctx.section(w) < 0)
      lo = mid;
    else
      hi = mid;
  }
  st.dense(hi, w);
  return SectionCrossing{st.prev_time() + hi * st.last_step(), w[0]};
}

}  // namespace detail

/// Single-shooting refinement of a periodic orbit from a section seed.
/// The unknown is the prey coordinate on the predator-nullcline section; the
/// residual is the first-return displacement R(xi) - xi. A seed that belongs
/// to a point attractor collapses onto the equilibrium's section coordinate
/// and is reported unconverged rather than fabricated into a cycle.
inline RefinedCycle refine_cycle(ModelVariant variant, const DimensionalParams& p, State seed,
                                 const CycleRefineOptions& opt = {}) {
  const auto ctx = detail::FlowContext::make(variant, p, opt.reverse_time);
  RefinedCycle result;

  const State seed_frame = ctx.ic_to_frame(seed);
  const double clock_cap = opt.max_clock_per_return > 0
                               ? opt.max_clock_per_return
                               : (opt.period_hint > 0 ? 50.0 * opt.period_hint
                                                      : ctx.default_clock());

  // first-return map on the section
  auto return_map = [&](double xi, bool& ok, double& rt) {
    ok = false;
    rt = 0;
    auto rhs = [&ctx](double t, const StateVec<2>& y, StateVec<2>& dy) { ctx.rhs(t, y, dy); };
    Dopri5<2, decltype(rhs)> st(rhs, opt.integ.rel_tol, opt.integ.abs_tol);
    st.clamp_first_quadrant(2);
    st.reset(0.0, {xi, ctx.section_predator(xi)});
    std::uint64_t steps = 0;
    bool armed = false;  // require leaving the section neighbourhood first
    while (steps < opt.max_steps_per_return && st.time() < clock_cap) {
      if (!st.step()) return 0.0;
      ++steps;
      const double g = ctx.section(st.state());
      if (!armed) {
        if (g < -1e-9 * (1.0 + std::abs(xi))) armed = true;
        continue;
      }
      if (const auto cr = detail::rising_crossing(ctx, st)) {
        ok = true;
        rt = cr->time;
        return cr->prey;
      }
    }
    return 0.0;
  };

  double xi = seed_frame.prey;
  bool ok0 = false;
  double t0 = 0;
  double Rxi = return_map(xi, ok0, t0);
  if (!ok0) {
    result.note = "no return crossing from the seed";
    return result;
  }
  double F = Rxi - xi;

  // secant iteration on F(xi) = R(xi) - xi
  double xi_prev = xi, F_prev = F;
  double xi_cur = Rxi;  // a natural second iterate: one map application
  double period = t0;
  for (int it = 0; it < opt.max_iters; ++it) {
    if (std::abs(F) < opt.residual_tol * (1.0 + std::abs(xi_prev))) break;
    bool ok = false;
    double rt = 0;
    const double Rcur = return_map(xi_cur, ok, rt);
    if (!ok) {
      result.note = "return map lost the crossing during refinement";
      return result;
    }
    const double Fcur = Rcur - xi_cur;
    period = rt;
    const double denom = Fcur - F_prev;
    double xi_next;
    if (std::abs(denom) > 1e-300) {
      xi_next = xi_cur - Fcur * (xi_cur - xi_prev) / denom;
    } else {
      xi_next = Rcur;
    }
    // keep the iterate in the admissible prey range
    const double hi_cap = ctx.rescaled ? 2.0 : 2.0 * p.K;
    if (!(xi_next > 0) || !(xi_next < hi_cap)) xi_next = 0.5 * (xi_cur + Rcur);
    xi_prev = xi_cur;
    F_prev = Fcur;
    xi_cur = xi_next;
    F = Fcur;
  }

  // final residual at the converged abscissa
  bool okf = false;
  double tf = 0;
  const double Rf = return_map(xi_cur, okf, tf);
  if (!okf) {
    result.note = "return map lost the crossing at the solution";
    return result;
  }
  result.residual = std::abs(Rf - xi_cur);
  period = tf;

  // a fixed point that coincides with an interior equilibrium is a spiral
  // target, not a cycle
  const auto census = equilibrium_census(variant, p);
  for (const auto& eq : census.interior) {
    if (std::abs(xi_cur - eq.location.prey) < 1e-5 * (1.0 + std::abs(eq.location.prey))) {
      result.note = "seed collapses onto an equilibrium; no cycle";
      return result;
    }
  }

  result.converged = result.residual < opt.residual_tol * (1.0 + std::abs(xi_cur));
  if (!result.converged && result.note.empty())
    result.note = "refinement did not reach the residual tolerance; coarse cycle returned";

  // forward-time multiplier by a central difference of the forward map
  {
    const double delta = 1e-6 * (1.0 + std::abs(xi_cur));
    const auto fwd_ctx = detail::FlowContext::make(variant, p, false);
    auto fwd_map = [&](double x, bool& ok, double& rt) {
      ok = false;
      rt = 0;
      auto rhs = [&fwd_ctx](double t, const StateVec<2>& y, StateVec<2>& dy) {
        fwd_ctx.rhs(t, y, dy);
      };
      Dopri5<2, decltype(rhs)> st(rhs, opt.integ.rel_tol, opt.integ.abs_tol);
      st.clamp_first_quadrant(2);
      st.reset(0.0, {x, fwd_ctx.section_predator(x)});
      std::uint64_t steps = 0;
      bool armed = false;
      while (steps < opt.max_steps_per_return && st.time() < clock_cap) {
        if (!st.step()) return 0.0;
        ++steps;
        if (!armed) {
          if (fwd_ctx.section(st.state()) < -1e-9 * (1.0 + std::abs(x))) armed = true;
          continue;
        }
        if (const auto cr = detail::rising_crossing(fwd_ctx, st)) {
          ok = true;
          rt = cr->time;
          return cr->prey;
        }
      }
      return 0.0;
    };
    bool okp = false, okm = false;
    double tp, tm;
    const double rp = fwd_map(xi_cur + delta, okp, tp);
    const double rm = fwd_map(xi_cur - delta, okm, tm);
    if (okp && okm) result.multiplier = (rp - rm) / (2.0 * delta);
  }

  // report in dimensional units
  StateVec<2> anchor_frame{xi_cur, ctx.section_predator(xi_cur)};
  result.anchor = ctx.to_dim(anchor_frame);
  result.period = ctx.dimensional_lap_time(anchor_frame, period, opt.integ.rel_tol);
  return result;
}

/// Identify the attractor reached from an initial condition. Tests, in
/// order: absorption at the quadrant boundary (with the axis dynamics
/// resolved analytically), proximity to a classified stable equilibrium, and
/// Poincare return-map convergence; otherwise undetermined. Labels and
/// anchors are bitwise-reproducible for identical inputs.
inline AttractorLabel detect_attractor(ModelVariant variant, const DimensionalParams& p,
                                       State ic, const DetectOptions& opt = {}) {
  const auto ctx = detail::FlowContext::make(variant, p, false);
  AttractorLabel out;

  const auto census = equilibrium_census(variant, p);

  // stable targets in the integration frame: {prey coord, predator coord}
  struct Target {
    double prey, predator;
    AttractorKind kind;
  };
  std::vector<Target> targets;
  for (const auto& eq : census.interior)
    if (eq.numeric_class == NumericClass::Attractor)
      targets.push_back({eq.location.prey, eq.location.predator, AttractorKind::InteriorPoint});
  if (has_alt_food(variant)) {
    if (ctx.rescaled)
      targets.push_back({0.0, ctx.np.C, AttractorKind::PreyExtinctPoint});
    else
      targets.push_back({0.0, p.c, AttractorKind::PreyExtinctPoint});
  }

  const State x0 = ctx.ic_to_frame(ic);
  if (x0.prey < 0 || x0.predator < 0) {
    out.diagnostics = "initial condition outside the first quadrant";
    return out;
  }

  auto rhs = [&ctx](double t, const StateVec<2>& y, StateVec<2>& dy) { ctx.rhs(t, y, dy); };
  Dopri5<2, decltype(rhs)> st(rhs, opt.integ.rel_tol, opt.integ.abs_tol);
  st.clamp_first_quadrant(2);
  st.reset(0.0, {x0.prey, x0.predator});

  const double clock_cap = opt.max_clock > 0 ? opt.max_clock : ctx.default_clock();
  const double prey_thr = opt.integ.prey_extinct_threshold;
  const double pred_thr = opt.integ.predator_extinct_threshold;

  std::vector<detail::SectionCrossing> crossings;
  std::vector<double> rejected_anchors;  // refined-but-unstable cycle abscissae

  auto finish_point = [&](const Target& tgt) {
    out.kind = tgt.kind;
    out.anchor = ctx.to_dim({tgt.prey, tgt.predator});
    return out;
  };

  std::uint64_t steps = 0;
  while (steps < opt.max_steps && st.time() < clock_cap) {
    if (!st.step()) {
      out.diagnostics = "step-size underflow during detection";
      return out;
    }
    ++steps;
    const auto& y = st.state();

    // --- boundary absorption: resolve the axis dynamics analytically
    if (y[0] <= prey_thr) {
      if (ctx.rescaled && variant == ModelVariant::MhtAllee) {
        out.kind = AttractorKind::Origin;  // on u = 0 the predator decays to 0
        out.anchor = State{0, 0, Frame::Dimensional};
        return out;
      }
      if (has_alt_food(variant)) {
        out.kind = AttractorKind::PreyExtinctPoint;  // on N = 0 the predator settles at c
        out.anchor = ctx.to_dim({0.0, ctx.rescaled ? ctx.np.C : p.c});
        return out;
      }
      out.diagnostics = "prey extinction threshold on a singular axis";
      out.anchor = ctx.to_dim(y);
      return out;
    }
    if (y[1] <= pred_thr) {
      if (uses_allee(variant) && p.m > 0 && ctx.to_dim(y).prey < p.m) {
        out.kind = AttractorKind::Origin;  // below the threshold the prey collapses too
        out.anchor = State{0, 0, Frame::Dimensional};
        return out;
      }
      out.diagnostics = "predator extinction threshold; prey persists on the axis";
      out.anchor = ctx.to_dim(y);
      return out;
    }

    // --- proximity to a stable point
    for (const auto& tgt : targets) {
      const double tol_p = opt.point_proximity * (1.0 + std::abs(tgt.prey));
      const double tol_q = opt.point_proximity * (1.0 + std::abs(tgt.predator));
      if (std::abs(y[0] - tgt.prey) < tol_p && std::abs(y[1] - tgt.predator) < tol_q)
        return finish_point(tgt);
    }

    // --- Poincare stream
    if (const auto cr = detail::rising_crossing(ctx, st)) {
      crossings.push_back(*cr);
      const std::size_t k = crossings.size();
      // transient discard: require ten-ish observed returns before trusting
      // the stream, then two consecutive near-equal abscissae
      if (k >= 11) {
        const double xi2 = crossings[k - 1].prey, xi1 = crossings[k - 2].prey,
                     xi0 = crossings[k - 3].prey;
        const double tol = opt.cycle_detect_tol * (1.0 + std::abs(xi2));
        if (std::abs(xi2 - xi1) < tol && std::abs(xi1 - xi0) < tol) {
          // a slow focus spiral also produces a near-stationary stream;
          // Aitken-extrapolate the geometric tail to find its limit and
          // suppress candidates that head into an equilibrium
          const double d1 = xi1 - xi0, d2 = xi2 - xi1;
          double limit = xi2;
          if (std::abs(d2 - d1) > 1e-300) limit = xi2 - d2 * d2 / (d2 - d1);
          bool spiral = false;
          for (const auto& eq : census.interior)
            if (std::abs(limit - eq.location.prey) < 1e-2 * (1.0 + std::abs(eq.location.prey)))
              spiral = true;
          bool near_rejected = false;
          for (double r : rejected_anchors)
            if (std::abs(xi2 - r) < 1e-2 * (1.0 + std::abs(xi2))) near_rejected = true;

          if (!spiral && !near_rejected) {
            const double period_est = crossings[k - 1].time - crossings[k - 2].time;
            if (!opt.refine_cycles) {
              out.kind = AttractorKind::InteriorCycle;
              StateVec<2> a{xi2, ctx.section_predator(xi2)};
              out.anchor = ctx.to_dim(a);
              out.period = ctx.dimensional_lap_time(a, period_est, opt.integ.rel_tol);
              return out;
            }
            CycleRefineOptions ro;
            ro.integ = opt.integ;
            ro.integ.rel_tol = std::min(opt.integ.rel_tol, 1e-10);
            ro.integ.abs_tol = std::min(opt.integ.abs_tol, 1e-13);
            ro.period_hint = period_est;
            const State seed = ctx.to_dim({xi2, ctx.section_predator(xi2)});
            const auto rc = refine_cycle(variant, p, seed, ro);
            if (rc.converged && std::abs(rc.multiplier) < 1.0) {
              out.kind = AttractorKind::InteriorCycle;
              out.anchor = rc.anchor;
              out.period = rc.period;
              return out;
            }
            if (rc.converged) {
              // a genuine but unstable cycle is not this orbit's attractor:
              // remember it and keep marching
              const State af = ctx.ic_to_frame(rc.anchor);
              rejected_anchors.push_back(af.prey);
            } else if (rc.note.find("equilibrium") == std::string::npos &&
                       std::abs(xi2 - xi1) < 1e-6 * (1.0 + std::abs(xi2))) {
              // stream is genuinely stationary but the map refinement failed:
              // report the coarse cycle with a quality flag
              out.kind = AttractorKind::InteriorCycle;
              out.anchor = ctx.to_dim({xi2, ctx.section_predator(xi2)});
              out.period = ctx.dimensional_lap_time({xi2, ctx.section_predator(xi2)}, period_est,
                                                    opt.integ.rel_tol);
              out.diagnostics = "coarse cycle: " + rc.note;
              return out;
            }
          }
        }
      }
    }
  }

  out.diagnostics = steps >= opt.max_steps ? "step budget exhausted" : "time budget exhausted";
  out.anchor = ctx.to_dim(st.state());
  return out;
}

}  // namespace mht
