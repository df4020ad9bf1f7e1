#pragma once

// Bifurcation structure in the (q, s) parameter plane: natural-parameter
// continuation of the Hopf locus (trace = 0 with positive determinant),
// fold/collapse thresholds where interior equilibria merge and disappear,
// and the region classifier behind the parameter-plane maps.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mht/attractor.hpp"
#include "mht/equilibria.hpp"
#include "mht/parallel.hpp"

namespace mht {

/// One point on a Hopf locus. u_star is the equilibrium prey coordinate in
/// the rescaled frame (N/K for the dimensionally-analysed variants), det_at
/// the Jacobian determinant there (must be positive for a genuine Hopf
/// candidate) and residual the absolute Jacobian trace after the solve.
struct HopfPoint {
  double q = 0, s = 0;
  double u_star = 0;
  double det_at = 0;
  double residual = 0;
};

struct HopfOptions {
  double q_step = 0.0;  // 0 => (q_hi - q_lo)/200
  int max_points = 4000;
  int max_halvings = 14;
  int newton_iters = 30;
  double newton_tol = 1e-13;
};

struct CollapseThreshold {
  ModelVariant variant = ModelVariant::Mht;
  bool found = false;
  double q_star = 0;
  double delta_at = 0;      // fold indicator at q_star (scaled tolerance applies)
  std::string label;        // q_tilde_1, q_tilde_2, q_2, q_hat_1
  double u_fold = 0;        // double-root location at q_star (when applicable)
  double E = 0;             // (1 - A + M + G)/2 at q_star (alt-food route)
  double C = 0;             // rescaled alternative-food offset (for (E, E+C))
  std::string note;
};

enum class RegionTag {
  HatchedGreen,
  SolidGreen,
  Blue,
  Grey,
  SolidRed,
  HatchedRed,
  SolidBrown,
  HatchedBrown,
};

inline const char* region_tag_name(RegionTag t) {
  switch (t) {
    case RegionTag::HatchedGreen: return "hatched_green";
    case RegionTag::SolidGreen:   return "solid_green";
    case RegionTag::Blue:         return "blue";
    case RegionTag::Grey:         return "grey";
    case RegionTag::SolidRed:     return "solid_red";
    case RegionTag::HatchedRed:   return "hatched_red";
    case RegionTag::SolidBrown:   return "solid_brown";
    case RegionTag::HatchedBrown: return "hatched_brown";
  }
  return "?";
}

inline const char* region_tag_meaning(RegionTag t) {
  switch (t) {
    case RegionTag::HatchedGreen:
      return "single coexistence attractor: all initial conditions stabilise both populations";
    case RegionTag::SolidGreen:
      return "bistable: coexistence for some initial conditions, extinction (of both species, or of the prey with the predator on alternative food) for others";
    case RegionTag::Blue:
      return "oscillation: the interior equilibrium is unstable and orbits approach a stable limit cycle";
    case RegionTag::Grey:
      return "three interior equilibria: stabilisation to one of two coexistence states and/or oscillation, depending on the initial condition";
    case RegionTag::SolidRed:
      return "two interior equilibria (saddle + repeller): both populations go extinct";
    case RegionTag::HatchedRed:
      return "no interior equilibria: both populations go extinct";
    case RegionTag::SolidBrown:
      return "two interior equilibria (saddle + repeller) with alternative food: the prey goes extinct, the predator persists";
    case RegionTag::HatchedBrown:
      return "no interior equilibria: the prey goes extinct, the predator persists on alternative food";
  }
  return "?";
}

struct RegionLabel {
  RegionTag tag = RegionTag::HatchedGreen;
  std::string meaning;
  bool uncertain = false;
};

// ---------------------------------------------------------------------------
// Hopf locus.
// ---------------------------------------------------------------------------

namespace detail {

/// Tracked-branch machinery shared by the continuation: equilibrium residual
/// and trace condition as functions of (u, s) at fixed q.
struct HopfSystem {
  ModelVariant v;
  DimensionalParams base;

  bool rescaled() const { return has_rescaled_form(v); }

  NonDimParams np_at(double q) const {
    DimensionalParams p = base;
    p.q = q;
    return nondimensionalize(p);
  }

  /// Pick the branch carrying the stability switch at a given q, or nullopt
  /// when no interior equilibrium exists there.
  std::optional<double> branch_root(double q) const {
    DimensionalParams p = base;
    p.q = q;
    if (rescaled()) {
      const NonDimParams np = np_at(q);
      const auto ir = v == ModelVariant::MhtAllee ? interior_roots_allee(np)
                                                  : interior_roots_allee_altfood(np);
      if (ir.roots.empty()) return std::nullopt;
      // weak Allee: the small always-present root carries the switch; the
      // fold-bearing variants switch on the upper (non-saddle) root
      if (v == ModelVariant::MhtAllee && np.M < 0) return ir.roots.front();
      return ir.roots.back();
    }
    const auto Ns = interior_prey_dimensional(v, p);
    if (Ns.empty()) return std::nullopt;
    return Ns.back() / p.K;  // rescaled coordinate
  }

  // equilibrium residual in the tracked coordinate (rescaled u)
  double eq_residual(double u, double q) const {
    if (rescaled()) {
      const auto cc = CubicCoefficients::interior(v, np_at(q));
      return cc.reconstruct().eval(u);
    }
    DimensionalParams p = base;
    p.q = q;
    const double N = u * p.K;
    const double cfood = has_alt_food(v) ? p.c : 0.0;
    if (v == ModelVariant::LeslieGower)
      return p.r * (1.0 - N / p.K) - p.q * p.n * N;  // divided by N
    return p.r * (1.0 - N / p.K) * (N + p.a) - p.q * (p.n * N + cfood);
  }

  double eq_residual_du(double u, double q) const {
    const double h = 1e-7 * (1.0 + std::abs(u));
    return (eq_residual(u + h, q) - eq_residual(u - h, q)) / (2.0 * h);
  }

  /// Trace of the Jacobian at the equilibrium (u, predator nullcline), for
  /// stability switch detection; s enters linearly.
  double trace_at(double u, double s, double q) const {
    DimensionalParams p = base;
    p.q = q;
    p.s = s;
    if (rescaled()) {
      const NonDimParams np = np_at(q);
      const double S = s / (p.r * p.K);
      const double base_tr = trace_threshold(u, np.A, np.M) - S;
      return v == ModelVariant::MhtAllee ? u * (u + np.A) * base_tr
                                         : (u + np.C) * (u + np.A) * base_tr;
    }
    const double N = u * p.K;
    const double P = p.n * N + (has_alt_food(v) ? p.c : 0.0);
    return jacobian(v, State{N, P, Frame::Dimensional}, p).trace();
  }

  /// Closed-form s solving trace = 0 at the equilibrium u.
  double s_on_locus(double u, double q) const {
    DimensionalParams p = base;
    p.q = q;
    if (rescaled()) {
      const NonDimParams np = np_at(q);
      return p.r * p.K * trace_threshold(u, np.A, np.M);
    }
    const double N = u * p.K;
    const double P = p.n * N + (has_alt_food(v) ? p.c : 0.0);
    p.s = 1.0;  // J11 does not involve s
    return jacobian(v, State{N, P, Frame::Dimensional}, p).a11;
  }

  /// Determinant and |trace| at a candidate locus point.
  void audit(double u, double s, double q, double& det, double& resid) const {
    DimensionalParams p = base;
    p.q = q;
    p.s = s;
    if (rescaled()) {
      const NonDimParams np = nondimensionalize(p);
      const double w = u + (v == ModelVariant::MhtAlleeAltFood ? np.C : 0.0);
      const Mat2 J = jacobian_rescaled(v, State{u, w, Frame::Rescaled}, np);
      det = J.det();
      resid = std::abs(J.trace());
      return;
    }
    const double N = u * p.K;
    const double P = p.n * N + (has_alt_food(v) ? p.c : 0.0);
    const Mat2 J = jacobian(v, State{N, P, Frame::Dimensional}, p);
    det = J.det();
    resid = std::abs(J.trace());
  }
};

}  // namespace detail

/// Trace the Hopf locus of a variant over [q_lo, q_hi] with the remaining
/// parameters fixed. Each continuation step solves the augmented system
/// {equilibrium residual = 0, trace = 0} for (u, s) by Newton iteration from
/// a linear predictor, halving the continuation step on failure. The curve
/// ends normally at the range boundary, at a collapse threshold, where the
/// required s leaves (0, inf), or where the determinant loses positivity.
inline std::vector<HopfPoint> hopf_locus(ModelVariant v, const DimensionalParams& fixed,
                                         double q_lo, double q_hi,
                                         const HopfOptions& opt = {}) {
  if (!(q_lo > 0) || !(q_hi > q_lo))
    throw std::domain_error("hopf_locus: need 0 < q_lo < q_hi");
  detail::HopfSystem sys{v, fixed};
  std::vector<HopfPoint> out;

  const double base_step = opt.q_step > 0 ? opt.q_step : (q_hi - q_lo) / 200.0;

  // scan for a starting point with an equilibrium and a positive locus s
  double q = q_lo;
  std::optional<double> u0;
  double s0 = 0;
  while (q <= q_hi + 1e-12 * q_hi) {
    u0 = sys.branch_root(q);
    if (u0) {
      s0 = sys.s_on_locus(*u0, q);
      double det, resid;
      sys.audit(*u0, std::max(s0, 1e-12), q, det, resid);
      if (s0 > 0 && det > 0) break;
      u0.reset();
    }
    q += base_step;
  }
  if (!u0) return out;

  auto newton = [&](double qt, double& u, double& s) -> bool {
    for (int it = 0; it < opt.newton_iters; ++it) {
      const double F1 = sys.eq_residual(u, qt);
      const double F2 = sys.trace_at(u, s, qt);
      const double scale1 = 1.0 + std::abs(u);
      if (std::abs(F1) < opt.newton_tol * scale1 && std::abs(F2) < 1e-11 * (1.0 + std::abs(s))) {
        // one closed-form polish of s keeps the trace residual at rounding level
        s = sys.s_on_locus(u, qt);
        return u > 0 && (has_rescaled_form(v) ? u < 1.0 : u * fixed.K < fixed.K) && s > 0;
      }
      const double dF1 = sys.eq_residual_du(u, qt);
      if (!(std::abs(dF1) > 1e-14)) return false;
      const double h = 1e-7 * (1.0 + std::abs(u));
      const double dF2du = (sys.trace_at(u + h, s, qt) - sys.trace_at(u - h, s, qt)) / (2 * h);
      const double dF2ds = (sys.trace_at(u, s + h, qt) - sys.trace_at(u, s - h, qt)) / (2 * h);
      if (!(std::abs(dF2ds) > 1e-300)) return false;
      // block-triangular Newton step for {F1(u), F2(u, s)}
      const double du = -F1 / dF1;
      const double ds = -(F2 + dF2du * du) / dF2ds;
      u += du;
      s += ds;
      if (!(u > -0.5) || !(u < 2.0) || !std::isfinite(s)) return false;
    }
    return false;
  };

  double u = *u0, s = s0;
  {
    double det, resid;
    sys.audit(u, s, q, det, resid);
    out.push_back({q, s, u, det, resid});
  }

  double prev_q = q, prev_u = u, prev_s = s;
  bool have_prev2 = false;
  double prev2_q = 0, prev2_u = 0, prev2_s = 0;

  while (q < q_hi && static_cast<int>(out.size()) < opt.max_points) {
    double step = std::min(base_step, q_hi - q);
    bool advanced = false;
    for (int halve = 0; halve <= opt.max_halvings && !advanced; ++halve) {
      const double qt = q + step;
      // linear predictor through the last two accepted points
      double ut = prev_u, st = prev_s;
      if (have_prev2 && prev_q != prev2_q) {
        const double w = (qt - prev_q) / (prev_q - prev2_q);
        ut = prev_u + w * (prev_u - prev2_u);
        st = prev_s + w * (prev_s - prev2_s);
      }
      double un = ut, sn = st;
      if (newton(qt, un, sn)) {
        double det, resid;
        sys.audit(un, sn, qt, det, resid);
        if (det <= 0 || sn <= 0) {
          // locus leaves its validity window; end normally
          return out;
        }
        prev2_q = prev_q; prev2_u = prev_u; prev2_s = prev_s;
        have_prev2 = true;
        prev_q = qt; prev_u = un; prev_s = sn;
        q = qt; u = un; s = sn;
        out.push_back({q, s, u, det, resid});
        advanced = true;
      } else {
        step *= 0.5;
        if (step < 1e-9 * (1.0 + q)) break;
      }
    }
    if (!advanced) break;  // collapse threshold or persistent Newton failure
  }
  return out;
}

// ---------------------------------------------------------------------------
// Collapse thresholds.
// ---------------------------------------------------------------------------

namespace detail {

/// Fold indicator Delta(q): the discriminant of the quadratic factor carrying
/// the colliding pair of interior equilibria. NaN when undefined.
inline double fold_indicator(ModelVariant v, const DimensionalParams& base, double q,
                             double* scale_out = nullptr) {
  DimensionalParams p = base;
  p.q = q;
  switch (v) {
    case ModelVariant::MhtAllee: {
      const auto np = nondimensionalize(p);
      const auto ir = interior_roots_allee(np);
      if (scale_out && ir.u1)
        *scale_out = std::max(1.0, std::pow(1.0 - np.A + np.M - *ir.u1, 2));
      return ir.delta;
    }
    case ModelVariant::MhtAlleeAltFood: {
      const auto np = nondimensionalize(p);
      const auto ir = interior_roots_allee_altfood(np);
      if (scale_out && ir.G)
        *scale_out = std::max(1.0, std::pow(1.0 - np.A + np.M + *ir.G, 2));
      return ir.delta;
    }
    case ModelVariant::MhtAltFood: {
      // monic quadratic in N: N^2 + b N + c
      const double b = (p.q * p.n - p.r) * p.K / p.r + p.a;
      const double cc = (p.q * p.c - p.r * p.a) * p.K / p.r;
      if (scale_out) *scale_out = std::max(1.0, b * b);
      return b * b - 4.0 * cc;
    }
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

inline int interior_count(ModelVariant v, const DimensionalParams& base, double q) {
  DimensionalParams p = base;
  p.q = q;
  return static_cast<int>(interior_prey_dimensional(v, p).size());
}

}  // namespace detail

/// Locate the predation rate q_star at which a pair of interior equilibria
/// collides (Delta(q_star) = 0, sign change across). Searches [q_lo, q_hi]
/// by a coarse scan for a sign-bracketing pair, then a safeguarded secant
/// (Illinois) iteration. A window without a sign change reports not-found.
inline CollapseThreshold collapse_threshold(ModelVariant v, const DimensionalParams& fixed,
                                            double q_lo, double q_hi) {
  CollapseThreshold out;
  out.variant = v;
  if (uses_allee(v))
    out.label = v == ModelVariant::MhtAlleeAltFood ? "q_hat_1"
                : fixed.m > 0                      ? "q_tilde_1"
                                                   : "q_tilde_2";
  else if (v == ModelVariant::MhtAltFood)
    out.label = "q_2";
  else {
    out.label = "q_1";
    out.note = "variant has no fold of interior equilibria";
    return out;
  }

  auto delta = [&](double q) { return detail::fold_indicator(v, fixed, q); };

  const int ngrid = 128;
  double qa = 0, qb = 0, fa = 0, fb = 0;
  bool have = false;
  double prev_q = q_lo, prev_f = delta(q_lo);
  for (int i = 1; i <= ngrid; ++i) {
    const double qq = q_lo + (q_hi - q_lo) * i / ngrid;
    const double ff = delta(qq);
    if (std::isfinite(prev_f) && std::isfinite(ff) && prev_f * ff < 0) {
      qa = prev_q; fa = prev_f;
      qb = qq; fb = ff;
      have = true;
      break;
    }
    prev_q = qq;
    prev_f = ff;
  }
  if (!have) {
    out.note = "no sign change of the fold indicator in the search window";
    return out;
  }

  // Illinois secant on the bracket
  double qs = qa, fs = fa;
  for (int it = 0; it < 200; ++it) {
    qs = qb - fb * (qb - qa) / (fb - fa);
    if (!(qs > std::min(qa, qb)) || !(qs < std::max(qa, qb))) qs = 0.5 * (qa + qb);
    fs = delta(qs);
    double scale = 1.0;
    detail::fold_indicator(v, fixed, qs, &scale);
    if (std::abs(fs) < 1e-10 * scale || std::abs(qb - qa) < 1e-13 * (1.0 + std::abs(qs))) break;
    if (fa * fs < 0) {
      qb = qs; fb = fs;
    } else {
      fa *= 0.5;  // Illinois modification
      qa = qs;
      fa = fs;
    }
  }

  out.found = true;
  out.q_star = qs;
  out.delta_at = fs;

  DimensionalParams p = fixed;
  p.q = qs;
  if (has_rescaled_form(v)) {
    const auto np = nondimensionalize(p);
    const auto ir = v == ModelVariant::MhtAllee ? interior_roots_allee(np)
                                                : interior_roots_allee_altfood(np);
    if (v == ModelVariant::MhtAlleeAltFood && ir.G) {
      out.E = (1.0 - np.A + np.M + *ir.G) / 2.0;
      out.C = np.C;
    }
    // double-root location: the colliding pair averages to the fold point
    if (!ir.roots.empty()) {
      if (ir.roots.size() >= 2 && uses_allee(v) && fixed.m < 0 &&
          v == ModelVariant::MhtAllee) {
        // weak Allee: the two upper roots collide
        out.u_fold = 0.5 * (ir.roots[ir.roots.size() - 2] + ir.roots.back());
      } else if (ir.roots.size() >= 2) {
        out.u_fold = 0.5 * (ir.roots.front() + ir.roots.back());
      } else {
        out.u_fold = ir.roots.front();
      }
    }
  } else {
    const double b = (p.q * p.n - p.r) * p.K / p.r + p.a;
    out.u_fold = -b / 2.0 / p.K;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region classification.
// ---------------------------------------------------------------------------

struct RegionProbeOptions {
  bool enable_probe = true;
  std::uint64_t probe_steps = 80'000;
  double probe_clock = 0.0;  // 0 => frame default
  IntegrateOptions integ;
};

/// Classify a (q, s) point by its interior-equilibrium census, the
/// closed-form stability classes, and (where oscillation is the expected
/// outcome) a bounded cycle probe from a deterministic seed pair.
inline RegionLabel classify_region(ModelVariant v, double q, double s,
                                   const DimensionalParams& fixed,
                                   const RegionProbeOptions& opt = {}) {
  DimensionalParams p = fixed;
  p.q = q;
  p.s = s;
  const auto census = equilibrium_census(v, p);

  int n_attr = 0, n_rep = 0, n_saddle = 0, n_marginal = 0;
  const EquilibriumReport* repeller = nullptr;
  for (const auto& eq : census.interior) {
    switch (eq.numeric_class) {
      case NumericClass::Attractor: ++n_attr; break;
      case NumericClass::Repeller:  ++n_rep; repeller = &eq; break;
      case NumericClass::Saddle:    ++n_saddle; break;
      default: ++n_marginal; break;
    }
  }
  const int n = static_cast<int>(census.interior.size());

  auto make = [&](RegionTag tag, bool uncertain) {
    return RegionLabel{tag, region_tag_meaning(tag), uncertain};
  };

  auto probe_cycle = [&]() -> int {  // 1 cycle, 0 none/point, -1 prey extinct
    if (!opt.enable_probe || repeller == nullptr) return 0;
    DetectOptions dopt;
    dopt.integ = opt.integ;
    dopt.max_steps = opt.probe_steps;
    dopt.max_clock = opt.probe_clock;
    const State eq = to_dimensional(repeller->location, p);
    const State seeds[2] = {
        State{eq.prey * 1.4, eq.predator * 0.7, Frame::Dimensional},
        State{eq.prey * 0.6, eq.predator * 1.3, Frame::Dimensional},
    };
    bool extinct = false;
    for (const auto& seed : seeds) {
      const auto lab = detect_attractor(v, p, seed, dopt);
      if (lab.kind == AttractorKind::InteriorCycle) return 1;
      if (lab.kind == AttractorKind::PreyExtinctPoint || lab.kind == AttractorKind::Origin)
        extinct = true;
    }
    return extinct ? -1 : 0;
  };

  const bool altfood = has_alt_food(v);
  const bool strong = uses_allee(v) && p.m > 0;

  if (n == 0) {
    if (altfood) return make(RegionTag::HatchedBrown, false);
    if (strong) return make(RegionTag::HatchedRed, false);
    return make(RegionTag::HatchedRed, true);  // not expected for the other variants
  }

  if (n == 1) {
    const auto& eq = census.interior.front();
    if (census.roots.multiplicity.size() == 1 && census.roots.multiplicity[0] >= 2) {
      // fold point: classify by the side the trace indicates, flagged
      const bool stable_side = eq.trace < 0;
      if (altfood) return make(stable_side ? RegionTag::SolidGreen : RegionTag::SolidBrown, true);
      if (strong) return make(stable_side ? RegionTag::SolidGreen : RegionTag::SolidRed, true);
      return make(RegionTag::Grey, true);
    }
    if (eq.numeric_class == NumericClass::Attractor) return make(RegionTag::HatchedGreen, false);
    if (eq.numeric_class == NumericClass::Repeller) {
      const int pr = probe_cycle();
      if (pr == 1) return make(RegionTag::Blue, false);
      if (pr == -1) return make(altfood ? RegionTag::HatchedBrown : RegionTag::HatchedRed, true);
      return make(RegionTag::Blue, !opt.enable_probe ? false : true);
    }
    // marginal single equilibrium
    return make(eq.trace < 0 ? RegionTag::HatchedGreen : RegionTag::Blue, true);
  }

  if (n == 2) {
    const bool has_saddle = n_saddle >= 1;
    const bool bistable = has_saddle && n_attr >= 1;
    const bool explosive = has_saddle && n_rep >= 1;
    if (altfood) {
      if (bistable) return make(RegionTag::SolidGreen, false);
      if (explosive) return make(RegionTag::SolidBrown, false);
      return make(RegionTag::SolidBrown, true);
    }
    if (strong) {
      if (bistable) return make(RegionTag::SolidGreen, false);
      if (explosive) return make(RegionTag::SolidRed, false);
      return make(RegionTag::SolidRed, true);
    }
    // weak Allee at a fold margin of the upper pair
    return make(RegionTag::Grey, true);
  }

  // n == 3 (weak Allee family)
  return make(RegionTag::Grey, n_marginal > 0);
}

/// Region map over a (q, s) grid; cells are independent and evaluated with a
/// deterministic static partition over threads.
struct RegionGrid {
  std::vector<double> q_axis, s_axis;
  std::vector<RegionLabel> cells;  // row-major: cells[is * nq + iq]
};

inline RegionGrid region_map(ModelVariant v, const DimensionalParams& fixed, double q_lo,
                             double q_hi, int nq, double s_lo, double s_hi, int ns,
                             int threads = 1, const RegionProbeOptions& opt = {}) {
  if (nq < 1 || ns < 1) throw std::domain_error("region_map: grid must be positive");
  RegionGrid grid;
  grid.q_axis.resize(nq);
  grid.s_axis.resize(ns);
  for (int i = 0; i < nq; ++i)
    grid.q_axis[i] = nq == 1 ? q_lo : q_lo + (q_hi - q_lo) * i / (nq - 1.0);
  for (int j = 0; j < ns; ++j)
    grid.s_axis[j] = ns == 1 ? s_lo : s_lo + (s_hi - s_lo) * j / (ns - 1.0);
  grid.cells.resize(static_cast<std::size_t>(nq) * ns);
  parallel_for_indexed(grid.cells.size(), threads, [&](std::size_t idx) {
    const int iq = static_cast<int>(idx % nq);
    const int is = static_cast<int>(idx / nq);
    grid.cells[idx] = classify_region(v, grid.q_axis[iq], grid.s_axis[is], fixed, opt);
  });
  return grid;
}

}  // namespace mht
