#pragma once

// Equilibrium census and stability classification.
//
// The two Allee variants are analysed in their rescaled polynomial frame,
// where interior equilibria are roots of a monic cubic in (0,1) and the
// classification reduces to closed-form sign conditions on det/trace
// functionals. The remaining variants are analysed dimensionally. Every
// report carries both the closed-form ("lemma") class and the numeric
// eigenvalue class so the two routes can be compared.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mht/cubic.hpp"
#include "mht/mat2.hpp"
#include "mht/models.hpp"
#include "mht/params.hpp"

namespace mht {

/// Margin below which a classification is reported as marginal rather than
/// coerced to one side.
inline constexpr double kClassifyMargin = 1e-9;

enum class LemmaClass {
  Saddle,
  Attractor,
  Repeller,
  StableSaddleNode,
  UnstableSaddleNode,
  NotCovered,
};

enum class NumericClass { Saddle, Attractor, Repeller, CenterMargin, Degenerate };

enum class EquilibriumKind { Boundary, Interior };

inline const char* lemma_class_name(LemmaClass c) {
  switch (c) {
    case LemmaClass::Saddle:             return "saddle";
    case LemmaClass::Attractor:          return "attractor";
    case LemmaClass::Repeller:           return "repeller";
    case LemmaClass::StableSaddleNode:   return "stable_saddle_node";
    case LemmaClass::UnstableSaddleNode: return "unstable_saddle_node";
    case LemmaClass::NotCovered:         return "not_covered";
  }
  return "?";
}

inline const char* numeric_class_name(NumericClass c) {
  switch (c) {
    case NumericClass::Saddle:       return "saddle";
    case NumericClass::Attractor:    return "attractor";
    case NumericClass::Repeller:     return "repeller";
    case NumericClass::CenterMargin: return "center_margin";
    case NumericClass::Degenerate:   return "degenerate";
  }
  return "?";
}

/// A located equilibrium with everything needed to audit its classification.
struct EquilibriumReport {
  State location;
  EquilibriumKind kind = EquilibriumKind::Interior;
  Mat2 jacobian;
  double det = 0;
  double trace = 0;
  LemmaClass lemma_class = LemmaClass::NotCovered;
  NumericClass numeric_class = NumericClass::Degenerate;
  std::string which_lemma;  // rule tag, e.g. "middle_interior", "boundary_axis"
};

/// Coefficients of the interior-equilibrium cubic
///   u^3 - Hcoef u^2 - Lcoef u + tail = 0
/// with Hcoef = M+1-A, Lcoef = A(M+1)-Q-M and tail = A*M (+ C*Q with
/// alternative food).
struct CubicCoefficients {
  double Hcoef = 0, Lcoef = 0, tail = 0;

  static CubicCoefficients interior(ModelVariant v, const NonDimParams& np) {
    CubicCoefficients cc;
    cc.Hcoef = np.M + 1.0 - np.A;
    cc.Lcoef = np.A * (np.M + 1.0) - np.Q - np.M;
    cc.tail = np.A * np.M + (v == ModelVariant::MhtAlleeAltFood ? np.C * np.Q : 0.0);
    return cc;
  }

  MonicCubic reconstruct() const { return MonicCubic{-Hcoef, -Lcoef, tail}; }
};

/// Interior roots in (0,1) together with the labelled decomposition used by
/// the classification rules. `roots` is always the authoritative list of
/// distinct points (ascending) with `multiplicity` alongside; the labels and
/// the quadratic-factor data are filled in when the factored construction
/// applies cleanly.
struct InteriorRoots {
  std::vector<double> roots;
  std::vector<int> multiplicity;
  std::optional<double> u1, u2, u3;
  std::optional<double> G;      // magnitude of the negative root (alt-food route)
  std::optional<double> E;      // double-root location (1 - A + M + G)/2
  double delta = std::numeric_limits<double>::quiet_NaN();  // quadratic-factor discriminant
  bool construction_ok = false;
  std::string note;

  int total_multiplicity() const {
    int t = 0;
    for (int m : multiplicity) t += m;
    return t;
  }
};

// ---------------------------------------------------------------------------
// Closed-form sign functionals shared by both rescaled systems.
// ---------------------------------------------------------------------------

/// f(u) = u g'(u)/(u+A): the trace of the interior Jacobian vanishes exactly
/// at S = f(u), so this is both the stability threshold and the Hopf locus
/// condition in S.
inline double trace_threshold(double u, double A, double M) {
  return u * growth_cubic_prime(u, A, M) / (u + A);
}

/// h(u) = u^2 (2u - (1-A+M)) - A M, the determinant sign factor of the
/// Allee-variant interior Jacobian; identically g(u) - u g'(u).
inline double h_det_factor(double u, double A, double M) {
  return u * u * (2.0 * u - (1.0 - A + M)) - A * M;
}

/// det/trace of the MhtAllee interior Jacobian at (u, u), closed form.
inline double interior_det_allee(double u, const NonDimParams& np) {
  return np.S * u * u * (u + np.A) * h_det_factor(u, np.A, np.M);
}
inline double interior_trace_allee(double u, const NonDimParams& np) {
  return u * (u + np.A) * (trace_threshold(u, np.A, np.M) - np.S);
}

/// det/trace of the MhtAlleeAltFood interior Jacobian at (u, u+C), closed form.
inline double interior_det_altfood(double u, const NonDimParams& np) {
  const double uc = u + np.C;
  return np.S * u * (u + np.A) * uc * uc * (np.Q - growth_cubic_prime(u, np.A, np.M));
}
inline double interior_trace_altfood(double u, const NonDimParams& np) {
  return (u + np.C) * (u + np.A) * (trace_threshold(u, np.A, np.M) - np.S);
}

/// The stability threshold for the upper alt-food equilibrium expressed
/// through the factored quantities (G, Delta): with u2 = (1-A+M+G+sqrt(Delta))/2
/// this is exactly trace_threshold(u2, A, M), written as a polynomial in
/// T = 2*u2 so the fold limit Delta -> 0 is smooth.
inline double altfood_upper_threshold(const NonDimParams& np, double G, double delta) {
  const double rt = std::sqrt(std::max(delta, 0.0));
  const double A = np.A, M = np.M;
  const double H = M + 1.0 - A;
  const double c1 = A - M + A * M;  // linear coefficient of g(u)
  const double T = H + G + rt;      // = 2 u2
  return T * (H * T + c1 - 0.75 * T * T) / (T + 2.0 * A);
}

/// The saddle-node threshold at the double root E; the Delta -> 0 limit of
/// altfood_upper_threshold, i.e. trace_threshold(E, A, M).
inline double altfood_saddle_node_threshold(const NonDimParams& np, double G) {
  return altfood_upper_threshold(np, G, 0.0);
}

// ---------------------------------------------------------------------------
// Jacobians.
// ---------------------------------------------------------------------------

/// Analytic Jacobian of the rescaled systems at an arbitrary state.
inline Mat2 jacobian_rescaled(ModelVariant v, const State& x, const NonDimParams& np) {
  const double u = x.prey, w = x.predator;
  const double A = np.A, C = np.C, Q = np.Q, S = np.S, M = np.M;
  const double g = growth_cubic(u, A, M);
  const double gp = growth_cubic_prime(u, A, M);
  Mat2 J;
  switch (v) {
    case ModelVariant::MhtAllee:
      J.a11 = 2.0 * u * (g - Q * w) + u * u * gp;
      J.a12 = -Q * u * u;
      J.a21 = S * w * (2.0 * u + A - w);
      J.a22 = S * (u + A) * (u - 2.0 * w);
      return J;
    case ModelVariant::MhtAlleeAltFood:
      J.a11 = u * (u + C) * gp + (2.0 * u + C) * (g - Q * w);
      J.a12 = -Q * u * (u + C);
      J.a21 = S * w * (A + C + 2.0 * u - w);
      J.a22 = S * (C + u - 2.0 * w) * (u + A);
      return J;
    default:
      throw std::invalid_argument("jacobian_rescaled: variant has no rescaled form");
  }
}

/// Analytic Jacobian of the dimensional systems at an arbitrary state.
/// Same domain restrictions as vector_field.
inline Mat2 jacobian(ModelVariant v, const State& x, const DimensionalParams& p) {
  const double N = x.prey, P = x.predator;
  if (N < 0 || P < 0)
    throw std::domain_error("jacobian: state outside the closed first quadrant");
  Mat2 J;
  switch (v) {
    case ModelVariant::LeslieGower:
      J.a11 = p.r * (1.0 - 2.0 * N / p.K) - p.q * P;
      J.a12 = -p.q * N;
      break;
    case ModelVariant::Mht:
    case ModelVariant::MhtAltFood: {
      const double Na = N + p.a;
      J.a11 = p.r * (1.0 - 2.0 * N / p.K) - p.q * p.a * P / (Na * Na);
      J.a12 = -p.q * N / Na;
      break;
    }
    case ModelVariant::MhtAllee:
    case ModelVariant::MhtAlleeAltFood: {
      const double Na = N + p.a;
      J.a11 = p.r * ((1.0 - 2.0 * N / p.K) * (N - p.m) + N * (1.0 - N / p.K)) -
              p.q * p.a * P / (Na * Na);
      J.a12 = -p.q * N / Na;
      break;
    }
    default:
      throw std::invalid_argument("jacobian: unknown variant");
  }
  const double cap = has_alt_food(v) ? p.n * N + p.c : p.n * N;
  if (cap == 0.0) {
    if (P > 0)
      throw SingularFieldError("jacobian: Leslie-Gower term singular at N = 0 with P > 0");
    // on the prey axis of a singular variant the predator row limit is (0, s)
    J.a21 = 0.0;
    J.a22 = p.s;
    return J;
  }
  J.a21 = p.s * P * P * p.n / (cap * cap);
  J.a22 = p.s * (1.0 - 2.0 * P / cap);
  return J;
}

// ---------------------------------------------------------------------------
// Numeric classification.
// ---------------------------------------------------------------------------

/// Classify an interior equilibrium from det/trace; `threshold_gap` is
/// |S - f(u)|, the distance to the stability switch.
inline NumericClass numeric_classify(double det, double trace, double threshold_gap) {
  if (std::abs(det) < kClassifyMargin) return NumericClass::Degenerate;
  if (det < 0) return NumericClass::Saddle;
  if (threshold_gap < kClassifyMargin) return NumericClass::CenterMargin;
  return trace < 0 ? NumericClass::Attractor : NumericClass::Repeller;
}

/// Classify from explicit real eigenvalues with a relative margin; used for
/// the triangular boundary Jacobians, whose entries can be legitimately tiny
/// without the point being anywhere near degenerate.
inline NumericClass numeric_classify_eigen(double l1, double l2) {
  const double scale = std::abs(l1) + std::abs(l2);
  if (scale == 0.0) return NumericClass::Degenerate;
  if (std::abs(l1) < 1e-12 * scale || std::abs(l2) < 1e-12 * scale)
    return NumericClass::Degenerate;
  if (l1 < 0 && l2 < 0) return NumericClass::Attractor;
  if (l1 > 0 && l2 > 0) return NumericClass::Repeller;
  return NumericClass::Saddle;
}

// ---------------------------------------------------------------------------
// Boundary equilibria.
// ---------------------------------------------------------------------------

namespace detail {

// all boundary Jacobians here are triangular, so the diagonal carries the
// eigenvalues
inline EquilibriumReport make_report(State loc, EquilibriumKind kind, Mat2 J,
                                     LemmaClass lemma, std::string which) {
  EquilibriumReport rep;
  rep.location = loc;
  rep.kind = kind;
  rep.jacobian = J;
  rep.det = J.det();
  rep.trace = J.trace();
  rep.lemma_class = lemma;
  rep.numeric_class = numeric_classify_eigen(J.a11, J.a22);
  rep.which_lemma = std::move(which);
  return rep;
}

inline LemmaClass class_from_eigen_signs(double l1, double l2) {
  if (l1 < 0 && l2 < 0) return LemmaClass::Attractor;
  if (l1 > 0 && l2 > 0) return LemmaClass::Repeller;
  return LemmaClass::Saddle;
}

}  // namespace detail

/// First-quadrant boundary equilibria of the rescaled Allee systems with the
/// triangular-Jacobian classification: (0,0) and (1,0) always, (M,0) only
/// when M > 0, and (0,C) for the alternative-food variant. The rescaled
/// origin of the plain Allee system is degenerate (zero Jacobian) and is
/// reported but not classified.
inline std::vector<EquilibriumReport> boundary_equilibria_rescaled(ModelVariant v,
                                                                   const NonDimParams& np) {
  if (!has_rescaled_form(v))
    throw std::invalid_argument("boundary_equilibria_rescaled: variant has no rescaled form");
  np.validate();
  const double A = np.A, C = np.C, Q = np.Q, S = np.S, M = np.M;
  std::vector<EquilibriumReport> out;
  auto st = [](double u, double w) { return State{u, w, Frame::Rescaled}; };

  if (v == ModelVariant::MhtAllee) {
    out.push_back(detail::make_report(st(0, 0), EquilibriumKind::Boundary, Mat2{},
                                      LemmaClass::NotCovered, "origin_degenerate"));
    Mat2 J1{-(1 + A) * (1 - M), -Q, 0.0, S * (1 + A)};
    out.push_back(detail::make_report(st(1, 0), EquilibriumKind::Boundary, J1,
                                      LemmaClass::Saddle, "boundary_axis"));
    if (M > 0) {
      Mat2 Jm{M * M * (M + A) * (1 - M), -Q * M * M, 0.0, S * M * (M + A)};
      out.push_back(detail::make_report(st(M, 0), EquilibriumKind::Boundary, Jm,
                                        LemmaClass::Repeller, "boundary_axis"));
    }
    return out;
  }

  // MhtAlleeAltFood, system with the (0,C) point.
  {
    Mat2 J0{-A * C * M, 0.0, 0.0, A * C * S};
    out.push_back(detail::make_report(st(0, 0), EquilibriumKind::Boundary, J0,
                                      detail::class_from_eigen_signs(-A * C * M, A * C * S),
                                      "boundary_axis"));
  }
  {
    Mat2 J1{-(1 - M) * (C + 1) * (A + 1), -Q * (C + 1), 0.0, S * (C + 1) * (A + 1)};
    out.push_back(detail::make_report(st(1, 0), EquilibriumKind::Boundary, J1,
                                      LemmaClass::Saddle, "boundary_axis"));
  }
  if (M > 0) {
    Mat2 Jm{M * (1 - M) * (C + M) * (A + M), -M * Q * (C + M), 0.0, S * (A + M) * (C + M)};
    out.push_back(detail::make_report(st(M, 0), EquilibriumKind::Boundary, Jm,
                                      LemmaClass::Repeller, "boundary_axis"));
  }
  {
    const double l1 = -C * (A * M + Q * C), l2 = -A * C * S;
    Mat2 Jc{l1, 0.0, A * C * S, l2};
    out.push_back(detail::make_report(st(0, C), EquilibriumKind::Boundary, Jc,
                                      detail::class_from_eigen_signs(l1, l2),
                                      "boundary_axis"));
  }
  return out;
}

/// Boundary equilibria in the variant's analysis frame. Dimensional variants
/// report the points where the Jacobian exists; for LeslieGower/Mht the
/// origin needs a blow-up analysis and is omitted.
inline std::vector<EquilibriumReport> boundary_equilibria(ModelVariant v,
                                                          const DimensionalParams& p) {
  if (has_rescaled_form(v)) return boundary_equilibria_rescaled(v, nondimensionalize(p));
  p.validate();
  std::vector<EquilibriumReport> out;
  auto st = [](double N, double P) { return State{N, P, Frame::Dimensional}; };

  if (v == ModelVariant::MhtAltFood) {
    Mat2 J0{p.r, 0.0, 0.0, p.s};
    out.push_back(detail::make_report(st(0, 0), EquilibriumKind::Boundary, J0,
                                      LemmaClass::Repeller, "boundary_axis"));
  }
  {
    const double j12 = v == ModelVariant::LeslieGower ? -p.q * p.K : -p.q * p.K / (p.K + p.a);
    Mat2 JK{-p.r, j12, 0.0, p.s};
    out.push_back(detail::make_report(st(p.K, 0), EquilibriumKind::Boundary, JK,
                                      LemmaClass::Saddle, "boundary_axis"));
  }
  if (v == ModelVariant::MhtAltFood) {
    const double l1 = p.r - p.q * p.c / p.a;
    Mat2 Jc{l1, 0.0, p.s * p.n, -p.s};
    out.push_back(detail::make_report(st(0, p.c), EquilibriumKind::Boundary, Jc,
                                      detail::class_from_eigen_signs(l1, -p.s),
                                      "boundary_axis"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interior roots.
// ---------------------------------------------------------------------------

namespace detail {

inline void fill_unit_interval_roots(const std::vector<CubicRoot>& rts, InteriorRoots& ir) {
  for (const auto& r : rts)
    if (r.value > 0.0 && r.value < 1.0) {
      ir.roots.push_back(r.value);
      ir.multiplicity.push_back(r.multiplicity);
    }
}

}  // namespace detail

/// Interior equilibrium prey coordinates of the rescaled MhtAllee system:
/// roots of u^3 - H u^2 - L u + A M in (0,1). For M < 0 there are one or
/// three (the always-present root is tracked as u1: the unique root when
/// there is one, the smallest when there are three, matching continuity from
/// the Q -> infinity limit); for M > 0 there are zero, one (double) or two.
/// An empty result for M > 0 is a normal outcome, not an error.
inline InteriorRoots interior_roots_allee(const NonDimParams& np) {
  np.validate();
  if (np.M == 0.0)
    throw std::domain_error("interior_roots_allee: M = 0 is outside the Allee analysis");
  const auto cc = CubicCoefficients::interior(ModelVariant::MhtAllee, np);
  const MonicCubic cub = cc.reconstruct();

  InteriorRoots ir;
  const auto all = cubic_real_roots(cub);
  detail::fill_unit_interval_roots(all, ir);
  ir.construction_ok = true;

  const double A = np.A, M = np.M;
  if (M < 0) {
    if (ir.total_multiplicity() == 1 && ir.roots.size() == 1) {
      ir.u1 = ir.roots[0];
    } else if (ir.roots.size() == 3) {
      ir.u1 = ir.roots[0];
      ir.u2 = ir.roots[1];
      ir.u3 = ir.roots[2];
    } else if (ir.roots.size() == 2) {
      // fold configuration: a simple root plus a double root
      ir.u1 = ir.roots[0];
      ir.u2 = ir.u3 = ir.roots[1];
      ir.note = "double root (fold margin)";
    } else if (ir.roots.size() == 1 && ir.multiplicity[0] == 3) {
      ir.u1 = ir.u2 = ir.u3 = ir.roots[0];
      ir.note = "triple root";
    } else {
      ir.construction_ok = false;
      ir.note = "unexpected interior root count for M < 0";
    }
    if (ir.u1) {
      const double u1 = *ir.u1;
      ir.delta = (1.0 - A + M - u1) * (1.0 - A + M - u1) + 4.0 * A * M / u1;
    }
  } else {
    if (ir.roots.size() >= 1) ir.u1 = ir.roots.front();
    if (ir.roots.size() >= 2) ir.u2 = ir.roots.back();
    if (ir.roots.size() > 2) {
      ir.construction_ok = false;
      ir.note = "unexpected interior root count for M > 0";
    }
    // quadratic-factor discriminant after deflating the negative root: the
    // fold indicator Delta(q) used by the collapse solver.
    double neg = std::numeric_limits<double>::quiet_NaN();
    int negcount = 0;
    for (const auto& r : all)
      if (r.value < 0) {
        neg = r.value;
        negcount += r.multiplicity;
      }
    if (negcount == 1) {
      const double beta = cub.b + neg;
      const double gamma = cub.c + neg * beta;
      ir.delta = beta * beta - 4.0 * gamma;
      if (ir.roots.size() == 1 && ir.multiplicity[0] == 2) {
        ir.u2 = ir.u1;  // double root at the fold
        ir.note = "double root (fold margin)";
      }
    }
  }
  return ir;
}

/// Interior equilibrium prey coordinates of the rescaled MhtAlleeAltFood
/// system: roots of u^3 - H u^2 - L u + (A M + C Q) in (0,1). When the cubic
/// has a unique negative root -G the factored construction applies: the two
/// candidate interior roots are u_{1,2} = (1-A+G+M -/+ sqrt(Delta))/2 with
/// the double-root location E = (1-A+M+G)/2, and the identity
/// Q = (G+1)(G+M)(G-A)/(C-G) must hold. A failed identity indicates a solver
/// bug and throws. Without a unique negative root (possible for M < 0 with
/// small C Q) the direct root list is returned with construction_ok = false.
inline InteriorRoots interior_roots_allee_altfood(const NonDimParams& np) {
  np.validate();
  const auto cc = CubicCoefficients::interior(ModelVariant::MhtAlleeAltFood, np);
  const MonicCubic cub = cc.reconstruct();

  InteriorRoots ir;
  const auto all = cubic_real_roots(cub);
  detail::fill_unit_interval_roots(all, ir);

  double neg = 0;
  int negcount = 0;
  for (const auto& r : all)
    if (r.value < 0) {
      neg = r.value;
      negcount += r.multiplicity;
    }
  if (negcount != 1) {
    ir.construction_ok = false;
    ir.note = "no unique negative root; factored construction skipped";
    if (ir.roots.size() >= 1) ir.u1 = ir.roots.front();
    if (ir.roots.size() >= 2) ir.u2 = ir.roots[1];
    if (ir.roots.size() >= 3) ir.u3 = ir.roots[2];
    return ir;
  }

  const double G = -neg;
  const double A = np.A, C = np.C, Q = np.Q, M = np.M;
  ir.G = G;
  ir.E = (1.0 - A + M + G) / 2.0;

  if (std::abs(G - C) > 1e-14) {
    const double q_recon = (G + 1.0) * (G + M) * (G - A) / (C - G);
    if (std::abs(q_recon - Q) > 1e-6 * std::max(1e-12, Q))
      throw std::runtime_error("interior_roots_allee_altfood: reconstructed-Q identity failed");
  }
  if (!((A < G && G < C) || (A > G && G > C)))
    ir.note = "G does not separate A and C";

  const double beta = cub.b + neg;          // = -(G + M + 1 - A)
  const double gamma = cub.c + neg * beta;  // = M + Q - A(M+1) + G(G-A+M+1)
  ir.delta = beta * beta - 4.0 * gamma;

  const double scale = std::max(1.0, (1.0 - A + M + G) * (1.0 - A + M + G));
  ir.construction_ok = true;
  if (ir.delta > 1e-10 * scale) {
    const double rt = std::sqrt(ir.delta);
    ir.u1 = ((1.0 - A + G + M) - rt) / 2.0;
    ir.u2 = ((1.0 - A + G + M) + rt) / 2.0;
    // cross-check against the direct solve
    if (ir.roots.size() == 2) {
      if (std::abs(ir.roots[0] - *ir.u1) > 1e-8 || std::abs(ir.roots[1] - *ir.u2) > 1e-8) {
        ir.construction_ok = false;
        ir.note = "factored roots disagree with the direct solve";
      }
    } else if (!ir.roots.empty() || *ir.u1 > 0.0) {
      // roots may fall outside (0,1) (e.g. u1 <= 0 for M < 0 configurations)
      if (ir.roots.size() == 1 && std::abs(ir.roots[0] - *ir.u2) < 1e-8) {
        ir.note = "lower factored root outside (0,1)";
      } else if (!ir.roots.empty()) {
        ir.construction_ok = false;
        ir.note = "factored roots disagree with the direct solve";
      }
    }
  } else if (ir.delta >= -1e-10 * scale) {
    ir.u1 = ir.u2 = ir.E;
    ir.note = "double root (fold)";
  }
  return ir;
}

// ---------------------------------------------------------------------------
// Interior classification.
// ---------------------------------------------------------------------------

/// Classify the index-th interior equilibrium of a rescaled Allee variant.
/// The lemma route uses the closed-form h/f sign conditions (and, for the
/// alternative-food upper point, the factored threshold); the numeric route
/// uses eigenvalues of the analytic Jacobian. Marginal cases are reported as
/// center_margin/degenerate, never silently coerced.
inline EquilibriumReport classify_interior(ModelVariant v, const InteriorRoots& ir,
                                           std::size_t index, const NonDimParams& np) {
  if (index >= ir.roots.size())
    throw std::out_of_range("classify_interior: no such interior equilibrium");
  const double u = ir.roots[index];
  const double A = np.A, M = np.M, S = np.S;
  const double f = trace_threshold(u, A, M);
  const double gap = std::abs(S - f);

  EquilibriumReport rep;
  rep.kind = EquilibriumKind::Interior;

  if (v == ModelVariant::MhtAllee) {
    rep.location = {u, u, Frame::Rescaled};
    rep.jacobian = jacobian_rescaled(v, rep.location, np);
    rep.det = interior_det_allee(u, np);
    rep.trace = interior_trace_allee(u, np);
    rep.numeric_class = numeric_classify(rep.det, rep.trace, gap);

    const double h = h_det_factor(u, A, M);
    if (ir.multiplicity[index] >= 2) {
      rep.which_lemma = "trace_det";
      rep.lemma_class = S > f ? LemmaClass::StableSaddleNode : LemmaClass::UnstableSaddleNode;
      return rep;
    }

    LemmaClass bysigns = h < 0 ? LemmaClass::Saddle
                               : (S < f ? LemmaClass::Repeller : LemmaClass::Attractor);
    if (M < 0 && ir.roots.size() == 1) {
      const double one_root_cond = 1.0 - A + M;
      const double L = A * (M + 1.0) - np.Q - M;
      rep.which_lemma = (one_root_cond <= 0 || L >= 0) ? "unique_interior" : "trace_det";
      rep.lemma_class = bysigns;
    } else if (M < 0 && ir.roots.size() == 3) {
      if (index == 0) {
        rep.which_lemma = "primary_interior";
        rep.lemma_class = bysigns;
      } else if (index == 1) {
        rep.which_lemma = "middle_interior";
        // saddle exactly when this root lies above the tracked u1
        rep.lemma_class = ir.u1 && u > *ir.u1
                              ? LemmaClass::Saddle
                              : (S < f ? LemmaClass::Repeller : LemmaClass::Attractor);
      } else {
        rep.which_lemma = "upper_interior";
        rep.lemma_class = ir.u1 && u < *ir.u1
                              ? LemmaClass::Saddle
                              : (S < f ? LemmaClass::Repeller : LemmaClass::Attractor);
      }
    } else {
      rep.which_lemma = "trace_det";
      rep.lemma_class = bysigns;
    }
    return rep;
  }

  if (v == ModelVariant::MhtAlleeAltFood) {
    rep.location = {u, u + np.C, Frame::Rescaled};
    rep.jacobian = jacobian_rescaled(v, rep.location, np);
    rep.det = interior_det_altfood(u, np);
    rep.trace = interior_trace_altfood(u, np);
    rep.numeric_class = numeric_classify(rep.det, rep.trace, gap);

    const double qg = np.Q - growth_cubic_prime(u, A, M);
    if (ir.construction_ok && ir.G && ir.multiplicity[index] >= 2) {
      rep.which_lemma = "altfood_fold";
      const double thr = altfood_saddle_node_threshold(np, *ir.G);
      rep.lemma_class = S > thr ? LemmaClass::StableSaddleNode : LemmaClass::UnstableSaddleNode;
    } else if (ir.construction_ok && ir.G && ir.roots.size() == 2 && ir.u1 && ir.u2) {
      if (index == 0) {
        rep.which_lemma = "altfood_lower";
        rep.lemma_class = LemmaClass::Saddle;
      } else {
        rep.which_lemma = "altfood_upper";
        const double thr = altfood_upper_threshold(np, *ir.G, std::max(ir.delta, 0.0));
        rep.lemma_class = S < thr ? LemmaClass::Repeller : LemmaClass::Attractor;
      }
    } else {
      rep.which_lemma = "trace_det";
      rep.lemma_class = qg < 0 ? LemmaClass::Saddle
                               : (S < f ? LemmaClass::Repeller : LemmaClass::Attractor);
    }
    return rep;
  }

  throw std::invalid_argument("classify_interior: rescaled classification needs an Allee variant");
}

// ---------------------------------------------------------------------------
// Dimensional interior equilibria (all variants).
// ---------------------------------------------------------------------------

/// Prey coordinates N of interior equilibria, solved directly in the
/// dimensional frame (an independent route from the rescaled cubic).
inline std::vector<double> interior_prey_dimensional(ModelVariant v,
                                                     const DimensionalParams& p) {
  p.validate();
  std::vector<double> out;
  switch (v) {
    case ModelVariant::LeslieGower: {
      out.push_back(p.r * p.K / (p.r + p.q * p.n * p.K));
      return out;
    }
    case ModelVariant::Mht:
    case ModelVariant::MhtAltFood: {
      // r(1 - N/K)(N + a) = q(nN + c)  =>  monic quadratic
      const double b = (p.q * p.n - p.r) * p.K / p.r + p.a;
      const double cc = (p.q * (has_alt_food(v) ? p.c : 0.0) - p.r * p.a) * p.K / p.r;
      const double disc = b * b - 4.0 * cc;
      if (disc < 0) return out;
      const double rt = std::sqrt(disc);
      // numerically stable quadratic roots
      const double q0 = -(b + (b >= 0 ? rt : -rt)) / 2.0;
      const double x1 = q0, x2 = (q0 != 0.0) ? cc / q0 : 0.0;
      for (double N : {std::min(x1, x2), std::max(x1, x2)})
        if (N > 0 && N < p.K && !(out.size() && std::abs(out.back() - N) < 1e-12 * p.K))
          out.push_back(N);
      return out;
    }
    case ModelVariant::MhtAllee:
    case ModelVariant::MhtAlleeAltFood: {
      // (N - K)(N - m)(N + a) + (qK/r)(nN + c) = 0, monic cubic in N
      const double b = p.a - p.K - p.m;
      const double cc = p.K * p.m - p.a * p.K - p.a * p.m + p.q * p.K * p.n / p.r;
      const double dd = p.a * p.K * p.m +
                        (has_alt_food(v) ? p.q * p.K * p.c / p.r : 0.0);
      const auto roots = cubic_real_roots(MonicCubic{b, cc, dd}, 0.0, p.K);
      for (const auto& r : roots)
        if (r.value > 0 && r.value < p.K) out.push_back(r.value);
      return out;
    }
  }
  return out;
}

/// Classify a dimensional interior equilibrium through the trace/det signs of
/// the analytic Jacobian. Tagged "trace_det": the closed-form lemma families
/// live in the rescaled frame.
inline EquilibriumReport classify_interior_dimensional(ModelVariant v, double N,
                                                       const DimensionalParams& p) {
  const double P = p.n * N + (has_alt_food(v) ? p.c : 0.0);
  EquilibriumReport rep;
  rep.location = {N, P, Frame::Dimensional};
  rep.kind = EquilibriumKind::Interior;
  rep.jacobian = jacobian(v, rep.location, p);
  rep.det = rep.jacobian.det();
  rep.trace = rep.jacobian.trace();
  rep.numeric_class = numeric_classify(rep.det, rep.trace, std::abs(rep.trace));
  rep.which_lemma = "trace_det";
  if (rep.numeric_class == NumericClass::Saddle) rep.lemma_class = LemmaClass::Saddle;
  else rep.lemma_class = rep.trace < 0 ? LemmaClass::Attractor : LemmaClass::Repeller;
  return rep;
}

// ---------------------------------------------------------------------------
// Full census.
// ---------------------------------------------------------------------------

/// Everything known about the equilibria of a variant at given parameters,
/// reported in the variant's analysis frame (rescaled for Allee variants).
struct EquilibriumCensus {
  std::vector<EquilibriumReport> boundary;
  std::vector<EquilibriumReport> interior;
  InteriorRoots roots;  // meaningful for the Allee variants
};

inline EquilibriumCensus equilibrium_census(ModelVariant v, const DimensionalParams& p) {
  EquilibriumCensus c;
  c.boundary = boundary_equilibria(v, p);
  if (has_rescaled_form(v)) {
    const NonDimParams np = nondimensionalize(p);
    c.roots = v == ModelVariant::MhtAllee ? interior_roots_allee(np)
                                          : interior_roots_allee_altfood(np);
    for (std::size_t i = 0; i < c.roots.roots.size(); ++i)
      c.interior.push_back(classify_interior(v, c.roots, i, np));
  } else {
    for (double N : interior_prey_dimensional(v, p))
      c.interior.push_back(classify_interior_dimensional(v, N, p));
  }
  return c;
}

}  // namespace mht
