#pragma once

// Vector fields of the model family, dimensional and rescaled, plus the
// growth/response building blocks they are assembled from.

#include <array>
#include <cmath>
#include <stdexcept>

#include "mht/params.hpp"

namespace mht {

/// Thrown when a dimensional vector field is evaluated where the
/// Leslie-Gower term P/(nN) is singular (N = 0, P > 0, no alternative food).
struct SingularFieldError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Holling type II per-predator consumption rate q*N/(N+a).
/// Monotone increasing in N, bounded above by q.
inline double holling2(double N, double q, double a) {
  if (N < 0 || q <= 0 || a <= 0)
    throw std::domain_error("holling2: need N >= 0, q > 0, a > 0");
  return q * N / (N + a);
}

/// Per-capita prey growth with the Allee multiplier: r*(1 - N/K)*(N - m).
/// Negative on [0, m) for 0 < m < K; positive on (0, K) for m < 0.
inline double allee_per_capita(double N, double r, double K, double m) {
  return r * (1.0 - N / K) * (N - m);
}

/// Per-capita predator growth with alternative food: s*(1 - P/(n*N + c)).
/// Vanishes exactly at the prey-dependent carrying capacity P = n*N + c.
inline double predator_per_capita_altfood(double N, double P, double s, double n, double c) {
  const double cap = n * N + c;
  if (cap == 0.0)
    throw std::domain_error("predator_per_capita_altfood: n*N + c = 0 (singular Leslie-Gower limit)");
  return s * (1.0 - P / cap);
}

/// The cubic factor g(u) = (u+A)(1-u)(u-M) shared by the rescaled prey
/// nullclines: the interior prey nullcline is v = g(u)/Q.
inline double growth_cubic(double u, double A, double M) {
  return (u + A) * (1.0 - u) * (u - M);
}

/// g'(u) expanded by the product rule.
inline double growth_cubic_prime(double u, double A, double M) {
  return (1.0 - u) * (u - M) + (u + A) * (1.0 - u) - (u + A) * (u - M);
}

/// Right-hand side of the dimensional ODE for the given variant.
/// Axis invariance is exact: N = 0 forces dN/dt = 0 (where defined) and
/// P = 0 forces dP/dt = 0. Throws SingularFieldError at N = 0, P > 0 for
/// the variants without alternative food.
inline std::array<double, 2> vector_field(ModelVariant v, const State& x,
                                          const DimensionalParams& p) {
  const double N = x.prey, P = x.predator;
  if (N < 0 || P < 0)
    throw std::domain_error("vector_field: state outside the closed first quadrant");

  double dN;
  switch (v) {
    case ModelVariant::LeslieGower:
      dN = p.r * N * (1.0 - N / p.K) - p.q * N * P;
      break;
    case ModelVariant::Mht:
    case ModelVariant::MhtAltFood:
      dN = p.r * N * (1.0 - N / p.K) - p.q * N * P / (N + p.a);
      break;
    case ModelVariant::MhtAllee:
    case ModelVariant::MhtAlleeAltFood:
      dN = p.r * N * (1.0 - N / p.K) * (N - p.m) - p.q * N * P / (N + p.a);
      break;
    default:
      throw std::invalid_argument("vector_field: unknown variant");
  }

  double dP = 0.0;
  if (P > 0) {
    if (has_alt_food(v)) {
      dP = p.s * P * (1.0 - P / (p.n * N + p.c));
    } else {
      if (N == 0)
        throw SingularFieldError(
            "vector_field: Leslie-Gower term P/(nN) is singular at N = 0 with P > 0");
      dP = p.s * P * (1.0 - P / (p.n * N));
    }
  }
  return {dN, dP};
}

/// Right-hand side of the rescaled ODE. Only the two Allee variants have a
/// rescaled form; the others throw std::invalid_argument.
///
/// MhtAllee:         du/dtau = u^2 ((u+A)(1-u)(u-M) - Q v)
///                   dv/dtau = S v (u+A)(u - v)
/// MhtAlleeAltFood:  du/dtau = u (u+C) ((u+A)(1-u)(u-M) - Q v)
///                   dv/dtau = S v (u+A)(u - v + C)
///
/// Both are polynomial, hence defined (nonsingular) at u = 0.
inline std::array<double, 2> vector_field_rescaled(ModelVariant v, const State& x,
                                                   const NonDimParams& np) {
  const double u = x.prey, w = x.predator;
  if (u < 0 || w < 0)
    throw std::domain_error("vector_field_rescaled: state outside the closed first quadrant");
  const double bracket = growth_cubic(u, np.A, np.M) - np.Q * w;
  switch (v) {
    case ModelVariant::MhtAllee:
      return {u * u * bracket, np.S * w * (u + np.A) * (u - w)};
    case ModelVariant::MhtAlleeAltFood:
      return {u * (u + np.C) * bracket, np.S * w * (u + np.A) * (u - w + np.C)};
    default:
      throw std::invalid_argument(
          "vector_field_rescaled: no rescaled form for this variant; analyze it dimensionally");
  }
}

/// dt/dtau along a rescaled orbit: the positive time-reparametrisation factor
/// relating the rescaled clock tau to dimensional time t.
///   MhtAllee:        u (u+A) / (r K)
///   MhtAlleeAltFood: (u+A)(u+C) / (r K)
inline double rescaled_time_factor(ModelVariant v, double u, const NonDimParams& np,
                                   double r, double K) {
  switch (v) {
    case ModelVariant::MhtAllee:
      return u * (u + np.A) / (r * K);
    case ModelVariant::MhtAlleeAltFood:
      return (u + np.A) * (u + np.C) / (r * K);
    default:
      throw std::invalid_argument("rescaled_time_factor: variant has no rescaled form");
  }
}

}  // namespace mht
