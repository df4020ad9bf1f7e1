#pragma once

// Parameter sets, state types and model-variant tags for the May--Holling--Tanner
// predator-prey family (Leslie-Gower base, Holling type II response, optional
// Allee effect on the prey and alternative food for the predator).

#include <cmath>
#include <stdexcept>
#include <string>

namespace mht {

/// The five model variants handled by this library.
enum class ModelVariant {
  LeslieGower,        ///< logistic prey, linear predation, Leslie-Gower predator
  Mht,                ///< Holling type II predation
  MhtAllee,           ///< Holling II + Allee multiplier (N - m) on prey growth
  MhtAltFood,         ///< Holling II + predator carrying capacity n*N + c
  MhtAlleeAltFood,    ///< both modifications
};

inline const char* variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::LeslieGower:     return "leslie_gower";
    case ModelVariant::Mht:             return "mht";
    case ModelVariant::MhtAllee:        return "mht_allee";
    case ModelVariant::MhtAltFood:      return "mht_altfood";
    case ModelVariant::MhtAlleeAltFood: return "mht_allee_altfood";
  }
  return "unknown";
}

inline ModelVariant variant_from_name(const std::string& name) {
  if (name == "leslie_gower")      return ModelVariant::LeslieGower;
  if (name == "mht")               return ModelVariant::Mht;
  if (name == "mht_allee")         return ModelVariant::MhtAllee;
  if (name == "mht_altfood")       return ModelVariant::MhtAltFood;
  if (name == "mht_allee_altfood") return ModelVariant::MhtAlleeAltFood;
  throw std::invalid_argument("unknown model variant: '" + name + "'");
}

/// True if the variant carries the Allee multiplier (and so a meaningful m).
inline bool uses_allee(ModelVariant v) {
  return v == ModelVariant::MhtAllee || v == ModelVariant::MhtAlleeAltFood;
}

/// True if the predator has the alternative food offset c.
inline bool has_alt_food(ModelVariant v) {
  return v == ModelVariant::MhtAltFood || v == ModelVariant::MhtAlleeAltFood;
}

/// True if the dimensional predator equation is singular at N = 0 with P > 0
/// (the Leslie-Gower term P/(nN) has no alternative-food regularisation).
inline bool singular_at_zero_prey(ModelVariant v) { return !has_alt_food(v); }

/// True if the variant has a polynomial rescaled form implemented here.
/// Only the two Allee variants are rescaled; the rest are analysed
/// dimensionally.
inline bool has_rescaled_form(ModelVariant v) { return uses_allee(v); }

/// Ecological parameters in their original units.
///
/// r  prey intrinsic growth rate (1/yr)
/// K  prey carrying capacity (voles/ha)
/// q  maximum predation rate (voles/yr/weasel)
/// a  half-saturation prey density (voles/ha)
/// s  predator intrinsic growth rate (1/yr)
/// n  prey-to-predator conversion quality (weasels/vole)
/// c  alternative-food carrying-capacity offset (weasels)
/// m  Allee threshold (voles/ha); m > 0 strong, m < 0 weak
struct DimensionalParams {
  double r = 4.0;
  double K = 150.0;
  double q = 700.0;
  double a = 6.0;
  double s = 1.25;
  double n = 0.025;
  double c = 0.01;
  double m = 15.0;

  void validate() const {
    auto bad = [](const char* name, double v) {
      throw std::domain_error(std::string("parameter ") + name + " = " +
                              std::to_string(v) + " violates its constraint");
    };
    if (!(r > 0) || !std::isfinite(r)) bad("r", r);
    if (!(K > 0) || !std::isfinite(K)) bad("K", K);
    if (!(q > 0) || !std::isfinite(q)) bad("q", q);
    if (!(a > 0) || !std::isfinite(a)) bad("a", a);
    if (!(s > 0) || !std::isfinite(s)) bad("s", s);
    if (!(n > 0) || !std::isfinite(n)) bad("n", n);
    if (!(c >= 0) || !std::isfinite(c)) bad("c", c);
    if (!(m < K) || !std::isfinite(m)) bad("m", m);
  }
};

/// Dimensionless parameters of the rescaled systems:
///   A = a/K, M = m/K, Q = q*n/(r*K), S = s/(r*K), C = c/(n*K).
struct NonDimParams {
  double A = 0.0;
  double C = 0.0;
  double Q = 0.0;
  double S = 0.0;
  double M = 0.0;

  void validate() const {
    auto bad = [](const char* name, double v) {
      throw std::domain_error(std::string("rescaled parameter ") + name + " = " +
                              std::to_string(v) + " violates its constraint");
    };
    if (!(A > 0) || !std::isfinite(A)) bad("A", A);
    if (!(C >= 0) || !std::isfinite(C)) bad("C", C);
    if (!(Q > 0) || !std::isfinite(Q)) bad("Q", Q);
    if (!(S > 0) || !std::isfinite(S)) bad("S", S);
    if (!(M < 1) || !std::isfinite(M)) bad("M", M);
  }
};

/// Rescale the dimensional parameters. Throws std::domain_error on invalid
/// input (in particular K, r or n equal to zero).
inline NonDimParams nondimensionalize(const DimensionalParams& p) {
  if (p.K == 0 || p.r == 0 || p.n == 0)
    throw std::domain_error("nondimensionalize: K, r and n must be nonzero");
  p.validate();
  NonDimParams np;
  np.A = p.a / p.K;
  np.M = p.m / p.K;
  np.Q = p.q * p.n / (p.r * p.K);
  np.S = p.s / (p.r * p.K);
  np.C = p.c / (p.n * p.K);
  np.validate();
  return np;
}

/// Coordinate frame of a state or trajectory.
enum class Frame { Dimensional, Rescaled };

inline const char* frame_name(Frame f) {
  return f == Frame::Dimensional ? "dimensional" : "rescaled";
}

/// A population state: (N, P) in voles/ha and weasels/ha when dimensional,
/// (u, v) when rescaled. The model lives on the closed first quadrant.
struct State {
  double prey = 0.0;
  double predator = 0.0;
  Frame frame = Frame::Dimensional;
};

inline State to_rescaled(const State& x, const DimensionalParams& p) {
  if (x.frame == Frame::Rescaled) return x;
  return {x.prey / p.K, x.predator / (p.n * p.K), Frame::Rescaled};
}

inline State to_dimensional(const State& x, const DimensionalParams& p) {
  if (x.frame == Frame::Dimensional) return x;
  return {x.prey * p.K, x.predator * p.n * p.K, Frame::Dimensional};
}

}  // namespace mht
