#pragma once

// Adaptive Dormand-Prince 5(4) integration with dense output, boundary
// events and first-quadrant clamping for the model family.
//
// The two Allee variants are integrated in their rescaled polynomial frame
// (nonsingular at u = 0); when a dimensional-clock trajectory is requested
// the state is augmented with dimensional time via the positive
// reparametrisation factor, and samples are emitted in dimensional units.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "mht/models.hpp"
#include "mht/params.hpp"

namespace mht {

template <std::size_t N>
using StateVec = std::array<double, N>;

/// Thrown when the step size underflows (stiffness or a singular approach);
/// carries the offending state.
struct IntegrationError : std::runtime_error {
  double t;
  State at;
  IntegrationError(const std::string& msg, double t_, State at_)
      : std::runtime_error(msg), t(t_), at(at_) {}
};

enum class EventKind {
  PreyExtinctThreshold,
  PredatorExtinctThreshold,
  ConvergedToPoint,
  ConvergedToCycle,
  MaxTime,
};

inline const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::PreyExtinctThreshold:     return "prey_extinct_threshold";
    case EventKind::PredatorExtinctThreshold: return "predator_extinct_threshold";
    case EventKind::ConvergedToPoint:         return "converged_to_point";
    case EventKind::ConvergedToCycle:         return "converged_to_cycle";
    case EventKind::MaxTime:                  return "max_time";
  }
  return "?";
}

struct TrajectoryEvent {
  double time = 0;
  EventKind kind = EventKind::MaxTime;
  State state;
};

struct TrajectorySample {
  double time = 0;
  State state;
};

struct IntegrationDiagnostics {
  std::uint64_t steps = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
  double min_component = 0.0;  // most negative raw component seen before clamping
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<TrajectoryEvent> events;
  Frame frame = Frame::Dimensional;
  IntegrationDiagnostics diag;
};

struct IntegrateOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double prey_extinct_threshold = 1e-8;      // in the integration frame
  double predator_extinct_threshold = 1e-8;  // in the integration frame
  bool extinction_events = true;
  bool reverse_time = false;       // integrate the negated field
  double initial_step = 0.0;       // 0 => automatic
  std::uint64_t max_steps = 2'000'000;
  std::vector<double> sample_times;  // reporting clock; empty => accepted steps

  void validate() const {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-3))
      throw std::domain_error("IntegrateOptions: rel_tol must lie in [1e-12, 1e-3]");
    if (!(abs_tol > 0))
      throw std::domain_error("IntegrateOptions: abs_tol must be positive");
  }
};

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with the standard 4th-order continuous extension.
// ---------------------------------------------------------------------------

namespace dp5 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;
}  // namespace dp5

/// One adaptive integrator instance; Rhs is callable as rhs(t, y, dy).
template <std::size_t N, typename Rhs>
class Dopri5 {
 public:
  Dopri5(Rhs rhs, double rel_tol, double abs_tol)
      : rhs_(std::move(rhs)), rtol_(rel_tol), atol_(abs_tol) {}

  void reset(double t, const StateVec<N>& y, double h_init = 0.0) {
    t_ = t;
    y_ = y;
    rhs_(t_, y_, k1_);
    ++evals_;
    h_ = h_init > 0 ? h_init : guess_initial_step();
  }

  double time() const { return t_; }
  double prev_time() const { return tprev_; }
  double last_step() const { return t_ - tprev_; }
  const StateVec<N>& state() const { return y_; }
  const StateVec<N>& prev_state() const { return yprev_; }
  std::uint64_t rhs_evals() const { return evals_; }
  std::uint64_t rejected() const { return rejected_; }
  double min_component_seen() const { return min_component_; }
  double suggested_step() const { return h_; }

  /// Cap the next attempted step so the integration lands exactly on t_stop.
  void limit_step_to(double t_stop) {
    if (t_ + h_ > t_stop) h_ = t_stop - t_;
  }

  /// Take one accepted step. Returns false on step-size underflow.
  bool step() {
    for (int attempt = 0; attempt < 64; ++attempt) {
      if (!(h_ > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_))))
        return false;

      StateVec<N> k2, k3, k4, k5, k6, k7, w, ynew, err;
      using namespace dp5;
      for (std::size_t i = 0; i < N; ++i) w[i] = y_[i] + h_ * a21 * k1_[i];
      rhs_(t_ + c2 * h_, w, k2);
      for (std::size_t i = 0; i < N; ++i) w[i] = y_[i] + h_ * (a31 * k1_[i] + a32 * k2[i]);
      rhs_(t_ + c3 * h_, w, k3);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] + h_ * (a41 * k1_[i] + a42 * k2[i] + a43 * k3[i]);
      rhs_(t_ + c4 * h_, w, k4);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] + h_ * (a51 * k1_[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      rhs_(t_ + c5 * h_, w, k5);
      for (std::size_t i = 0; i < N; ++i)
        w[i] = y_[i] + h_ * (a61 * k1_[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      rhs_(t_ + h_, w, k6);
      for (std::size_t i = 0; i < N; ++i)
        ynew[i] = y_[i] + h_ * (a71 * k1_[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      rhs_(t_ + h_, ynew, k7);
      evals_ += 6;

      double errnorm = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        err[i] = h_ * (e1 * k1_[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(ynew[i]));
        const double r = err[i] / sc;
        errnorm += r * r;
      }
      errnorm = std::sqrt(errnorm / N);

      bool component_violation = false;
      if (clamp_nonnegative_) {
        for (std::size_t i = 0; i < nclamp_ && i < N; ++i) {
          min_component_ = std::min(min_component_, ynew[i]);
          if (ynew[i] < -1e-13) component_violation = true;
        }
      }

      if (errnorm <= 1.0 && !component_violation) {
        // accept; keep dense-output data for this step
        tprev_ = t_;
        yprev_ = y_;
        const double hstep = h_;
        for (std::size_t i = 0; i < N; ++i) {
          const double ydiff = ynew[i] - y_[i];
          const double bspl = hstep * k1_[i] - ydiff;
          rcont1_[i] = y_[i];
          rcont2_[i] = ydiff;
          rcont3_[i] = bspl;
          rcont4_[i] = ydiff - hstep * k7[i] - bspl;
          rcont5_[i] = hstep * (d1 * k1_[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                d6 * k6[i] + d7 * k7[i]);
        }
        t_ += hstep;
        y_ = ynew;
        if (clamp_nonnegative_)
          for (std::size_t i = 0; i < nclamp_ && i < N; ++i)
            if (y_[i] < 0.0) y_[i] = 0.0;
        k1_ = k7;  // FSAL
        const double fac =
            std::min(maxfac_, std::max(0.2, 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2)));
        h_ = hstep * fac;
        maxfac_ = 6.0;
        return true;
      }

      ++rejected_;
      if (component_violation && errnorm <= 1.0) {
        h_ *= 0.5;  // force accuracy at the quadrant boundary
      } else {
        h_ *= std::max(0.1, 0.9 * std::pow(errnorm, -0.25));
      }
      maxfac_ = 1.0;  // no growth right after a rejection
    }
    return false;
  }

  /// Dense evaluation on the last accepted step, theta in [0,1].
  void dense(double theta, StateVec<N>& out) const {
    const double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < N; ++i)
      out[i] = rcont1_[i] +
               theta * (rcont2_[i] + th1 * (rcont3_[i] + theta * (rcont4_[i] + th1 * rcont5_[i])));
  }

  /// Restart from an interior point of the last step (after applying an
  /// event action); invalidates FSAL.
  void restart(double t, const StateVec<N>& y) {
    t_ = t;
    y_ = y;
    rhs_(t_, y_, k1_);
    ++evals_;
  }

  /// First quadrant handling: clamp the first `ncomponents` components at 0.
  void clamp_first_quadrant(std::size_t ncomponents) {
    clamp_nonnegative_ = true;
    nclamp_ = ncomponents;
  }

 private:
  double guess_initial_step() const {
    double ynorm = 0, fnorm = 0;
    for (std::size_t i = 0; i < N; ++i) {
      ynorm = std::max(ynorm, std::abs(y_[i]));
      fnorm = std::max(fnorm, std::abs(k1_[i]));
    }
    if (fnorm < 1e-300) return 1e-6;
    return std::max(1e-10, 0.01 * (atol_ + rtol_ * ynorm) / (rtol_ * fnorm + 1e-300) *
                               std::min(1.0, fnorm));
  }

  Rhs rhs_;
  double rtol_, atol_;
  double t_ = 0, tprev_ = 0, h_ = 0;
  StateVec<N> y_{}, yprev_{}, k1_{};
  StateVec<N> rcont1_{}, rcont2_{}, rcont3_{}, rcont4_{}, rcont5_{};
  std::uint64_t evals_ = 0, rejected_ = 0;
  double min_component_ = 0.0;
  double maxfac_ = 6.0;
  bool clamp_nonnegative_ = false;
  std::size_t nclamp_ = 0;
};

// ---------------------------------------------------------------------------
// Threshold-event machinery shared by the drivers.
// ---------------------------------------------------------------------------

namespace detail {

/// Bisect theta on the dense output of the last step until the crossing of
/// value `thr` (falling) of component `comp` is bracketed to ~1e-14 of the
/// step, and return (theta, state at theta).
template <std::size_t N, typename Stepper>
inline double refine_falling_crossing(const Stepper& st, std::size_t comp, double thr,
                                      StateVec<N>& out) {
  double lo = 0.0, hi = 1.0;
  StateVec<N> w;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    st.dense(mid, w);
    if (w[comp] - thr > 0)
      lo = mid;
    else
      hi = mid;
  }
  st.dense(hi, w);
  out = w;
  return hi;
}

/// Rising crossing of component `comp` through `target`.
template <std::size_t N, typename Stepper>
inline double refine_rising_crossing(const Stepper& st, std::size_t comp, double target,
                                     StateVec<N>& out) {
  double lo = 0.0, hi = 1.0;
  StateVec<N> w;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    st.dense(mid, w);
    if (w[comp] - target < 0)
      lo = mid;
    else
      hi = mid;
  }
  st.dense(hi, w);
  out = w;
  return hi;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Trajectory drivers.
// ---------------------------------------------------------------------------

namespace detail {

/// Dimensional 2D driver for LeslieGower/Mht/MhtAltFood (and any variant when
/// forced): integrates the dimensional field from t=0 to t_end.
inline Trajectory integrate_dimensional(ModelVariant v, const DimensionalParams& p,
                                        State ic0, double t_end,
                                        const IntegrateOptions& opt) {
  const bool singular = singular_at_zero_prey(v);
  const double sgn = opt.reverse_time ? -1.0 : 1.0;
  // Stage values may overshoot slightly below zero; clamp them back. For the
  // singular variants a floor keeps the Leslie-Gower term finite so that a
  // stage touching the axis rejects the step instead of throwing.
  const double prey_floor = singular ? 1e-300 : 0.0;
  auto rhs = [&, sgn, prey_floor](double /*t*/, const StateVec<2>& y, StateVec<2>& dy) {
    const auto d = vector_field(v, State{std::max(y[0], prey_floor), std::max(y[1], 0.0),
                                         Frame::Dimensional}, p);
    dy[0] = sgn * d[0];
    dy[1] = sgn * d[1];
  };

  Trajectory tr;
  tr.frame = Frame::Dimensional;

  Dopri5<2, decltype(rhs)> st(rhs, opt.rel_tol, opt.abs_tol);
  st.clamp_first_quadrant(2);
  StateVec<2> y{ic0.prey, ic0.predator};
  st.reset(0.0, y, opt.initial_step);

  auto record = [&tr](double t, const StateVec<2>& s) {
    tr.samples.push_back({t, State{s[0], s[1], Frame::Dimensional}});
  };
  std::size_t next_sample = 0;
  const bool sampling = !opt.sample_times.empty();
  if (!sampling) record(0.0, y);

  bool prey_armed = opt.extinction_events && ic0.prey > opt.prey_extinct_threshold;
  bool pred_armed = opt.extinction_events && ic0.predator > opt.predator_extinct_threshold;

  std::uint64_t steps = 0;
  while (st.time() < t_end) {
    st.limit_step_to(t_end);
    if (!st.step())
      throw IntegrationError("step-size underflow", st.time(),
                             State{st.state()[0], st.state()[1], Frame::Dimensional});
    if (++steps > opt.max_steps)
      throw IntegrationError("step budget exhausted", st.time(),
                             State{st.state()[0], st.state()[1], Frame::Dimensional});

    // samples inside the accepted step
    if (sampling) {
      StateVec<2> w;
      while (next_sample < opt.sample_times.size() &&
             opt.sample_times[next_sample] <= st.time() + 1e-300) {
        const double ts = opt.sample_times[next_sample];
        if (ts < st.prev_time()) { ++next_sample; continue; }
        const double theta =
            st.last_step() > 0 ? (ts - st.prev_time()) / st.last_step() : 0.0;
        st.dense(std::min(1.0, std::max(0.0, theta)), w);
        record(ts, w);
        ++next_sample;
      }
    }

    // threshold events
    bool restarted = false;
    if (prey_armed && st.state()[0] <= opt.prey_extinct_threshold) {
      StateVec<2> w;
      const double theta =
          refine_falling_crossing<2>(st, 0, opt.prey_extinct_threshold, w);
      const double te = st.prev_time() + theta * st.last_step();
      tr.events.push_back({te, EventKind::PreyExtinctThreshold,
                           State{w[0], w[1], Frame::Dimensional}});
      prey_armed = false;
      if (singular) {
        // absorbing boundary: the Leslie-Gower term cannot be continued
        if (!sampling) record(te, w);
        tr.diag.steps = steps;
        tr.diag.rejected = st.rejected();
        tr.diag.rhs_evals = st.rhs_evals();
        tr.diag.min_component = st.min_component_seen();
        return tr;
      }
      w[0] = 0.0;  // absorb
      st.restart(te, w);
      restarted = true;
    }
    if (!restarted && pred_armed && st.state()[1] <= opt.predator_extinct_threshold) {
      StateVec<2> w;
      const double theta =
          refine_falling_crossing<2>(st, 1, opt.predator_extinct_threshold, w);
      const double te = st.prev_time() + theta * st.last_step();
      tr.events.push_back({te, EventKind::PredatorExtinctThreshold,
                           State{w[0], w[1], Frame::Dimensional}});
      pred_armed = false;
      w[1] = 0.0;
      st.restart(te, w);
      restarted = true;
    }

    if (!sampling) record(st.time(), st.state());
  }

  tr.events.push_back({t_end, EventKind::MaxTime,
                       State{st.state()[0], st.state()[1], Frame::Dimensional}});
  tr.diag.steps = steps;
  tr.diag.rejected = st.rejected();
  tr.diag.rhs_evals = st.rhs_evals();
  tr.diag.min_component = st.min_component_seen();
  return tr;
}

/// Rescaled 3D driver for the Allee variants with a dimensional clock:
/// state (u, v, t_dim), runs until t_dim = t_end, reports dimensional
/// samples. Prey extinction freezes the clock of the plain Allee system, so
/// there the event is terminal.
inline Trajectory integrate_allee_dimensional_clock(ModelVariant v,
                                                    const DimensionalParams& p,
                                                    State ic0, double t_end,
                                                    const IntegrateOptions& opt) {
  const NonDimParams np = nondimensionalize(p);
  const double sgn = opt.reverse_time ? -1.0 : 1.0;
  auto rhs = [&, sgn](double /*t*/, const StateVec<3>& y, StateVec<3>& dy) {
    const State x{std::max(y[0], 0.0), std::max(y[1], 0.0), Frame::Rescaled};
    const auto d = vector_field_rescaled(v, x, np);
    dy[0] = sgn * d[0];
    dy[1] = sgn * d[1];
    dy[2] = rescaled_time_factor(v, x.prey, np, p.r, p.K);  // clock always runs forward
  };

  Trajectory tr;
  tr.frame = Frame::Dimensional;

  Dopri5<3, decltype(rhs)> st(rhs, opt.rel_tol, opt.abs_tol);
  st.clamp_first_quadrant(2);
  const State icr = to_rescaled(ic0, p);
  StateVec<3> y{icr.prey, icr.predator, 0.0};
  st.reset(0.0, y, opt.initial_step);

  auto to_dim = [&](const StateVec<3>& w) {
    return State{w[0] * p.K, w[1] * p.n * p.K, Frame::Dimensional};
  };
  auto record = [&](double tdim, const StateVec<3>& w) {
    tr.samples.push_back({tdim, to_dim(w)});
  };
  std::size_t next_sample = 0;
  const bool sampling = !opt.sample_times.empty();
  if (!sampling) record(0.0, y);

  bool prey_armed = opt.extinction_events && icr.prey > opt.prey_extinct_threshold;
  bool pred_armed = opt.extinction_events && icr.predator > opt.predator_extinct_threshold;

  std::uint64_t steps = 0;
  while (st.state()[2] < t_end) {
    if (!st.step())
      throw IntegrationError("step-size underflow", st.state()[2], to_dim(st.state()));
    if (++steps > opt.max_steps)
      throw IntegrationError("step budget exhausted", st.state()[2], to_dim(st.state()));

    if (sampling) {
      StateVec<3> w;
      while (next_sample < opt.sample_times.size() &&
             opt.sample_times[next_sample] <= st.state()[2]) {
        const double ts = opt.sample_times[next_sample];
        if (ts < st.prev_state()[2]) { ++next_sample; continue; }
        refine_rising_crossing<3>(st, 2, ts, w);
        record(ts, w);
        ++next_sample;
      }
    }

    bool restarted = false;
    if (prey_armed && st.state()[0] <= opt.prey_extinct_threshold) {
      StateVec<3> w;
      const double theta =
          refine_falling_crossing<3>(st, 0, opt.prey_extinct_threshold, w);
      const double taue = st.prev_time() + theta * st.last_step();
      tr.events.push_back({w[2], EventKind::PreyExtinctThreshold, to_dim(w)});
      prey_armed = false;
      if (v == ModelVariant::MhtAllee) {
        // u = 0 freezes the dimensional clock; stop here
        if (!sampling) record(w[2], w);
        break;
      }
      w[0] = 0.0;
      st.restart(taue, w);
      restarted = true;
    }
    if (!restarted && pred_armed && st.state()[1] <= opt.predator_extinct_threshold) {
      StateVec<3> w;
      const double theta =
          refine_falling_crossing<3>(st, 1, opt.predator_extinct_threshold, w);
      const double taue = st.prev_time() + theta * st.last_step();
      tr.events.push_back({w[2], EventKind::PredatorExtinctThreshold, to_dim(w)});
      pred_armed = false;
      w[1] = 0.0;
      st.restart(taue, w);
      restarted = true;
    }

    if (!restarted && st.state()[2] >= t_end) {
      // land exactly on the requested dimensional horizon
      StateVec<3> w;
      refine_rising_crossing<3>(st, 2, t_end, w);
      if (!sampling) record(t_end, w);
      tr.events.push_back({t_end, EventKind::MaxTime, to_dim(w)});
      tr.diag.steps = steps;
      tr.diag.rejected = st.rejected();
      tr.diag.rhs_evals = st.rhs_evals();
      tr.diag.min_component = st.min_component_seen();
      return tr;
    }
    if (!sampling) record(st.state()[2], st.state());
  }

  tr.diag.steps = steps;
  tr.diag.rejected = st.rejected();
  tr.diag.rhs_evals = st.rhs_evals();
  tr.diag.min_component = st.min_component_seen();
  return tr;
}

}  // namespace detail

/// Integrate in the rescaled frame (Allee variants only): rescaled initial
/// condition, tau clock, rescaled samples and thresholds.
inline Trajectory integrate_rescaled(ModelVariant v, const NonDimParams& np, State ic,
                                     double tau_end, const IntegrateOptions& opt = {}) {
  if (!has_rescaled_form(v))
    throw std::invalid_argument("integrate_rescaled: variant has no rescaled form");
  opt.validate();
  np.validate();
  const double sgn = opt.reverse_time ? -1.0 : 1.0;
  auto rhs = [&, sgn](double /*t*/, const StateVec<2>& y, StateVec<2>& dy) {
    const auto d = vector_field_rescaled(
        v, State{std::max(y[0], 0.0), std::max(y[1], 0.0), Frame::Rescaled}, np);
    dy[0] = sgn * d[0];
    dy[1] = sgn * d[1];
  };

  Trajectory tr;
  tr.frame = Frame::Rescaled;
  Dopri5<2, decltype(rhs)> st(rhs, opt.rel_tol, opt.abs_tol);
  st.clamp_first_quadrant(2);
  StateVec<2> y{ic.prey, ic.predator};
  st.reset(0.0, y, opt.initial_step);

  auto record = [&tr](double t, const StateVec<2>& s) {
    tr.samples.push_back({t, State{s[0], s[1], Frame::Rescaled}});
  };
  std::size_t next_sample = 0;
  const bool sampling = !opt.sample_times.empty();
  if (!sampling) record(0.0, y);

  bool prey_armed = opt.extinction_events && ic.prey > opt.prey_extinct_threshold;
  bool pred_armed = opt.extinction_events && ic.predator > opt.predator_extinct_threshold;

  std::uint64_t steps = 0;
  while (st.time() < tau_end) {
    st.limit_step_to(tau_end);
    if (!st.step())
      throw IntegrationError("step-size underflow", st.time(),
                             State{st.state()[0], st.state()[1], Frame::Rescaled});
    if (++steps > opt.max_steps)
      throw IntegrationError("step budget exhausted", st.time(),
                             State{st.state()[0], st.state()[1], Frame::Rescaled});

    if (sampling) {
      StateVec<2> w;
      while (next_sample < opt.sample_times.size() &&
             opt.sample_times[next_sample] <= st.time()) {
        const double ts = opt.sample_times[next_sample];
        if (ts < st.prev_time()) { ++next_sample; continue; }
        const double theta = st.last_step() > 0 ? (ts - st.prev_time()) / st.last_step() : 0.0;
        st.dense(std::min(1.0, std::max(0.0, theta)), w);
        record(ts, w);
        ++next_sample;
      }
    }

    bool restarted = false;
    if (prey_armed && st.state()[0] <= opt.prey_extinct_threshold) {
      StateVec<2> w;
      const double theta = detail::refine_falling_crossing<2>(st, 0, opt.prey_extinct_threshold, w);
      const double te = st.prev_time() + theta * st.last_step();
      tr.events.push_back({te, EventKind::PreyExtinctThreshold, State{w[0], w[1], Frame::Rescaled}});
      prey_armed = false;
      w[0] = 0.0;
      st.restart(te, w);
      restarted = true;
    }
    if (!restarted && pred_armed && st.state()[1] <= opt.predator_extinct_threshold) {
      StateVec<2> w;
      const double theta = detail::refine_falling_crossing<2>(st, 1, opt.predator_extinct_threshold, w);
      const double te = st.prev_time() + theta * st.last_step();
      tr.events.push_back({te, EventKind::PredatorExtinctThreshold, State{w[0], w[1], Frame::Rescaled}});
      pred_armed = false;
      w[1] = 0.0;
      st.restart(te, w);
    }

    if (!sampling) record(st.time(), st.state());
  }

  tr.events.push_back({tau_end, EventKind::MaxTime,
                       State{st.state()[0], st.state()[1], Frame::Rescaled}});
  tr.diag.steps = steps;
  tr.diag.rejected = st.rejected();
  tr.diag.rhs_evals = st.rhs_evals();
  tr.diag.min_component = st.min_component_seen();
  return tr;
}

/// Integrate a dimensional initial condition over a dimensional horizon.
/// LeslieGower/Mht/MhtAltFood march dimensionally; the Allee variants march
/// in the rescaled frame with an augmented dimensional clock and report
/// dimensional samples.
inline Trajectory integrate(ModelVariant v, const DimensionalParams& p, State ic,
                            double t_end, const IntegrateOptions& opt = {}) {
  opt.validate();
  p.validate();
  if (!(t_end > 0)) throw std::domain_error("integrate: t_end must be positive");
  const State icd = to_dimensional(ic, p);
  if (icd.prey < 0 || icd.predator < 0)
    throw std::domain_error("integrate: initial condition outside the first quadrant");
  if (singular_at_zero_prey(v) && icd.prey == 0 && icd.predator > 0)
    throw SingularFieldError("integrate: initial condition on the singular prey axis");

  if (has_rescaled_form(v))
    return detail::integrate_allee_dimensional_clock(v, p, icd, t_end, opt);
  return detail::integrate_dimensional(v, p, icd, t_end, opt);
}

}  // namespace mht
