#pragma once

// Basin-of-attraction maps: a parallel sweep of detect_attractor over a grid
// of initial conditions, plus the saddle-separatrix helper used to audit
// basin boundaries.

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "mht/attractor.hpp"
#include "mht/parallel.hpp"

namespace mht {

struct BasinSpec {
  double prey_lo = 0, prey_hi = 0;      // 0,0 => defaults (0, K]
  double pred_lo = 0, pred_hi = 0;      // 0,0 => defaults (0, 1.1 n K]
  int nx = 100, ny = 100;

  void resolve(const DimensionalParams& p) {
    if (prey_hi <= prey_lo) {
      prey_lo = 0;
      prey_hi = p.K;
    }
    if (pred_hi <= pred_lo) {
      pred_lo = 0;
      pred_hi = 1.1 * p.n * p.K;
    }
  }
};

struct BasinGrid {
  ModelVariant variant = ModelVariant::Mht;
  DimensionalParams params;
  std::vector<double> prey_axis, predator_axis;  // cell centres, axes excluded
  std::vector<AttractorKind> cells;              // row-major: cells[iy * nx + ix]
  double undetermined_fraction = 0;
};

/// Basin map over the grid of cell centres (cells exactly on the axes are
/// excluded by construction: the first centre sits half a cell inside).
/// Per-cell failures become undetermined labels; the merge is a static index
/// partition, so the result is identical for any thread count. A cooperative
/// cancellation flag stops work on cells not yet started; cancelled cells
/// stay undetermined.
inline BasinGrid basin_map(ModelVariant v, const DimensionalParams& p, BasinSpec spec,
                           const DetectOptions& opt = {}, int threads = 1,
                           const std::atomic<bool>* cancel = nullptr) {
  p.validate();
  spec.resolve(p);
  if (spec.nx < 1 || spec.ny < 1) throw std::domain_error("basin_map: grid must be positive");

  BasinGrid grid;
  grid.variant = v;
  grid.params = p;
  grid.prey_axis.resize(spec.nx);
  grid.predator_axis.resize(spec.ny);
  const double dx = (spec.prey_hi - spec.prey_lo) / spec.nx;
  const double dy = (spec.pred_hi - spec.pred_lo) / spec.ny;
  for (int i = 0; i < spec.nx; ++i) grid.prey_axis[i] = spec.prey_lo + dx * (i + 0.5);
  for (int j = 0; j < spec.ny; ++j) grid.predator_axis[j] = spec.pred_lo + dy * (j + 0.5);
  grid.cells.assign(static_cast<std::size_t>(spec.nx) * spec.ny, AttractorKind::Undetermined);

  parallel_for_indexed(grid.cells.size(), threads, [&](std::size_t idx) {
    if (cancel && cancel->load(std::memory_order_relaxed)) return;
    const int ix = static_cast<int>(idx % spec.nx);
    const int iy = static_cast<int>(idx / spec.nx);
    const State ic{grid.prey_axis[ix], grid.predator_axis[iy], Frame::Dimensional};
    try {
      grid.cells[idx] = detect_attractor(v, p, ic, opt).kind;
    } catch (const std::exception&) {
      grid.cells[idx] = AttractorKind::Undetermined;
    }
  });

  std::size_t undet = 0;
  for (const auto k : grid.cells)
    if (k == AttractorKind::Undetermined) ++undet;
  grid.undetermined_fraction = grid.cells.empty() ? 0.0
                                                  : static_cast<double>(undet) / grid.cells.size();
  return grid;
}

/// Polyline along the stable manifold of an interior saddle, computed by
/// reversed-time integration from small offsets along the stable
/// eigendirection. Points are reported in dimensional units, ordered from
/// one end of the manifold through the saddle to the other.
inline std::vector<State> saddle_separatrix(ModelVariant v, const DimensionalParams& p,
                                            const EquilibriumReport& saddle,
                                            double span_clock = 0.0,
                                            std::size_t max_steps = 200'000) {
  const bool rescaled = has_rescaled_form(v);
  const NonDimParams np = rescaled ? nondimensionalize(p) : NonDimParams{};

  // stable eigendirection of the saddle
  const Mat2 J = saddle.jacobian;
  const auto eigs = J.eigenvalues();
  double lam = 0;
  bool found = false;
  for (const auto& l : eigs)
    if (l.imag() == 0.0 && l.real() < 0) {
      lam = l.real();
      found = true;
    }
  if (!found) throw std::domain_error("saddle_separatrix: equilibrium has no stable direction");
  const auto dir = J.eigenvector(lam);

  auto rhs = [&](double, const StateVec<2>& y, StateVec<2>& dy) {
    const State x{std::max(y[0], 0.0), std::max(y[1], 0.0),
                  rescaled ? Frame::Rescaled : Frame::Dimensional};
    const auto d = rescaled ? vector_field_rescaled(v, x, np) : vector_field(v, x, p);
    dy[0] = -d[0];  // reversed time: the stable manifold becomes unstable
    dy[1] = -d[1];
  };

  const double clock = span_clock > 0 ? span_clock : (rescaled ? 5e5 : 500.0);
  std::vector<State> fwd, bwd;
  for (int side = 0; side < 2; ++side) {
    const double sign = side == 0 ? 1.0 : -1.0;
    const double eps = 1e-7 * (1.0 + std::abs(saddle.location.prey));
    StateVec<2> y{saddle.location.prey + sign * eps * dir[0],
                  saddle.location.predator + sign * eps * dir[1]};
    if (y[0] < 0 || y[1] < 0) continue;
    Dopri5<2, decltype(rhs)> st(rhs, 1e-9, 1e-12);
    st.clamp_first_quadrant(2);
    st.reset(0.0, y);
    auto& arc = side == 0 ? fwd : bwd;
    arc.push_back(rescaled ? to_dimensional(State{y[0], y[1], Frame::Rescaled}, p)
                           : State{y[0], y[1], Frame::Dimensional});
    const double prey_cap = rescaled ? 3.0 : 3.0 * p.K;
    const double pred_cap = rescaled ? 3.0 : 3.0 * p.n * p.K;
    for (std::size_t k = 0; k < max_steps && st.time() < clock; ++k) {
      if (!st.step()) break;
      const auto& s = st.state();
      arc.push_back(rescaled ? to_dimensional(State{s[0], s[1], Frame::Rescaled}, p)
                             : State{s[0], s[1], Frame::Dimensional});
      if (s[0] <= 1e-12 || s[1] <= 1e-12 || s[0] > prey_cap || s[1] > pred_cap) break;
    }
  }

  std::vector<State> out;
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) out.push_back(*it);
  out.push_back(to_dimensional(saddle.location, p));
  for (const auto& s : fwd) out.push_back(s);
  return out;
}

/// Signed side of a point relative to a polyline (positive above/left of the
/// nearest segment). Used to compare basin labels against the separatrix.
inline double side_of_polyline(const std::vector<State>& poly, double prey, double predator) {
  double best_d2 = std::numeric_limits<double>::infinity();
  double best_side = 0;
  for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
    const double ax = poly[i].prey, ay = poly[i].predator;
    const double bx = poly[i + 1].prey, by = poly[i + 1].predator;
    const double vx = bx - ax, vy = by - ay;
    const double len2 = vx * vx + vy * vy;
    if (len2 == 0) continue;
    double t = ((prey - ax) * vx + (predator - ay) * vy) / len2;
    t = std::min(1.0, std::max(0.0, t));
    const double px = ax + t * vx, py = ay + t * vy;
    const double d2 = (prey - px) * (prey - px) + (predator - py) * (predator - py);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_side = vx * (predator - ay) - vy * (prey - ax);
    }
  }
  return best_side;
}

}  // namespace mht
