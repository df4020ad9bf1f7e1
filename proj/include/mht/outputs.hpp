#pragma once

// Machine-readable outputs: fixed-schema CSV writers, the JSON result
// document, and the built-in SVG plots (time series, phase portraits with
// nullclines, locus curves, region and basin maps).

#include <string>
#include <vector>

#include <json.hpp>

#include "mht/attractor.hpp"
#include "mht/basins.hpp"
#include "mht/bifurcation.hpp"
#include "mht/config.hpp"
#include "mht/equilibria.hpp"
#include "mht/integrate.hpp"
#include "mht/svg.hpp"

namespace mht {

// ---------------------------------------------------------------------------
// CSV (schemas are fixed; all numbers full double precision).
// ---------------------------------------------------------------------------

inline std::string csv_trajectory(const Trajectory& tr) {
  std::string out = "time,prey,predator,frame\n";
  for (const auto& s : tr.samples) {
    out += fmt_double(s.time);
    out += ',';
    out += fmt_double(s.state.prey);
    out += ',';
    out += fmt_double(s.state.predator);
    out += ',';
    out += frame_name(s.state.frame);
    out += '\n';
  }
  return out;
}

inline std::string csv_hopf(const std::vector<HopfPoint>& locus) {
  std::string out = "q,s,u_star,residual,det\n";
  for (const auto& hp : locus) {
    out += fmt_double(hp.q);
    out += ',';
    out += fmt_double(hp.s);
    out += ',';
    out += fmt_double(hp.u_star);
    out += ',';
    out += fmt_double(hp.residual);
    out += ',';
    out += fmt_double(hp.det_at);
    out += '\n';
  }
  return out;
}

inline std::string csv_basin(const BasinGrid& grid) {
  std::string out = "prey,predator,label\n";
  for (std::size_t iy = 0; iy < grid.predator_axis.size(); ++iy)
    for (std::size_t ix = 0; ix < grid.prey_axis.size(); ++ix) {
      out += fmt_double(grid.prey_axis[ix]);
      out += ',';
      out += fmt_double(grid.predator_axis[iy]);
      out += ',';
      out += attractor_kind_name(grid.cells[iy * grid.prey_axis.size() + ix]);
      out += '\n';
    }
  return out;
}

inline std::string csv_region(const RegionGrid& grid) {
  std::string out = "q,s,label,uncertain\n";
  for (std::size_t is = 0; is < grid.s_axis.size(); ++is)
    for (std::size_t iq = 0; iq < grid.q_axis.size(); ++iq) {
      const auto& cell = grid.cells[is * grid.q_axis.size() + iq];
      out += fmt_double(grid.q_axis[iq]);
      out += ',';
      out += fmt_double(grid.s_axis[is]);
      out += ',';
      out += region_tag_name(cell.tag);
      out += ',';
      out += cell.uncertain ? "1" : "0";
      out += '\n';
    }
  return out;
}

inline std::string csv_equilibria(const EquilibriumCensus& census) {
  std::string out = "prey,predator,frame,kind,lemma_class,numeric_class,which_lemma,det,trace\n";
  auto row = [&out](const EquilibriumReport& r) {
    out += fmt_double(r.location.prey);
    out += ',';
    out += fmt_double(r.location.predator);
    out += ',';
    out += frame_name(r.location.frame);
    out += ',';
    out += r.kind == EquilibriumKind::Boundary ? "boundary" : "interior";
    out += ',';
    out += lemma_class_name(r.lemma_class);
    out += ',';
    out += numeric_class_name(r.numeric_class);
    out += ',';
    out += r.which_lemma;
    out += ',';
    out += fmt_double(r.det);
    out += ',';
    out += fmt_double(r.trace);
    out += '\n';
  };
  for (const auto& r : census.boundary) row(r);
  for (const auto& r : census.interior) row(r);
  return out;
}

// ---------------------------------------------------------------------------
// JSON result document.
// ---------------------------------------------------------------------------

inline nlohmann::json json_params(const DimensionalParams& p) {
  return {{"r", p.r}, {"K", p.K}, {"q", p.q}, {"a", p.a},
          {"s", p.s}, {"n", p.n}, {"c", p.c}, {"m", p.m}};
}

inline nlohmann::json json_nondim(const NonDimParams& np) {
  return {{"A", np.A}, {"C", np.C}, {"Q", np.Q}, {"S", np.S}, {"M", np.M}};
}

inline nlohmann::json json_state(const State& x) {
  return {{"prey", x.prey}, {"predator", x.predator}, {"frame", frame_name(x.frame)}};
}

inline nlohmann::json json_report(const EquilibriumReport& r) {
  return {{"location", json_state(r.location)},
          {"kind", r.kind == EquilibriumKind::Boundary ? "boundary" : "interior"},
          {"jacobian", {r.jacobian.a11, r.jacobian.a12, r.jacobian.a21, r.jacobian.a22}},
          {"det", r.det},
          {"trace", r.trace},
          {"lemma_class", lemma_class_name(r.lemma_class)},
          {"numeric_class", numeric_class_name(r.numeric_class)},
          {"which_lemma", r.which_lemma}};
}

inline nlohmann::json result_document(const RunConfig& cfg, const std::string& analysis,
                                      nlohmann::json results, nlohmann::json diagnostics) {
  return {{"schema_version", "1.0"},
          {"variant", variant_name(cfg.variant)},
          {"params_dimensional", json_params(cfg.params)},
          {"params_nondimensional", json_nondim(nondimensionalize(cfg.params))},
          {"analysis", analysis},
          {"results", std::move(results)},
          {"diagnostics", std::move(diagnostics)}};
}

// ---------------------------------------------------------------------------
// SVG plots.
// ---------------------------------------------------------------------------

namespace plotting {

inline const char* kSeries[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

inline std::string region_color(RegionTag t) {
  switch (t) {
    case RegionTag::HatchedGreen: return "#bfe8bf";
    case RegionTag::SolidGreen:   return "#2e8b57";
    case RegionTag::Blue:         return "#4169e1";
    case RegionTag::Grey:         return "#9e9e9e";
    case RegionTag::SolidRed:     return "#c62828";
    case RegionTag::HatchedRed:   return "#f2b8b5";
    case RegionTag::SolidBrown:   return "#8b5a2b";
    case RegionTag::HatchedBrown: return "#d9b99b";
  }
  return "#000000";
}

inline std::string basin_color(AttractorKind k) {
  switch (k) {
    case AttractorKind::InteriorPoint:   return "#e07b39";
    case AttractorKind::InteriorCycle:   return "#e8d44d";
    case AttractorKind::Origin:          return "#9ecbdd";
    case AttractorKind::PreyExtinctPoint: return "#cccccc";
    case AttractorKind::Undetermined:    return "#ffffff";
  }
  return "#000000";
}

/// Nontrivial prey nullcline P(N) of the dimensional system.
inline double prey_nullcline(ModelVariant v, const DimensionalParams& p, double N) {
  switch (v) {
    case ModelVariant::LeslieGower:
      return p.r * (1.0 - N / p.K) / p.q;
    case ModelVariant::Mht:
    case ModelVariant::MhtAltFood:
      return p.r * (1.0 - N / p.K) * (N + p.a) / p.q;
    default:
      return p.r * (1.0 - N / p.K) * (N - p.m) * (N + p.a) / p.q;
  }
}

}  // namespace plotting

inline std::string svg_timeseries(const std::vector<Trajectory>& trajectories, bool log_scale,
                                  const std::string& title) {
  double t_hi = 1, y_hi = 1, y_lo = log_scale ? 1e300 : 0;
  for (const auto& tr : trajectories)
    for (const auto& s : tr.samples) {
      t_hi = std::max(t_hi, s.time);
      y_hi = std::max({y_hi, s.state.prey, s.state.predator});
      if (log_scale) {
        if (s.state.prey > 0) y_lo = std::min(y_lo, s.state.prey);
        if (s.state.predator > 0) y_lo = std::min(y_lo, s.state.predator);
      }
    }
  if (log_scale) y_lo = std::max(y_lo * 0.5, 1e-12);

  SvgCanvas canvas(0, t_hi, log_scale ? y_lo : 0, y_hi * 1.05, log_scale);
  canvas.axes("time (yr)", log_scale ? "population (log)" : "population");
  canvas.title(title);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto& tr = trajectories[i];
    const std::string color = plotting::kSeries[i % 8];
    std::vector<std::pair<double, double>> prey, pred;
    for (const auto& s : tr.samples) {
      const double floor = log_scale ? y_lo : 0.0;
      prey.emplace_back(s.time, std::max(s.state.prey, floor));
      pred.emplace_back(s.time, std::max(s.state.predator, floor));
    }
    canvas.polyline(prey, color, 1.3);
    canvas.polyline(pred, color, 1.3, "4,3");
    legend.emplace_back(color, "prey / predator (dashed) #" + std::to_string(i));
  }
  canvas.legend(legend);
  return canvas.str();
}

inline std::string svg_phase(ModelVariant v, const DimensionalParams& p,
                             const std::vector<Trajectory>& trajectories,
                             const EquilibriumCensus& census, const std::string& title) {
  double x_hi = p.K * 1.05, y_hi = p.n * p.K * 1.15;
  for (const auto& tr : trajectories)
    for (const auto& s : tr.samples) {
      x_hi = std::max(x_hi, s.state.prey * 1.05);
      y_hi = std::max(y_hi, s.state.predator * 1.05);
    }

  SvgCanvas canvas(0, x_hi, 0, y_hi);
  canvas.axes("prey (voles/ha)", "predator (weasels/ha)");
  canvas.title(title);

  // nullclines
  std::vector<std::pair<double, double>> preyn, predn;
  for (int i = 0; i <= 600; ++i) {
    const double N = x_hi * i / 600.0;
    const double P = plotting::prey_nullcline(v, p, N);
    if (P >= 0 && P <= y_hi) preyn.emplace_back(N, P);
    else {
      if (preyn.size() > 1) canvas.polyline(preyn, "#c62828", 1.4);
      preyn.clear();
    }
    predn.emplace_back(N, p.n * N + (has_alt_food(v) ? p.c : 0.0));
  }
  if (preyn.size() > 1) canvas.polyline(preyn, "#c62828", 1.4);
  canvas.polyline(predn, "#1f4fd1", 1.4);

  // trajectories
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : trajectories[i].samples) pts.emplace_back(s.state.prey, s.state.predator);
    canvas.polyline(pts, plotting::kSeries[(i + 2) % 8], 1.0);
  }

  // equilibria markers
  auto mark = [&](const EquilibriumReport& r) {
    const State d = r.location.frame == Frame::Rescaled ? to_dimensional(r.location, p)
                                                        : r.location;
    std::string color = "#555555";
    if (r.numeric_class == NumericClass::Attractor) color = "#000000";
    if (r.numeric_class == NumericClass::Repeller) color = "#e08a00";
    if (r.numeric_class == NumericClass::Saddle) color = "#8b0000";
    canvas.circle(d.prey, d.predator, 4, color);
  };
  for (const auto& r : census.boundary) mark(r);
  for (const auto& r : census.interior) mark(r);

  canvas.legend({{"#c62828", "prey nullcline"},
                 {"#1f4fd1", "predator nullcline"},
                 {"#000000", "attractor"},
                 {"#e08a00", "repeller"},
                 {"#8b0000", "saddle"}});
  return canvas.str();
}

inline std::string svg_hopf(const std::vector<HopfPoint>& locus, const std::string& title) {
  double q_lo = 1e300, q_hi = 0, s_hi = 0;
  for (const auto& hp : locus) {
    q_lo = std::min(q_lo, hp.q);
    q_hi = std::max(q_hi, hp.q);
    s_hi = std::max(s_hi, hp.s);
  }
  if (locus.empty()) {
    q_lo = 0;
    q_hi = 1;
    s_hi = 1;
  }
  SvgCanvas canvas(q_lo, q_hi, 0, s_hi * 1.1);
  canvas.axes("q (voles/yr/weasel)", "s (1/yr)");
  canvas.title(title);
  std::vector<std::pair<double, double>> pts;
  for (const auto& hp : locus) pts.emplace_back(hp.q, hp.s);
  canvas.polyline(pts, "#c62828", 1.6);
  canvas.legend({{"#c62828", "trace = 0, det > 0"}});
  return canvas.str();
}

inline std::string svg_region(const RegionGrid& grid, const std::string& title) {
  if (grid.q_axis.empty() || grid.s_axis.empty()) return SvgCanvas(0, 1, 0, 1).str();
  const double dq = grid.q_axis.size() > 1 ? grid.q_axis[1] - grid.q_axis[0] : 1.0;
  const double ds = grid.s_axis.size() > 1 ? grid.s_axis[1] - grid.s_axis[0] : 1.0;
  SvgCanvas canvas(grid.q_axis.front() - dq / 2, grid.q_axis.back() + dq / 2,
                   grid.s_axis.front() - ds / 2, grid.s_axis.back() + ds / 2);
  for (std::size_t is = 0; is < grid.s_axis.size(); ++is)
    for (std::size_t iq = 0; iq < grid.q_axis.size(); ++iq) {
      const auto& cell = grid.cells[is * grid.q_axis.size() + iq];
      canvas.cell(grid.q_axis[iq] - dq / 2, grid.q_axis[iq] + dq / 2,
                  grid.s_axis[is] - ds / 2, grid.s_axis[is] + ds / 2,
                  plotting::region_color(cell.tag));
    }
  canvas.axes("q (voles/yr/weasel)", "s (1/yr)");
  canvas.title(title);
  std::vector<std::pair<std::string, std::string>> legend;
  for (auto t : {RegionTag::HatchedGreen, RegionTag::SolidGreen, RegionTag::Blue, RegionTag::Grey,
                 RegionTag::SolidRed, RegionTag::HatchedRed, RegionTag::SolidBrown,
                 RegionTag::HatchedBrown})
    legend.emplace_back(plotting::region_color(t), region_tag_name(t));
  canvas.legend(legend);
  return canvas.str();
}

inline std::string svg_basin(const BasinGrid& grid, const std::string& title) {
  if (grid.prey_axis.empty() || grid.predator_axis.empty())
    return SvgCanvas(0, 1, 0, 1).str();
  const double dx = grid.prey_axis.size() > 1 ? grid.prey_axis[1] - grid.prey_axis[0] : 1.0;
  const double dy =
      grid.predator_axis.size() > 1 ? grid.predator_axis[1] - grid.predator_axis[0] : 1.0;
  SvgCanvas canvas(grid.prey_axis.front() - dx / 2, grid.prey_axis.back() + dx / 2,
                   grid.predator_axis.front() - dy / 2, grid.predator_axis.back() + dy / 2);
  for (std::size_t iy = 0; iy < grid.predator_axis.size(); ++iy)
    for (std::size_t ix = 0; ix < grid.prey_axis.size(); ++ix)
      canvas.cell(grid.prey_axis[ix] - dx / 2, grid.prey_axis[ix] + dx / 2,
                  grid.predator_axis[iy] - dy / 2, grid.predator_axis[iy] + dy / 2,
                  plotting::basin_color(grid.cells[iy * grid.prey_axis.size() + ix]));
  canvas.axes("prey (voles/ha)", "predator (weasels/ha)");
  canvas.title(title);
  std::vector<std::pair<std::string, std::string>> legend;
  for (auto k : {AttractorKind::InteriorPoint, AttractorKind::InteriorCycle, AttractorKind::Origin,
                 AttractorKind::PreyExtinctPoint, AttractorKind::Undetermined})
    legend.emplace_back(plotting::basin_color(k), attractor_kind_name(k));
  canvas.legend(legend);
  return canvas.str();
}

}  // namespace mht
