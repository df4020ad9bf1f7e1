#pragma once

// Analysis dispatch: executes a RunConfig and writes the JSON result
// document, CSV data files and optional SVG plots into the output directory.
// Exit codes: 0 success, 1 domain/configuration error, 2 numerical failure.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "mht/outputs.hpp"

namespace mht {

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline bool wants(const RunConfig& cfg, const std::string& fmt) {
  for (const auto& f : cfg.formats)
    if (f == fmt) return true;
  return false;
}

inline nlohmann::json json_events(const Trajectory& tr) {
  nlohmann::json evs = nlohmann::json::array();
  for (const auto& ev : tr.events)
    evs.push_back({{"time", ev.time},
                   {"kind", event_kind_name(ev.kind)},
                   {"state", json_state(ev.state)}});
  return evs;
}

}  // namespace detail

inline int run(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.analysis.empty()) throw ConfigError("no analysis requested");
  std::filesystem::create_directories(cfg.out_dir);
  const std::filesystem::path out(cfg.out_dir);

  nlohmann::json results, diagnostics;

  if (cfg.analysis == "simulate") {
    IntegrateOptions opt;
    opt.rel_tol = cfg.sim_rel_tol;
    opt.abs_tol = cfg.sim_abs_tol;
    for (int i = 0; i < cfg.sim_samples; ++i)
      opt.sample_times.push_back(cfg.sim_t_end * i / (cfg.sim_samples - 1.0));

    std::vector<Trajectory> trajectories;
    nlohmann::json jtr = nlohmann::json::array();
    std::uint64_t total_steps = 0, total_evals = 0;
    double min_component = 0;
    for (std::size_t i = 0; i < cfg.sim_ics.size(); ++i) {
      const auto [N0, P0] = cfg.sim_ics[i];
      const auto tr = integrate(cfg.variant, cfg.params, State{N0, P0, Frame::Dimensional},
                                cfg.sim_t_end, opt);
      const std::string csv_name = "trajectory_" + std::to_string(i) + ".csv";
      if (detail::wants(cfg, "csv")) detail::write_file(out / csv_name, csv_trajectory(tr));
      jtr.push_back({{"ic", {{"prey", N0}, {"predator", P0}}},
                     {"csv", csv_name},
                     {"n_samples", tr.samples.size()},
                     {"events", detail::json_events(tr)},
                     {"terminal", json_state(tr.samples.back().state)}});
      total_steps += tr.diag.steps;
      total_evals += tr.diag.rhs_evals;
      min_component = std::min(min_component, tr.diag.min_component);
      trajectories.push_back(tr);
    }
    results["trajectories"] = jtr;
    diagnostics = {{"steps", total_steps},
                   {"rhs_evals", total_evals},
                   {"min_component", min_component}};
    if (detail::wants(cfg, "svg")) {
      const std::string stem = std::string(variant_name(cfg.variant));
      detail::write_file(out / "timeseries_linear.svg",
                         svg_timeseries(trajectories, false, stem + ": populations over time"));
      detail::write_file(out / "timeseries_log.svg",
                         svg_timeseries(trajectories, true, stem + ": populations (log scale)"));
      detail::write_file(out / "phase.svg",
                         svg_phase(cfg.variant, cfg.params, trajectories,
                                   equilibrium_census(cfg.variant, cfg.params),
                                   stem + ": phase portrait"));
    }
  } else if (cfg.analysis == "equilibria") {
    const auto census = equilibrium_census(cfg.variant, cfg.params);
    nlohmann::json jb = nlohmann::json::array(), ji = nlohmann::json::array();
    for (const auto& r : census.boundary) jb.push_back(json_report(r));
    for (const auto& r : census.interior) ji.push_back(json_report(r));
    results["boundary"] = jb;
    results["interior"] = ji;
    nlohmann::json roots;
    roots["unit_interval"] = census.roots.roots;
    roots["multiplicity"] = census.roots.multiplicity;
    if (census.roots.u1) roots["u1"] = *census.roots.u1;
    if (census.roots.u2) roots["u2"] = *census.roots.u2;
    if (census.roots.u3) roots["u3"] = *census.roots.u3;
    if (census.roots.G) roots["G"] = *census.roots.G;
    if (census.roots.E) roots["E"] = *census.roots.E;
    if (std::isfinite(census.roots.delta)) roots["delta"] = census.roots.delta;
    roots["construction_ok"] = census.roots.construction_ok;
    if (!census.roots.note.empty()) roots["note"] = census.roots.note;
    if (has_rescaled_form(cfg.variant)) results["roots"] = roots;
    diagnostics = {{"boundary_count", census.boundary.size()},
                   {"interior_count", census.interior.size()}};
    if (detail::wants(cfg, "csv")) detail::write_file(out / "equilibria.csv", csv_equilibria(census));
    if (detail::wants(cfg, "svg"))
      detail::write_file(out / "phase.svg",
                         svg_phase(cfg.variant, cfg.params, {}, census,
                                   std::string(variant_name(cfg.variant)) +
                                       ": nullclines and equilibria"));
  } else if (cfg.analysis == "hopf") {
    HopfOptions opt;
    opt.q_step = cfg.hopf_step;
    opt.max_points = cfg.hopf_max_points;
    const auto locus = hopf_locus(cfg.variant, cfg.params, cfg.hopf_q_min, cfg.hopf_q_max, opt);
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& hp : locus)
      pts.push_back({{"q", hp.q},
                     {"s", hp.s},
                     {"u_star", hp.u_star},
                     {"residual", hp.residual},
                     {"det", hp.det_at}});
    results["points"] = pts;
    results["count"] = locus.size();
    if (!locus.empty()) {
      results["q_first"] = locus.front().q;
      results["q_last"] = locus.back().q;
    }
    diagnostics = {{"q_min", cfg.hopf_q_min}, {"q_max", cfg.hopf_q_max}, {"step", cfg.hopf_step}};
    if (detail::wants(cfg, "csv")) detail::write_file(out / "hopf.csv", csv_hopf(locus));
    if (detail::wants(cfg, "svg"))
      detail::write_file(out / "hopf.svg",
                         svg_hopf(locus, std::string(variant_name(cfg.variant)) +
                                             ": stability-switch locus"));
  } else if (cfg.analysis == "collapse") {
    const auto fold =
        collapse_threshold(cfg.variant, cfg.params, cfg.collapse_q_min, cfg.collapse_q_max);
    results["found"] = fold.found;
    results["label"] = fold.label;
    if (fold.found) {
      results["q_star"] = fold.q_star;
      results["delta_at"] = fold.delta_at;
      results["u_fold"] = fold.u_fold;
      if (fold.E > 0) {
        results["E"] = fold.E;
        results["point_rescaled"] = {{"prey", fold.E}, {"predator", fold.E + fold.C}};
      }
    }
    if (!fold.note.empty()) results["note"] = fold.note;
    diagnostics = {{"q_min", cfg.collapse_q_min}, {"q_max", cfg.collapse_q_max}};
    if (detail::wants(cfg, "csv")) {
      std::string csv = "label,found,q_star,delta_at\n";
      csv += fold.label + "," + (fold.found ? "1" : "0") + "," + fmt_double(fold.q_star) + "," +
             fmt_double(fold.delta_at) + "\n";
      detail::write_file(out / "collapse.csv", csv);
    }
  } else if (cfg.analysis == "region-map") {
    RegionProbeOptions opt;
    opt.enable_probe = cfg.region_probe;
    const auto grid =
        region_map(cfg.variant, cfg.params, cfg.region_q_min, cfg.region_q_max, cfg.region_nq,
                   cfg.region_s_min, cfg.region_s_max, cfg.region_ns, cfg.threads, opt);
    std::map<std::string, int> counts;
    int uncertain = 0;
    for (const auto& cell : grid.cells) {
      counts[region_tag_name(cell.tag)]++;
      if (cell.uncertain) ++uncertain;
    }
    results["nq"] = cfg.region_nq;
    results["ns"] = cfg.region_ns;
    results["counts"] = counts;
    results["uncertain_cells"] = uncertain;
    diagnostics = {{"threads", cfg.threads}, {"probe", cfg.region_probe}};
    if (detail::wants(cfg, "csv")) detail::write_file(out / "region_map.csv", csv_region(grid));
    if (detail::wants(cfg, "svg"))
      detail::write_file(out / "region_map.svg",
                         svg_region(grid, std::string(variant_name(cfg.variant)) +
                                              ": (q,s) region map"));
  } else if (cfg.analysis == "basin") {
    BasinSpec spec;
    spec.prey_lo = cfg.basin_prey_min;
    spec.prey_hi = cfg.basin_prey_max;
    spec.pred_lo = cfg.basin_predator_min;
    spec.pred_hi = cfg.basin_predator_max;
    spec.nx = cfg.basin_nx;
    spec.ny = cfg.basin_ny;
    DetectOptions opt;
    opt.integ.rel_tol = cfg.basin_rel_tol;
    opt.max_steps = cfg.basin_max_steps;
    const auto grid = basin_map(cfg.variant, cfg.params, spec, opt, cfg.threads);
    std::map<std::string, int> counts;
    for (const auto k : grid.cells) counts[attractor_kind_name(k)]++;
    results["nx"] = cfg.basin_nx;
    results["ny"] = cfg.basin_ny;
    results["counts"] = counts;
    results["undetermined_fraction"] = grid.undetermined_fraction;
    diagnostics = {{"threads", cfg.threads}, {"max_steps", cfg.basin_max_steps}};
    if (detail::wants(cfg, "csv")) detail::write_file(out / "basin.csv", csv_basin(grid));
    if (detail::wants(cfg, "svg"))
      detail::write_file(out / "basin.svg",
                         svg_basin(grid, std::string(variant_name(cfg.variant)) +
                                             ": basins of attraction"));
  } else {
    throw ConfigError("unknown analysis '" + cfg.analysis + "'");
  }

  if (detail::wants(cfg, "json"))
    detail::write_file(out / "result.json",
                       result_document(cfg, cfg.analysis, results, diagnostics).dump(2) + "\n");
  return 0;
}

}  // namespace mht
