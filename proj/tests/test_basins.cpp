#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "mht/basins.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

DimensionalParams table_params(double q, double s, double m) {
  DimensionalParams p;
  p.r = 4; p.K = 150; p.q = q; p.a = 6; p.s = s; p.n = 0.025; p.c = 0.01; p.m = m;
  return p;
}

}  // namespace

TEST_CASE("strong Allee basin map is bistable and almost fully determined") {
  const auto p = table_params(700, 1.25, 15);
  BasinSpec spec;
  spec.prey_hi = 150;
  spec.pred_hi = 4.0;
  spec.nx = 40;
  spec.ny = 40;
  const auto grid = basin_map(ModelVariant::MhtAllee, p, spec, {}, 2);

  std::map<AttractorKind, int> counts;
  for (auto k : grid.cells) counts[k]++;
  CHECK(counts[AttractorKind::Origin] > 0);
  CHECK(counts[AttractorKind::InteriorPoint] > 0);
  CHECK(grid.undetermined_fraction < 0.02);

  // axes are excluded: the first cell centre is half a cell inside
  CHECK(grid.prey_axis.front() > 0);
  CHECK(grid.predator_axis.front() > 0);
}

TEST_CASE("plain model basin map carries a single determined label") {
  const auto p = table_params(700, 1.25, 15);
  BasinSpec spec;
  spec.nx = 25;
  spec.ny = 25;
  const auto grid = basin_map(ModelVariant::Mht, p, spec, {}, 2);
  std::map<AttractorKind, int> counts;
  for (auto k : grid.cells) counts[k]++;
  int determined_kinds = 0;
  for (const auto& [k, c] : counts)
    if (k != AttractorKind::Undetermined && c > 0) ++determined_kinds;
  CHECK(determined_kinds == 1);
  CHECK(counts[AttractorKind::InteriorPoint] > 0);
  CHECK(grid.undetermined_fraction < 0.02);
}

TEST_CASE("basin maps are deterministic and thread-count independent") {
  const auto p = table_params(700, 1.25, 15);
  BasinSpec spec;
  spec.nx = 12;
  spec.ny = 10;
  const auto a = basin_map(ModelVariant::MhtAllee, p, spec, {}, 1);
  const auto b = basin_map(ModelVariant::MhtAllee, p, spec, {}, 3);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i] == b.cells[i]);
}

TEST_CASE("a raised cancellation flag leaves unstarted cells undetermined") {
  const auto p = table_params(700, 1.25, 15);
  BasinSpec spec;
  spec.nx = 10;
  spec.ny = 10;
  std::atomic<bool> cancel{true};
  const auto grid = basin_map(ModelVariant::MhtAllee, p, spec, {}, 1, &cancel);
  CHECK(grid.undetermined_fraction == 1.0);
}

TEST_CASE("grid refinement only moves the boundary within a one-cell band") {
  const auto p = table_params(700, 1.25, 15);
  BasinSpec coarse, fine;
  coarse.nx = coarse.ny = 16;
  fine.nx = fine.ny = 32;
  const auto cg = basin_map(ModelVariant::MhtAllee, p, coarse, {}, 2);
  const auto fg = basin_map(ModelVariant::MhtAllee, p, fine, {}, 2);

  auto coarse_at = [&](int ix, int iy) { return cg.cells[iy * 16 + ix]; };
  auto near_boundary = [&](int ix, int iy) {
    const auto self = coarse_at(ix, iy);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int jx = ix + dx, jy = iy + dy;
        if (jx < 0 || jy < 0 || jx >= 16 || jy >= 16) continue;
        if (coarse_at(jx, jy) != self) return true;
      }
    return false;
  };

  int violations = 0;
  for (int iy = 0; iy < 16; ++iy)
    for (int ix = 0; ix < 16; ++ix) {
      if (near_boundary(ix, iy)) continue;  // disagreement allowed in the band
      const auto want = coarse_at(ix, iy);
      for (int sy = 0; sy < 2; ++sy)
        for (int sx = 0; sx < 2; ++sx) {
          const auto got = fg.cells[(2 * iy + sy) * 32 + (2 * ix + sx)];
          if (got != want && got != AttractorKind::Undetermined) ++violations;
        }
    }
  CHECK(violations == 0);
}

TEST_CASE("separatrix through the saddle separates the two basins") {
  const auto p = table_params(700, 1.25, 15);
  const auto census = equilibrium_census(ModelVariant::MhtAllee, p);
  REQUIRE(census.interior.size() == 2);
  REQUIRE(census.interior[0].numeric_class == NumericClass::Saddle);

  const auto poly = saddle_separatrix(ModelVariant::MhtAllee, p, census.interior[0]);
  REQUIRE(poly.size() > 10);

  BasinSpec spec;
  spec.prey_hi = 150;
  spec.pred_hi = 4.0;
  spec.nx = 30;
  spec.ny = 30;
  const auto grid = basin_map(ModelVariant::MhtAllee, p, spec, {}, 2);
  const double cell_w = 150.0 / spec.nx, cell_h = 4.0 / spec.ny;
  const double diag = std::hypot(cell_w, cell_h);

  // distance from a point to the polyline
  auto dist_to_poly = [&](double x, double y) {
    double best = 1e300;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
      const double ax = poly[i].prey, ay = poly[i].predator * (cell_w / cell_h);
      const double bx = poly[i + 1].prey, by = poly[i + 1].predator * (cell_w / cell_h);
      const double yy = y * (cell_w / cell_h);
      const double vx = bx - ax, vy = by - ay;
      const double len2 = vx * vx + vy * vy;
      if (len2 == 0) continue;
      double t = ((x - ax) * vx + (yy - ay) * vy) / len2;
      t = std::min(1.0, std::max(0.0, t));
      best = std::min(best, std::hypot(x - (ax + t * vx), yy - (ay + t * vy)));
    }
    return best;
  };

  // adjacent cells with different determined labels must straddle the manifold
  int boundary_pairs = 0, straddle_ok = 0;
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix + 1 < spec.nx; ++ix) {
      const auto a = grid.cells[iy * spec.nx + ix];
      const auto b = grid.cells[iy * spec.nx + ix + 1];
      if (a == b || a == AttractorKind::Undetermined || b == AttractorKind::Undetermined)
        continue;
      ++boundary_pairs;
      const double mx = 0.5 * (grid.prey_axis[ix] + grid.prey_axis[ix + 1]);
      const double my = grid.predator_axis[iy];
      if (dist_to_poly(mx, my) < 2.0 * cell_w) ++straddle_ok;
    }
  REQUIRE(boundary_pairs > 0);
  CHECK(straddle_ok == boundary_pairs);

  // cells far from the manifold match the side predicted by it
  int checked = 0, agree = 0;
  for (int iy = 0; iy < spec.ny; ++iy)
    for (int ix = 0; ix < spec.nx; ++ix) {
      const auto k = grid.cells[iy * spec.nx + ix];
      if (k != AttractorKind::Origin && k != AttractorKind::InteriorPoint) continue;
      const double x = grid.prey_axis[ix], y = grid.predator_axis[iy];
      if (dist_to_poly(x, y) < 2.0 * diag) continue;
      const double side = side_of_polyline(poly, x, y);
      ++checked;
      // learn the orientation from the first sample, then require consistency
      static thread_local int orient = 0;
      if (orient == 0) orient = (side > 0) == (k == AttractorKind::Origin) ? 1 : -1;
      const bool predicted_origin = orient > 0 ? side > 0 : side < 0;
      if (predicted_origin == (k == AttractorKind::Origin)) ++agree;
    }
  REQUIRE(checked > 100);
  CHECK(agree == checked);
}
