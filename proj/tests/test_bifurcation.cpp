#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mht/bifurcation.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {

DimensionalParams table_params(double q, double s, double m) {
  DimensionalParams p;
  p.r = 4; p.K = 150; p.q = q; p.a = 6; p.s = s; p.n = 0.025; p.c = 0.01; p.m = m;
  return p;
}

/// Eigenvalue real part of the tracked equilibrium at (q, s).
double max_real_part(ModelVariant v, DimensionalParams p, double q, double s, double u_star) {
  p.q = q;
  p.s = s;
  Mat2 J;
  if (has_rescaled_form(v)) {
    const auto np = nondimensionalize(p);
    const double w = u_star + (v == ModelVariant::MhtAlleeAltFood ? np.C : 0.0);
    J = jacobian_rescaled(v, State{u_star, w, Frame::Rescaled}, np);
  } else {
    const double N = u_star * p.K;
    const double P = p.n * N + (has_alt_food(v) ? p.c : 0.0);
    J = jacobian(v, State{N, P, Frame::Dimensional}, p);
  }
  const auto e = J.eigenvalues();
  return std::max(e[0].real(), e[1].real());
}

}  // namespace

TEST_CASE("Hopf locus of the plain model crosses the reference window") {
  const auto fixed = table_params(700, 1.25, 15);
  HopfOptions opt;
  opt.q_step = 10.0;
  const auto locus = hopf_locus(ModelVariant::Mht, fixed, 400, 900, opt);
  REQUIRE(locus.size() > 20);

  for (const auto& hp : locus) {
    CHECK(hp.residual < 1e-8);
    CHECK(hp.det_at > 0);
  }

  // frozen closed-form values: s = J11(N*(q)) at the interior equilibrium
  auto s_at = [&](double q) {
    for (const auto& hp : locus)
      if (std::abs(hp.q - q) < 1e-9) return hp.s;
    return -1.0;
  };
  CHECK(s_at(400) == doctest::Approx(1.417084).epsilon(1e-5));
  CHECK(s_at(700) == doctest::Approx(0.846373).epsilon(1e-5));
  CHECK(s_at(900) == doctest::Approx(0.664756).epsilon(1e-5));
}

TEST_CASE("eigenvalues switch sign across the locus") {
  const auto fixed = table_params(700, 1.25, 15);
  HopfOptions opt;
  opt.q_step = 25.0;
  for (auto v : {ModelVariant::Mht, ModelVariant::MhtAltFood}) {
    const auto locus = hopf_locus(v, fixed, 420, 880, opt);
    REQUIRE(locus.size() >= 10);
    int sampled = 0;
    for (std::size_t i = 0; i < locus.size() && sampled < 10; i += locus.size() / 10 + 1) {
      const auto& hp = locus[i];
      CHECK(max_real_part(v, fixed, hp.q, hp.s - 1e-4, hp.u_star) > 0);
      CHECK(max_real_part(v, fixed, hp.q, hp.s + 1e-4, hp.u_star) < 0);
      ++sampled;
    }
    CHECK(sampled >= 5);
  }
}

TEST_CASE("locus is insensitive to halving the continuation step") {
  const auto fixed = table_params(700, 1.25, 15);
  HopfOptions coarse, fine;
  coarse.q_step = 20.0;
  fine.q_step = 10.0;
  const auto a = hopf_locus(ModelVariant::Mht, fixed, 400, 900, coarse);
  const auto b = hopf_locus(ModelVariant::Mht, fixed, 400, 900, fine);
  int matched = 0;
  for (const auto& pa : a)
    for (const auto& pb : b)
      if (std::abs(pa.q - pb.q) < 1e-9) {
        CHECK(std::abs(pa.s - pb.s) <= 1e-6 * std::abs(pa.s));
        ++matched;
      }
  CHECK(matched >= 20);
}

TEST_CASE("weak Allee locus: absent at reference predation, alive far beyond it") {
  const auto fixed = table_params(700, 1.25, -15);
  // at the reference window the trace threshold is negative everywhere
  CHECK(hopf_locus(ModelVariant::MhtAllee, fixed, 400, 900).empty());

  HopfOptions opt;
  opt.q_step = 100.0;
  const auto locus = hopf_locus(ModelVariant::MhtAllee, fixed, 8200, 12000, opt);
  REQUIRE(locus.size() >= 10);
  for (const auto& hp : locus) {
    CHECK(hp.residual < 1e-8);
    CHECK(hp.det_at > 0);
    CHECK(hp.s > 0);
  }
  // frozen reference values from the closed-form threshold scan
  for (const auto& hp : locus)
    if (std::abs(hp.q - 9000) < 1e-9) CHECK(hp.s == doctest::Approx(30.7007).epsilon(1e-4));
  // eigenvalue flip at a few points
  for (std::size_t i = 0; i < locus.size(); i += locus.size() / 5 + 1) {
    const auto& hp = locus[i];
    CHECK(max_real_part(ModelVariant::MhtAllee, fixed, hp.q, hp.s - 1e-4, hp.u_star) > 0);
    CHECK(max_real_part(ModelVariant::MhtAllee, fixed, hp.q, hp.s + 1e-4, hp.u_star) < 0);
  }
}

TEST_CASE("strong Allee locus lives between the trace-sign switch and the fold") {
  const auto fixed = table_params(700, 1.25, 15);
  HopfOptions opt;
  opt.q_step = 10.0;
  const auto locus = hopf_locus(ModelVariant::MhtAllee, fixed, 4800, 5150, opt);
  REQUIRE(locus.size() >= 10);
  for (const auto& hp : locus) {
    CHECK(hp.residual < 1e-8);
    CHECK(hp.det_at > 0);
  }
  for (const auto& hp : locus)
    if (std::abs(hp.q - 5000) < 1e-9) CHECK(hp.s == doctest::Approx(49.092770).epsilon(1e-5));
}

TEST_CASE("locus never extends past the collapse threshold") {
  const auto fixed = table_params(700, 1.25, 15);
  const auto fold = collapse_threshold(ModelVariant::MhtAllee, fixed, 700, 14000);
  REQUIRE(fold.found);
  HopfOptions opt;
  opt.q_step = 10.0;
  const auto locus = hopf_locus(ModelVariant::MhtAllee, fixed, 4800, 14000, opt);
  REQUIRE(!locus.empty());
  for (const auto& hp : locus) CHECK(hp.q <= fold.q_star + 1e-6 * fold.q_star);
}

TEST_CASE("dynamics flip across the locus: cycle below, point above") {
  // independent of the linearisation: probe the actual attractor on both
  // sides of the computed switch level at q = 700 (s_hopf = 0.846373)
  const auto fixed = table_params(700, 1.25, 15);
  const auto census = equilibrium_census(ModelVariant::Mht, fixed);
  REQUIRE(census.interior.size() == 1);
  const auto eq = census.interior[0].location;

  auto probe = [&](double s) {
    auto p = fixed;
    p.s = s;
    return detect_attractor(ModelVariant::Mht, p,
                            State{eq.prey * 1.05, eq.predator * 0.95, Frame::Dimensional});
  };
  const auto below = probe(0.80);
  CHECK(below.kind == AttractorKind::InteriorCycle);
  const auto above = probe(0.89);
  CHECK(above.kind == AttractorKind::InteriorPoint);
}

TEST_CASE("the Leslie-Gower model has no Hopf locus") {
  const auto fixed = table_params(700, 1.25, 15);
  CHECK(hopf_locus(ModelVariant::LeslieGower, fixed, 50, 5000).empty());
}

// ---------------------------------------------------------------------------
// Collapse thresholds.
// ---------------------------------------------------------------------------

TEST_CASE("strong Allee fold: bracketed, scaled-tolerance zero, census 2 vs 0") {
  const auto fixed = table_params(700, 1.25, 15);
  // bracket sanity per the census oracle
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, fixed).size() == 2);
  auto far = fixed;
  far.q = 14000;
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, far).empty());

  const auto fold = collapse_threshold(ModelVariant::MhtAllee, fixed, 700, 14000);
  REQUIRE(fold.found);
  CHECK(fold.label == "q_tilde_1");
  CHECK(fold.q_star > 5000);
  CHECK(fold.q_star < 5400);

  double scale = 1.0;
  detail::fold_indicator(ModelVariant::MhtAllee, fixed, fold.q_star, &scale);
  CHECK(std::abs(fold.delta_at) < 1e-10 * scale);

  auto lo = fixed, hi = fixed;
  lo.q = fold.q_star - 50;
  hi.q = fold.q_star + 50;
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, lo).size() == 2);
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, hi).empty());

  // at the fold the two interior roots coincide to within the merge width
  auto at = fixed;
  at.q = fold.q_star;
  const auto ir = interior_roots_allee(nondimensionalize(at));
  if (ir.roots.size() == 2) CHECK(std::abs(ir.roots[1] - ir.roots[0]) < 1e-5);
}

TEST_CASE("alt-food + Allee fold lands on (E, E+C)") {
  const auto fixed = table_params(700, 1.25, 15);
  const auto fold = collapse_threshold(ModelVariant::MhtAlleeAltFood, fixed, 700, 14000);
  REQUIRE(fold.found);
  CHECK(fold.label == "q_hat_1");

  double scale = 1.0;
  detail::fold_indicator(ModelVariant::MhtAlleeAltFood, fixed, fold.q_star, &scale);
  CHECK(std::abs(fold.delta_at) < 1e-10 * scale);

  CHECK(fold.u_fold == doctest::Approx(fold.E).epsilon(1e-6));
  CHECK(fold.C == doctest::Approx(0.01 / 3.75).epsilon(1e-12));

  auto lo = fixed, hi = fixed;
  lo.q = fold.q_star * 0.99;
  hi.q = fold.q_star * 1.01;
  CHECK(interior_prey_dimensional(ModelVariant::MhtAlleeAltFood, lo).size() == 2);
  CHECK(interior_prey_dimensional(ModelVariant::MhtAlleeAltFood, hi).empty());
}

TEST_CASE("weak Allee upper fold: census 3 vs 1") {
  const auto fixed = table_params(700, 1.25, -15);
  const auto fold = collapse_threshold(ModelVariant::MhtAllee, fixed, 6200, 12000);
  REQUIRE(fold.found);
  CHECK(fold.label == "q_tilde_2");
  CHECK(fold.q_star == doctest::Approx(7969).epsilon(2e-2));
  auto lo = fixed, hi = fixed;
  lo.q = fold.q_star - 100;
  hi.q = fold.q_star + 100;
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, lo).size() == 3);
  CHECK(interior_prey_dimensional(ModelVariant::MhtAllee, hi).size() == 1);
}

TEST_CASE("alt-food fold at the reference offset: honest not-found") {
  const auto fixed = table_params(700, 1.25, 0);
  const auto fold = collapse_threshold(ModelVariant::MhtAltFood, fixed, 100, 20000);
  CHECK(!fold.found);
  CHECK(!fold.note.empty());
  const auto none = collapse_threshold(ModelVariant::Mht, fixed, 100, 20000);
  CHECK(!none.found);
}

// ---------------------------------------------------------------------------
// Region classification.
// ---------------------------------------------------------------------------

TEST_CASE("region labels at computed reference points") {
  const auto fixed = table_params(700, 1.25, 15);

  // plain model at (700, 1.25): the interior point is below the switch level
  // s_hopf = 0.846, so it is an attractor
  CHECK(classify_region(ModelVariant::Mht, 700, 1.25, fixed).tag == RegionTag::HatchedGreen);
  // below the locus the equilibrium is a repeller and the probe finds a cycle
  const auto blue = classify_region(ModelVariant::Mht, 700, 0.5, fixed);
  CHECK(blue.tag == RegionTag::Blue);
  CHECK(!blue.uncertain);

  // strong Allee bistability at the reference point
  const auto sg = classify_region(ModelVariant::MhtAllee, 700, 1.25, fixed);
  CHECK(sg.tag == RegionTag::SolidGreen);
  // no interior equilibria far beyond the fold
  CHECK(classify_region(ModelVariant::MhtAllee, 14000, 1.25, fixed).tag == RegionTag::HatchedRed);
  // saddle + repeller just below the subcritical switch
  CHECK(classify_region(ModelVariant::MhtAllee, 5000, 45.0, fixed).tag == RegionTag::SolidRed);

  const auto weak = table_params(700, 1.25, -15);
  CHECK(classify_region(ModelVariant::MhtAllee, 700, 1.25, weak).tag == RegionTag::HatchedGreen);
  CHECK(classify_region(ModelVariant::MhtAllee, 7000, 1.25, weak).tag == RegionTag::Grey);

  CHECK(classify_region(ModelVariant::MhtAltFood, 3000, 1.25, fixed).tag ==
        RegionTag::HatchedBrown);
  CHECK(classify_region(ModelVariant::MhtAlleeAltFood, 700, 1.25, fixed).tag ==
        RegionTag::SolidGreen);
  CHECK(classify_region(ModelVariant::MhtAlleeAltFood, 14000, 1.25, fixed).tag ==
        RegionTag::HatchedBrown);
  CHECK(classify_region(ModelVariant::LeslieGower, 700, 1.25, fixed).tag ==
        RegionTag::HatchedGreen);
}

TEST_CASE("every region label carries its legend text") {
  for (auto t : {RegionTag::HatchedGreen, RegionTag::SolidGreen, RegionTag::Blue, RegionTag::Grey,
                 RegionTag::SolidRed, RegionTag::HatchedRed, RegionTag::SolidBrown,
                 RegionTag::HatchedBrown})
    CHECK(std::string(region_tag_meaning(t)).size() > 10);
}

TEST_CASE("region maps are deterministic and thread-count independent") {
  const auto fixed = table_params(700, 1.25, 15);
  RegionProbeOptions opt;
  opt.probe_steps = 30'000;
  const auto a = region_map(ModelVariant::MhtAllee, fixed, 600, 5400, 6, 0.6, 1.8, 5, 1, opt);
  const auto b = region_map(ModelVariant::MhtAllee, fixed, 600, 5400, 6, 0.6, 1.8, 5, 3, opt);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].tag == b.cells[i].tag);
    CHECK(a.cells[i].uncertain == b.cells[i].uncertain);
  }
}
