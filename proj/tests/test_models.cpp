#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mht/models.hpp"
#include "mht/params.hpp"
#include "oracles.hpp"

using namespace mht;

namespace {
DimensionalParams table_params(double q, double s, double m) {
  DimensionalParams p;
  p.r = 4;
  p.K = 150;
  p.q = q;
  p.a = 6;
  p.s = s;
  p.n = 0.025;
  p.c = 0.01;
  p.m = m;
  return p;
}
}  // namespace

TEST_CASE("nondimensionalize maps the reference parameter set") {
  const auto np = nondimensionalize(table_params(700, 1.25, 15));
  CHECK(np.A == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(np.C == doctest::Approx(0.01 / 3.75).epsilon(1e-12));
  CHECK(np.Q == doctest::Approx(17.5 / 600.0).epsilon(1e-12));
  CHECK(np.S == doctest::Approx(1.25 / 600.0).epsilon(1e-12));
  CHECK(np.M == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("nondimensionalize: weak threshold and zero threshold") {
  auto p = table_params(500, 1.0, -15);
  const auto np = nondimensionalize(p);
  CHECK(np.M == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(np.Q == doctest::Approx(500 * 0.025 / 600.0).epsilon(1e-12));
  CHECK(np.S == doctest::Approx(1.0 / 600.0).epsilon(1e-12));

  p.m = 0;
  CHECK(nondimensionalize(p).M == 0.0);
}

TEST_CASE("nondimensionalize rejects degenerate scales") {
  auto p = table_params(700, 1.25, 15);
  p.K = 0;
  CHECK_THROWS_AS(nondimensionalize(p), std::domain_error);
  p = table_params(700, 1.25, 15);
  p.r = 0;
  CHECK_THROWS_AS(nondimensionalize(p), std::domain_error);
  p = table_params(700, 1.25, 15);
  p.n = 0;
  CHECK_THROWS_AS(nondimensionalize(p), std::domain_error);
  p = table_params(700, 1.25, 15);
  p.m = 200;  // m >= K
  CHECK_THROWS_AS(nondimensionalize(p), std::domain_error);
}

TEST_CASE("holling2: zero at zero, half-maximum at N=a, saturates at q") {
  CHECK(holling2(0, 700, 6) == 0.0);
  CHECK(holling2(6, 700, 6) == doctest::Approx(350.0));
  CHECK(holling2(1e12, 700, 6) == doctest::Approx(700.0).epsilon(1e-9));

  oracle::Rng rng(11);
  double prev = holling2(0, 700, 6);
  for (double N = 0.5; N < 5000; N *= 1.37) {
    const double h = holling2(N, 700, 6);
    CHECK(h > prev);
    CHECK(h < 700.0);
    prev = h;
  }
}

TEST_CASE("allee_per_capita: zeros and sign pattern") {
  CHECK(allee_per_capita(150, 4, 150, 15) == 0.0);
  CHECK(allee_per_capita(15, 4, 150, 15) == 0.0);
  CHECK(allee_per_capita(75, 4, 150, 15) == doctest::Approx(120.0));

  // strong: negative on (0,m), positive on (m,K)
  for (double N : {1.0, 5.0, 14.0}) CHECK(allee_per_capita(N, 4, 150, 15) < 0);
  for (double N : {16.0, 75.0, 149.0}) CHECK(allee_per_capita(N, 4, 150, 15) > 0);
  // weak: positive on (0,K)
  for (double N : {1.0, 75.0, 149.0}) CHECK(allee_per_capita(N, 4, 150, -15) > 0);
}

TEST_CASE("predator_per_capita_altfood: carrying capacity zeroes growth") {
  CHECK(predator_per_capita_altfood(42.0, 0.025 * 42.0 + 0.01, 1.25, 0.025, 0.01) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(predator_per_capita_altfood(0.0, 0.01, 1.25, 0.025, 0.01) == doctest::Approx(0.0));
  CHECK(predator_per_capita_altfood(150, 0.01, 1.25, 0.025, 0.01) ==
        doctest::Approx(1.25 * (1 - 0.01 / 3.76)).epsilon(1e-12));
  CHECK_THROWS_AS(predator_per_capita_altfood(0.0, 0.5, 1.25, 0.025, 0.0), std::domain_error);
}

TEST_CASE("vector_field: boundary equilibria are exact") {
  const auto p = table_params(700, 1.25, 15);
  for (auto v : {ModelVariant::Mht, ModelVariant::MhtAllee, ModelVariant::MhtAltFood,
                 ModelVariant::MhtAlleeAltFood, ModelVariant::LeslieGower}) {
    const auto d = vector_field(v, State{p.K, 0, Frame::Dimensional}, p);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
  }
  // alternative food: predator stabilises at (0, c)
  const auto d = vector_field(ModelVariant::MhtAltFood, State{0, p.c, Frame::Dimensional}, p);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("vector_field: singular Leslie-Gower axis refuses evaluation") {
  const auto p = table_params(700, 1.25, 15);
  for (auto v : {ModelVariant::LeslieGower, ModelVariant::Mht, ModelVariant::MhtAllee})
    CHECK_THROWS_AS(vector_field(v, State{0, 0.5, Frame::Dimensional}, p), SingularFieldError);
  CHECK_NOTHROW(vector_field(ModelVariant::MhtAltFood, State{0, 0.5, Frame::Dimensional}, p));
}

TEST_CASE("axis invariance holds for random states") {
  const auto p = table_params(650, 1.1, 15);
  oracle::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double z = rng.uniform(0.0, 2 * p.K);
    // P = 0 forces dP/dt = 0 everywhere
    for (auto v : {ModelVariant::LeslieGower, ModelVariant::Mht, ModelVariant::MhtAllee,
                   ModelVariant::MhtAltFood, ModelVariant::MhtAlleeAltFood}) {
      const auto d = vector_field(v, State{z, 0, Frame::Dimensional}, p);
      CHECK(d[1] == 0.0);
    }
    // N = 0 forces dN/dt = 0 where the field is defined
    for (auto v : {ModelVariant::MhtAltFood, ModelVariant::MhtAlleeAltFood}) {
      const auto d = vector_field(v, State{0, z * p.n, Frame::Dimensional}, p);
      CHECK(d[0] == 0.0);
    }
  }
}

TEST_CASE("rescaled fields: boundary equilibria and unsupported variants") {
  const auto np = nondimensionalize(table_params(700, 1.25, 15));
  {
    const auto d = vector_field_rescaled(ModelVariant::MhtAllee, State{1, 0, Frame::Rescaled}, np);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
  }
  {
    const auto d =
        vector_field_rescaled(ModelVariant::MhtAlleeAltFood, State{0, np.C, Frame::Rescaled}, np);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(0.0).epsilon(1e-18));
  }
  for (auto v : {ModelVariant::LeslieGower, ModelVariant::Mht, ModelVariant::MhtAltFood})
    CHECK_THROWS_AS(vector_field_rescaled(v, State{0.5, 0.5, Frame::Rescaled}, np),
                    std::invalid_argument);
}

TEST_CASE("rescaled fields are nonsingular on the whole closed quadrant") {
  const auto np = nondimensionalize(table_params(700, 1.25, -15));
  oracle::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.uniform(0.0, 2.0);
    const auto d12 = vector_field_rescaled(ModelVariant::MhtAllee, State{0, v, Frame::Rescaled}, np);
    CHECK(d12[0] == 0.0);
    CHECK(std::isfinite(d12[1]));
    const auto d15 =
        vector_field_rescaled(ModelVariant::MhtAlleeAltFood, State{0, v, Frame::Rescaled}, np);
    CHECK(d15[0] == 0.0);
    CHECK(std::isfinite(d15[1]));
  }
}

TEST_CASE("reduction consistency: c = 0 collapses the alternative-food variants") {
  auto p = table_params(700, 1.25, 15);
  p.c = 0;
  oracle::Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const double N = rng.uniform(1e-3, 1.5 * p.K);
    const double P = rng.uniform(1e-3, 2.0);
    const State x{N, P, Frame::Dimensional};
    const auto d1 = vector_field(ModelVariant::MhtAlleeAltFood, x, p);
    const auto d2 = vector_field(ModelVariant::MhtAllee, x, p);
    CHECK(d1[0] == d2[0]);
    CHECK(d1[1] == d2[1]);
    const auto d3 = vector_field(ModelVariant::MhtAltFood, x, p);
    const auto d4 = vector_field(ModelVariant::Mht, x, p);
    CHECK(d3[0] == d4[0]);
    CHECK(d3[1] == d4[1]);
  }
}

TEST_CASE("rescaled and dimensional frames agree through the change of variables") {
  // du/dtau = (dt/dtau) * d(N/K)/dt must match the rescaled field pointwise.
  for (double m : {15.0, -15.0}) {
    const auto p = table_params(700, 1.25, m);
    const auto np = nondimensionalize(p);
    oracle::Rng rng(31);
    for (auto v : {ModelVariant::MhtAllee, ModelVariant::MhtAlleeAltFood}) {
      for (int i = 0; i < 200; ++i) {
        const double u = rng.uniform(1e-3, 1.2);
        const double w = rng.uniform(1e-3, 1.2);
        const State xr{u, w, Frame::Rescaled};
        const State xd = to_dimensional(xr, p);
        const auto dr = vector_field_rescaled(v, xr, np);
        const auto dd = vector_field(v, xd, p);
        const double fac = rescaled_time_factor(v, u, np, p.r, p.K);
        // dN/dt = K du/dt = K du/dtau / fac
        CHECK(dd[0] == doctest::Approx(p.K * dr[0] / fac).epsilon(1e-10));
        CHECK(dd[1] == doctest::Approx(p.n * p.K * dr[1] / fac).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("state frame conversions round-trip") {
  const auto p = table_params(700, 1.25, 15);
  const State x{37.5, 1.875, Frame::Dimensional};
  const State r = to_rescaled(x, p);
  CHECK(r.prey == doctest::Approx(0.25));
  CHECK(r.predator == doctest::Approx(0.5));
  const State back = to_dimensional(r, p);
  CHECK(back.prey == doctest::Approx(x.prey).epsilon(1e-14));
  CHECK(back.predator == doctest::Approx(x.predator).epsilon(1e-14));
}

TEST_CASE("variant names round-trip") {
  for (auto v : {ModelVariant::LeslieGower, ModelVariant::Mht, ModelVariant::MhtAllee,
                 ModelVariant::MhtAltFood, ModelVariant::MhtAlleeAltFood})
    CHECK(variant_from_name(variant_name(v)) == v);
  CHECK_THROWS_AS(variant_from_name("nope"), std::invalid_argument);
}
