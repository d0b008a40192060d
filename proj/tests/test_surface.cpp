#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lightcone/invariants.hpp"
#include "lightcone/sampling.hpp"
#include "lightcone/surface.hpp"

using namespace lightcone;

TEST_CASE("catalog contents") {
  CHECK(find_catalog_entry("example1_base") != nullptr);
  CHECK(find_catalog_entry("example1_sigma") != nullptr);
  CHECK(find_catalog_entry("example2_sigma") != nullptr);
  CHECK(find_catalog_entry("round_sphere") != nullptr);
  CHECK(find_catalog_entry("counterexample_cylinder") != nullptr);
  // the six factor rows and their swaps
  for (const char* n :
       {"example1_exp_x", "example1_sech_x", "example1_csch_x", "example1_expfrac_x",
        "example1_sec_y", "example1_csc_y", "example1_exp_y", "example1_sech_y",
        "example1_csch_y", "example1_expfrac_y", "example1_sec_x", "example1_csc_x"})
    CHECK(find_catalog_entry(n) != nullptr);

  const CatalogEntry* base = find_catalog_entry("example1_base");
  CHECK(base->claims_lightcone);
  CHECK_FALSE(base->compact);

  const Surface rs = instantiate("round_sphere", {{"r", 2.0}});
  CHECK(rs.expected_K == 0.25);
  CHECK(rs.expected_umbilical == true);

  const CatalogEntry* ce = find_catalog_entry("counterexample_cylinder");
  CHECK_FALSE(ce->claims_lightcone);
  CHECK(ce->compact);
}

TEST_CASE("instantiate validation") {
  CHECK_THROWS_AS(instantiate("no_such_surface"), UnknownSurface);
  CHECK_THROWS_AS(instantiate("round_sphere", {{"r", -1.0}}), BadParameter);
  CHECK_THROWS_AS(instantiate("round_sphere", {{"u0", -2.0}}), BadParameter);  // not unit
  CHECK_THROWS_AS(instantiate("round_sphere", {{"u0", 1.0}, {"u1", 0.0}}), BadParameter);
  CHECK_THROWS_AS(instantiate("example1_sigma"), BadParameter);  // factor required
  CHECK_THROWS_AS(instantiate("example1_sech_x", {}, parse_sigma("x")), BadParameter);
  // sigma with z on a plane domain
  CHECK_THROWS_AS(instantiate("example1_sigma", {}, parse_sigma("z")), BadParameter);
  // unbound parameter
  CHECK_THROWS_AS(instantiate("example1_sigma", {}, parse_sigma("c*x")), BadParameter);
  CHECK_NOTHROW(instantiate("example1_sigma", {{"c", 2.0}}, parse_sigma("c*x")));

  const Surface sech2 = instantiate("example1_sech_x", {{"a", 2.0}});
  CHECK(sech2.expected_K == 0.25);

  // boosted u is accepted
  const double c = std::cosh(0.5), s = std::sinh(0.5);
  CHECK_NOTHROW(instantiate("round_sphere", {{"u0", -c}, {"u1", s}}));
}

TEST_CASE("round sphere height from <u,x> = r") {
  const Surface s = instantiate("round_sphere", {{"r", 2.0}});
  SampleRng rng(7);
  for (int i = 0; i < 50; ++i) {
    const ImmersionJet j = s.eval(s.chart_point(rng.sphere_point()));
    CHECK(j.position().x0 == Catch::Approx(2.0).margin(1e-12));
    CHECK(on_future_lightcone(j.position()));
  }
}

TEST_CASE("sigma zero reproduces the unit sphere") {
  const Surface a = instantiate("example2_sigma", {}, parse_sigma("0"));
  const Surface b = instantiate("round_sphere");
  CHECK(a.expected_K == 1.0);
  CHECK(a.expected_umbilical == true);
  SampleRng rng(11);
  for (int i = 0; i < 50; ++i) {
    const ChartPoint p = a.chart_point(rng.sphere_point());
    const Vec4 pa = a.eval(p).position();
    const Vec4 pb = b.eval(p).position();
    CHECK(euclid_norm(pa - pb) < 1e-14);
  }
}

TEST_CASE("lightcone membership across the catalog") {
  for (const CatalogEntry& e : catalog()) {
    if (e.sigma_required) continue;
    const Surface s = instantiate(e.name);
    const auto pts = random_points(s, 1000, 20240831);
    int hits = 0;
    for (const ChartPoint& p : pts)
      hits += on_future_lightcone(s.eval(p).position()) ? 1 : 0;
    INFO(e.name);
    if (e.claims_lightcone)
      CHECK(hits == 1000);
    else
      CHECK(hits == 0);
  }
}

TEST_CASE("spacelike validation") {
  const Surface base = instantiate("example1_base");
  const auto grid = grid_points(base, 20, 20);
  const SpacelikeReport rep = validate_spacelike(base, grid);
  CHECK(rep.pass);
  for (const auto& r : rep.points) {
    CHECK(r.detg == Catch::Approx(1.0).margin(1e-12));
    CHECK(r.g11 == Catch::Approx(1.0).margin(1e-12));
  }

  const Surface sphere = instantiate("example2_sigma", {}, parse_sigma("0"));
  const ChartPoint center{0, 0.0, 0.0};
  const SpacelikeReport rep2 = validate_spacelike(sphere, {center});
  CHECK(rep2.pass);
  // round metric in stereographic coordinates: g = 4/(1+s^2+t^2)^2 I
  CHECK(rep2.points[0].g11 == Catch::Approx(4.0).margin(1e-12));
  CHECK(rep2.points[0].detg == Catch::Approx(16.0).margin(1e-12));

  // degenerate constant map fails
  const Surface degenerate = make_custom_surface(
      "degenerate", {"1", "1", "0", "0"}, RectDomain{-1, 1, -1, 1, false});
  const SpacelikeReport rep3 = validate_spacelike(degenerate, {{0, 0.1, 0.2}});
  CHECK_FALSE(rep3.pass);
}

TEST_CASE("conformal factor scales the metric by e^{2 sigma}") {
  const ConformalFactor sigma = parse_sigma("0.3*x - 0.2*x*y");
  const Surface base = instantiate("example1_base");
  const Surface conf = instantiate("example1_sigma", {}, sigma);
  SampleRng rng(5);
  for (int i = 0; i < 200; ++i) {
    const ChartPoint p{0, rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const MetricFrame g0 = metric_frame(base.eval(p));
    const MetricFrame g1 = metric_frame(conf.eval(p));
    const std::array<Jet2, 3> vars = {Jet2::variable(p.s, 0), Jet2::variable(p.t, 1),
                                      Jet2::constant(0)};
    const double factor = std::exp(2.0 * sigma.eval<2>(vars, 2, {}).value);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(g1.g(a, b) == Catch::Approx(factor * g0.g(a, b)).epsilon(1e-10).margin(1e-12));
  }

  // sphere family too
  const ConformalFactor sig2 = parse_sigma("0.3*x + 0.1*y*z");
  const Surface b2 = instantiate("example2_sigma", {}, parse_sigma("0"));
  const Surface c2 = instantiate("example2_sigma", {}, sig2);
  for (int i = 0; i < 200; ++i) {
    const ChartPoint p = b2.chart_point(rng.sphere_point());
    const MetricFrame g0 = metric_frame(b2.eval(p));
    const MetricFrame g1 = metric_frame(c2.eval(p));
    const double sv = sig2.eval<2>(atlas::chart_jets(p.chart, p.s, p.t), 3, {}).value;
    const double factor = std::exp(2.0 * sv);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        CHECK(g1.g(a, b) == Catch::Approx(factor * g0.g(a, b)).epsilon(1e-10).margin(1e-12));
  }
}

TEST_CASE("chart overlap gives chart-independent invariants") {
  const Surface s = instantiate("example2_sigma", {}, parse_sigma("0.3*x + 0.2*y"));
  SampleRng rng(13);
  int tested = 0;
  while (tested < 100) {
    const Eigen::Vector3d n = rng.sphere_point();
    if (std::abs(n.z()) > 0.75) continue;
    ++tested;
    const GeometryFrame f0 = geometry_frame(s, atlas::chart_point(n, 0));
    const GeometryFrame f1 = geometry_frame(s, atlas::chart_point(n, 1));
    REQUIRE(f0.shape);
    REQUIRE(f1.shape);
    CHECK(f0.shape->K_extrinsic == Catch::Approx(f1.shape->K_extrinsic).margin(1e-8));
    CHECK(f0.shape->H_sq == Catch::Approx(f1.shape->H_sq).margin(1e-8));
    CHECK(f0.shape->umbilicity_deficit ==
          Catch::Approx(f1.shape->umbilicity_deficit).margin(1e-8));
    CHECK(euclid_norm(f0.jet.position() - f1.jet.position()) < 1e-12);
  }
}

TEST_CASE("hard domains reject outside points") {
  const Surface s = instantiate("example1_csch_x");
  CHECK(s.rect.hard);
  CHECK_THROWS_AS(s.eval({0, 0.0, 0.0}), DomainError);
  CHECK_NOTHROW(s.eval({0, 0.5, 0.0}));
}
