#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "lightcone/invariants.hpp"
#include "lightcone/sampling.hpp"

using namespace lightcone;

namespace {

std::vector<ChartPoint> sample_of(const Surface& s, int n, std::uint64_t seed = 99) {
  return random_points(s, n, seed);
}

}  // namespace

TEST_CASE("metric frame of the flat immersion") {
  const Surface s = instantiate("example1_base");
  for (const ChartPoint& p : sample_of(s, 50)) {
    const MetricFrame mf = metric_frame(s.eval(p));
    CHECK((mf.g - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK(mf.christoffel[0].norm() < 1e-12);
    CHECK(mf.christoffel[1].norm() < 1e-12);
    CHECK((mf.g * mf.ginv - Eigen::Matrix2d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("metric frame homothety of round spheres") {
  const Surface unit = instantiate("round_sphere");
  const Surface r3 = instantiate("round_sphere", {{"r", 3.0}});
  SampleRng rng(3);
  for (int i = 0; i < 30; ++i) {
    const ChartPoint p = unit.chart_point(rng.sphere_point());
    const MetricFrame a = metric_frame(unit.eval(p));
    const MetricFrame b = metric_frame(r3.eval(p));
    CHECK((b.g - 9.0 * a.g).norm() < 1e-10 * b.g.norm());
  }
}

TEST_CASE("normal frame invariants") {
  for (const char* name : {"example1_base", "example1_sech_x", "example1_csch_x",
                           "example2_sigma", "round_sphere"}) {
    const Surface s = instantiate(name);
    for (const ChartPoint& p : sample_of(s, 60)) {
      const ImmersionJet jet = s.eval(p);
      const MetricFrame mf = metric_frame(jet);
      const NormalFrame nf = normal_frame(jet, mf);
      INFO(name);
      CHECK(std::abs(inner(nf.xi, nf.xi)) < 1e-9);
      CHECK(std::abs(inner(nf.eta, nf.eta)) < 1e-9);
      CHECK(inner(nf.xi, nf.eta) == Catch::Approx(1.0).margin(1e-9));
      for (int i = 0; i < 2; ++i) {
        CHECK(std::abs(inner(nf.xi, jet.d(i))) < 1e-9);
        CHECK(std::abs(inner(nf.eta, jet.d(i))) < 1e-9);
      }
    }
  }
}

TEST_CASE("normal frame of the flat immersion") {
  const Surface s = instantiate("example1_base");
  for (const ChartPoint& p : sample_of(s, 40)) {
    const ImmersionJet jet = s.eval(p);
    const NormalFrame nf = normal_frame(jet, metric_frame(jet));
    const double sh = std::sinh(p.s);
    CHECK(nf.grad_psi0_normsq == Catch::Approx(sh * sh).margin(1e-12));
  }
}

TEST_CASE("normal frame of round spheres") {
  const double r = 1.7;
  const Surface s = instantiate("round_sphere", {{"r", r}});
  SampleRng rng(21);
  for (int i = 0; i < 40; ++i) {
    const ChartPoint p = s.chart_point(rng.sphere_point());
    const ImmersionJet jet = s.eval(p);
    const NormalFrame nf = normal_frame(jet, metric_frame(jet));
    // eta = psi/(2 r^2) - (1/r) d0
    const Vec4 want = (1.0 / (2 * r * r)) * nf.xi - (1.0 / r) * Vec4{1, 0, 0, 0};
    CHECK(euclid_norm(nf.eta - want) < 1e-12);
  }
}

TEST_CASE("off-cone points are rejected") {
  const Surface s = instantiate("counterexample_cylinder");
  const ChartPoint p = s.chart_point({0.4, 0.6, std::sqrt(1 - 0.16 - 0.36)});
  const ImmersionJet jet = s.eval(p);
  CHECK_THROWS_AS(normal_frame(jet, metric_frame(jet)), NotOnLightcone);
}

TEST_CASE("shape data of round spheres") {
  for (double r : {1.0, 2.0}) {
    const Surface s = instantiate("round_sphere", {{"r", r}});
    SampleRng rng(31);
    for (int i = 0; i < 40; ++i) {
      const ChartPoint p = s.chart_point(rng.sphere_point());
      const GeometryFrame gf = geometry_frame(s, p);
      REQUIRE(gf.shape);
      const ShapeData& sd = *gf.shape;
      CHECK((sd.A_xi + Eigen::Matrix2d::Identity()).norm() < 1e-10);
      CHECK((sd.A_eta + 1.0 / (2 * r * r) * Eigen::Matrix2d::Identity()).norm() < 1e-10);
      // A_eta is self-adjoint with respect to g
      const Eigen::Matrix2d ga = gf.metric.g * sd.A_eta;
      CHECK((ga - ga.transpose()).norm() < 1e-9);
      for (const auto& [method, value] : gf.K_by) {
        INFO(method);
        CHECK(value == Catch::Approx(1.0 / (r * r)).margin(1e-6));
      }
      CHECK(sd.umbilicity_deficit < 1e-12);
      CHECK(sd.K_extrinsic == Catch::Approx(1.0 / (r * r)).margin(1e-12));
    }
  }
}

TEST_CASE("shape data of the flat marginally trapped immersion") {
  const Surface s = instantiate("example1_base");
  for (const ChartPoint& p : sample_of(s, 40)) {
    const GeometryFrame gf = geometry_frame(s, p);
    REQUIRE(gf.shape);
    CHECK(std::abs(gf.shape->K_extrinsic) < 1e-12);
    CHECK(std::abs(gf.shape->H_sq) < 1e-12);
    CHECK(euclid_norm(gf.shape->H) > 0.5);  // H itself never vanishes
    CHECK(gf.shape->umbilicity_deficit > 0.5);
    // closed form H = (cosh x / 2, sinh x / 2, -cos y / 2, -sin y / 2)
    const Vec4 want{0.5 * std::cosh(p.s), 0.5 * std::sinh(p.s), -0.5 * std::cos(p.t),
                    -0.5 * std::sin(p.t)};
    CHECK(euclid_norm(gf.shape->H - want) < 1e-12);
  }
}

TEST_CASE("shape data of the unit sphere") {
  const Surface s = instantiate("example2_sigma", {}, parse_sigma("0"));
  SampleRng rng(41);
  for (int i = 0; i < 40; ++i) {
    const Eigen::Vector3d n = rng.sphere_point();
    const GeometryFrame gf = geometry_frame(s, s.chart_point(n));
    REQUIRE(gf.shape);
    CHECK(gf.shape->K_extrinsic == Catch::Approx(1.0).margin(1e-12));
    CHECK(gf.shape->H_sq == Catch::Approx(1.0).margin(1e-12));
    const Vec4 want{0.0, -n.x(), -n.y(), -n.z()};  // H = -psi + d0
    CHECK(euclid_norm(gf.shape->H - want) < 1e-12);
  }
}

TEST_CASE("identity residuals across the lightcone catalog") {
  // a boosted direction makes the log_u route genuinely distinct from log
  FrameOptions fopt;
  fopt.u = {-std::cosh(0.4), std::sinh(0.4), 0.0, 0.0};
  for (const CatalogEntry& e : catalog()) {
    if (e.sigma_required || !e.claims_lightcone) continue;
    const Surface s = instantiate(e.name);
    for (const ChartPoint& p : sample_of(s, 60, 4242)) {
      const GeometryFrame gf = geometry_frame(s, p, fopt);
      const IdentityResiduals r = identity_residuals(gf);
      INFO(e.name << " at (" << p.s << ", " << p.t << ") chart " << p.chart);
      CHECK(r.k_mean < 1e-9);
      CHECK(r.k_trace < 1e-9);
      CHECK(r.k_log < 1e-5);
      CHECK(r.k_log_u < 1e-5);
      CHECK(r.k_brioschi < 1e-5);
      CHECK(r.eqh_norm < 1e-8);
      CHECK(r.a_xi_gap < 1e-10);
      CHECK(r.a_eta_gap < 1e-9);
      CHECK(r.h_route_gap < 1e-9);
    }
  }
}

TEST_CASE("generic ambient curvature matches the lightcone routes") {
  const Surface s = instantiate("example1_sech_x", {{"a", 2.0}});
  for (const ChartPoint& p : sample_of(s, 50)) {
    const GeometryFrame gf = geometry_frame(s, p);
    CHECK(gf.K_generic == Catch::Approx(0.25).margin(1e-9));
    CHECK(gf.shape->II_sq == Catch::Approx(gf.shape->II_sq_direct).margin(1e-9));
  }
  // the squared length of II vanishes identically on the marginally trapped base
  const Surface base = instantiate("example1_base");
  for (const ChartPoint& p : sample_of(base, 30)) {
    const GeometryFrame gf = geometry_frame(base, p);
    CHECK(std::abs(gf.shape->II_sq) < 1e-12);
    CHECK(std::abs(gf.shape->II_sq_direct) < 1e-12);
  }
}

TEST_CASE("factor table closed forms") {
  struct Row {
    const char* name;
    double a;
    double K;
    bool umbilical;
  };
  const Row rows[] = {
      {"example1_exp_x", 1.0, 0.0, true},       {"example1_sech_x", 1.0, 1.0, true},
      {"example1_sech_x", 2.0, 0.25, true},     {"example1_csch_x", 1.0, -1.0, true},
      {"example1_csch_x", 2.0, -0.25, true},    {"example1_expfrac_x", 1.0, -4.0, true},
      {"example1_sec_y", 1.0, -1.0, true},      {"example1_csc_y", 2.0, -0.25, true},
      {"example1_sech_y", 1.0, 1.0, false},     {"example1_csch_y", 1.0, -1.0, false},
      {"example1_sec_x", 1.0, -1.0, false},     {"example1_csc_x", 1.0, -1.0, false},
      {"example1_expfrac_y", 1.0, -4.0, false}, {"example1_exp_y", 1.0, 0.0, false},
  };
  for (const Row& row : rows) {
    const Surface s = instantiate(row.name, {{"a", row.a}});
    double worst_deficit = 0.0;
    for (const ChartPoint& p : sample_of(s, 60)) {
      const Example1ClosedForms cf = example1_closed_forms(*s.sigma, s.params, p.s, p.t);
      INFO(row.name << " a=" << row.a << " at (" << p.s << "," << p.t << ")");
      CHECK(cf.K_formula == Catch::Approx(row.K).margin(1e-10));
      const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
      CHECK(gf.shape->K_extrinsic == Catch::Approx(row.K).margin(1e-9));
      // the closed-form matrix is the generic covariant II_eta in this chart
      CHECK((cf.II_eta - gf.shape->II_eta).norm() < 1e-9 * std::max(1.0, cf.II_eta.norm()));
      if (row.umbilical) {
        CHECK(cf.pde_residual.norm() < 1e-10);
        CHECK(gf.shape->umbilicity_deficit < 1e-8);
      }
      worst_deficit = std::max(worst_deficit, gf.shape->umbilicity_deficit);
    }
    if (!row.umbilical) {
      INFO(row.name);
      CHECK(worst_deficit >= 0.1);
    }
  }
  // swapped sech has the constant residual (-2, 0)
  const Surface sw = instantiate("example1_sech_y");
  const Example1ClosedForms cf = example1_closed_forms(*sw.sigma, sw.params, 0.3, 0.8);
  CHECK(cf.pde_residual(0) == Catch::Approx(-2.0).margin(1e-12));
  CHECK(cf.pde_residual(1) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("sphere closed form") {
  SampleRng rng(55);

  SECTION("sigma = 0 gives half the round metric") {
    const Surface s = instantiate("example2_sigma", {}, parse_sigma("0"));
    for (int i = 0; i < 30; ++i) {
      const ChartPoint p = s.chart_point(rng.sphere_point());
      const Example2ClosedForm cf = example2_closed_form(*s.sigma, s.params, p);
      const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
      CHECK((cf.II_eta_chart - 0.5 * gf.metric.g).norm() < 1e-10);
      CHECK((cf.II_eta_chart - gf.shape->II_eta).norm() < 1e-10);
    }
  }

  SECTION("round sphere factor gives (1/2r^2) g_sigma") {
    const double r = 2.0;
    const double c = std::cosh(0.3), sh = std::sinh(0.3);
    const Surface s = instantiate("round_sphere", {{"r", r}, {"u0", -c}, {"u1", sh}});
    for (int i = 0; i < 30; ++i) {
      const ChartPoint p = s.chart_point(rng.sphere_point());
      const Example2ClosedForm cf = example2_closed_form(*s.sigma, s.params, p);
      const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
      CHECK((cf.II_eta_chart - (1.0 / (2 * r * r)) * gf.metric.g).norm() <
            1e-8 * gf.metric.g.norm());
      CHECK((cf.II_eta_chart - gf.shape->II_eta).norm() < 1e-8 * gf.metric.g.norm());
    }
    // with the expression taken as its own ambient extension the Hessian
    // equals d sigma x d sigma on tangent vectors
    const ChartPoint p = s.chart_point(rng.sphere_point());
    const Example2ClosedForm raw =
        example2_closed_form(*s.sigma, s.params, p, AmbientExtension::raw);
    const std::array<Jet2, 3> cj = atlas::chart_jets(p.chart, p.s, p.t);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Eigen::Vector3d ei{cj[0].grad[i], cj[1].grad[i], cj[2].grad[i]};
        Eigen::Vector3d ej{cj[0].grad[j], cj[1].grad[j], cj[2].grad[j]};
        CHECK(ei.dot(raw.hess0 * ej) ==
              Catch::Approx(raw.grad0.dot(ei) * raw.grad0.dot(ej)).margin(1e-10));
      }
  }

  SECTION("random polynomial sigma against the generic pipeline") {
    const ConformalFactor sig = parse_sigma("0.2*x + 0.1*x*y - 0.15*z*z + 0.05*y");
    const Surface s = instantiate("example2_sigma", {}, sig);
    for (int i = 0; i < 50; ++i) {
      const ChartPoint p = s.chart_point(rng.sphere_point());
      const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
      const Example2ClosedForm hom = example2_closed_form(sig, s.params, p);
      const Example2ClosedForm raw =
          example2_closed_form(sig, s.params, p, AmbientExtension::raw);
      CHECK((hom.II_eta_chart - gf.shape->II_eta).norm() <
            1e-6 * std::max(1.0, gf.shape->II_eta.norm()));
      // extension independence on tangent vectors
      CHECK((hom.II_eta_chart - raw.II_eta_chart).norm() <
            1e-10 * std::max(1.0, hom.II_eta_chart.norm()));
      // degree-0 homogeneous extensions kill the radial derivative
      CHECK(std::abs(hom.P_sigma) < 1e-12);
    }
  }
}

TEST_CASE("conformal curvature rule") {
  SECTION("identity factor on the sphere") {
    const Surface base = instantiate("example2_sigma", {}, parse_sigma("0"));
    SampleRng rng(61);
    const ChartPoint p = base.chart_point(rng.sphere_point());
    CHECK(conformal_curvature(base, 1.0, parse_sigma("0"), {}, p) ==
          Catch::Approx(1.0).margin(1e-12));
    // homothety: lap sigma = 0
    CHECK(conformal_curvature(base, 1.0, parse_sigma("log(3)"), {}, p) ==
          Catch::Approx(1.0 / 9.0).margin(1e-12));
  }

  SECTION("table factor on the plane") {
    const Surface base = instantiate("example1_base");
    const Surface inst = instantiate("example1_csch_x", {{"a", 2.0}});
    for (const ChartPoint& p : sample_of(inst, 40)) {
      const double k = conformal_curvature(base, 0.0, *inst.sigma, inst.params, p);
      CHECK(k == Catch::Approx(-0.25).margin(1e-10));
      const GeometryFrame gf = geometry_frame(inst, p, {.fd_curvatures = false});
      CHECK(k == Catch::Approx(gf.shape->K_extrinsic).margin(1e-6));
    }
  }

  SECTION("generic sigma on the sphere matches the instantiated surface") {
    const ConformalFactor sig = parse_sigma("0.3*x");
    const Surface base = instantiate("example2_sigma", {}, parse_sigma("0"));
    const Surface inst = instantiate("example2_sigma", {}, sig);
    SampleRng rng(71);
    for (int i = 0; i < 40; ++i) {
      const ChartPoint p = base.chart_point(rng.sphere_point());
      const double k = conformal_curvature(base, 1.0, sig, {}, p);
      const GeometryFrame gf = geometry_frame(inst, p, {.fd_curvatures = false});
      CHECK(k == Catch::Approx(gf.shape->K_extrinsic).margin(1e-6));
    }
  }
}

TEST_CASE("normal connection residuals") {
  SECTION("xi is parallel by construction") {
    for (const char* name : {"example1_base", "example1_sech_x", "round_sphere"}) {
      const Surface s = instantiate(name);
      for (const ChartPoint& p : sample_of(s, 20)) {
        CHECK(normal_parallel_residual(s, p, NormalField::xi) < 1e-8);
      }
    }
  }
  SECTION("eta is parallel") {
    const Surface s = instantiate("example1_sech_x");
    for (const ChartPoint& p : sample_of(s, 20)) {
      CHECK(normal_parallel_residual(s, p, NormalField::eta) < 1e-6);
    }
  }
  SECTION("H is parallel exactly for constant curvature") {
    const Surface constK = instantiate("example1_sec_y");
    for (const ChartPoint& p : sample_of(constK, 20)) {
      CHECK(normal_parallel_residual(constK, p, NormalField::H) < 1e-6);
    }
    const Surface varK = instantiate("example2_sigma", {}, parse_sigma("0.3*x"));
    double worst = 0.0;
    for (const ChartPoint& p : sample_of(varK, 40))
      worst = std::max(worst, normal_parallel_residual(varK, p, NormalField::H));
    CHECK(worst > 1e-3);
  }
}

TEST_CASE("lightcone certificate") {
  SampleRng rng(81);
  const Surface good = instantiate("example2_sigma", {}, parse_sigma("0.2*x - 0.1*y"));
  CHECK(lightcone_certificate(good, sample_of(good, 50)).pass);

  const Surface rs = instantiate("round_sphere", {{"r", 2.0}});
  const CertificateReport rep = lightcone_certificate(rs, sample_of(rs, 50));
  CHECK(rep.pass);
  CHECK(rep.worst_a_xi < 1e-12);

  const Surface bad = instantiate("counterexample_cylinder");
  const CertificateReport rep2 = lightcone_certificate(bad, sample_of(bad, 50));
  CHECK_FALSE(rep2.pass);
  CHECK(rep2.worst_cone_defect > 1e-3);  // <psi,psi> = -x^2 somewhere
}

TEST_CASE("pseudo-umbilical iff totally umbilical") {
  // A_H = (K/2 + c) I - (1/psi0) hess, so its traceless part is the
  // umbilicity deficit scaled by 1/psi0.
  for (const char* name : {"example1_base", "example1_sech_x", "example1_sech_y",
                           "round_sphere", "example2_sigma"}) {
    const Surface s = instantiate(name);
    for (const ChartPoint& p : sample_of(s, 30)) {
      const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
      const ShapeData& sd = *gf.shape;
      Eigen::Matrix2d s_h;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s_h(i, j) = inner(detail::ii_at(sd.II_ambient, i, j), sd.H);
      const Eigen::Matrix2d a_h = gf.metric.ginv * s_h;
      const Eigen::Matrix2d b = a_h - 0.5 * a_h.trace() * Eigen::Matrix2d::Identity();
      const double traceless = std::sqrt(std::max(0.0, (b * b).trace()));
      const double psi0 = gf.jet.position().x0;
      INFO(name);
      CHECK(traceless * psi0 ==
            Catch::Approx(sd.umbilicity_deficit).margin(1e-7 * std::max(1.0, sd.umbilicity_deficit)));
      CHECK((traceless <= 1e-6) == (sd.umbilicity_deficit <= 1e-6));
    }
  }
}

TEST_CASE("extrema diagnostic") {
  SECTION("catalog plane surfaces raise no flags") {
    for (const char* name : {"example1_base", "example1_sech_x", "example1_csch_x",
                             "example1_sec_y", "example1_csc_y", "example1_sech_y"}) {
      const Surface s = instantiate(name);
      const int W = 25, H = 25;
      std::vector<double> psi0, K;
      for (const ChartPoint& p : grid_points(s, W, H)) {
        const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
        psi0.push_back(gf.jet.position().x0);
        K.push_back(gf.shape->K_extrinsic);
      }
      INFO(name);
      CHECK(flag_extrema(psi0, K, W, H).empty());
    }
  }
  SECTION("injected contradiction is detected") {
    const int W = 5, H = 5;
    std::vector<double> psi0(W * H, 1.0), K(W * H, -0.5);
    psi0[2 * W + 2] = 2.0;  // strict interior maximum
    const auto flags = flag_extrema(psi0, K, W, H);
    REQUIRE(flags.size() == 1);
    CHECK(flags[0].i == 2);
    CHECK(flags[0].j == 2);
    // positive curvature anywhere in the neighborhood clears the flag
    K[2 * W + 3] = 0.2;
    CHECK(flag_extrema(psi0, K, W, H).empty());
  }
}

TEST_CASE("brioschi route sign sanity") {
  const Surface s = instantiate("example2_sigma", {}, parse_sigma("0"));
  SampleRng rng(91);
  for (int i = 0; i < 10; ++i) {
    const GeometryFrame gf = geometry_frame(s, s.chart_point(rng.sphere_point()));
    CHECK(gf.k_method("brioschi") == Catch::Approx(1.0).margin(1e-6));
  }
}
