#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/embed.hpp"
#include "lightcone/invariants.hpp"
#include "lightcone/report.hpp"
#include "lightcone/sampling.hpp"
#include "lightcone/spectrum.hpp"
#include "lightcone/surface.hpp"

namespace lightcone {

struct VerifyOptions {
  double tol_k_exact = 1e-9;   // jet-exact curvature route agreement
  double tol_k_fd = 1e-5;      // finite-difference curvature routes
  double tol_eqh = 1e-8;       // H = -(K/2) xi - eta reconstruction
  double tol_a_xi = 1e-10;     // ||A_xi + I||
  double tol_parallel = 1e-6;  // normal-connection residuals
  double tol_closed_form = 1e-6;
  double tol_umbilical = 1e-8;   // deficit bound on umbilical surfaces
  double deficit_floor = 0.1;    // deficit required somewhere otherwise
  double tol_expected_K = 1e-9;
  double tol_pde = 1e-10;
  int residual_points = 100;  // subsample for the slow FD residual checks
  Vec4 u{-1, 0, 0, 0};
};

namespace detail {

struct Worst {
  double value = 0.0;
  ChartPoint at;
  void offer(double v, const ChartPoint& p) {
    if (v > value) {
      value = v;
      at = p;
    }
  }
  Json json(const char* key) const {
    return Json{{key, value}, {"at", Json{{"chart", at.chart}, {"s", at.s}, {"t", at.t}}}};
  }
};

inline Json point_json(const ChartPoint& p) {
  return Json{{"chart", p.chart}, {"s", p.s}, {"t", p.t}};
}

}  // namespace detail

/// Pointwise identity verification over a sample: curvature route
/// agreement, the mean-curvature reconstruction, shape-operator and
/// normal-connection certificates, and the family closed-form cross-checks.
inline std::vector<CheckRecord> verify_checks(const Surface& s,
                                              const std::vector<ChartPoint>& pts,
                                              const VerifyOptions& opt = {}) {
  std::vector<CheckRecord> checks;
  FrameOptions fopt;
  fopt.u = opt.u;

  std::vector<GeometryFrame> frames;
  frames.reserve(pts.size());
  int not_spacelike = 0;
  std::string first_error;
  for (const ChartPoint& p : pts) {
    try {
      frames.push_back(geometry_frame(s, p, fopt));
    } catch (const Error& e) {
      ++not_spacelike;
      if (first_error.empty()) first_error = e.what();
    }
  }
  checks.push_back(CheckRecord::make(
      "spacelike", "det g > 0 at every sample point", 0.0, not_spacelike == 0,
      Json{{"points", pts.size()}, {"failures", not_spacelike}, {"first_error", first_error}}));
  if (frames.empty()) return checks;

  const int nres = std::min<int>(opt.residual_points, static_cast<int>(pts.size()));

  if (s.claims_lightcone) {
    detail::Worst k_mean, k_trace, k_log, k_log_u, k_brioschi, eqh, a_xi, a_eta, h_gap;
    double k_min = 0, k_max = 0;
    bool first = true;
    detail::Worst deficit_worst;
    double deficit_max = 0.0;
    for (const GeometryFrame& gf : frames) {
      const IdentityResiduals r = identity_residuals(gf);
      k_mean.offer(r.k_mean, gf.at);
      k_trace.offer(r.k_trace, gf.at);
      k_log.offer(r.k_log, gf.at);
      k_log_u.offer(r.k_log_u, gf.at);
      k_brioschi.offer(r.k_brioschi, gf.at);
      eqh.offer(r.eqh_norm, gf.at);
      a_xi.offer(r.a_xi_gap, gf.at);
      a_eta.offer(r.a_eta_gap, gf.at);
      h_gap.offer(r.h_route_gap, gf.at);
      const double k = gf.shape->K_extrinsic;
      k_min = first ? k : std::min(k_min, k);
      k_max = first ? k : std::max(k_max, k);
      first = false;
      deficit_worst.offer(gf.shape->umbilicity_deficit, gf.at);
      deficit_max = std::max(deficit_max, gf.shape->umbilicity_deficit);
    }

    checks.push_back(CheckRecord::make("k_mean_route", "K == <H,H>", opt.tol_k_exact,
                                       k_mean.value <= opt.tol_k_exact,
                                       k_mean.json("worst_gap")));
    checks.push_back(CheckRecord::make("k_trace_route", "K == -tr(A_eta)", opt.tol_k_exact,
                                       k_trace.value <= opt.tol_k_exact,
                                       k_trace.json("worst_gap")));
    checks.push_back(CheckRecord::make("k_log_route", "K == -lap log(psi0) + 1/psi0^2",
                                       opt.tol_k_fd, k_log.value <= opt.tol_k_fd,
                                       k_log.json("worst_gap")));
    checks.push_back(CheckRecord::make("k_log_u_route", "K == -lap log<psi,u> + 1/<psi,u>^2",
                                       opt.tol_k_fd, k_log_u.value <= opt.tol_k_fd,
                                       k_log_u.json("worst_gap")));
    checks.push_back(CheckRecord::make("k_brioschi_route",
                                       "K == intrinsic curvature of the induced metric",
                                       opt.tol_k_fd, k_brioschi.value <= opt.tol_k_fd,
                                       k_brioschi.json("worst_gap")));
    checks.push_back(CheckRecord::make("mean_curvature_reconstruction",
                                       "H == -(K/2) xi - eta", opt.tol_eqh,
                                       eqh.value <= opt.tol_eqh, eqh.json("worst_norm")));
    checks.push_back(CheckRecord::make("shape_operator_xi", "A_xi == -I", opt.tol_a_xi,
                                       a_xi.value <= opt.tol_a_xi, a_xi.json("worst_gap")));
    checks.push_back(CheckRecord::make("shape_operator_eta_routes",
                                       "A_eta == -(1+|grad psi0|^2)/(2 psi0^2) I + hess(psi0)/psi0",
                                       opt.tol_k_exact, a_eta.value <= opt.tol_k_exact,
                                       a_eta.json("worst_gap")));
    checks.push_back(CheckRecord::make("mean_curvature_routes", "2H == tr_g II", opt.tol_k_exact,
                                       h_gap.value <= opt.tol_k_exact, h_gap.json("worst_gap")));
    checks.push_back(CheckRecord::skip("curvature_range", "Gauss curvature over the sample",
                                       Json{{"k_min", k_min}, {"k_max", k_max}}));

    // normal-connection residuals on a subsample
    detail::Worst par_xi, par_eta, par_H;
    for (int i = 0; i < nres; ++i) {
      const ChartPoint& p = frames[i].at;
      par_xi.offer(normal_parallel_residual(s, p, NormalField::xi), p);
      par_eta.offer(normal_parallel_residual(s, p, NormalField::eta), p);
      par_H.offer(normal_parallel_residual(s, p, NormalField::H), p);
    }
    checks.push_back(CheckRecord::make("normal_parallel_xi", "normal connection: D xi has no normal part",
                                       opt.tol_parallel, par_xi.value <= opt.tol_parallel,
                                       par_xi.json("worst_residual")));
    checks.push_back(CheckRecord::make("normal_parallel_eta", "normal connection: D eta has no normal part",
                                       opt.tol_parallel, par_eta.value <= opt.tol_parallel,
                                       par_eta.json("worst_residual")));
    if (s.expects_constant_K) {
      checks.push_back(CheckRecord::make("normal_parallel_H",
                                         "constant K implies parallel mean curvature vector",
                                         opt.tol_parallel, par_H.value <= opt.tol_parallel,
                                         par_H.json("worst_residual")));
      const double spread = k_max - k_min;
      checks.push_back(CheckRecord::make("constant_curvature", "K is constant on the surface",
                                         opt.tol_expected_K, spread <= opt.tol_expected_K,
                                         Json{{"k_min", k_min}, {"k_max", k_max},
                                              {"spread", spread}}));
    } else {
      Json v = par_H.json("worst_residual");
      checks.push_back(CheckRecord::skip("normal_parallel_H",
                                         "informational: K is not expected constant", v));
    }

    if (s.expected_K) {
      const double want = *s.expected_K;
      const double gap = std::max(std::abs(k_min - want), std::abs(k_max - want));
      checks.push_back(CheckRecord::make("expected_curvature", "K matches the catalog value",
                                         opt.tol_expected_K, gap <= opt.tol_expected_K,
                                         Json{{"expected", want}, {"worst_gap", gap}}));
    }

    if (s.expected_umbilical.has_value()) {
      if (*s.expected_umbilical) {
        checks.push_back(CheckRecord::make(
            "umbilical", "hess(psi0) is pure trace on a totally umbilical surface",
            opt.tol_umbilical, deficit_worst.value <= opt.tol_umbilical,
            deficit_worst.json("worst_deficit")));
      } else {
        checks.push_back(CheckRecord::make(
            "not_umbilical", "umbilicity deficit exceeds the floor somewhere",
            opt.deficit_floor, deficit_max >= opt.deficit_floor,
            Json{{"max_deficit", deficit_max}}));
      }
    }

    // family closed forms
    if (s.kind == SurfaceKind::example1 && s.sigma) {
      detail::Worst ii_gap, pde;
      for (const GeometryFrame& gf : frames) {
        const Example1ClosedForms cf =
            example1_closed_forms(*s.sigma, s.params, gf.at.s, gf.at.t);
        const double scale = std::max(1.0, cf.II_eta.norm());
        ii_gap.offer((cf.II_eta - gf.shape->II_eta).norm() / scale, gf.at);
        pde.offer(cf.pde_residual.norm(), gf.at);
      }
      checks.push_back(CheckRecord::make("closed_form_ii_eta",
                                         "displayed II_eta matrix == generic pipeline",
                                         opt.tol_closed_form, ii_gap.value <= opt.tol_closed_form,
                                         ii_gap.json("worst_gap")));
      if (s.expected_umbilical.has_value() && *s.expected_umbilical) {
        checks.push_back(CheckRecord::make("pde_solution",
                                           "umbilicity system residual vanishes", opt.tol_pde,
                                           pde.value <= opt.tol_pde, pde.json("worst_residual")));
      } else {
        checks.push_back(
            CheckRecord::skip("pde_residual", "informational: umbilicity system residual",
                              pde.json("worst_residual")));
      }
    }
    if ((s.kind == SurfaceKind::example2 || s.kind == SurfaceKind::round_sphere) && s.sigma) {
      detail::Worst ii_gap;
      for (const GeometryFrame& gf : frames) {
        const Example2ClosedForm cf = example2_closed_form(*s.sigma, s.params, gf.at);
        const double scale = std::max(1.0, gf.shape->II_eta.norm());
        ii_gap.offer((cf.II_eta_chart - gf.shape->II_eta).norm() / scale, gf.at);
      }
      checks.push_back(CheckRecord::make("closed_form_ii_eta_sphere",
                                         "ambient-extension II_eta form == generic pipeline",
                                         opt.tol_closed_form, ii_gap.value <= opt.tol_closed_form,
                                         ii_gap.json("worst_gap")));
    }
    if (s.sigma && s.kind != SurfaceKind::custom && s.kind != SurfaceKind::counterexample) {
      const Surface base = s.kind == SurfaceKind::example1
                               ? instantiate("example1_base")
                               : instantiate("example2_sigma", {}, parse_sigma("0"));
      const double base_K = s.kind == SurfaceKind::example1 ? 0.0 : 1.0;
      detail::Worst gap;
      for (const GeometryFrame& gf : frames) {
        const double k = conformal_curvature(base, base_K, *s.sigma, s.params, gf.at);
        gap.offer(std::abs(k - gf.shape->K_extrinsic), gf.at);
      }
      checks.push_back(CheckRecord::make("conformal_curvature_rule",
                                         "K_sigma == (K - lap sigma) e^{-2 sigma}",
                                         opt.tol_closed_form, gap.value <= opt.tol_closed_form,
                                         gap.json("worst_gap")));
    }

    // certificate (cone membership, A_xi, parallel xi) on the subsample
    const std::vector<ChartPoint> sub(pts.begin(), pts.begin() + nres);
    const CertificateReport cert = lightcone_certificate(s, sub, opt.tol_parallel);
    checks.push_back(CheckRecord::make(
        "lightcone_certificate",
        "on the cone with A_xi == -I and parallel xi at every sample", opt.tol_parallel,
        cert.pass,
        Json{{"worst_cone_defect", cert.worst_cone_defect},
             {"worst_a_xi", cert.worst_a_xi},
             {"worst_parallel", cert.worst_parallel}}));
  } else {
    // non-lightcone surfaces: membership must fail and the generic pipeline
    // carries the curvature data
    int on_cone = 0;
    double k_min = 0, k_max = 0;
    bool first = true;
    for (const GeometryFrame& gf : frames) {
      on_cone += on_future_lightcone(gf.jet.position()) ? 1 : 0;
      k_min = first ? gf.K_generic : std::min(k_min, gf.K_generic);
      k_max = first ? gf.K_generic : std::max(k_max, gf.K_generic);
      first = false;
    }
    const std::vector<ChartPoint> sub(pts.begin(), pts.begin() + nres);
    const CertificateReport cert = lightcone_certificate(s, sub, opt.tol_parallel);
    checks.push_back(CheckRecord::make(
        "lightcone_certificate", "surface does not factor through the cone (failure expected)",
        opt.tol_parallel, cert.pass,
        Json{{"worst_cone_defect", cert.worst_cone_defect},
             {"points_on_cone", on_cone},
             {"expected_failure", true}}));
    if (s.expected_K) {
      const double want = *s.expected_K;
      const double gap = std::max(std::abs(k_min - want), std::abs(k_max - want));
      checks.push_back(CheckRecord::make("expected_curvature",
                                         "intrinsic K matches the catalog value",
                                         opt.tol_expected_K, gap <= opt.tol_expected_K,
                                         Json{{"expected", want}, {"worst_gap", gap}}));
    }
  }

  // grid diagnostic for plane domains: no psi0 maximum inside a K <= 0 patch
  if (s.domain == DomainKind::rectangle && s.claims_lightcone) {
    const int W = 25, H = 25;
    std::vector<double> psi0, K;
    bool computable = true;
    for (const ChartPoint& p : grid_points(s, W, H)) {
      try {
        const GeometryFrame gf = geometry_frame(s, p, {.fd_curvatures = false});
        psi0.push_back(gf.jet.position().x0);
        K.push_back(gf.shape ? gf.shape->K_extrinsic : gf.K_generic);
      } catch (const Error&) {
        computable = false;
        break;
      }
    }
    if (computable) {
      const auto flags = flag_extrema(psi0, K, W, H);
      checks.push_back(CheckRecord::make(
          "extrema_sign_diagnostic",
          "no local maximum of psi0 inside a nonpositive-curvature patch", 0.0, flags.empty(),
          Json{{"flags", flags.size()}}));
    }
  }

  return checks;
}

/// Per-point table for the eval command.
inline std::vector<EvalRow> eval_rows(const Surface& s, const std::vector<ChartPoint>& pts,
                                      const FrameOptions& fopt = {}) {
  std::vector<EvalRow> rows;
  rows.reserve(pts.size());
  for (const ChartPoint& p : pts) {
    EvalRow row;
    row.chart = p.chart;
    row.s = p.s;
    row.t = p.t;
    try {
      const GeometryFrame gf = geometry_frame(s, p, fopt);
      row.values.emplace_back("detg", gf.metric.detg);
      row.values.emplace_back("psi0", gf.jet.position().x0);
      for (const auto& [name, v] : gf.K_by) row.values.emplace_back("K_" + name, v);
      if (gf.shape) {
        row.values.emplace_back("H_sq", gf.shape->H_sq);
        row.values.emplace_back("II_sq", gf.shape->II_sq);
        row.values.emplace_back("umbilicity_deficit", gf.shape->umbilicity_deficit);
        row.values.emplace_back("lap_psi0", gf.normal->lap_psi0);
        row.values.emplace_back("grad_psi0_normsq", gf.normal->grad_psi0_normsq);
      } else {
        row.values.emplace_back("H_sq", gf.H_sq_generic);
        row.values.emplace_back("II_sq", gf.II_sq_generic);
      }
    } catch (const Error&) {
      row.spacelike = false;
    }
    rows.push_back(row);
  }
  return rows;
}

/// Mesh-level checks: the three 4*pi integrals, the Euler characteristic,
/// the extrema scan and, off the lightcone, the Reilly-form evaluation.
inline std::vector<CheckRecord> integrate_checks(const Surface& s, const EmbeddedMesh& em,
                                                 double tol = 0.005) {
  std::vector<CheckRecord> checks;

  const CertificateReport cert =
      lightcone_certificate(s, random_points(s, 200, 5150), 1e-6);
  checks.push_back(CheckRecord::make(
      "lightcone_certificate",
      s.claims_lightcone ? "on the cone with A_xi == -I and parallel xi"
                         : "surface does not factor through the cone (failure expected)",
      1e-6, cert.pass,
      Json{{"worst_cone_defect", cert.worst_cone_defect},
           {"worst_a_xi", cert.worst_a_xi},
           {"worst_parallel", cert.worst_parallel}}));

  checks.push_back(CheckRecord::make(
      "euler_characteristic", "compact surface in a cone is a topological 2-sphere", 0.0,
      em.mesh.euler_characteristic() == 2, Json{{"chi", em.mesh.euler_characteristic()}}));

  const double four_pi = 4.0 * M_PI;
  const double int_K = integrate(em, "K");
  checks.push_back(CheckRecord::make("gauss_bonnet", "int K dA == 4*pi", tol,
                                     std::abs(int_K - four_pi) / four_pi <= tol,
                                     Json{{"integral", int_K},
                                          {"deviation", std::abs(int_K - four_pi) / four_pi}}));
  const double int_H = integrate(em, "H_sq");
  if (s.claims_lightcone) {
    checks.push_back(CheckRecord::make("willmore_integral", "int <H,H> dA == 4*pi", tol,
                                       std::abs(int_H - four_pi) / four_pi <= tol,
                                       Json{{"integral", int_H},
                                            {"deviation", std::abs(int_H - four_pi) / four_pi}}));
    const double int_inv = integrate(em, "inv_psi_u_sq");
    checks.push_back(CheckRecord::make("cone_height_integral", "int <psi,u>^-2 dA == 4*pi", tol,
                                       std::abs(int_inv - four_pi) / four_pi <= tol,
                                       Json{{"integral", int_inv},
                                            {"deviation", std::abs(int_inv - four_pi) / four_pi}}));
  } else {
    checks.push_back(CheckRecord::skip(
        "willmore_integral", "informational: int <H,H> dA off the cone",
        Json{{"integral", int_H}, {"area", em.total_area}}));
  }

  const ExtremaScanReport scan = local_extrema_scan(em);
  checks.push_back(CheckRecord::make(
      "extrema_sign_diagnostic", "no local maximum of psi0 inside a nonpositive-curvature patch",
      0.0, scan.flag_count == 0,
      Json{{"flags", scan.flag_count},
           {"maxima", scan.maxima.size()},
           {"constant_psi0", scan.degenerate_constant}}));
  return checks;
}

/// Spectrum checks: solver sanity, the eigenvalue inequalities with their
/// equality flags, and the expected lambda1 on constant-curvature spheres.
inline std::vector<CheckRecord> spectrum_checks(const Surface& s, const EmbeddedMesh& em, int k,
                                                const Vec4& u,
                                                SpectrumResult* out_spec = nullptr) {
  std::vector<CheckRecord> checks;
  const SpectrumResult spec = first_eigenvalue(em, k);
  if (out_spec) *out_spec = spec;

  bool sorted = true;
  for (std::size_t i = 1; i < spec.low_eigs.size(); ++i)
    sorted = sorted && spec.low_eigs[i] >= spec.low_eigs[i - 1] - 1e-12;
  Json eigs = Json::array();
  for (double v : spec.low_eigs) eigs.push_back(v);
  checks.push_back(CheckRecord::make(
      "spectrum_sanity", "eigenvalues nonnegative, nondecreasing, lambda0 == 0", 1e-8,
      sorted && spec.low_eigs[0] >= -1e-8 && std::abs(spec.low_eigs[0]) <= 1e-8,
      Json{{"low_eigs", eigs},
           {"iterations", spec.iterations},
           {"residual", spec.residual},
           {"multiplicity_estimate", spec.multiplicity_estimate}}));

  if (s.expects_constant_K && s.expected_K && *s.expected_K > 0.0) {
    const double want = 2.0 * *s.expected_K;
    checks.push_back(CheckRecord::make(
        "lambda1_constant_curvature", "lambda1 == 2 K for the constant-curvature sphere", 0.01,
        std::abs(spec.lambda1 - want) / want <= 0.01,
        Json{{"lambda1", spec.lambda1}, {"expected", want},
             {"multiplicity_estimate", spec.multiplicity_estimate}}));
  }

  const InequalityReport ineq = inequality_suite(em, spec, u);
  const char* anchors[] = {"lambda1 <= 8*pi/area", "lambda1 <= 2/min <psi,u>^2",
                           "area <= 2 sqrt(pi) |<psi,u>|_L2", "lambda1 <= 2 int<H,H>/area"};
  for (std::size_t i = 0; i < ineq.checks.size(); ++i) {
    const InequalityCheck& c = ineq.checks[i];
    const std::string anchor = i < 4 ? anchors[i] : "lambda1 vs 2 int<H,H>/area off the cone";
    Json v{{"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}, {"equality_flag", c.equality_flag}};
    if (!c.applicable) {
      checks.push_back(CheckRecord::skip(c.name, anchor + " (needs the cone)", v));
    } else {
      checks.push_back(CheckRecord::make(c.name, anchor, 0.0, c.holds, v));
    }
  }
  return checks;
}

}  // namespace lightcone
