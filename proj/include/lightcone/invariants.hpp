#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lightcone/errors.hpp"
#include "lightcone/jet.hpp"
#include "lightcone/minkowski.hpp"
#include "lightcone/surface.hpp"

namespace lightcone {

// ---------------------------------------------------------------------------
// Pointwise first-order data: induced metric and Christoffel symbols.
// ---------------------------------------------------------------------------

struct MetricFrame {
  Eigen::Matrix2d g;
  Eigen::Matrix2d ginv;
  double detg = 0.0;
  // christoffel[k](i,j) = Gamma^k_{ij}, symmetric in (i,j)
  std::array<Eigen::Matrix2d, 2> christoffel;
};

inline MetricFrame metric_frame(const ImmersionJet& jet) {
  MetricFrame mf;
  const Vec4 d0 = jet.d(0), d1 = jet.d(1);
  mf.g(0, 0) = inner(d0, d0);
  mf.g(0, 1) = mf.g(1, 0) = inner(d0, d1);
  mf.g(1, 1) = inner(d1, d1);
  mf.detg = mf.g(0, 0) * mf.g(1, 1) - mf.g(0, 1) * mf.g(1, 0);
  if (mf.detg <= 0.0 || mf.g(0, 0) <= 0.0) throw NotSpacelike(mf.detg);
  mf.ginv(0, 0) = mf.g(1, 1);
  mf.ginv(1, 1) = mf.g(0, 0);
  mf.ginv(0, 1) = mf.ginv(1, 0) = -mf.g(0, 1);
  mf.ginv /= mf.detg;

  // dg[k][i][j] = d_k g_ij, exact from the 2-jet via the product rule.
  const Vec4 d[2] = {d0, d1};
  double dg[2][2][2];
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        dg[k][i][j] = inner(jet.dd(k, i), d[j]) + inner(d[i], jet.dd(k, j));

  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l)
          s += mf.ginv(k, l) * 0.5 * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        mf.christoffel[k](i, j) = s;
      }
  return mf;
}

namespace detail {

/// Covariant Hessian of a scalar with chart partials p1 and raw second
/// partials p2: Hess_ij = p2_ij - Gamma^k_ij p1_k.
inline Eigen::Matrix2d covariant_hessian(const MetricFrame& mf, const Eigen::Vector2d& p1,
                                         const Eigen::Matrix2d& p2) {
  Eigen::Matrix2d h;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      h(i, j) = p2(i, j) - mf.christoffel[0](i, j) * p1(0) - mf.christoffel[1](i, j) * p1(1);
  return h;
}

/// Ambient (normal-valued) second fundamental form columns II_00, II_01, II_11.
inline std::array<Vec4, 3> ambient_ii(const ImmersionJet& jet, const MetricFrame& mf) {
  const Vec4 d[2] = {jet.d(0), jet.d(1)};
  auto col = [&](int i, int j) {
    Vec4 v = jet.dd(i, j);
    v -= mf.christoffel[0](i, j) * d[0];
    v -= mf.christoffel[1](i, j) * d[1];
    return v;
  };
  return {col(0, 0), col(0, 1), col(1, 1)};
}

inline const Vec4& ii_at(const std::array<Vec4, 3>& ii, int i, int j) {
  return ii[i + j];  // (0,0)->0, (0,1)/(1,0)->1, (1,1)->2
}

/// Shape operator A_nu = g^-1 [ <II_ij, nu> ] for a normal vector nu.
inline Eigen::Matrix2d shape_operator(const std::array<Vec4, 3>& ii, const MetricFrame& mf,
                                      const Vec4& nu) {
  Eigen::Matrix2d s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s(i, j) = inner(ii_at(ii, i, j), nu);
  return mf.ginv * s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Lightlike normal frame xi = psi, eta.
// ---------------------------------------------------------------------------

struct NormalFrame {
  Vec4 xi;                      // the position itself
  Vec4 T;                       // normal component of d/dx0 along the immersion
  Vec4 eta;                     // second lightlike normal, <xi,eta> = 1
  Eigen::Vector2d grad_psi0;    // raised-index chart components of grad psi0
  double grad_psi0_normsq = 0;  // g(grad psi0, grad psi0)
  double lap_psi0 = 0;
  Eigen::Matrix2d hess_psi0_cov;  // covariant Hessian of psi0
};

inline NormalFrame normal_frame(const ImmersionJet& jet, const MetricFrame& mf,
                                double lightcone_tol = 1e-9) {
  const Vec4 pos = jet.position();
  if (!on_future_lightcone(pos, lightcone_tol)) throw NotOnLightcone(inner(pos, pos), pos.x0);
  const double psi0 = pos.x0;

  NormalFrame nf;
  nf.xi = pos;
  const Eigen::Vector2d dpsi0(jet.coords[0].grad[0], jet.coords[0].grad[1]);
  nf.grad_psi0 = mf.ginv * dpsi0;
  nf.grad_psi0_normsq = dpsi0.dot(nf.grad_psi0);

  const Vec4 push = nf.grad_psi0(0) * jet.d(0) + nf.grad_psi0(1) * jet.d(1);
  nf.T = Vec4{1, 0, 0, 0} + push;
  nf.eta = ((1.0 + nf.grad_psi0_normsq) / (2.0 * psi0 * psi0)) * nf.xi - (1.0 / psi0) * nf.T;

  Eigen::Matrix2d p2;
  p2 << jet.coords[0].hess[0][0], jet.coords[0].hess[0][1], jet.coords[0].hess[1][0],
      jet.coords[0].hess[1][1];
  nf.hess_psi0_cov = detail::covariant_hessian(mf, dpsi0, p2);
  nf.lap_psi0 = (mf.ginv * nf.hess_psi0_cov).trace();
  return nf;
}

// ---------------------------------------------------------------------------
// Shape operators, mean curvature vector, Gauss curvature (jet-exact routes).
// ---------------------------------------------------------------------------

struct ShapeData {
  Eigen::Matrix2d A_xi;        // Weingarten route from the ambient II
  Eigen::Matrix2d A_eta;       // Weingarten route; K_trace reads this
  Eigen::Matrix2d A_eta_psi0;  // closed-form route from psi0 gradient data
  Eigen::Matrix2d II_eta;      // -<II(.,.), eta>, covariant
  Eigen::Matrix2d hess_psi0;   // endomorphism g^-1 Hess(psi0)
  Vec4 H;                      // psi0 closed-form route
  Vec4 H_ambient;              // (1/2) g^{ij} II_ij
  double H_sq = 0;
  double K_extrinsic = 0;
  double K_mean = 0;
  double K_trace = 0;
  double umbilicity_deficit = 0;
  double II_sq = 0;         // 4<H,H> - 2K
  double II_sq_direct = 0;  // orthonormal-frame summation of <II,II>
  std::array<Vec4, 3> II_ambient;
};

inline ShapeData shape_data(const ImmersionJet& jet, const MetricFrame& mf,
                            const NormalFrame& nf) {
  ShapeData sd;
  const double psi0 = nf.xi.x0;
  sd.II_ambient = detail::ambient_ii(jet, mf);
  sd.A_xi = detail::shape_operator(sd.II_ambient, mf, nf.xi);
  sd.A_eta = detail::shape_operator(sd.II_ambient, mf, nf.eta);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) sd.II_eta(i, j) = -inner(detail::ii_at(sd.II_ambient, i, j), nf.eta);

  sd.hess_psi0 = mf.ginv * nf.hess_psi0_cov;
  const double c = (1.0 + nf.grad_psi0_normsq) / (2.0 * psi0 * psi0);
  sd.A_eta_psi0 = -c * Eigen::Matrix2d::Identity() + sd.hess_psi0 / psi0;

  sd.H = (nf.lap_psi0 / (2.0 * psi0) - 2.0 * c) * nf.xi + (1.0 / psi0) * nf.T;
  sd.H_ambient = 0.5 * (mf.ginv(0, 0) * sd.II_ambient[0] + 2.0 * mf.ginv(0, 1) * sd.II_ambient[1] +
                        mf.ginv(1, 1) * sd.II_ambient[2]);
  sd.H_sq = inner(sd.H, sd.H);

  sd.K_extrinsic = 2.0 * c - nf.lap_psi0 / psi0;
  sd.K_mean = sd.H_sq;
  sd.K_trace = -sd.A_eta.trace();

  // Traceless part of the psi0 Hessian endomorphism, Frobenius norm taken in
  // a g-orthonormal frame: |B|^2 = tr(B^2) is basis independent for a
  // g-self-adjoint B.
  const Eigen::Matrix2d B = sd.hess_psi0 - 0.5 * nf.lap_psi0 * Eigen::Matrix2d::Identity();
  sd.umbilicity_deficit = std::sqrt(std::max(0.0, (B * B).trace()));

  sd.II_sq = 4.0 * sd.H_sq - 2.0 * sd.K_extrinsic;

  // Direct frame summation over a g-orthonormal basis e1, e2.
  const double g11 = mf.g(0, 0), g12 = mf.g(0, 1), g22 = mf.g(1, 1);
  const double e1c = 1.0 / std::sqrt(g11);
  const double gperp = g22 - g12 * g12 / g11;
  const double e2a = -(g12 / g11) / std::sqrt(gperp);
  const double e2b = 1.0 / std::sqrt(gperp);
  auto ii_on = [&](double a0, double a1, double b0, double b1) {
    Vec4 v = a0 * b0 * sd.II_ambient[0] + (a0 * b1 + a1 * b0) * sd.II_ambient[1] +
             a1 * b1 * sd.II_ambient[2];
    return v;
  };
  const Vec4 i11 = ii_on(e1c, 0, e1c, 0);
  const Vec4 i12 = ii_on(e1c, 0, e2a, e2b);
  const Vec4 i22 = ii_on(e2a, e2b, e2a, e2b);
  sd.II_sq_direct = inner(i11, i11) + 2.0 * inner(i12, i12) + inner(i22, i22);
  return sd;
}

// ---------------------------------------------------------------------------
// Full pointwise frame with the finite-difference curvature routes.
// ---------------------------------------------------------------------------

struct FrameOptions {
  double lightcone_tol = 1e-9;
  double fd_step = 1e-4;      // base step; scaled by the local jet length scale
  bool fd_curvatures = true;  // include the log / log_u / brioschi routes
  Vec4 u{-1, 0, 0, 0};        // timelike direction for the log_u route
};

/// Local length scale |d psi| / |d^2 psi| used to scale finite-difference
/// steps near the singular edges of restricted factors.
inline double local_scale(const ImmersionJet& jet) {
  double s = 1.0;
  for (int i = 0; i < 2; ++i) {
    const double first = euclid_norm(jet.d(i));
    double second = 1e-12;
    for (int j = 0; j < 2; ++j) second = std::max(second, euclid_norm(jet.dd(i, j)));
    s = std::min(s, first / second);
  }
  return std::clamp(s, 0.03, 1.0);
}

struct GeometryFrame {
  ChartPoint at;
  ImmersionJet jet;
  MetricFrame metric;
  std::optional<NormalFrame> normal;  // absent off the lightcone
  std::optional<ShapeData> shape;
  Vec4 H_generic;            // (1/2) tr_g II, any spacelike surface
  double H_sq_generic = 0;
  double II_sq_generic = 0;  // direct frame summation
  double K_generic = 0;      // 2<H,H> - <II,II>/2
  std::vector<std::pair<std::string, double>> K_by;
  double fd_scale = 1.0;

  double k_method(const std::string& m) const {
    for (const auto& [name, v] : K_by)
      if (name == m) return v;
    throw Error("curvature method '" + m + "' not computed");
  }
};

namespace detail {

/// Chart gradient of log f where f is a linear functional <psi, w> of the
/// coordinates, taken exactly from the jet.
inline Eigen::Vector2d dlog_inner(const ImmersionJet& jet, const Vec4& w) {
  const Jet2& c0 = jet.coords[0];
  const Jet2& c1 = jet.coords[1];
  const Jet2& c2 = jet.coords[2];
  const Jet2& c3 = jet.coords[3];
  const double f = -w.x0 * c0.value + w.x1 * c1.value + w.x2 * c2.value + w.x3 * c3.value;
  Eigen::Vector2d d;
  for (int i = 0; i < 2; ++i)
    d(i) = (-w.x0 * c0.grad[i] + w.x1 * c1.grad[i] + w.x2 * c2.grad[i] + w.x3 * c3.grad[i]) / f;
  return d;
}

inline double inner_with(const ImmersionJet& jet, const Vec4& w) {
  const Vec4 p = jet.position();
  return inner(p, w);
}

/// K = -lap log<psi,u> + 1/<psi,u>^2 with the Laplacian of log<psi,u>
/// assembled from central differences of the exact chart gradients.
template <typename EvalFn>
double k_log_route(const EvalFn& eval_at, const ChartPoint& p, const MetricFrame& mf,
                   const ImmersionJet& jet, const Vec4& u, double h) {
  Eigen::Matrix2d hnum;
  for (int i = 0; i < 2; ++i) {
    ChartPoint pp = p, pm = p;
    (i == 0 ? pp.s : pp.t) += h;
    (i == 0 ? pm.s : pm.t) -= h;
    const Eigen::Vector2d gp = dlog_inner(eval_at(pp), u);
    const Eigen::Vector2d gm = dlog_inner(eval_at(pm), u);
    for (int j = 0; j < 2; ++j) hnum(i, j) = (gp(j) - gm(j)) / (2.0 * h);
  }
  hnum = 0.5 * (hnum + hnum.transpose()).eval();
  const Eigen::Vector2d g1 = dlog_inner(jet, u);
  const Eigen::Matrix2d hcov = covariant_hessian(mf, g1, hnum);
  const double lap = (mf.ginv * hcov).trace();
  const double f = inner_with(jet, u);
  return -lap + 1.0 / (f * f);
}

/// Intrinsic Gauss curvature <R(d1,d2)d2, d1> / det g with the Christoffel
/// derivatives taken by central differences of exact symbols.
template <typename EvalFn>
double k_brioschi_route(const EvalFn& eval_at, const ChartPoint& p, const MetricFrame& mf,
                        double h) {
  std::array<Eigen::Matrix2d, 2> dgamma[2];  // dgamma[i][k](a,b) = d_i Gamma^k_ab
  for (int i = 0; i < 2; ++i) {
    ChartPoint pp = p, pm = p;
    (i == 0 ? pp.s : pp.t) += h;
    (i == 0 ? pm.s : pm.t) -= h;
    const MetricFrame mp = metric_frame(eval_at(pp));
    const MetricFrame mm = metric_frame(eval_at(pm));
    for (int k = 0; k < 2; ++k)
      dgamma[i][k] = (mp.christoffel[k] - mm.christoffel[k]) / (2.0 * h);
  }
  // (R(d0,d1)d1)^l = d0 Gamma^l_11 - d1 Gamma^l_01 + Gamma^k_11 Gamma^l_0k
  //                 - Gamma^k_01 Gamma^l_1k
  double r[2];
  for (int l = 0; l < 2; ++l) {
    double v = dgamma[0][l](1, 1) - dgamma[1][l](0, 1);
    for (int k = 0; k < 2; ++k)
      v += mf.christoffel[k](1, 1) * mf.christoffel[l](0, k) -
           mf.christoffel[k](0, 1) * mf.christoffel[l](1, k);
    r[l] = v;
  }
  const double num = mf.g(0, 0) * r[0] + mf.g(0, 1) * r[1];
  return num / mf.detg;
}

}  // namespace detail

inline GeometryFrame geometry_frame(const Surface& surface, const ChartPoint& p,
                                    const FrameOptions& opts = {}) {
  GeometryFrame gf;
  gf.at = p;
  gf.jet = surface.eval(p);
  gf.metric = metric_frame(gf.jet);
  gf.fd_scale = local_scale(gf.jet);

  const auto ii = detail::ambient_ii(gf.jet, gf.metric);
  gf.H_generic = 0.5 * (gf.metric.ginv(0, 0) * ii[0] + 2.0 * gf.metric.ginv(0, 1) * ii[1] +
                        gf.metric.ginv(1, 1) * ii[2]);
  gf.H_sq_generic = inner(gf.H_generic, gf.H_generic);

  // The psi0-frame route needs the whole surface inside the cone, not just
  // this point: a surface can touch the cone tangentially (the sphere
  // immersion (cosh x, sinh x, y, z) does along x = 0) and the frame
  // formulas are invalid there.
  const bool on_cone =
      surface.claims_lightcone && on_future_lightcone(gf.jet.position(), opts.lightcone_tol);
  if (on_cone) {
    gf.normal = normal_frame(gf.jet, gf.metric, opts.lightcone_tol);
    gf.shape = shape_data(gf.jet, gf.metric, *gf.normal);
    gf.II_sq_generic = gf.shape->II_sq_direct;
    gf.K_generic = 2.0 * gf.H_sq_generic - 0.5 * gf.II_sq_generic;
    gf.K_by.emplace_back("extrinsic", gf.shape->K_extrinsic);
    gf.K_by.emplace_back("mean", gf.shape->K_mean);
    gf.K_by.emplace_back("trace", gf.shape->K_trace);
  } else {
    ShapeData tmp;
    tmp.II_ambient = ii;
    // reuse the frame-summation code path through a scratch ShapeData
    const double g11 = gf.metric.g(0, 0), g12 = gf.metric.g(0, 1), g22 = gf.metric.g(1, 1);
    const double e1c = 1.0 / std::sqrt(g11);
    const double gperp = g22 - g12 * g12 / g11;
    const double e2a = -(g12 / g11) / std::sqrt(gperp);
    const double e2b = 1.0 / std::sqrt(gperp);
    auto ii_on = [&](double a0, double a1, double b0, double b1) {
      return a0 * b0 * ii[0] + (a0 * b1 + a1 * b0) * ii[1] + a1 * b1 * ii[2];
    };
    const Vec4 i11 = ii_on(e1c, 0, e1c, 0);
    const Vec4 i12 = ii_on(e1c, 0, e2a, e2b);
    const Vec4 i22 = ii_on(e2a, e2b, e2a, e2b);
    gf.II_sq_generic = inner(i11, i11) + 2.0 * inner(i12, i12) + inner(i22, i22);
    gf.K_generic = 2.0 * gf.H_sq_generic - 0.5 * gf.II_sq_generic;
    gf.K_by.emplace_back("gauss", gf.K_generic);
  }

  if (opts.fd_curvatures) {
    auto eval_at = [&surface](const ChartPoint& q) { return surface.eval(q); };
    const double h = opts.fd_step * gf.fd_scale;
    if (on_cone) {
      const Vec4 e0{-1, 0, 0, 0};
      gf.K_by.emplace_back("log",
                           detail::k_log_route(eval_at, p, gf.metric, gf.jet, e0, h));
      gf.K_by.emplace_back("log_u",
                           detail::k_log_route(eval_at, p, gf.metric, gf.jet, opts.u, h));
    }
    gf.K_by.emplace_back("brioschi", detail::k_brioschi_route(eval_at, p, gf.metric, h));
  }
  return gf;
}

// ---------------------------------------------------------------------------
// Identity residuals.
// ---------------------------------------------------------------------------

struct IdentityResiduals {
  double k_mean = 0;      // |K_mean - K_extrinsic|
  double k_trace = 0;     // |K_trace - K_extrinsic|
  double k_log = 0;
  double k_log_u = 0;
  double k_brioschi = 0;
  Vec4 eqh{};             // H - ( -(K/2) xi - eta )
  double eqh_norm = 0;
  double a_xi_gap = 0;    // ||A_xi + I||_F
  double a_eta_gap = 0;   // gap between the two A_eta routes
  double h_route_gap = 0; // gap between the two H routes
};

inline IdentityResiduals identity_residuals(const GeometryFrame& gf) {
  if (!gf.shape || !gf.normal) throw NotOnLightcone(inner(gf.jet.position(), gf.jet.position()),
                                                    gf.jet.position().x0);
  const ShapeData& sd = *gf.shape;
  const NormalFrame& nf = *gf.normal;
  IdentityResiduals r;
  r.k_mean = std::abs(sd.K_mean - sd.K_extrinsic);
  r.k_trace = std::abs(sd.K_trace - sd.K_extrinsic);
  for (const auto& [name, v] : gf.K_by) {
    if (name == "log") r.k_log = std::abs(v - sd.K_extrinsic);
    if (name == "log_u") r.k_log_u = std::abs(v - sd.K_extrinsic);
    if (name == "brioschi") r.k_brioschi = std::abs(v - sd.K_extrinsic);
  }
  r.eqh = sd.H - (-0.5 * sd.K_extrinsic * nf.xi - nf.eta);
  r.eqh_norm = euclid_norm(r.eqh);
  r.a_xi_gap = (sd.A_xi + Eigen::Matrix2d::Identity()).norm();
  r.a_eta_gap = (sd.A_eta - sd.A_eta_psi0).norm();
  r.h_route_gap = euclid_norm(sd.H - sd.H_ambient);
  return r;
}

// ---------------------------------------------------------------------------
// Normal-connection residuals by central differences of exact frames.
// ---------------------------------------------------------------------------

enum class NormalField { xi, eta, H };

/// Max over both chart directions of the Euclidean norm of the normal
/// component of the ambient derivative of the chosen normal field.
/// An explicit h > 0 selects a plain central difference of that step;
/// h <= 0 uses a two-step difference with Richardson extrapolation, which
/// keeps the truncation error below 1e-8 even at the singular edges of the
/// restricted factor domains.
inline double normal_parallel_residual(const Surface& surface, const ChartPoint& p,
                                       NormalField field, double h = 0.0,
                                       double lightcone_tol = 1e-9) {
  const ImmersionJet jet0 = surface.eval(p);
  const MetricFrame mf0 = metric_frame(jet0);
  const NormalFrame nf0 = normal_frame(jet0, mf0, lightcone_tol);
  const bool extrapolate = h <= 0.0;
  if (extrapolate) h = 4e-4;

  auto field_at = [&](const ChartPoint& q) -> Vec4 {
    const ImmersionJet jet = surface.eval(q);
    if (field == NormalField::xi) return jet.position();
    const MetricFrame mf = metric_frame(jet);
    const NormalFrame nf = normal_frame(jet, mf, lightcone_tol);
    if (field == NormalField::eta) return nf.eta;
    return shape_data(jet, mf, nf).H;
  };

  auto central = [&](int i, double step) -> Vec4 {
    ChartPoint pp = p, pm = p;
    (i == 0 ? pp.s : pp.t) += step;
    (i == 0 ? pm.s : pm.t) -= step;
    return (field_at(pp) - field_at(pm)) * (1.0 / (2.0 * step));
  };

  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    Vec4 d = central(i, h);
    if (extrapolate) {
      const Vec4 half = central(i, 0.5 * h);
      d = (1.0 / 3.0) * (4.0 * half - d);
    }
    const Vec4 normal_part = inner(d, nf0.eta) * nf0.xi + inner(d, nf0.xi) * nf0.eta;
    worst = std::max(worst, euclid_norm(normal_part));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Lightcone certificate: membership, A_xi = -I, parallel xi.
// ---------------------------------------------------------------------------

struct CertificatePoint {
  ChartPoint at;
  bool on_cone = false;
  double cone_defect = 0.0;  // <psi,psi>
  double a_xi_gap = 0.0;
  double xi_parallel = 0.0;
  bool ok = false;
};

struct CertificateReport {
  bool pass = true;
  double worst_cone_defect = 0.0;
  double worst_a_xi = 0.0;
  double worst_parallel = 0.0;
  std::vector<CertificatePoint> points;
};

inline CertificateReport lightcone_certificate(const Surface& surface,
                                               const std::vector<ChartPoint>& sample,
                                               double tol = 1e-6) {
  CertificateReport rep;
  for (const ChartPoint& p : sample) {
    CertificatePoint cp;
    cp.at = p;
    const ImmersionJet jet = surface.eval(p);
    const Vec4 pos = jet.position();
    cp.cone_defect = inner(pos, pos);
    cp.on_cone = on_future_lightcone(pos);
    if (cp.on_cone) {
      const MetricFrame mf = metric_frame(jet);
      const NormalFrame nf = normal_frame(jet, mf);
      const ShapeData sd = shape_data(jet, mf, nf);
      cp.a_xi_gap = (sd.A_xi + Eigen::Matrix2d::Identity()).norm();
      cp.xi_parallel = normal_parallel_residual(surface, p, NormalField::xi);
      cp.ok = cp.a_xi_gap <= tol && cp.xi_parallel <= tol;
    }
    rep.worst_cone_defect = std::max(rep.worst_cone_defect, std::abs(cp.cone_defect));
    rep.worst_a_xi = std::max(rep.worst_a_xi, cp.a_xi_gap);
    rep.worst_parallel = std::max(rep.worst_parallel, cp.xi_parallel);
    rep.pass = rep.pass && cp.ok;
    rep.points.push_back(cp);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Closed forms of the plane conformal family.
// ---------------------------------------------------------------------------

struct Example1ClosedForms {
  Eigen::Matrix2d II_eta;
  Eigen::Vector2d pde_residual;  // umbilicity system residual
  double K_formula = 0.0;        // -(lap0 sigma) e^{-2 sigma}
};

inline Example1ClosedForms example1_closed_forms(const ConformalFactor& sigma,
                                                 const ParamMap& params, double x, double y) {
  const std::array<Jet2, 3> vars = {Jet2::variable(x, 0), Jet2::variable(y, 1),
                                    Jet2::constant(0.0)};
  const Jet2 s = sigma.eval<2>(vars, 2, params);
  const double sx = s.grad[0], sy = s.grad[1];
  const double sxx = s.hess[0][0], sxy = s.hess[0][1], syy = s.hess[1][1];

  Example1ClosedForms out;
  out.II_eta(0, 0) = 0.5 * (sx * sx - sy * sy - 2.0 * sxx - 1.0);
  out.II_eta(0, 1) = out.II_eta(1, 0) = sx * sy - sxy;
  out.II_eta(1, 1) = 0.5 * (sy * sy - sx * sx - 2.0 * syy + 1.0);
  out.pde_residual(0) = sx * sx - sy * sy - sxx + syy - 1.0;
  out.pde_residual(1) = sxy - sx * sy;
  out.K_formula = -(sxx + syy) * std::exp(-2.0 * s.value);
  return out;
}

// ---------------------------------------------------------------------------
// Closed form of the sphere conformal family.
// ---------------------------------------------------------------------------

/// How a sigma given on the unit sphere is extended to ambient 3-space for
/// the Euclidean gradient and Hessian. The resulting bilinear form on sphere
/// tangent vectors does not depend on the choice.
enum class AmbientExtension { homogeneous, raw };

struct Example2ClosedForm {
  Eigen::Matrix2d II_eta_chart;  // on the chart basis vectors of the sphere
  Eigen::Vector3d grad0;
  Eigen::Matrix3d hess0;
  double P_sigma = 0.0;  // radial derivative of the extension
  double sigma_value = 0.0;
};

inline Example2ClosedForm example2_closed_form(const ConformalFactor& sigma,
                                               const ParamMap& params, const ChartPoint& cp,
                                               AmbientExtension ext = AmbientExtension::homogeneous) {
  const Eigen::Vector3d n = atlas::chart_map(cp.chart, cp.s, cp.t);
  std::array<Jet3, 3> amb = {Jet3::variable(n.x(), 0), Jet3::variable(n.y(), 1),
                             Jet3::variable(n.z(), 2)};
  if (ext == AmbientExtension::homogeneous) {
    const Jet3 rho = sqrt(amb[0] * amb[0] + amb[1] * amb[1] + amb[2] * amb[2]);
    for (auto& a : amb) a = a / rho;
  }
  const Jet3 s = sigma.eval<3>(amb, 3, params);

  Example2ClosedForm out;
  out.sigma_value = s.value;
  for (int i = 0; i < 3; ++i) out.grad0(i) = s.grad[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.hess0(i, j) = s.hess[i][j];
  out.P_sigma = n.dot(out.grad0);

  const double scalar =
      0.5 * ((1.0 + out.P_sigma) * (1.0 + out.P_sigma) - out.grad0.squaredNorm());

  // Chart basis tangent vectors of the unit sphere at this point.
  const std::array<Jet2, 3> cj = atlas::chart_jets(cp.chart, cp.s, cp.t);
  Eigen::Vector3d e[2];
  for (int i = 0; i < 2; ++i) e[i] = {cj[0].grad[i], cj[1].grad[i], cj[2].grad[i]};

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.II_eta_chart(i, j) = scalar * e[i].dot(e[j]) - e[i].dot(out.hess0 * e[j]) +
                               out.grad0.dot(e[i]) * out.grad0.dot(e[j]);
  return out;
}

// ---------------------------------------------------------------------------
// Conformal change of the Gauss curvature.
// ---------------------------------------------------------------------------

/// K_sigma = (K - lap_g sigma) / e^{2 sigma}, with the Laplacian of the base
/// metric g. The base surface supplies metric data at p.
inline double conformal_curvature(const Surface& base, double base_K,
                                  const ConformalFactor& sigma, const ParamMap& params,
                                  const ChartPoint& p) {
  const ImmersionJet jet = base.eval(p);
  const MetricFrame mf = metric_frame(jet);

  Jet2 s;
  if (base.domain == DomainKind::rectangle) {
    const std::array<Jet2, 3> vars = {Jet2::variable(p.s, 0), Jet2::variable(p.t, 1),
                                      Jet2::constant(0.0)};
    s = sigma.eval<2>(vars, 2, params);
  } else {
    s = sigma.eval<2>(atlas::chart_jets(p.chart, p.s, p.t), 3, params);
  }
  const Eigen::Vector2d p1(s.grad[0], s.grad[1]);
  Eigen::Matrix2d p2;
  p2 << s.hess[0][0], s.hess[0][1], s.hess[1][0], s.hess[1][1];
  const double lap = (mf.ginv * detail::covariant_hessian(mf, p1, p2)).trace();
  return (base_K - lap) / std::exp(2.0 * s.value);
}

// ---------------------------------------------------------------------------
// Local-extrema diagnostic on a grid of scalar fields.
// ---------------------------------------------------------------------------

struct ExtremaFlag {
  int i = 0, j = 0;   // grid indices of the offending local maximum
  double psi0 = 0.0;
  double max_neighborhood_K = 0.0;
};

/// Scan a W x H grid of psi0 and K values for strict interior local maxima
/// of psi0 whose 3x3 neighborhood has K <= 0 throughout. Such a point would
/// contradict the sign constraint on the curvature near a maximum.
inline std::vector<ExtremaFlag> flag_extrema(const std::vector<double>& psi0,
                                             const std::vector<double>& K, int W, int H) {
  std::vector<ExtremaFlag> flags;
  auto at = [&](const std::vector<double>& f, int i, int j) { return f[j * W + i]; };
  for (int j = 1; j + 1 < H; ++j)
    for (int i = 1; i + 1 < W; ++i) {
      const double v = at(psi0, i, j);
      bool strict_max = true;
      double maxK = at(K, i, j);
      for (int dj = -1; dj <= 1 && strict_max; ++dj)
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          if (at(psi0, i + di, j + dj) >= v) {
            strict_max = false;
            break;
          }
        }
      if (!strict_max) continue;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) maxK = std::max(maxK, at(K, i + di, j + dj));
      if (maxK <= 0.0) flags.push_back({i, j, v, maxK});
    }
  return flags;
}

}  // namespace lightcone
