#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lightcone/errors.hpp"
#include "lightcone/expression.hpp"
#include "lightcone/jet.hpp"
#include "lightcone/minkowski.hpp"

namespace lightcone {

enum class DomainKind { rectangle, sphere_atlas };

/// Chart box for rectangle domains. When `hard` is set the box is a true
/// admissibility restriction (the factor is singular outside); otherwise it
/// only bounds default sampling.
struct RectDomain {
  double s_lo = -2.0, s_hi = 2.0;
  double t_lo = -2.0, t_hi = 2.0;
  bool hard = false;

  bool contains(double s, double t) const {
    return s >= s_lo && s <= s_hi && t >= t_lo && t <= t_hi;
  }
};

/// A point of a chart. Rectangle domains use chart 0 only. Sphere domains
/// use two stereographic charts: chart 0 projects from the north pole
/// (covers z < 1), chart 1 from the south pole (covers z > -1).
struct ChartPoint {
  int chart = 0;
  double s = 0.0;
  double t = 0.0;
};

namespace atlas {

/// Inverse stereographic chart map as 2-jets: (s,t) -> unit-sphere point.
inline std::array<Jet2, 3> chart_jets(int chart, double s, double t) {
  const Jet2 js = Jet2::variable(s, 0);
  const Jet2 jt = Jet2::variable(t, 1);
  const Jet2 q = js * js + jt * jt;
  const Jet2 d = q + 1.0;
  const Jet2 x = 2.0 * js / d;
  const Jet2 y = 2.0 * jt / d;
  const Jet2 z = (chart == 0) ? (q - 1.0) / d : (1.0 - q) / d;
  return {x, y, z};
}

inline Eigen::Vector3d chart_map(int chart, double s, double t) {
  const double q = s * s + t * t;
  const double d = q + 1.0;
  return {2.0 * s / d, 2.0 * t / d, chart == 0 ? (q - 1.0) / d : (1.0 - q) / d};
}

/// Hemisphere selection: the southern hemisphere reads from chart 0, the
/// northern from chart 1. Points with |z| <= 0.75 are valid in both.
inline int chart_for(const Eigen::Vector3d& n) { return n.z() <= 0.0 ? 0 : 1; }

inline ChartPoint chart_point(const Eigen::Vector3d& n, int chart) {
  const double denom = chart == 0 ? 1.0 - n.z() : 1.0 + n.z();
  if (denom <= 1e-14) throw DomainError("stereographic_chart", n.z());
  return {chart, n.x() / denom, n.y() / denom};
}

inline ChartPoint chart_point(const Eigen::Vector3d& n) { return chart_point(n, chart_for(n)); }

}  // namespace atlas

enum class SurfaceKind { example1, example2, round_sphere, counterexample, custom };

/// A named immersion of a 2-manifold into L^4: chart bookkeeping, a
/// jet-evaluable coordinate map, and the metadata the verification suites
/// consult (lightcone membership claim, compactness, expected invariants).
struct Surface {
  std::string name;
  SurfaceKind kind = SurfaceKind::custom;
  DomainKind domain = DomainKind::rectangle;
  RectDomain rect;

  bool claims_lightcone = false;
  bool compact = false;
  std::optional<double> expected_K;
  bool expects_constant_K = false;
  std::optional<bool> expected_umbilical;

  std::optional<ConformalFactor> sigma;
  std::array<std::optional<ConformalFactor>, 4> custom_coords;
  ParamMap params;

  ImmersionJet eval(const ChartPoint& p) const {
    if (domain == DomainKind::rectangle) {
      if (rect.hard && !rect.contains(p.s, p.t))
        throw DomainError("chart_domain[" + name + "]", p.s);
      return eval_rectangle(p.s, p.t);
    }
    return eval_sphere(p);
  }

  /// Chart point for a unit-sphere position (sphere domains only).
  ChartPoint chart_point(const Eigen::Vector3d& n) const { return atlas::chart_point(n); }

  bool admissible(const ChartPoint& p) const {
    if (domain == DomainKind::sphere_atlas) return true;
    return !rect.hard || rect.contains(p.s, p.t);
  }

 private:
  ImmersionJet eval_rectangle(double s, double t) const {
    const Jet2 jx = Jet2::variable(s, 0);
    const Jet2 jy = Jet2::variable(t, 1);
    const std::array<Jet2, 3> vars = {jx, jy, Jet2::constant(0.0)};
    if (kind == SurfaceKind::custom) {
      ImmersionJet out;
      for (int i = 0; i < 4; ++i) {
        if (!custom_coords[i]) throw Error("custom surface missing coordinate " + std::to_string(i));
        out.coords[i] = custom_coords[i]->eval<2>(vars, 2, params);
      }
      return out;
    }
    // example1 family: psi_sigma = e^sigma (cosh x, sinh x, cos y, sin y)
    const Jet2 s_jet = sigma ? sigma->eval<2>(vars, 2, params) : Jet2::constant(0.0);
    const Jet2 f = exp(s_jet);
    ImmersionJet out;
    out.coords[0] = f * cosh(jx);
    out.coords[1] = f * sinh(jx);
    out.coords[2] = f * cos(jy);
    out.coords[3] = f * sin(jy);
    return out;
  }

  ImmersionJet eval_sphere(const ChartPoint& p) const {
    const std::array<Jet2, 3> n = atlas::chart_jets(p.chart, p.s, p.t);
    ImmersionJet out;
    if (kind == SurfaceKind::counterexample) {
      out.coords[0] = cosh(n[0]);
      out.coords[1] = sinh(n[0]);
      out.coords[2] = n[1];
      out.coords[3] = n[2];
      return out;
    }
    // example2 family: psi_sigma = e^sigma (1, x, y, z)
    const Jet2 s_jet = sigma ? sigma->eval<2>(n, 3, params) : Jet2::constant(0.0);
    const Jet2 f = exp(s_jet);
    out.coords[0] = f;
    out.coords[1] = f * n[0];
    out.coords[2] = f * n[1];
    out.coords[3] = f * n[2];
    return out;
  }
};

/// How the expected Gauss curvature of a catalog entry depends on its
/// parameters.
enum class KTag { none, zero, one, inv_a_sq, neg_inv_a_sq, minus_four, inv_r_sq };

struct CatalogEntry {
  std::string name;
  std::string summary;
  SurfaceKind kind = SurfaceKind::example1;
  DomainKind domain = DomainKind::rectangle;
  RectDomain rect;
  std::string sigma_text;      // fixed factor; empty means sigma = 0
  bool sigma_required = false; // family entries taking a user factor
  bool sigma_fixed = false;    // table entries reject a user factor
  ParamMap default_params;
  bool claims_lightcone = true;
  bool compact = false;
  KTag k_tag = KTag::none;
  bool expects_constant_K = false;
  std::optional<bool> expected_umbilical;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> v;
    const double pi = M_PI;

    auto plane = [](double a, double b, double c, double d, bool hard) {
      return RectDomain{a, b, c, d, hard};
    };

    CatalogEntry base;
    base.name = "example1_base";
    base.summary = "flat marginally trapped plane immersion (cosh x, sinh x, cos y, sin y)";
    base.kind = SurfaceKind::example1;
    base.rect = plane(-2, 2, -pi, pi, false);
    base.k_tag = KTag::zero;
    base.expects_constant_K = true;
    base.expected_umbilical = false;
    v.push_back(base);

    CatalogEntry fam1;
    fam1.name = "example1_sigma";
    fam1.summary = "conformal family e^sigma(x,y) over the flat base immersion";
    fam1.kind = SurfaceKind::example1;
    fam1.rect = plane(-2, 2, -2, 2, false);
    fam1.sigma_required = true;
    v.push_back(fam1);

    struct TableRow {
      const char* name;
      const char* sigma;
      RectDomain rect;
      KTag k;
      bool umbilical;
    };
    const RectDomain soft = plane(-2, 2, -2, 2, false);
    const RectDomain xpos = plane(0.05, 2.5, -2, 2, true);
    const RectDomain ypos = plane(-2, 2, 0.05, 2.5, true);
    const RectDomain ysec = plane(-2, 2, -pi / 2 + 0.05, pi / 2 - 0.05, true);
    const RectDomain xsec = plane(-pi / 2 + 0.05, pi / 2 - 0.05, -2, 2, true);
    const RectDomain ycsc = plane(-2, 2, 0.05, pi - 0.05, true);
    const RectDomain xcsc = plane(0.05, 2.5, -2, 2, true);
    const TableRow rows[] = {
        // the six factor solutions of the umbilicity system
        {"example1_exp_x", "x", soft, KTag::zero, true},
        {"example1_sech_x", "log(a) - log(cosh(x))", soft, KTag::inv_a_sq, true},
        {"example1_csch_x", "log(a) - log(sinh(x))", xpos, KTag::neg_inv_a_sq, true},
        {"example1_expfrac_x", "x - log(exp(2*x) - 1)", xpos, KTag::minus_four, true},
        {"example1_sec_y", "log(a) - log(cos(y))", ysec, KTag::neg_inv_a_sq, true},
        {"example1_csc_y", "log(a) - log(sin(y))", ycsc, KTag::neg_inv_a_sq, true},
        // x <-> y swaps: constant curvature but not umbilical; K reported,
        // not asserted from a table
        {"example1_exp_y", "y", soft, KTag::none, false},
        {"example1_sech_y", "log(a) - log(cosh(y))", soft, KTag::none, false},
        {"example1_csch_y", "log(a) - log(sinh(y))", ypos, KTag::none, false},
        {"example1_expfrac_y", "y - log(exp(2*y) - 1)", ypos, KTag::none, false},
        {"example1_sec_x", "log(a) - log(cos(x))", xsec, KTag::none, false},
        {"example1_csc_x", "log(a) - log(sin(x))", xcsc, KTag::none, false},
    };
    for (const TableRow& r : rows) {
      CatalogEntry e;
      e.name = r.name;
      e.summary = std::string("conformal exponent sigma = ") + r.sigma + " over example1_base";
      e.kind = SurfaceKind::example1;
      e.rect = r.rect;
      e.sigma_text = r.sigma;
      e.sigma_fixed = true;
      e.default_params = {{"a", 1.0}};
      e.k_tag = r.k;
      e.expects_constant_K = true;
      e.expected_umbilical = r.umbilical;
      v.push_back(e);
    }

    CatalogEntry fam2;
    fam2.name = "example2_sigma";
    fam2.summary = "conformal family e^sigma(x,y,z) over the unit sphere (1, x, y, z)";
    fam2.kind = SurfaceKind::example2;
    fam2.domain = DomainKind::sphere_atlas;
    fam2.sigma_text = "0";
    fam2.compact = true;
    v.push_back(fam2);

    CatalogEntry rs;
    rs.name = "round_sphere";
    rs.summary = "totally umbilical round sphere S^2(u,r) = {<x,x> = 0, <u,x> = r}";
    rs.kind = SurfaceKind::round_sphere;
    rs.domain = DomainKind::sphere_atlas;
    rs.compact = true;
    rs.default_params = {{"r", 1.0}, {"u0", -1.0}, {"u1", 0.0}, {"u2", 0.0}, {"u3", 0.0}};
    rs.k_tag = KTag::inv_r_sq;
    rs.expects_constant_K = true;
    rs.expected_umbilical = true;
    v.push_back(rs);

    CatalogEntry ce;
    ce.name = "counterexample_cylinder";
    ce.summary = "isometric sphere immersion (cosh x, sinh x, y, z), not in a lightcone";
    ce.kind = SurfaceKind::counterexample;
    ce.domain = DomainKind::sphere_atlas;
    ce.compact = true;
    ce.claims_lightcone = false;
    ce.k_tag = KTag::one;
    ce.expects_constant_K = true;
    ce.expected_umbilical = false;
    v.push_back(ce);

    return v;
  }();
  return entries;
}

inline const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

namespace detail {

inline ConformalFactor round_sphere_sigma(const Vec4& u, double r) {
  using expr::Node;
  // sigma = log r - log(-u0 + u1 x + u2 y + u3 z)
  expr::NodePtr dot = Node::make_number(-u.x0);
  const double uc[3] = {u.x1, u.x2, u.x3};
  for (int i = 0; i < 3; ++i) {
    if (uc[i] == 0.0) continue;
    dot = Node::make_binary(Node::Kind::add, dot,
                            Node::make_binary(Node::Kind::mul, Node::make_number(uc[i]),
                                              Node::make_variable(i)));
  }
  expr::NodePtr root = Node::make_binary(
      Node::Kind::sub, Node::make_call(expr::Func::log, Node::make_number(r)),
      Node::make_call(expr::Func::log, dot));
  ConformalFactor f;
  f.root = root;
  f.canonical = expr::to_string(root);
  return f;
}

}  // namespace detail

/// Build a Surface from a catalog entry. Parameters not supplied fall back
/// to the entry defaults (a = 1, r = 1, u = (-1,0,0,0)).
inline Surface instantiate(const std::string& name, const ParamMap& user_params = {},
                           std::optional<ConformalFactor> sigma = std::nullopt) {
  const CatalogEntry* e = find_catalog_entry(name);
  if (!e) throw UnknownSurface(name);

  ParamMap params = e->default_params;
  for (const auto& [k, val] : user_params) params[k] = val;

  Surface s;
  s.name = e->name;
  s.kind = e->kind;
  s.domain = e->domain;
  s.rect = e->rect;
  s.claims_lightcone = e->claims_lightcone;
  s.compact = e->compact;
  s.expects_constant_K = e->expects_constant_K;
  s.expected_umbilical = e->expected_umbilical;
  s.params = params;

  if (e->sigma_required) {
    if (!sigma) throw BadParameter("surface '" + name + "' requires a conformal factor");
    s.sigma = std::move(sigma);
  } else if (e->sigma_fixed) {
    if (sigma) throw BadParameter("surface '" + name + "' has a fixed conformal factor");
    s.sigma = parse_sigma(e->sigma_text);
  } else if (sigma) {
    s.sigma = std::move(sigma);
  } else if (!e->sigma_text.empty()) {
    s.sigma = parse_sigma(e->sigma_text);
  }

  if (e->kind == SurfaceKind::round_sphere) {
    const double r = params.at("r");
    const Vec4 u{params.at("u0"), params.at("u1"), params.at("u2"), params.at("u3")};
    if (r <= 0.0) throw BadParameter("round_sphere requires r > 0");
    if (std::abs(inner(u, u) + 1.0) > 1e-9)
      throw BadParameter("round_sphere requires a unit timelike u, <u,u> = -1");
    if (u.x0 >= 0.0) throw BadParameter("round_sphere requires u0 < 0");
    s.sigma = detail::round_sphere_sigma(u, r);
    s.expected_K = 1.0 / (r * r);
  }

  if (s.sigma) {
    // Rectangle charts expose x, y only.
    if (s.domain == DomainKind::rectangle && s.sigma->uses_variable(2))
      throw BadParameter("conformal factor for a plane surface may not use z");
    for (const std::string& p : s.sigma->parameters)
      if (!params.count(p)) throw BadParameter("unbound parameter '" + p + "' in conformal factor");
  }

  switch (e->k_tag) {
    case KTag::none: break;
    case KTag::zero: s.expected_K = 0.0; break;
    case KTag::one: s.expected_K = 1.0; break;
    case KTag::inv_a_sq: s.expected_K = 1.0 / (params.at("a") * params.at("a")); break;
    case KTag::neg_inv_a_sq: s.expected_K = -1.0 / (params.at("a") * params.at("a")); break;
    case KTag::minus_four: s.expected_K = -4.0; break;
    case KTag::inv_r_sq: break;  // set above
  }

  // The sigma = 0 member of the sphere family is the unit round sphere.
  if (e->kind == SurfaceKind::example2 && s.sigma && s.sigma->canonical == "0") {
    s.expected_K = 1.0;
    s.expects_constant_K = true;
    s.expected_umbilical = true;
  }

  return s;
}

/// A user surface given by four coordinate expressions over (x, y).
inline Surface make_custom_surface(const std::string& name,
                                   const std::array<std::string, 4>& coords,
                                   const RectDomain& rect, const ParamMap& params = {},
                                   bool claims_lightcone = false) {
  Surface s;
  s.name = name;
  s.kind = SurfaceKind::custom;
  s.domain = DomainKind::rectangle;
  s.rect = rect;
  s.claims_lightcone = claims_lightcone;
  s.params = params;
  for (int i = 0; i < 4; ++i) {
    ConformalFactor f = parse_sigma(coords[i]);
    if (f.uses_variable(2)) throw BadParameter("coordinate expressions may not use z");
    for (const std::string& p : f.parameters)
      if (!params.count(p)) throw BadParameter("unbound parameter '" + p + "' in coordinates");
    s.custom_coords[i] = std::move(f);
  }
  return s;
}

/// Spacelike validation: per-point det g and g11 from the jet columns.
struct SpacelikePoint {
  ChartPoint at;
  double detg = 0.0;
  double g11 = 0.0;
  bool ok = false;
};

struct SpacelikeReport {
  std::vector<SpacelikePoint> points;
  bool pass = true;
};

inline SpacelikeReport validate_spacelike(const Surface& s, const std::vector<ChartPoint>& pts,
                                          double tol = 0.0) {
  SpacelikeReport rep;
  rep.points.reserve(pts.size());
  for (const ChartPoint& p : pts) {
    const ImmersionJet jet = s.eval(p);
    const Vec4 d1 = jet.d(0), d2 = jet.d(1);
    const double g11 = inner(d1, d1);
    const double g12 = inner(d1, d2);
    const double g22 = inner(d2, d2);
    const double detg = g11 * g22 - g12 * g12;
    const bool ok = detg > tol && g11 > 0.0;
    rep.points.push_back({p, detg, g11, ok});
    rep.pass = rep.pass && ok;
  }
  return rep;
}

}  // namespace lightcone
