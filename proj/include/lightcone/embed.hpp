#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "lightcone/errors.hpp"
#include "lightcone/icosphere.hpp"
#include "lightcone/invariants.hpp"
#include "lightcone/minkowski.hpp"
#include "lightcone/surface.hpp"

namespace lightcone {

/// An icosphere pushed through a compact surface: vertex positions in L^4,
/// intrinsic (Minkowski chordal) edge lengths, Heron triangle areas, lumped
/// vertex masses and the per-vertex scalar fields the integral and spectrum
/// suites consume.
struct EmbeddedMesh {
  SphereMesh mesh;
  std::string surface_name;
  bool lightcone = false;
  Vec4 u{-1, 0, 0, 0};
  std::vector<Vec4> positions;
  std::vector<double> edge_len;  // parallel to mesh.edges
  std::vector<double> tri_area;
  std::vector<double> vertex_mass;
  std::map<std::string, std::vector<double>> fields;  // K, H_sq, psi0, psi_u
  double total_area = 0.0;

  const std::vector<double>& field(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end()) throw UnknownField(name);
    return it->second;
  }
};

inline void check_timelike_direction(const Vec4& u) {
  if (std::abs(inner(u, u) + 1.0) > 1e-9 || u.x0 >= 0.0)
    throw BadParameter("u must satisfy <u,u> = -1 with u0 < 0");
}

inline EmbeddedMesh embed(const Surface& surface, const SphereMesh& mesh,
                          const Vec4& u = {-1, 0, 0, 0}) {
  if (!surface.compact) throw NotCompact(surface.name);
  check_timelike_direction(u);

  EmbeddedMesh em;
  em.mesh = mesh;
  em.surface_name = surface.name;
  em.lightcone = surface.claims_lightcone;
  em.u = u;

  const std::size_t nv = mesh.vertices.size();
  em.positions.resize(nv);
  auto& fK = em.fields["K"];
  auto& fH = em.fields["H_sq"];
  auto& fp0 = em.fields["psi0"];
  auto& fpu = em.fields["psi_u"];
  fK.resize(nv);
  fH.resize(nv);
  fp0.resize(nv);
  fpu.resize(nv);

  FrameOptions opts;
  opts.fd_curvatures = false;
  for (std::size_t v = 0; v < nv; ++v) {
    const GeometryFrame gf = geometry_frame(surface, surface.chart_point(mesh.vertices[v]), opts);
    em.positions[v] = gf.jet.position();
    fp0[v] = em.positions[v].x0;
    fpu[v] = inner(em.positions[v], u);
    if (gf.shape) {
      fK[v] = gf.shape->K_extrinsic;
      fH[v] = gf.shape->H_sq;
    } else {
      fK[v] = gf.K_generic;
      fH[v] = gf.H_sq_generic;
    }
  }

  em.edge_len.resize(mesh.edges.size());
  std::map<std::pair<int, int>, double> len_of;
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [a, b] = mesh.edges[e];
    const Vec4 d = em.positions[a] - em.positions[b];
    const double sq = inner(d, d);
    if (sq <= 0.0) throw NonSpacelikeChord(a, b, sq);
    em.edge_len[e] = std::sqrt(sq);
    len_of[{a, b}] = em.edge_len[e];
  }
  auto length = [&](int a, int b) { return len_of.at(std::minmax(a, b)); };

  em.tri_area.resize(mesh.triangles.size());
  em.vertex_mass.assign(nv, 0.0);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tr = mesh.triangles[t];
    const double a = length(tr[1], tr[2]);
    const double b = length(tr[0], tr[2]);
    const double c = length(tr[0], tr[1]);
    if (a + b <= c || b + c <= a || c + a <= b) throw DegenerateTriangle(static_cast<int>(t));
    const double s = 0.5 * (a + b + c);
    em.tri_area[t] = std::sqrt(s * (s - a) * (s - b) * (s - c));
    em.total_area += em.tri_area[t];
    for (int i = 0; i < 3; ++i) em.vertex_mass[tr[i]] += em.tri_area[t] / 3.0;
  }
  return em;
}

/// Lumped-mass quadrature of a vertex field. The derived field
/// "inv_psi_u_sq" integrates 1/<psi,u>^2.
inline double integrate(const EmbeddedMesh& em, const std::string& name) {
  double acc = 0.0;
  if (name == "inv_psi_u_sq") {
    const auto& pu = em.field("psi_u");
    for (std::size_t v = 0; v < pu.size(); ++v) acc += em.vertex_mass[v] / (pu[v] * pu[v]);
    return acc;
  }
  const auto& f = em.field(name);
  for (std::size_t v = 0; v < f.size(); ++v) acc += em.vertex_mass[v] * f[v];
  return acc;
}

struct IntegralIdentityReport {
  double int_K = 0, int_H_sq = 0, int_inv_psi_u_sq = 0;
  double dev_K = 0, dev_H_sq = 0, dev_inv = 0;  // relative deviations from 4*pi
  int euler_characteristic = 2;
  double tolerance = 0.005;
  bool pass = false;
};

/// Gauss-Bonnet, the Willmore-type integral and the 1/<psi,u>^2 integral,
/// each compared against 4*pi.
inline IntegralIdentityReport integral_identity_suite(const EmbeddedMesh& em,
                                                      double tolerance = 0.005) {
  IntegralIdentityReport r;
  const double four_pi = 4.0 * M_PI;
  r.int_K = integrate(em, "K");
  r.int_H_sq = integrate(em, "H_sq");
  r.int_inv_psi_u_sq = integrate(em, "inv_psi_u_sq");
  r.dev_K = std::abs(r.int_K - four_pi) / four_pi;
  r.dev_H_sq = std::abs(r.int_H_sq - four_pi) / four_pi;
  r.dev_inv = std::abs(r.int_inv_psi_u_sq - four_pi) / four_pi;
  r.euler_characteristic = em.mesh.euler_characteristic();
  r.tolerance = tolerance;
  r.pass = r.dev_K <= tolerance && r.dev_H_sq <= tolerance && r.dev_inv <= tolerance &&
           r.euler_characteristic == 2;
  return r;
}

struct MeshExtremum {
  int vertex = -1;
  double psi0 = 0.0;
  double min_ring_K = 0.0;
  double max_ring_K = 0.0;
  bool flagged = false;  // every one-ring curvature <= 0 at a strict maximum
};

struct ExtremaScanReport {
  bool degenerate_constant = false;
  std::vector<MeshExtremum> maxima;
  int flag_count = 0;
};

/// Mesh-local maxima of psi0 with the curvature range over their one-rings.
/// A maximum whose entire one-ring has K <= 0 contradicts the sign relation
/// between psi0 extrema and positive curvature, so it raises a flag.
inline ExtremaScanReport local_extrema_scan(const EmbeddedMesh& em) {
  ExtremaScanReport rep;
  const auto& psi0 = em.field("psi0");
  const auto& K = em.field("K");
  double lo = psi0[0], hi = psi0[0];
  for (double v : psi0) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
    rep.degenerate_constant = true;
    return rep;
  }
  const auto nbr = em.mesh.vertex_neighbors();
  for (std::size_t v = 0; v < psi0.size(); ++v) {
    bool strict_max = true;
    for (int w : nbr[v])
      if (psi0[w] >= psi0[v]) {
        strict_max = false;
        break;
      }
    if (!strict_max) continue;
    MeshExtremum ex;
    ex.vertex = static_cast<int>(v);
    ex.psi0 = psi0[v];
    ex.min_ring_K = ex.max_ring_K = K[v];
    for (int w : nbr[v]) {
      ex.min_ring_K = std::min(ex.min_ring_K, K[w]);
      ex.max_ring_K = std::max(ex.max_ring_K, K[w]);
    }
    ex.flagged = ex.max_ring_K <= 0.0;
    rep.flag_count += ex.flagged ? 1 : 0;
    rep.maxima.push_back(ex);
  }
  return rep;
}

/// OFF-variant export: vertex rows carry the four L^4 coordinates followed
/// by the scalar fields; the header comment documents the column order.
inline void write_off(const EmbeddedMesh& em, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "OFF\n";
  out << "# vertex columns: x0 x1 x2 x3 K H_sq psi0 psi_u\n";
  out << em.positions.size() << " " << em.mesh.triangles.size() << " " << em.mesh.edges.size()
      << "\n";
  out.precision(17);
  const auto& fK = em.field("K");
  const auto& fH = em.field("H_sq");
  const auto& f0 = em.field("psi0");
  const auto& fu = em.field("psi_u");
  for (std::size_t v = 0; v < em.positions.size(); ++v) {
    const Vec4& p = em.positions[v];
    out << p.x0 << " " << p.x1 << " " << p.x2 << " " << p.x3 << " " << fK[v] << " " << fH[v]
        << " " << f0[v] << " " << fu[v] << "\n";
  }
  for (const auto& tr : em.mesh.triangles)
    out << "3 " << tr[0] << " " << tr[1] << " " << tr[2] << "\n";
}

}  // namespace lightcone
