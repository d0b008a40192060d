#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lightcone/embed.hpp"
#include "lightcone/errors.hpp"
#include "lightcone/sampling.hpp"

namespace lightcone {

/// Cotangent stiffness matrix from intrinsic edge lengths. Positive
/// semidefinite; obtuse triangles are admitted (weights may be negative).
inline Eigen::SparseMatrix<double> cotangent_stiffness(const EmbeddedMesh& em) {
  const int n = static_cast<int>(em.mesh.vertices.size());
  std::map<std::pair<int, int>, double> len_of;
  for (std::size_t e = 0; e < em.mesh.edges.size(); ++e)
    len_of[{em.mesh.edges[e][0], em.mesh.edges[e][1]}] = em.edge_len[e];
  auto length = [&](int a, int b) { return len_of.at(std::minmax(a, b)); };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(em.mesh.triangles.size() * 12);
  for (std::size_t t = 0; t < em.mesh.triangles.size(); ++t) {
    const auto& tr = em.mesh.triangles[t];
    const double area = em.tri_area[t];
    for (int i = 0; i < 3; ++i) {
      const int vi = tr[i], vj = tr[(i + 1) % 3], vk = tr[(i + 2) % 3];
      const double a = length(vj, vk);  // edge opposite vi
      const double b = length(vi, vk);
      const double c = length(vi, vj);
      const double cot_i = (b * b + c * c - a * a) / (4.0 * area);
      const double w = 0.5 * cot_i;
      trips.emplace_back(vj, vk, -w);
      trips.emplace_back(vk, vj, -w);
      trips.emplace_back(vj, vj, w);
      trips.emplace_back(vk, vk, w);
    }
  }
  Eigen::SparseMatrix<double> S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  return S;
}

struct SpectrumOptions {
  double shift = -0.5;       // spectral shift of the inverted operator
  double tol = 1e-9;         // relative eigenpair residual target
  int max_iterations = 500;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

struct SpectrumResult {
  double lambda1 = 0.0;               // smallest eigenvalue above 1e-8
  std::vector<double> low_eigs;       // first k eigenvalues, ascending
  int multiplicity_estimate = 0;      // eigenvalues within 1% of lambda1
  int iterations = 0;
  double residual = 0.0;
  Eigen::MatrixXd eigenvectors;       // n x k, M-orthonormal columns
};

/// Smallest k eigenpairs of the generalized problem S x = lambda M x with
/// the lumped mass matrix M. Shift-invert subspace iteration with full
/// M-orthonormalization and a Rayleigh-Ritz projection each sweep.
inline SpectrumResult first_eigenvalue(const EmbeddedMesh& em, int k = 6,
                                       const SpectrumOptions& opts = {}) {
  if (k < 2) throw BadParameter("spectrum requires k >= 2");
  const int n = static_cast<int>(em.mesh.vertices.size());
  const int m = std::min(n, k + 6);  // subspace dimension

  const Eigen::SparseMatrix<double> S = cotangent_stiffness(em);
  const Eigen::VectorXd mass = Eigen::Map<const Eigen::VectorXd>(em.vertex_mass.data(), n);

  Eigen::SparseMatrix<double> A = S;
  for (int i = 0; i < n; ++i) A.coeffRef(i, i) -= opts.shift * mass(i);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) throw SolverNoConvergence(0.0, 0);

  SampleRng rng(opts.seed);
  Eigen::MatrixXd X(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = rng.uniform(-1.0, 1.0);

  // M-inner-product modified Gram-Schmidt, two passes.
  auto orthonormalize = [&](Eigen::MatrixXd& Y) {
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < Y.cols(); ++j) {
        for (int i = 0; i < j; ++i) {
          const double proj = Y.col(i).dot(mass.cwiseProduct(Y.col(j)));
          Y.col(j) -= proj * Y.col(i);
        }
        const double nrm = std::sqrt(Y.col(j).dot(mass.cwiseProduct(Y.col(j))));
        if (nrm < 1e-300) throw SolverNoConvergence(nrm, 0);
        Y.col(j) /= nrm;
      }
  };

  Eigen::VectorXd eigs = Eigen::VectorXd::Zero(m);
  double worst_residual = 0.0;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    Eigen::MatrixXd Y(n, m);
    for (int j = 0; j < m; ++j) Y.col(j) = solver.solve(mass.cwiseProduct(X.col(j)));
    orthonormalize(Y);
    const Eigen::MatrixXd reduced = Y.transpose() * (S * Y);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(
        0.5 * (reduced + reduced.transpose()));
    X = Y * ritz.eigenvectors();
    eigs = ritz.eigenvalues();

    worst_residual = 0.0;
    for (int j = 0; j < k; ++j) {
      const Eigen::VectorXd r = S * X.col(j) - eigs(j) * mass.cwiseProduct(X.col(j));
      const double scale = 1.0 + std::abs(eigs(j));
      worst_residual = std::max(worst_residual, r.norm() / scale);
    }
    if (worst_residual <= opts.tol) break;
  }
  if (worst_residual > opts.tol) throw SolverNoConvergence(worst_residual, it);

  SpectrumResult res;
  res.iterations = it + 1;
  res.residual = worst_residual;
  res.low_eigs.assign(eigs.data(), eigs.data() + k);
  res.eigenvectors = X.leftCols(k);
  res.lambda1 = 0.0;
  for (double v : res.low_eigs)
    if (v > 1e-8) {
      res.lambda1 = v;
      break;
    }
  for (double v : res.low_eigs)
    if (res.lambda1 > 0.0 && std::abs(v - res.lambda1) <= 1e-2 * res.lambda1)
      ++res.multiplicity_estimate;
  return res;
}

// ---------------------------------------------------------------------------
// Eigenvalue and area inequality suite.
// ---------------------------------------------------------------------------

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;        // (rhs - lhs) / |rhs|
  bool equality_flag = false;  // slack within 1%
  bool applicable = true;    // lightcone-only bounds are skipped otherwise
};

struct InequalityReport {
  std::vector<InequalityCheck> checks;
  bool lightcone = false;
  bool reilly_violated = false;  // lambda1 exceeded the Reilly-form bound
};

inline InequalityReport inequality_suite(const EmbeddedMesh& em, const SpectrumResult& spec,
                                         const Vec4& u) {
  check_timelike_direction(u);
  InequalityReport rep;
  rep.lightcone = em.lightcone;

  const double area = em.total_area;
  const double lambda1 = spec.lambda1;
  const auto& pu = em.field("psi_u");

  double min_pu_sq = pu.empty() ? 0.0 : pu[0] * pu[0];
  double l2_sq = 0.0;
  for (std::size_t v = 0; v < pu.size(); ++v) {
    min_pu_sq = std::min(min_pu_sq, pu[v] * pu[v]);
    l2_sq += em.vertex_mass[v] * pu[v] * pu[v];
  }
  const double willmore = integrate(em, "H_sq");

  auto add = [&rep](const std::string& name, double lhs, double rhs, bool applicable) {
    InequalityCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.applicable = applicable;
    c.holds = !applicable || lhs <= rhs * (1.0 + 1e-12);
    c.slack = rhs != 0.0 ? (rhs - lhs) / std::abs(rhs) : 0.0;
    c.equality_flag = applicable && std::abs(c.slack) <= 0.01;
    rep.checks.push_back(c);
  };

  // Hersch is intrinsic: it applies to any metric on the 2-sphere.
  add("hersch", lambda1, 8.0 * M_PI / area, true);
  add("lambda1_min_psi_u", lambda1, 2.0 / min_pu_sq, em.lightcone);
  add("area_l2_psi_u", area, 2.0 * std::sqrt(M_PI) * std::sqrt(l2_sq), em.lightcone);
  add("reilly_form", lambda1, 2.0 * willmore / area, em.lightcone);

  if (!em.lightcone) {
    // Reilly-form right side evaluated anyway; off the lightcone it can fail.
    const double rhs = 2.0 * willmore / area;
    rep.reilly_violated = lambda1 > rhs;
    InequalityCheck c;
    c.name = "reilly_form_offcone";
    c.lhs = lambda1;
    c.rhs = rhs;
    c.applicable = true;
    c.holds = lambda1 <= rhs;
    c.slack = rhs != 0.0 ? (rhs - lambda1) / std::abs(rhs) : 0.0;
    c.equality_flag = false;
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace lightcone
