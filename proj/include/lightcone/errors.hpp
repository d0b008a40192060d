#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lightcone {

/// Base class of every error thrown by the library. The CLI catches this
/// type and turns it into a failing check instead of a crash.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A function was evaluated outside its mathematical domain.
struct DomainError : Error {
  std::string function;
  double argument;
  DomainError(std::string fn, double arg)
      : Error("domain error: " + fn + "(" + std::to_string(arg) + ")"),
        function(std::move(fn)),
        argument(arg) {}
};

/// Syntax error in a conformal-factor expression.
struct ParseError : Error {
  std::size_t offset;                  // byte offset into the source text
  std::vector<std::string> expected;   // token classes that would have been accepted
  ParseError(std::size_t off, std::vector<std::string> exp)
      : Error(format(off, exp)), offset(off), expected(std::move(exp)) {}

 private:
  static std::string format(std::size_t off, const std::vector<std::string>& exp) {
    std::string m = "parse error at offset " + std::to_string(off) + ", expected ";
    for (std::size_t i = 0; i < exp.size(); ++i) m += (i ? " | " : "") + exp[i];
    return m;
  }
};

struct UnknownIdentifier : Error {
  std::string name;
  explicit UnknownIdentifier(std::string n)
      : Error("unknown identifier '" + n + "'"), name(std::move(n)) {}
};

struct NotSpacelike : Error {
  double detg;
  explicit NotSpacelike(double d)
      : Error("induced metric is not positive definite (det g = " + std::to_string(d) + ")"),
        detg(d) {}
};

struct NotOnLightcone : Error {
  double psi_sq;
  double psi0;
  NotOnLightcone(double sq, double p0)
      : Error("point is not on the future lightcone (<psi,psi> = " + std::to_string(sq) +
              ", psi0 = " + std::to_string(p0) + ")"),
        psi_sq(sq),
        psi0(p0) {}
};

struct UnknownSurface : Error {
  explicit UnknownSurface(const std::string& n) : Error("unknown surface '" + n + "'") {}
};

struct BadParameter : Error {
  using Error::Error;
};

struct LevelOutOfRange : Error {
  explicit LevelOutOfRange(int level)
      : Error("icosphere level " + std::to_string(level) + " outside [0, 8]") {}
};

struct NonSpacelikeChord : Error {
  NonSpacelikeChord(int v, int w, double sq)
      : Error("edge (" + std::to_string(v) + "," + std::to_string(w) +
              ") has non-spacelike chord, <d,d> = " + std::to_string(sq) +
              "; refine the mesh") {}
};

struct NotCompact : Error {
  explicit NotCompact(const std::string& n)
      : Error("surface '" + n + "' is not compact; cannot mesh") {}
};

struct DegenerateTriangle : Error {
  explicit DegenerateTriangle(int tri)
      : Error("triangle " + std::to_string(tri) + " violates the triangle inequality") {}
};

struct UnknownField : Error {
  explicit UnknownField(const std::string& n) : Error("unknown vertex field '" + n + "'") {}
};

struct SolverNoConvergence : Error {
  double residual;
  int iterations;
  SolverNoConvergence(double r, int it)
      : Error("eigenvalue solver stalled after " + std::to_string(it) +
              " iterations, residual " + std::to_string(r)),
        residual(r),
        iterations(it) {}
};

/// Invalid run configuration (CLI flags or definition files); carries the
/// offending field path in the message.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace lightcone
