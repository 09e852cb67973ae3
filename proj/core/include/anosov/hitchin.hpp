#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace anosov {

// Desk-scale domain for the scalar Hitchin equation.
// Torus: n x n periodic nodes on [0,p1) x [0,p2).
// Disk: (n+1) x (n+1) nodes on [-R,R]^2; nodes with x^2 + y^2 < R^2 are
// unknowns, the others carry Dirichlet data.
struct DomainSpec {
  enum class Kind { torus, disk };
  Kind kind = Kind::torus;
  double p1 = 1.0;
  double p2 = 1.0;
  double radius = 0.7;
  int n = 64;

  static DomainSpec torus(double p1, double p2, int n);
  static DomainSpec disk(double radius, int n);

  void validate() const;
  int nx() const { return kind == Kind::torus ? n : n + 1; }
  int ny() const { return nx(); }
  double hx() const { return kind == Kind::torus ? p1 / n : 2.0 * radius / n; }
  double hy() const { return kind == Kind::torus ? p2 / n : 2.0 * radius / n; }
  double x(int i) const { return kind == Kind::torus ? i * hx() : -radius + i * hx(); }
  double y(int j) const { return kind == Kind::torus ? j * hy() : -radius + j * hy(); }
  bool is_unknown(int i, int j) const;
};

// Row-major grid values, index j * nx + i.
struct ScalarField {
  int nx = 0;
  int ny = 0;
  std::vector<double> v;

  ScalarField() = default;
  ScalarField(int nx_, int ny_, double value = 0.0) : nx(nx_), ny(ny_), v(static_cast<std::size_t>(nx_) * ny_, value) {}
  double& operator()(int i, int j) { return v[static_cast<std::size_t>(j) * nx + i]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(j) * nx + i]; }
};

struct HiggsDatum {
  ScalarField t_abs2;
  std::string descriptor;

  static HiggsDatum zero(const DomainSpec& dom);
  static HiggsDatum constant(const DomainSpec& dom, double c);
  // |c z^k|^2 with z = x + i y on the disk.
  static HiggsDatum monomial(const DomainSpec& dom, double c, int k);
};

struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  double beta_sup = 0.0;
  double curvature_max = 0.0;
  std::vector<double> residual_history;
};

struct MaxPrincipleReport {
  double sup = 0.0;
  int arg_i = 0;
  int arg_j = 0;
  bool strict = true;
};

// Closed-form t = 0 solution log(1 - x^2 - y^2), evaluated at every node.
ScalarField fuchsian_profile(const DomainSpec& dom);

// r = (1/4) L u - |t|^2 e^u + e^{-2u} with L the 5-point Laplacian, on
// unknown nodes; zero on Dirichlet nodes.
ScalarField residual(const ScalarField& u, const HiggsDatum& datum, const DomainSpec& dom);

// Damped Newton. On the disk the Dirichlet values are read from u0.
// Throws SolverError if the residual sup-norm stays above tol.
std::pair<ScalarField, SolveReport> solve(const DomainSpec& dom, const HiggsDatum& datum, const ScalarField& u0,
                                          const SolveOptions& opt = {});

// |t| e^{3u/2}
ScalarField beta_field(const ScalarField& u, const HiggsDatum& datum);
MaxPrincipleReport max_principle_check(const ScalarField& beta, const DomainSpec& dom);

// Gaussian curvature (L u) e^{2u} of e^{-2u}|dz|^2 on unknown nodes.
ScalarField curvature_field(const ScalarField& u, const DomainSpec& dom);

// (L log beta) / (2 e^{-2u}) - 3 (beta^2 - 1) on unknown nodes where both
// beta and its stencil neighbours are positive; zero elsewhere.
ScalarField ratio_identity_defect(const ScalarField& u, const HiggsDatum& datum, const DomainSpec& dom);

double max_abs(const ScalarField& f);
// max over unknown nodes of f
double max_on_unknowns(const ScalarField& f, const DomainSpec& dom);
double max_abs_diff_on_unknowns(const ScalarField& a, const ScalarField& b, const DomainSpec& dom);

// Complex dimension of the space of t and real dimension of the slice piece.
std::pair<int, int> slice_dimensions(int genus);

struct GaugeParams {
  std::vector<std::complex<double>> t;
  std::vector<std::complex<double>> delta;
  std::vector<std::complex<double>> q;
};

bool gauge_equivalent(const GaugeParams& p1, const GaugeParams& p2, bool over_complex, double eps = 1e-12);

void write_csv(std::ostream& os, const ScalarField& f);

}  // namespace anosov
