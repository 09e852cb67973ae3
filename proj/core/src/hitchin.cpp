#include "anosov/hitchin.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "anosov/errors.hpp"

namespace anosov {

DomainSpec DomainSpec::torus(double p1, double p2, int n) {
  DomainSpec d;
  d.kind = Kind::torus;
  d.p1 = p1;
  d.p2 = p2;
  d.n = n;
  d.validate();
  return d;
}

DomainSpec DomainSpec::disk(double radius, int n) {
  DomainSpec d;
  d.kind = Kind::disk;
  d.radius = radius;
  d.n = n;
  d.validate();
  return d;
}

void DomainSpec::validate() const {
  if (n < 16) throw InvalidInput("grid resolution must be at least 16");
  if (kind == Kind::torus && !(p1 > 0 && p2 > 0)) throw InvalidInput("torus periods must be positive");
  if (kind == Kind::disk && !(radius > 0)) throw InvalidInput("disk radius must be positive");
}

bool DomainSpec::is_unknown(int i, int j) const {
  if (kind == Kind::torus) return true;
  const double xx = x(i);
  const double yy = y(j);
  return xx * xx + yy * yy < radius * radius;
}

namespace {

void check_shape(const ScalarField& f, const DomainSpec& dom, const char* what) {
  if (f.nx != dom.nx() || f.ny != dom.ny() || f.v.size() != static_cast<std::size_t>(f.nx) * f.ny)
    throw InvalidInput(std::string(what) + ": field shape does not match the domain");
}

// 5-point Laplacian at node (i,j); periodic wrap on the torus.
double laplacian(const ScalarField& u, const DomainSpec& dom, int i, int j) {
  const int nx = dom.nx();
  const int ny = dom.ny();
  auto at = [&](int a, int b) {
    if (dom.kind == DomainSpec::Kind::torus) {
      a = (a + nx) % nx;
      b = (b + ny) % ny;
    }
    return u(a, b);
  };
  const double hx2 = dom.hx() * dom.hx();
  const double hy2 = dom.hy() * dom.hy();
  return (at(i + 1, j) - 2.0 * u(i, j) + at(i - 1, j)) / hx2 + (at(i, j + 1) - 2.0 * u(i, j) + at(i, j - 1)) / hy2;
}

double sup_on_unknowns(const ScalarField& r, const DomainSpec& dom) {
  double s = 0.0;
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      if (dom.is_unknown(i, j)) s = std::max(s, std::abs(r(i, j)));
  return s;
}

}  // namespace

HiggsDatum HiggsDatum::zero(const DomainSpec& dom) {
  dom.validate();
  return {ScalarField(dom.nx(), dom.ny(), 0.0), "zero"};
}

HiggsDatum HiggsDatum::constant(const DomainSpec& dom, double c) {
  dom.validate();
  std::ostringstream os;
  os << "constant:" << std::setprecision(17) << c;
  return {ScalarField(dom.nx(), dom.ny(), c * c), os.str()};
}

HiggsDatum HiggsDatum::monomial(const DomainSpec& dom, double c, int k) {
  dom.validate();
  if (k < 0) throw InvalidInput("monomial degree must be nonnegative");
  HiggsDatum d{ScalarField(dom.nx(), dom.ny(), 0.0), ""};
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) {
      const double r2 = dom.x(i) * dom.x(i) + dom.y(j) * dom.y(j);
      d.t_abs2(i, j) = c * c * std::pow(r2, k);
    }
  std::ostringstream os;
  os << "monomial:" << std::setprecision(17) << c << ":" << k;
  d.descriptor = os.str();
  return d;
}

ScalarField fuchsian_profile(const DomainSpec& dom) {
  dom.validate();
  if (dom.kind != DomainSpec::Kind::disk) throw InvalidInput("the reference profile lives on the disk");
  if (2.0 * dom.radius * dom.radius >= 1.0)
    throw InvalidInput("the reference profile needs every grid node inside the unit disk (radius < 1/sqrt2)");
  ScalarField u(dom.nx(), dom.ny());
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) u(i, j) = std::log(1.0 - dom.x(i) * dom.x(i) - dom.y(j) * dom.y(j));
  return u;
}

ScalarField residual(const ScalarField& u, const HiggsDatum& datum, const DomainSpec& dom) {
  dom.validate();
  check_shape(u, dom, "residual");
  check_shape(datum.t_abs2, dom, "residual");
  ScalarField r(dom.nx(), dom.ny(), 0.0);
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) {
      if (!dom.is_unknown(i, j)) continue;
      const double uu = u(i, j);
      r(i, j) = 0.25 * laplacian(u, dom, i, j) - datum.t_abs2(i, j) * std::exp(uu) + std::exp(-2.0 * uu);
    }
  return r;
}

std::pair<ScalarField, SolveReport> solve(const DomainSpec& dom, const HiggsDatum& datum, const ScalarField& u0,
                                          const SolveOptions& opt) {
  dom.validate();
  check_shape(u0, dom, "solve");
  check_shape(datum.t_abs2, dom, "solve");
  for (double t : datum.t_abs2.v)
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("|t|^2 must be finite and nonnegative");
  for (double v : u0.v)
    if (!std::isfinite(v)) throw InvalidInput("initial field must be finite");

  const int nx = dom.nx();
  const int ny = dom.ny();
  std::vector<int> index(static_cast<std::size_t>(nx) * ny, -1);
  std::vector<std::pair<int, int>> nodes;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (dom.is_unknown(i, j)) {
        index[static_cast<std::size_t>(j) * nx + i] = static_cast<int>(nodes.size());
        nodes.emplace_back(i, j);
      }
  const int m = static_cast<int>(nodes.size());
  const double cx = 0.25 / (dom.hx() * dom.hx());
  const double cy = 0.25 / (dom.hy() * dom.hy());

  auto neighbour = [&](int i, int j) -> int {
    if (dom.kind == DomainSpec::Kind::torus) {
      i = (i + nx) % nx;
      j = (j + ny) % ny;
    }
    return index[static_cast<std::size_t>(j) * nx + i];
  };

  ScalarField u = u0;
  SolveReport rep;
  ScalarField r = residual(u, datum, dom);
  double rn = sup_on_unknowns(r, dom);
  double r2 = 0.0;
  for (double v : r.v) r2 += v * v;
  rep.residual_history.push_back(rn);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  int it = 0;
  while (rn > opt.tol && it < opt.max_iter) {
    // -J = -(1/4) L + diag(|t|^2 e^u + 2 e^{-2u}) is symmetric positive definite.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 5);
    Eigen::VectorXd rhs(m);
    for (int k = 0; k < m; ++k) {
      const auto [i, j] = nodes[k];
      const double uu = u(i, j);
      trip.emplace_back(k, k, 2.0 * (cx + cy) + datum.t_abs2(i, j) * std::exp(uu) + 2.0 * std::exp(-2.0 * uu));
      const int nb[4] = {neighbour(i + 1, j), neighbour(i - 1, j), neighbour(i, j + 1), neighbour(i, j - 1)};
      const double w[4] = {cx, cx, cy, cy};
      for (int q = 0; q < 4; ++q)
        if (nb[q] >= 0) trip.emplace_back(k, nb[q], -w[q]);
      rhs[k] = r(i, j);
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    if (it == 0) ldlt.analyzePattern(A);
    ldlt.factorize(A);
    if (ldlt.info() != Eigen::Success) throw SolverError("solve: Jacobian factorization failed", it, rn);
    const Eigen::VectorXd step = ldlt.solve(rhs);

    double alpha = 1.0;
    bool accepted = false;
    ScalarField trial;
    ScalarField rt;
    double rt2 = 0.0;
    for (int k = 0; k < 40; ++k) {
      trial = u;
      for (int q = 0; q < m; ++q) {
        const auto [i, j] = nodes[q];
        trial(i, j) += alpha * step[q];
      }
      rt = residual(trial, datum, dom);
      rt2 = 0.0;
      for (double v : rt.v) rt2 += v * v;
      if (std::isfinite(rt2) && rt2 <= (1.0 - 2e-4 * alpha) * r2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    ++it;
    if (!accepted) {
      rep.iterations = it;
      rep.residual_norm = rn;
      throw SolverError("solve: line search failed", it, rn);
    }
    u = std::move(trial);
    r = std::move(rt);
    r2 = rt2;
    rn = sup_on_unknowns(r, dom);
    rep.residual_history.push_back(rn);
  }
  rep.iterations = it;
  rep.residual_norm = rn;
  rep.converged = rn <= opt.tol;
  if (!rep.converged) throw SolverError("solve: Newton iteration did not converge", it, rn);
  rep.beta_sup = max_principle_check(beta_field(u, datum), dom).sup;
  rep.curvature_max = max_on_unknowns(curvature_field(u, dom), dom);
  return {std::move(u), std::move(rep)};
}

ScalarField beta_field(const ScalarField& u, const HiggsDatum& datum) {
  if (u.nx != datum.t_abs2.nx || u.ny != datum.t_abs2.ny) throw InvalidInput("beta_field: shape mismatch");
  ScalarField b(u.nx, u.ny);
  for (std::size_t k = 0; k < u.v.size(); ++k) b.v[k] = std::sqrt(datum.t_abs2.v[k]) * std::exp(1.5 * u.v[k]);
  return b;
}

MaxPrincipleReport max_principle_check(const ScalarField& beta, const DomainSpec& dom) {
  check_shape(beta, dom, "max_principle_check");
  MaxPrincipleReport rep;
  bool first = true;
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i) {
      if (!dom.is_unknown(i, j)) continue;
      if (first || beta(i, j) > rep.sup) {
        rep.sup = beta(i, j);
        rep.arg_i = i;
        rep.arg_j = j;
        first = false;
      }
    }
  rep.strict = rep.sup < 1.0 - 1e-9;
  return rep;
}

ScalarField curvature_field(const ScalarField& u, const DomainSpec& dom) {
  check_shape(u, dom, "curvature_field");
  ScalarField k(dom.nx(), dom.ny(), 0.0);
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      if (dom.is_unknown(i, j)) k(i, j) = laplacian(u, dom, i, j) * std::exp(2.0 * u(i, j));
  return k;
}

ScalarField ratio_identity_defect(const ScalarField& u, const HiggsDatum& datum, const DomainSpec& dom) {
  check_shape(u, dom, "ratio_identity_defect");
  const ScalarField b = beta_field(u, datum);
  ScalarField lb(dom.nx(), dom.ny(), 0.0);
  for (std::size_t q = 0; q < b.v.size(); ++q) lb.v[q] = b.v[q] > 0 ? std::log(b.v[q]) : 0.0;
  ScalarField out(dom.nx(), dom.ny(), 0.0);
  const int nx = dom.nx();
  const int ny = dom.ny();
  auto positive = [&](int i, int j) {
    if (dom.kind == DomainSpec::Kind::torus) {
      i = (i + nx) % nx;
      j = (j + ny) % ny;
    }
    return b(i, j) > 0;
  };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!dom.is_unknown(i, j)) continue;
      if (!(positive(i, j) && positive(i + 1, j) && positive(i - 1, j) && positive(i, j + 1) && positive(i, j - 1)))
        continue;
      out(i, j) = laplacian(lb, dom, i, j) / (2.0 * std::exp(-2.0 * u(i, j))) - 3.0 * (b(i, j) * b(i, j) - 1.0);
    }
  return out;
}

double max_abs(const ScalarField& f) {
  double s = 0.0;
  for (double v : f.v) s = std::max(s, std::abs(v));
  return s;
}

double max_on_unknowns(const ScalarField& f, const DomainSpec& dom) {
  check_shape(f, dom, "max_on_unknowns");
  double s = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      if (dom.is_unknown(i, j)) s = std::max(s, f(i, j));
  return s;
}

double max_abs_diff_on_unknowns(const ScalarField& a, const ScalarField& b, const DomainSpec& dom) {
  check_shape(a, dom, "max_abs_diff_on_unknowns");
  check_shape(b, dom, "max_abs_diff_on_unknowns");
  double s = 0.0;
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      if (dom.is_unknown(i, j)) s = std::max(s, std::abs(a(i, j) - b(i, j)));
  return s;
}

std::pair<int, int> slice_dimensions(int genus) {
  if (genus < 2) throw InvalidInput("slice dimensions need genus >= 2");
  return {2 * genus - 2, 4 * genus - 4};
}

bool gauge_equivalent(const GaugeParams& p1, const GaugeParams& p2, bool over_complex, double eps) {
  if (p1.t.size() != p2.t.size() || p1.delta.size() != p2.delta.size() || p1.q.size() != p2.q.size())
    throw InvalidInput("gauge parameters must have matching shapes");
  auto close = [eps](const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b,
                     double sign) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - sign * b[k]) > eps) return false;
    return true;
  };
  if (!close(p1.delta, p2.delta, 1.0) || !close(p1.q, p2.q, 1.0)) return false;
  if (close(p1.t, p2.t, 1.0)) return true;
  return over_complex && close(p1.t, p2.t, -1.0);
}

void write_csv(std::ostream& os, const ScalarField& f) {
  os << "nx,ny\n" << f.nx << ',' << f.ny << '\n';
  os << std::setprecision(17);
  for (int j = 0; j < f.ny; ++j) {
    for (int i = 0; i < f.nx; ++i) {
      if (i) os << ',';
      os << f(i, j);
    }
    os << '\n';
  }
}

}  // namespace anosov
