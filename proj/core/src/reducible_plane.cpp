#include "anosov/reducible_plane.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace anosov {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double phi) {
  double r = std::fmod(phi, kPi);
  if (r < 0) r += kPi;
  if (r >= kPi) r -= kPi;
  return r;
}

// Square root of a unit-determinant SPD 2x2 matrix.
Mat2 sqrt_unimodular(const Mat2& s) { return (s + Mat2::Identity()) / std::sqrt(s.trace() + 2.0); }

Mat2 inverse_unimodular(const Mat2& s) {
  Mat2 r;
  r << s(1, 1), -s(0, 1), -s(1, 0), s(0, 0);
  return r;
}

// exp of the trace-free symmetric [[u,v],[v,-u]].
Mat2 exp_tracefree(double u, double v) {
  const double r = std::hypot(u, v);
  const double sh = r > 1e-300 ? std::sinh(r) / r : 1.0;
  Mat2 w;
  w << u, v, v, -u;
  return std::cosh(r) * Mat2::Identity() + sh * w;
}

Vec2 split13(const Vec3& v) { return {v[0], v[2]}; }

}  // namespace

Mat3 embed13(const Mat2& A) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = A(0, 0);
  m(0, 2) = A(0, 1);
  m(2, 0) = A(1, 0);
  m(2, 2) = A(1, 1);
  m(1, 1) = 1.0;
  return m;
}

PlanePoint PlanePoint::make(double a, double b, double c, double eps) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw InvalidInput("plane point must be finite");
  if (!(a > 0)) throw InvalidInput("plane point needs a > 0");
  const double det = a * b - c * c;
  if (std::abs(det - 1.0) > eps * std::max(1.0, a * b))
    throw InvalidInput("plane point needs ab - c^2 = 1 (got " + std::to_string(det) + ")");
  const double s = std::sqrt(det);
  return PlanePoint{a / s, b / s, c / s};
}

PlanePoint PlanePoint::from_block(const Mat2& s) {
  const double c = 0.5 * (s(0, 1) + s(1, 0));
  const double det = s(0, 0) * s(1, 1) - c * c;
  if (!(det > 0) || !(s(0, 0) > 0)) throw NumericalError("plane block is not positive definite");
  const double r = std::sqrt(det);
  return PlanePoint{s(0, 0) / r, s(1, 1) / r, c / r};
}

Mat2 PlanePoint::block() const {
  Mat2 m;
  m << a, c, c, b;
  return m;
}

SpdPoint PlanePoint::embed() const { return SpdPoint(embed13(block())); }

BoundaryPoint BoundaryPoint::at(double phi) {
  const double p = wrap_pi(phi);
  return BoundaryPoint{p, Flag(Vec3(std::cos(p), 0.0, std::sin(p)), Vec3(-std::sin(p), 0.0, std::cos(p)))};
}

Mat2 plane_direction_block(double psi) {
  Mat2 m;
  m << std::cos(psi), std::sin(psi), std::sin(psi), -std::cos(psi);
  return m;
}

TangentDir plane_direction(double psi) { return TangentDir(embed13(plane_direction_block(psi)) - Mat3(Vec3(0, 1, 0).asDiagonal())); }

PlanePoint plane_geodesic(const PlanePoint& X, double psi, double t) {
  const Mat2 h = sqrt_unimodular(X.block());
  const Mat2 e = exp_tracefree(t * std::cos(psi), t * std::sin(psi));
  return PlanePoint::from_block(h * e * h);
}

double ray_endpoint_phi(double psi) { return wrap_pi(0.5 * (psi + kPi)); }

double direction_of_phi(double phi) { return 2.0 * phi - kPi; }

double plane_signed_position(const PlanePoint& X, double psi) {
  return std::asinh(std::cos(psi) * 0.5 * (X.a - X.b) + std::sin(psi) * X.c);
}

double boundary_sector(const BoundaryPoint& a, double psi) { return std::cos(direction_of_phi(a.phi) - psi); }

Flag fiber_over_interior(const PlanePoint& X, double theta) {
  const Mat2 h = sqrt_unimodular(X.block());
  const Mat2 hi = inverse_unimodular(h);
  const Vec2 x = hi * Vec2(std::cos(theta), std::sin(theta));
  const Vec2 y = h * Vec2(-std::cos(theta), -std::sin(theta));
  return Flag(Vec3(x[0], 1.0, x[1]), Vec3(y[0], 1.0, y[1]));
}

double conic_eval(const ProjectivePoint& x) {
  const Vec3& v = x.coords();
  return v[0] * v[0] - v[1] * v[1] + v[2] * v[2];
}

double dual_conic_eval(const ProjectiveCovector& y) {
  const Vec3& v = y.coords();
  return v[0] * v[0] - v[1] * v[1] + v[2] * v[2];
}

double criticality_residual(const Flag& f, const PlanePoint& X) {
  const Mat2 h = sqrt_unimodular(X.block());
  const Mat2 hi = inverse_unimodular(h);
  const Vec2 x13 = h * split13(f.line().coords());
  const Vec2 y13 = hi * split13(f.plane().coords());
  const double x2 = f.line()[1];
  const double y2 = f.plane()[1];
  const double nx = x13.squaredNorm() + x2 * x2;
  const double ny = y13.squaredNorm() + y2 * y2;
  const double r1 = (y13[0] * y13[0] - y13[1] * y13[1]) / ny - (x13[0] * x13[0] - x13[1] * x13[1]) / nx;
  const double r2 = 2.0 * y13[0] * y13[1] / ny - 2.0 * x13[0] * x13[1] / nx;
  return std::hypot(r1, r2);
}

bool boundary_fiber_contains(const BoundaryPoint& a, const Flag& f) { return thickening_contains(a.flag, f); }

double plane_busemann(const Flag& f, const PlanePoint& X) {
  const Vec3& x = f.line().coords();
  const Vec3& y = f.plane().coords();
  const Mat2 s = X.block();
  const Vec2 x13 = split13(x);
  const Vec2 y13 = split13(y);
  const double qx = x13.dot(s * x13) + x[1] * x[1];
  const double qy = y13.dot(inverse_unimodular(s) * y13) + y[1] * y[1];
  return std::log(qx) + std::log(qy);
}

PlanePoint minimize_busemann(const Flag& f, const PlanePoint& start, const ProjectOptions& opt, NewtonTrace* trace) {
  const Vec3& x = f.line().coords();
  const Vec3& y = f.plane().coords();
  const double x2s = x[1] * x[1];
  const double y2s = y[1] * y[1];
  Mat2 s = start.block();
  double gnorm = 0.0;
  for (int it = 0; it <= opt.max_iter; ++it) {
    const Mat2 h = sqrt_unimodular(s);
    const Vec2 xt = h * split13(x);
    const Vec2 yt = inverse_unimodular(h) * split13(y);
    const double a0 = xt.squaredNorm() + x2s;
    const double b0 = yt.squaredNorm() + y2s;
    const Vec2 gx(xt[0] * xt[0] - xt[1] * xt[1], 2.0 * xt[0] * xt[1]);
    const Vec2 gy(yt[0] * yt[0] - yt[1] * yt[1], 2.0 * yt[0] * yt[1]);
    const Vec2 g = gx / a0 - gy / b0;
    gnorm = g.norm();
    // Rounding floor of g: xt and yt carry absolute errors eps |h| |x13| and
    // eps |h^-1| |y13|, and storing s perturbs the point by eps cond(s).
    const double hn = std::sqrt(s.trace());
    const double kx = hn * split13(x).norm() / std::sqrt(a0);
    const double ky = hn * split13(y).norm() / std::sqrt(b0);
    const double floor_tol = 32.0 * std::numeric_limits<double>::epsilon() * (kx + ky + s.trace() * s.trace());
    const double tol_eff = std::max(opt.grad_tol, floor_tol);
    if (trace) *trace = {it, gnorm, tol_eff};
    if (gnorm <= tol_eff) return PlanePoint::from_block(s);
    if (it == opt.max_iter) break;

    Mat2 hess = (xt.squaredNorm() / a0 + yt.squaredNorm() / b0) * Mat2::Identity() -
                gx * gx.transpose() / (a0 * a0) - gy * gy.transpose() / (b0 * b0);
    Vec2 step = -hess.ldlt().solve(g);
    if (!step.allFinite() || step.dot(g) >= 0) step = -g;
    // Far from the minimizer the objective is nearly affine; cap the step.
    constexpr double kMaxStep = 2.0;
    if (step.norm() > kMaxStep) step *= kMaxStep / step.norm();

    auto value = [&](const Vec2& w) {
      const Mat2 e = exp_tracefree(w[0], w[1]);
      const Mat2 ei = inverse_unimodular(e);
      return std::log(xt.dot(e * xt) + x2s) + std::log(yt.dot(ei * yt) + y2s);
    };
    const double v0 = std::log(a0) + std::log(b0);
    const double slope = g.dot(step);
    double alpha = 1.0;
    // Below the rounding level of the objective the line search cannot
    // discriminate; take the full Newton step.
    bool accepted = -slope <= 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(v0));
    for (int k = 0; k < 60 && !accepted; ++k) {
      const double v = value(alpha * step);
      if (std::isfinite(v) && v <= v0 + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // No further decrease is representable; accept if stationary to a
      // looser resolution.
      if (gnorm <= 1e3 * tol_eff) return PlanePoint::from_block(s);
      throw SolverError("project: line search stalled", it, gnorm);
    }
    const Vec2 w = alpha * step;
    s = h * exp_tracefree(w[0], w[1]) * h;
    const double det = s.determinant();
    s = (0.5 * (s + s.transpose().eval()) / std::sqrt(det)).eval();
  }
  throw SolverError("project: Newton iteration did not converge", opt.max_iter, gnorm);
}

PlanePoint project_closed_form(const Flag& f) {
  const Vec3& x = f.line().coords();
  const Vec3& y = f.plane().coords();
  if (std::abs(x[1]) < 1e-300 || std::abs(y[1]) < 1e-300)
    throw NumericalError("project_closed_form: flag lies in a boundary fiber");
  const Vec2 u = split13(x);
  const double n = u.norm();
  const double mu = -x[1] / y[1];
  const Vec2 w = mu * split13(y);
  Mat2 q;
  q << u[0] / n, u[1] / n, -u[1] / n, u[0] / n;
  const Vec2 wr = q * w;
  const double p = wr[0] / n;
  const double c = wr[1] / n;
  if (!(p > 0) || !std::isfinite(p)) throw NumericalError("project_closed_form: degenerate fiber");
  Mat2 sr;
  sr << p, c, c, (1.0 + c * c) / p;
  return PlanePoint::from_block(q.transpose() * sr * q);
}

Projection project(const Flag& f, const ReduciblePlaneFrame& frame, const ProjectOptions& opt) {
  const Flag m = act_on_flag(frame.g.inverse(), f);
  const Vec3& x = m.line().coords();
  const Vec3& y = m.plane().coords();
  if (std::abs(x[1]) <= opt.boundary_tol) {
    const BoundaryPoint a = BoundaryPoint::at(std::atan2(x[2], x[0]));
    if (boundary_fiber_contains(a, m)) return Projection(a);
  }
  if (std::abs(y[1]) <= opt.boundary_tol) {
    const BoundaryPoint a = BoundaryPoint::at(std::atan2(-y[0], y[2]));
    if (boundary_fiber_contains(a, m)) return Projection(a);
  }
  return Projection(minimize_busemann(m, project_closed_form(m), opt));
}

}  // namespace anosov
