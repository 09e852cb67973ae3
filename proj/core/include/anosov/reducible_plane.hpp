#pragma once

#include <variant>

#include <Eigen/Core>

#include "anosov/flag.hpp"

namespace anosov {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// The SL(2,R) copy acting on coordinates 1 and 3 with the middle coordinate
// fixed: [[a,b],[c,d]] -> [[a,0,b],[0,1,0],[c,0,d]].
Mat3 embed13(const Mat2& A);

// Point [[a,0,c],[0,1,0],[c,0,b]] of the model plane, ab - c^2 = 1, a > 0.
struct PlanePoint {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;

  static PlanePoint make(double a, double b, double c, double eps = 1e-10);
  static PlanePoint identity() { return {}; }
  static PlanePoint from_block(const Mat2& s);

  Mat2 block() const;
  SpdPoint embed() const;
};

// Boundary circle of the model plane. phi is kept in [0, pi): phi and
// phi + pi name the same flag ([cos phi : 0 : sin phi], [-sin phi : 0 : cos phi]).
struct BoundaryPoint {
  double phi = 0.0;
  Flag flag;

  static BoundaryPoint at(double phi);
};

// Group element carrying the model plane onto a general reducible plane.
struct ReduciblePlaneFrame {
  GroupElem g = GroupElem::identity();
};

class Projection {
 public:
  explicit Projection(const PlanePoint& p) : v_(p) {}
  explicit Projection(const BoundaryPoint& b) : v_(b) {}

  bool is_interior() const { return std::holds_alternative<PlanePoint>(v_); }
  bool is_boundary() const { return !is_interior(); }
  const PlanePoint& interior() const { return std::get<PlanePoint>(v_); }
  const BoundaryPoint& boundary() const { return std::get<BoundaryPoint>(v_); }

 private:
  std::variant<PlanePoint, BoundaryPoint> v_;
};

// Unit tangent direction at Id with angle psi:
// cos(psi) diag(1,0,-1) + sin(psi) (E13 + E31).
TangentDir plane_direction(double psi);
Mat2 plane_direction_block(double psi);

// Point at signed distance-parameter t from X along the direction psi read in
// the frame of X (geodesic in the sense of flag_core).
PlanePoint plane_geodesic(const PlanePoint& X, double psi, double t);

// Boundary point reached by the ray from Id in direction psi.
double ray_endpoint_phi(double psi);
// Direction at Id whose ray ends at the boundary point phi.
double direction_of_phi(double phi);

// asinh of the signed hyperboloid coordinate of X across the geodesic
// through Id orthogonal to psi; positive on the side the ray psi enters.
double plane_signed_position(const PlanePoint& X, double psi);
// cos of the angle between the ray to `a` and psi.
double boundary_sector(const BoundaryPoint& a, double psi);

Flag fiber_over_interior(const PlanePoint& X, double theta);

double conic_eval(const ProjectivePoint& x);
double dual_conic_eval(const ProjectiveCovector& y);

double criticality_residual(const Flag& f, const PlanePoint& X);
bool boundary_fiber_contains(const BoundaryPoint& a, const Flag& f);

struct ProjectOptions {
  double grad_tol = 1e-10;
  int max_iter = 100;
  // Distance of a normalized middle coordinate to zero below which a flag is
  // tested for boundary-fiber membership.
  double boundary_tol = 1e-10;
};

struct NewtonTrace {
  int iterations = 0;
  double grad_norm = 0.0;
  // grad_tol, or the rounding floor of the gradient if that is larger
  double tolerance = 0.0;
};

// Busemann function of f based at Id restricted to the model plane, and the
// Newton minimizer in the geodesic-exponential chart started at `start`.
double plane_busemann(const Flag& f, const PlanePoint& X);
PlanePoint minimize_busemann(const Flag& f, const PlanePoint& start, const ProjectOptions& opt = {},
                             NewtonTrace* trace = nullptr);

// Closed-form solution of the criticality equations for a model-frame flag
// off the boundary fibers.
PlanePoint project_closed_form(const Flag& f);

// Nearest-point projection of f onto the plane of `frame`, expressed in model
// coordinates (the plane point X stands for frame.g applied to X.embed()).
Projection project(const Flag& f, const ReduciblePlaneFrame& frame = {}, const ProjectOptions& opt = {});

}  // namespace anosov
