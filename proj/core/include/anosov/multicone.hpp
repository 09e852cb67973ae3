#pragma once

#include <utility>
#include <vector>

#include "anosov/reducible_plane.hpp"

namespace anosov {

// Preimage under the projection of the closed half-plane of a reducible plane
// bounded by the geodesic through `base` orthogonal to `axis`, on the side the
// axis points to. `axis` is an angle in the tangent circle at `base`, read in
// the frame of `base`.
struct Multicone {
  ReduciblePlaneFrame frame;
  PlanePoint base;
  double axis = 0.0;

  static Multicone model(double axis = 0.0) { return Multicone{{}, PlanePoint::identity(), axis}; }

  // Element carrying the model picture (base Id, same axis) onto this cone.
  Mat3 normalizer() const;
};

enum class Region { inside, boundary, outside };

const char* region_name(Region r);

struct Classification {
  Region region = Region::outside;
  // Signed plane coordinate (interior projections) or angle-sector cosine
  // (boundary projections); positive means inside.
  double signed_value = 0.0;
  bool boundary_projection = false;
};

struct NestEstimate {
  double lower = 0.0;
  Flag fplus;
  Flag fminus;
  int samples = 0;
};

// Chart density for the boundary of a multicone.
struct SamplingSpec {
  int theta_steps = 64;
  int lam_steps = 64;
  double log_lam_max = 6.0;
  int wedge_probes = 256;

  // Square chart grid with about n points, default wedge probes.
  static SamplingSpec from_count(int n);
};

// Forward and backward ends of the axis geodesic.
std::pair<Flag, Flag> endpoint_flags(const Multicone& U);

Classification classify(const Multicone& U, const Flag& f, double eps = 1e-6);
Region contains_flag(const Multicone& U, const Flag& f, double eps = 1e-6);

// ([lam cos t : 1 : sin t / lam], [-cos t / lam : 1 : -lam sin t]): the
// boundary parametrization attached to the diagonal geodesic of the model plane.
Flag raw_boundary_chart(double theta, double lam);
// The same parametrization rotated and transported onto the boundary of U.
Flag boundary_chart(const Multicone& U, double theta, double lam);
// Points of the two endpoint thickenings of U's boundary geodesic, written as
// four circles (line fixed or plane fixed) sampled at angle omega.
Flag wedge_circle(const Multicone& U, int which, double omega);

std::vector<Flag> boundary_samples(const Multicone& U, const SamplingSpec& spec = {});

Multicone translate(const Multicone& U, double s);
Multicone act(const GroupElem& g, const Multicone& U);
Multicone reversed(const Multicone& U);

bool is_nested(const Multicone& U1, const Multicone& U2, const SamplingSpec& spec = {});
NestEstimate nest_estimate(const Multicone& U1, const Multicone& U2, const SamplingSpec& spec = {});

// g_lambda fixing fplus and fminus, contracting towards fplus.
Mat3 nest_element(const Flag& fplus, const Flag& fminus, double lambda);

// Forward endpoint of the last cone after checking consecutive nesting and
// sampled thickening probes against every cone.
Flag limit_flag(const std::vector<Multicone>& cones, const SamplingSpec& spec = {});

}  // namespace anosov
