#include "anosov/multicone.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Geometry>
#include <Eigen/LU>

namespace anosov {

namespace {

constexpr double kPi = std::numbers::pi;

Mat2 rotation(double chi) {
  Mat2 r;
  r << std::cos(chi), -std::sin(chi), std::sin(chi), std::cos(chi);
  return r;
}

Mat2 inv_sqrt_block(const PlanePoint& p) {
  const Mat2 s = p.block();
  const Mat2 h = (s + Mat2::Identity()) / std::sqrt(s.trace() + 2.0);
  Mat2 hi;
  hi << h(1, 1), -h(0, 1), -h(1, 0), h(0, 0);
  return hi;
}

// Applies a matrix whose inverse transpose is supplied.
struct Transport {
  Mat3 m;
  Mat3 m_inv_t;

  explicit Transport(const Mat3& g) : m(g), m_inv_t(g.inverse().transpose()) {}
  Flag operator()(const Flag& f) const {
    return Flag(Vec3(m * f.line().coords()), Vec3(m_inv_t * f.plane().coords()), 1e-6);
  }
};

Classification classify_model(double psi, const Flag& m, double eps) {
  const Projection p = project(m);
  Classification c;
  if (p.is_interior()) {
    c.signed_value = plane_signed_position(p.interior(), psi);
  } else {
    c.signed_value = boundary_sector(p.boundary(), psi);
    c.boundary_projection = true;
  }
  if (c.signed_value > eps) c.region = Region::inside;
  else if (c.signed_value < -eps) c.region = Region::outside;
  else c.region = Region::boundary;
  return c;
}

// Rotation in the model plane carrying the diagonal geodesic onto the
// boundary geodesic of a cone with axis psi.
Mat3 chart_rotation(double psi) { return embed13(rotation(0.5 * (psi + 0.5 * kPi))); }

bool all_inside(const Multicone& U, const Mat3& pre, const std::vector<Flag>& samples, std::size_t& hint) {
  const Transport t(U.normalizer().inverse() * pre);
  auto inside = [&](std::size_t i) {
    return classify_model(U.axis, t(samples[i]), 1e-6).region == Region::inside;
  };
  if (hint < samples.size() && !inside(hint)) return false;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i == hint) continue;
    if (!inside(i)) {
      hint = i;
      return false;
    }
  }
  return true;
}

std::vector<Flag> thickening_probes(const Flag& f, int n) {
  const Vec3 x = f.line().coords();
  const Vec3 y = f.plane().coords();
  const Vec3 yx = x.cross(y).normalized();
  std::vector<Flag> out;
  out.reserve(2 * n);
  for (int k = 0; k < n; ++k) {
    const double w = kPi * k / n;
    out.emplace_back(x, Vec3(std::cos(w) * y + std::sin(w) * yx));
    out.emplace_back(Vec3(std::cos(w) * x + std::sin(w) * yx), y);
  }
  return out;
}

Flag raw_wedge(int which, double omega) {
  const double c = std::cos(omega);
  const double s = std::sin(omega);
  switch (which) {
    case 0: return Flag(Vec3(1, 0, 0), Vec3(0, c, s));
    case 1: return Flag(Vec3(c, s, 0), Vec3(0, 0, 1));
    case 2: return Flag(Vec3(0, 0, 1), Vec3(c, s, 0));
    case 3: return Flag(Vec3(0, c, s), Vec3(1, 0, 0));
    default: throw InvalidInput("wedge circle index must be 0..3");
  }
}

}  // namespace

const char* region_name(Region r) {
  switch (r) {
    case Region::inside: return "inside";
    case Region::boundary: return "boundary";
    case Region::outside: return "outside";
  }
  return "unknown";
}

Mat3 Multicone::normalizer() const { return frame.g.mat() * embed13(inv_sqrt_block(base)); }

SamplingSpec SamplingSpec::from_count(int n) {
  if (n < 1) throw InvalidInput("sample count must be positive");
  SamplingSpec s;
  const int side = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  s.theta_steps = side;
  s.lam_steps = side;
  return s;
}

std::pair<Flag, Flag> endpoint_flags(const Multicone& U) {
  const Transport t(U.normalizer());
  return {t(BoundaryPoint::at(ray_endpoint_phi(U.axis)).flag),
          t(BoundaryPoint::at(ray_endpoint_phi(U.axis + kPi)).flag)};
}

Classification classify(const Multicone& U, const Flag& f, double eps) {
  return classify_model(U.axis, act_on_flag(U.normalizer().inverse(), f), eps);
}

Region contains_flag(const Multicone& U, const Flag& f, double eps) { return classify(U, f, eps).region; }

Flag raw_boundary_chart(double theta, double lam) {
  if (!(lam > 0) || !std::isfinite(lam)) throw InvalidInput("boundary chart needs lam > 0");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Flag(Vec3(lam * c, 1.0, s / lam), Vec3(-c / lam, 1.0, -lam * s));
}

Flag boundary_chart(const Multicone& U, double theta, double lam) {
  return act_on_flag(Mat3(U.normalizer() * chart_rotation(U.axis)), raw_boundary_chart(theta, lam));
}

Flag wedge_circle(const Multicone& U, int which, double omega) {
  return act_on_flag(Mat3(U.normalizer() * chart_rotation(U.axis)), raw_wedge(which, omega));
}

std::vector<Flag> boundary_samples(const Multicone& U, const SamplingSpec& spec) {
  if (spec.theta_steps < 1 || spec.lam_steps < 2 || spec.wedge_probes < 0)
    throw InvalidInput("invalid boundary sampling resolution");
  const Transport t(U.normalizer() * chart_rotation(U.axis));
  std::vector<Flag> out;
  out.reserve(spec.theta_steps * spec.lam_steps + 4 * spec.wedge_probes);
  for (int i = 0; i < spec.theta_steps; ++i) {
    const double theta = 2.0 * kPi * i / spec.theta_steps;
    for (int j = 0; j < spec.lam_steps; ++j) {
      const double ll = -spec.log_lam_max + 2.0 * spec.log_lam_max * j / (spec.lam_steps - 1);
      out.push_back(t(raw_boundary_chart(theta, std::exp(ll))));
    }
  }
  for (int w = 0; w < 4; ++w) {
    for (int k = 0; k < spec.wedge_probes; ++k) {
      const double omega = kPi * k / spec.wedge_probes;
      out.push_back(t(raw_wedge(w, omega)));
    }
  }
  return out;
}

Multicone translate(const Multicone& U, double s) {
  const Mat3 p = embed13(inv_sqrt_block(U.base));
  const Mat3 shift = sym_exp(-0.5 * s * plane_direction(U.axis).mat());
  Multicone out = U;
  out.frame.g = GroupElem(Mat3(U.frame.g.mat() * p * shift * p.inverse()), 1e-8);
  return out;
}

Multicone act(const GroupElem& g, const Multicone& U) {
  Multicone out = U;
  out.frame.g = g * U.frame.g;
  return out;
}

Multicone reversed(const Multicone& U) {
  Multicone out = U;
  out.axis = U.axis + kPi;
  return out;
}

bool is_nested(const Multicone& U1, const Multicone& U2, const SamplingSpec& spec) {
  std::size_t hint = 0;
  return all_inside(U1, Mat3::Identity(), boundary_samples(U2, spec), hint);
}

Mat3 nest_element(const Flag& fplus, const Flag& fminus, double lambda) {
  Mat3 b;
  b.col(0) = fplus.line().coords();
  b.col(1) = fplus.plane().coords().cross(fminus.plane().coords());
  b.col(2) = fminus.line().coords();
  const Vec3 d(std::exp(lambda), 1.0, std::exp(-lambda));
  return b * d.asDiagonal() * b.inverse();
}

NestEstimate nest_estimate(const Multicone& U1, const Multicone& U2, const SamplingSpec& spec) {
  const std::vector<Flag> samples = boundary_samples(U2, spec);
  std::size_t hint = 0;
  if (!all_inside(U1, Mat3::Identity(), samples, hint))
    throw PreconditionError("nest_estimate: second multicone is not nested in the first");
  const Flag fplus = endpoint_flags(U2).first;
  const Flag fminus = endpoint_flags(U1).second;
  if (!is_transverse(fplus, fminus))
    throw PreconditionError("nest_estimate: witness flags are not transverse");
  auto ok = [&](double lam) {
    return all_inside(U1, nest_element(fplus, fminus, -lam), samples, hint);
  };
  double lo = 0.0;
  double hi = 0.25;
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 256.0) break;
  }
  for (int k = 0; k < 60 && hi - lo > 1e-7; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) lo = mid;
    else hi = mid;
  }
  return NestEstimate{lo, fplus, fminus, static_cast<int>(samples.size())};
}

Flag limit_flag(const std::vector<Multicone>& cones, const SamplingSpec& spec) {
  if (cones.size() < 2) throw PreconditionError("limit_flag: need at least two cones");
  for (std::size_t i = 0; i + 1 < cones.size(); ++i) {
    if (!is_nested(cones[i], cones[i + 1], spec))
      throw PreconditionError("limit_flag: nesting violated at index " + std::to_string(i + 1));
  }
  const double first = nest_estimate(cones[0], cones[1], spec).lower;
  const double last = nest_estimate(cones.front(), cones.back(), spec).lower;
  if (cones.size() > 2 && !(last > first))
    throw PreconditionError("limit_flag: nestedness does not grow along the sequence");
  const Flag f = endpoint_flags(cones.back()).first;
  for (const Flag& probe : thickening_probes(f, spec.wedge_probes)) {
    for (const Multicone& U : cones) {
      if (contains_flag(U, probe) != Region::inside)
        throw PreconditionError("limit_flag: thickening probe escapes a cone");
    }
  }
  return f;
}

}  // namespace anosov
