// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "anosov/hitchin.hpp"
#include "anosov/lemma64.hpp"
#include "anosov/multicone.hpp"
#include "anosov/reducible_plane.hpp"
#include "anosov/surface.hpp"
#include "test_support.hpp"

using namespace anosov;
using anosov::testing::Sampler;

namespace {

constexpr double kPi = std::numbers::pi;

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  template <class... Args>
  void check(bool ok, const char* fmt, Args... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    ok_ = ok_ && ok;
    parts_.push_back(std::string(ok ? "" : "FAILED ") + buf);
  }

  bool report() const {
    std::printf("%s %d %s:", ok_ ? "PASS" : "FAIL", id_, title_.c_str());
    for (std::size_t k = 0; k < parts_.size(); ++k) std::printf("%s %s", k ? ";" : "", parts_[k].c_str());
    std::printf("\n");
    std::fflush(stdout);
    return ok_;
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> parts_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double cmax(const CMat3& m) { return m.cwiseAbs().maxCoeff(); }

bool criterion_1_and_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const CertReport r = sweep(CertGrid{});
  const double secs = seconds_since(t0);

  Criterion c1(1, "pointing-vector certificate over the default grid");
  c1.check(r.min_margin >= -1e-9, "min_margin %.3e >= -1e-9 over %zu cells", r.min_margin, r.cells);
  c1.check(r.oracle_dev <= 1e-10, "closed form vs commutator oracle %.3e <= 1e-10", r.oracle_dev);
  c1.check(secs < 60.0, "runtime %.2f s < 60 s", secs);
  const bool ok1 = c1.report();

  Criterion c2(2, "tightness at the Fuchsian locus");
  double worst = 0.0;
  CertGrid g;
  for (int kd = 0; kd <= 200; ++kd) {
    const double d = -g.d_max + kd * g.d_step;
    for (int kz = 0; kz < g.z_phases; ++kz) {
      const Margin m = certificate_margin(0.0, d, std::polar(1.0, 2 * kPi * kz / g.z_phases));
      worst = std::max(worst, std::abs(m.margin) / std::max(1.0, std::cosh(2 * d)));
    }
  }
  c2.check(worst <= 1e-12, "|margin| / max(1, cosh 2d) at beta = 0 is %.3e <= 1e-12", worst);
  c2.check(r.min_eta_excess >= -1e-12, "min(eta - (1 - |beta|)/2) = %.3e >= 0 up to 1e-12 rounding",
           r.min_eta_excess);
  const bool ok2 = c2.report();
  return ok1 && ok2;
}

bool criterion_3() {
  Criterion c(3, "fiber and projection round trip");
  Sampler s(3003);
  double crit = 0.0, round_trip = 0.0;
  int non_interior = 0;
  for (int i = 0; i < 10; ++i) {
    const PlanePoint X = s.plane_point(2.0);
    for (int k = 0; k < 256; ++k) {
      const Flag f = fiber_over_interior(X, 2 * kPi * k / 256);
      crit = std::max(crit, criticality_residual(f, X));
      const Projection p = project(f);
      if (!p.is_interior()) {
        ++non_interior;
        continue;
      }
      round_trip = std::max(round_trip, distance(p.interior().embed(), X.embed()));
    }
  }
  c.check(crit <= 1e-10, "criticality residual %.3e <= 1e-10 on 256 x 10", crit);
  c.check(non_interior == 0 && round_trip <= 1e-6, "project(fiber(X)) distance to X %.3e <= 1e-6", round_trip);

  double boundary = 0.0;
  int off = 0;
  for (int cone = 0; cone < 4; ++cone) {
    Multicone U = Multicone::model(s.uniform(0.0, 2 * kPi));
    if (cone > 0) U = act(s.group(), translate(U, s.uniform(-1.0, 1.0)));
    for (int i = 0; i < 32; ++i)
      for (int j = 0; j < 32; ++j) {
        const Classification cl = classify(U, boundary_chart(U, 2 * kPi * i / 32, std::exp(-6.0 + 12.0 * j / 31)));
        if (cl.region != Region::boundary) ++off;
        boundary = std::max(boundary, std::abs(cl.signed_value));
      }
  }
  c.check(off == 0 && boundary <= 1e-6, "boundary chart 32 x 32 on 4 cones: distance to geodesic %.3e <= 1e-6",
          boundary);
  return c.report();
}

bool criterion_4() {
  Criterion c(4, "nestedness calculus");
  double worst_rel = 0.0;
  for (double psi : {0.0, 1.0}) {
    const Multicone U = Multicone::model(psi);
    for (double t : {1.0, 2.0, 3.0}) {
      const double e = nest_estimate(U, translate(U, t)).lower;
      worst_rel = std::max(worst_rel, std::abs(e - t / 2) / (t / 2));
    }
  }
  c.check(worst_rel <= 0.05, "nest_estimate vs s/2 for s = 1, 2, 3: relative error %.3e <= 0.05", worst_rel);

  Sampler s(4004);
  double worst_sa = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Multicone U1 = act(s.group(0.3), Multicone::model(s.uniform(0.0, 2 * kPi)));
    const Multicone U2 = translate(U1, s.uniform(0.5, 1.5));
    const Multicone U3 = translate(U2, s.uniform(0.5, 1.5));
    const double e12 = nest_estimate(U1, U2).lower;
    const double e23 = nest_estimate(U2, U3).lower;
    const double e13 = nest_estimate(U1, U3).lower;
    worst_sa = std::max(worst_sa, e12 + e23 - e13);
  }
  c.check(worst_sa <= 0.05, "superadditivity deficit %.3e <= 0.05 on 4 translate triples", worst_sa);

  double worst_lim = 0.0;
  for (double psi : {0.3, 2.0}) {
    const Multicone U = act(s.group(0.3), Multicone::model(psi));
    std::vector<Multicone> cones;
    for (int n = 1; n <= 4; ++n) cones.push_back(translate(U, n));
    worst_lim = std::max(worst_lim, flag_distance(limit_flag(cones), endpoint_flags(U).first));
  }
  c.check(worst_lim <= 1e-10, "limit_flag vs forward endpoint %.3e <= 1e-10", worst_lim);
  return c.report();
}

bool criterion_5() {
  Criterion c(5, "flow certification");
  for (double b : {0.0, 0.5, 0.9}) {
    const PushforwardReport p = pushforward_check(b, 1e-3, 512);
    c.check(p.inside == 512, "beta %.1f: %d/512 strictly inside (min displacement %.3e)", b, p.inside,
            p.min_displacement);
  }
  const FlowReport f = flow_nesting_certify(0.0, {0.1, 0.5, 1.0, 2.0});
  int nested = 0;
  for (const auto& st : f.steps) nested += st.nested;
  c.check(f.all_nested && nested == 4, "flow nested for %d/4 times", nested);
  return c.report();
}

double disk_error(int n, std::vector<double>& curvature_max) {
  const DomainSpec dom = DomainSpec::disk(0.7, n);
  const ScalarField ref = fuchsian_profile(dom);
  ScalarField u0 = ref;
  for (int j = 0; j < dom.ny(); ++j)
    for (int i = 0; i < dom.nx(); ++i)
      if (dom.is_unknown(i, j)) u0(i, j) = 0.0;
  const auto [u, rep] = solve(dom, HiggsDatum::zero(dom), u0);
  if (rep.beta_sup < 1.0) curvature_max.push_back(max_on_unknowns(curvature_field(u, dom), dom));
  return max_abs_diff_on_unknowns(u, ref, dom);
}

bool criterion_6() {
  Criterion c(6, "scalar Hitchin solver");
  double torus = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    const DomainSpec dom = DomainSpec::torus(1.0, 1.0, 32);
    const auto [u, rep] = solve(dom, HiggsDatum::constant(dom, t), ScalarField(dom.nx(), dom.ny(), 0.3));
    for (double v : u.v) torus = std::max(torus, std::abs(v + 2.0 / 3.0 * std::log(t)));
  }
  c.check(torus <= 1e-8, "torus constants |u + (2/3) ln c| %.3e <= 1e-8", torus);

  std::vector<double> curv;
  const double e32 = disk_error(32, curv), e64 = disk_error(64, curv), e128 = disk_error(128, curv);
  const double order = std::log(e32 / e128) / std::log(4.0);
  c.check(e128 <= 5e-3, "disk t = 0 error at N = 128 %.3e <= 5e-3", e128);
  c.check(order >= 1.8 && order <= 2.2, "order %.3f in [1.8, 2.2] (errors %.3e, %.3e, %.3e)", order, e32, e64, e128);

  double beta_sup = 0.0;
  for (double k : {0.5, 1.0, 2.0}) {
    const DomainSpec dom = DomainSpec::disk(0.7, 64);
    const HiggsDatum t = HiggsDatum::monomial(dom, k, 1);
    const auto [u, rep] = solve(dom, t, fuchsian_profile(dom));
    beta_sup = std::max(beta_sup, max_on_unknowns(beta_field(u, t), dom));
    if (rep.beta_sup < 1.0) curv.push_back(max_on_unknowns(curvature_field(u, dom), dom));
  }
  c.check(beta_sup < 1.0, "disk t = c z, c in {0.5, 1, 2}: max beta %.6f < 1", beta_sup);
  const double kmax = *std::max_element(curv.begin(), curv.end());
  c.check(kmax < 0.0, "curvature max %.4f < 0 over %zu runs with beta_sup < 1", kmax, curv.size());
  return c.report();
}

bool criterion_7() {
  Criterion c(7, "gap scans");
  const auto j = octagon_fuchsian();
  const Representation red = make_reducible(j), irr = make_irreducible(j);
  const Representation bar = barbot_twist(j, {0.1, -0.2, 0.05, 0.0});
  const double res = std::max({red.relation_residual(), irr.relation_residual(), bar.relation_residual()});
  c.check(res <= 1e-9, "relation residual %.3e <= 1e-9", res);

  ScanOptions opt;
  opt.max_len = 5;
  const GapScan sr = gap_scan(red, opt), si = gap_scan(irr, opt), sb = gap_scan(bar, opt);
  const double lr = sr.rows[0].min_lg12, li = si.rows[0].min_lg12;
  c.check(std::abs(lr - 1.52857) <= 1e-4, "red length-1 lg12 %.6f", lr);
  c.check(std::abs(li - 3.05714) <= 1e-4, "irr length-1 lg12 %.6f", li);
  std::ostringstream mins;
  for (const auto& row : sr.rows) mins << (row.length > 1 ? " " : "") << row.min_sg12;
  c.check(sr.slope_a > 0.3, "red fitted slope A %.4f > 0.3 (B %.4f, min sg12 by length: %s)", sr.slope_a,
          sr.offset_b, mins.str().c_str());
  const double defect =
      std::max({sr.inverse_identity_defect, si.inverse_identity_defect, sb.inverse_identity_defect});
  c.check(defect <= 1e-12, "sg12(w) = sg23(w^-1) defect %.3e <= 1e-12 across 3 scans", defect);
  return c.report();
}

bool criterion_8() {
  Criterion c(8, "limit flags against the conic at the Fuchsian locus");
  const ConicReport r = conic_position_check(make_reducible(octagon_fuchsian()), 1000, 0);
  c.check(r.samples == 1000 && r.lines_outside == 1000, "%d/%d lines outside", r.lines_outside, r.samples);
  c.check(r.samples == 1000 && r.planes_meeting_interior == 1000, "%d/%d planes meet the interior",
          r.planes_meeting_interior, r.samples);
  c.check(r.min_line_margin > 0.0 && r.min_plane_margin > 0.0, "margins %.3e, %.3e > 0", r.min_line_margin,
          r.min_plane_margin);
  return c.report();
}

bool criterion_9() {
  Criterion c(9, "algebraic identities");
  Sampler s(9009);

  int probes = 0, violations = 0;
  for (int k = 0; k < 200; ++k) {
    const Flag f1 = s.flag();
    Flag f2 = s.flag();
    if (k % 3 == 1) f2 = s.in_plane(f1);
    if (k % 3 == 2) {
      const Vec3 x = s.vec();
      f2 = Flag(x, f1.line().coords().cross(x));
    }
    bool common = false;
    const Vec3 x1 = f1.line().coords(), y1 = f1.plane().coords();
    const Vec3 x2 = f2.line().coords(), y2 = f2.plane().coords();
    if (std::abs(x1.dot(y2)) < 1e-12) {
      ++probes;
      const Flag g(x1, y2);
      common = common || (thickening_contains(f1, g) && thickening_contains(f2, g));
    }
    if (std::abs(x2.dot(y1)) < 1e-12) {
      ++probes;
      const Flag g(x2, y1);
      common = common || (thickening_contains(f1, g) && thickening_contains(f2, g));
    }
    for (int j = 0; j < 10; ++j) {
      ++probes;
      common = common || thickening_contains(f2, j % 2 ? s.through_line(f1) : s.in_plane(f1));
    }
    if (is_transverse(f1, f2) == common) ++violations;
  }
  for (int k = 0; k < 100; ++k) {
    const Flag f = s.flag();
    const Flag same(3.0 * f.line().coords(), -2.0 * f.plane().coords());
    const Flag other = s.through_line(f);
    bool dis_same = false, dis_other = false;
    for (int j = 0; j < 12; ++j) {
      const Flag g = j % 3 == 0 ? s.in_plane(other) : (j % 3 == 1 ? s.through_line(f) : s.in_plane(f));
      probes += 2;
      dis_same = dis_same || thickening_contains(f, g) != thickening_contains(same, g);
      dis_other = dis_other || thickening_contains(f, g) != thickening_contains(other, g);
    }
    violations += dis_same + !dis_other;
  }
  c.check(probes >= 1000 && violations == 0, "transversality and thickening equivalences: %d probes, %d violations",
          probes, violations);

  double nil = 0.0;
  for (int k = 0; k < 256; ++k) {
    const CMat3 p = projector_pi(std::polar(1.0, 2 * kPi * k / 256 + 0.01)).mat;
    nil = std::max(nil, cmax(p * p));
  }
  c.check(nil <= 1e-14, "pi^2 %.3e <= 1e-14", nil);

  double real = 0.0;
  for (int k = 0; k < 500; ++k) {
    const ModelMatrices m =
        model_matrices(std::polar(s.uniform(0.0, 0.95), s.uniform(0.0, 2 * kPi)), s.uniform(-5.0, 5.0));
    for (const CMat3* x : {&m.H, &m.H0, &m.H0perp, &m.Ed, &m.Hprime})
      real = std::max(real, real_structure_defect(*x) / std::max(1.0, cmax(*x)));
  }
  c.check(real <= 1e-13, "real-structure defect (relative to max(1, |M|)) %.3e <= 1e-13", real);

  double eq = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Flag f = s.flag();
    const SpdPoint O = s.spd(), X = s.spd();
    const GroupElem g = s.group();
    eq = std::max(eq, std::abs(busemann(f, O, X) - busemann(act_on_flag(g, f), act_on_point(g, O), act_on_point(g, X))));
  }
  c.check(eq <= 1e-10, "busemann equivariance %.3e <= 1e-10", eq);
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  ok = criterion_1_and_2() && ok;
  ok = criterion_3() && ok;
  ok = criterion_4() && ok;
  ok = criterion_5() && ok;
  ok = criterion_6() && ok;
  ok = criterion_7() && ok;
  ok = criterion_8() && ok;
  ok = criterion_9() && ok;
  return ok ? 0 : 1;
}
