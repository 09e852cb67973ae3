#include "anosov/surface.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace anosov {

namespace {

using LD = long double;
using LMat3 = Eigen::Matrix<LD, 3, 3>;

const char* kLetterNames[8] = {"a1", "b1", "a2", "b2", "A1", "B1", "A2", "B2"};

Mat2 rot_half(double t) {
  Mat2 r;
  r << std::cos(t / 2), std::sin(t / 2), -std::sin(t / 2), std::cos(t / 2);
  return r;
}

Mat2 positive_trace(const Mat2& m) { return m.trace() < 0 ? Mat2(-m) : m; }

LMat3 cofactor(const LMat3& g) {
  LMat3 c;
  c.col(0) = g.col(1).cross(g.col(2));
  c.col(1) = g.col(2).cross(g.col(0));
  c.col(2) = g.col(0).cross(g.col(1));
  return c;
}

struct Gaps {
  LD sg12;
  LD sg23;
};

// cg = cofactor(g) and l3 = log|det g|, both accumulated letter by letter
// since neither is accurate when recomputed from a long product.
Gaps singular_gaps(const LMat3& g, const LMat3& cg, LD l3) {
  const LD l1 = std::log(Eigen::JacobiSVD<LMat3>(g).singularValues()[0]);
  const LD l2 = std::log(Eigen::JacobiSVD<LMat3>(cg).singularValues()[0]);
  return {std::max<LD>(0, 2 * l1 - l2), std::max<LD>(0, 2 * l2 - l1 - l3)};
}

double eigen_gap12(const LMat3& g) {
  Eigen::EigenSolver<LMat3> es(g, false);
  std::array<LD, 3> m{};
  for (int i = 0; i < 3; ++i) m[i] = std::abs(es.eigenvalues()[i]);
  std::sort(m.begin(), m.end(), std::greater<>());
  return static_cast<double>(std::max<LD>(0, std::log(m[0]) - std::log(m[1])));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

struct LengthAccumulator {
  std::vector<double> sg12;
  double min_sg23 = 0.0;
  double min_lg12 = 0.0;
  std::size_t cyclic = 0;
  bool any = false;

  void add(double s12, double s23) {
    min_sg23 = sg12.empty() ? s23 : std::min(min_sg23, s23);
    sg12.push_back(s12);
  }
  void add_lg(double l12) {
    min_lg12 = cyclic == 0 ? l12 : std::min(min_lg12, l12);
    ++cyclic;
  }
};

}  // namespace

Word Word::parse(const std::string& s) {
  Word w;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) {
    int found = -1;
    for (int l = 0; l < 8; ++l)
      if (tok == kLetterNames[l]) found = l;
    if (found < 0) throw InvalidInput("unknown letter '" + tok + "'");
    w.letters.push_back(found);
  }
  return w;
}

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ' ';
    out += kLetterNames[letters[i]];
  }
  return out;
}

bool Word::is_reduced() const {
  for (std::size_t i = 0; i + 1 < letters.size(); ++i)
    if (letters[i + 1] == letter_inverse(letters[i])) return false;
  return true;
}

bool Word::is_cyclically_reduced() const {
  return is_reduced() && (letters.size() < 2 || letters.back() != letter_inverse(letters.front()));
}

Word Word::inverse() const {
  Word w;
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(letter_inverse(*it));
  return w;
}

Word relator() { return Word{{0, 1, 4, 5, 2, 3, 6, 7}}; }

std::array<Mat2, 4> octagon_fuchsian() {
  const double ch = 1.0 + std::sqrt(2.0);
  const double sh = std::sqrt(ch * ch - 1.0);
  Mat2 a0;
  a0 << ch, sh, sh, ch;
  std::array<Mat2, 4> side;
  for (int k = 0; k < 4; ++k) {
    const double t = k * std::numbers::pi / 4.0;
    side[k] = rot_half(t) * a0 * rot_half(-t);
  }
  // A symplectic basis made of side-pairing axes (all systoles).
  return {positive_trace(side[3]), positive_trace(side[2].inverse()),
          positive_trace(side[2].inverse() * side[3] * side[1]), positive_trace(side[0].inverse() * side[1])};
}

Mat3 iota_red(const Mat2& A) { return embed13(A); }

Mat3 iota_irr(const Mat2& A) {
  const double a = A(0, 0), b = A(0, 1), c = A(1, 0), d = A(1, 1);
  const double r2 = std::sqrt(2.0);
  Mat3 m;
  m << a * a, r2 * a * b, b * b,
       r2 * a * c, a * d + b * c, r2 * b * d,
       c * c, r2 * c * d, d * d;
  return m;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::reducible_fuchsian: return "red";
    case Family::irreducible_fuchsian: return "irr";
    case Family::barbot_twist: return "barbot";
  }
  return "unknown";
}

Mat3 Representation::eval(const Word& w) const {
  LMat3 p = LMat3::Identity();
  std::array<LMat3, 8> g;
  for (int k = 0; k < 4; ++k) {
    g[k] = images[k].cast<LD>();
    g[k + 4] = g[k].inverse();
  }
  for (int l : w.letters) {
    if (l < 0 || l > 7) throw InvalidInput("word letter out of range");
    p = p * g[l];
  }
  return p.cast<double>();
}

double Representation::relation_residual() const {
  return (eval(relator()) - Mat3::Identity()).cwiseAbs().maxCoeff();
}

Representation make_reducible(const std::array<Mat2, 4>& fuchsian) {
  Representation r;
  r.family = Family::reducible_fuchsian;
  for (int k = 0; k < 4; ++k) r.images[k] = iota_red(fuchsian[k]);
  return r;
}

Representation make_irreducible(const std::array<Mat2, 4>& fuchsian) {
  Representation r;
  r.family = Family::irreducible_fuchsian;
  for (int k = 0; k < 4; ++k) r.images[k] = iota_irr(fuchsian[k]);
  return r;
}

Representation barbot_twist(const std::array<Mat2, 4>& fuchsian, const std::array<double, 4>& chi) {
  Representation r;
  r.family = Family::barbot_twist;
  r.chi = chi;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(fuchsian[k].determinant() - 1.0) > 1e-10) throw InvalidInput("Fuchsian generator must have det 1");
    Mat3 m = embed13(std::exp(chi[k]) * fuchsian[k]);
    m(1, 1) = std::exp(-2.0 * chi[k]);
    r.images[k] = m;
  }
  return r;
}

GapScan gap_scan(const Representation& rep, const ScanOptions& opt) {
  if (opt.max_len < 1) throw InvalidInput("gap_scan needs max_len >= 1");
  if (opt.exhaustive_len < 1) throw InvalidInput("gap_scan needs exhaustive_len >= 1");
  GapScan scan;
  scan.seed = opt.seed;
  scan.family = rep.family;
  scan.chi = rep.chi;
  scan.exhaustive_len = std::min(opt.exhaustive_len, opt.max_len);

  struct Acc {
    LMat3 p, q, cp, cq;
    LD ld;
  };
  std::array<LMat3, 8> g;
  std::array<LMat3, 8> cg;
  std::array<LD, 8> logdet;
  for (int k = 0; k < 4; ++k) {
    g[k] = rep.images[k].cast<LD>();
    g[k + 4] = g[k].inverse();
    logdet[k] = std::log(std::abs(g[k].determinant()));
    logdet[k + 4] = -logdet[k];
  }
  for (int l = 0; l < 8; ++l) cg[l] = cofactor(g[l]);
  auto step = [&](const Acc& a, int l) {
    const int li = letter_inverse(l);
    return Acc{a.p * g[l], g[li] * a.q, a.cp * cg[l], cg[li] * a.cq, a.ld + logdet[l]};
  };
  const Acc start{LMat3::Identity(), LMat3::Identity(), LMat3::Identity(), LMat3::Identity(), 0};
  std::vector<LengthAccumulator> acc(opt.max_len + 1);
  double defect = 0.0;

  auto record = [&](int len, const Acc& a, bool cyclic) {
    const Gaps gp = singular_gaps(a.p, a.cp, a.ld);
    const Gaps gq = singular_gaps(a.q, a.cq, -a.ld);
    defect = std::max(defect, static_cast<double>(std::abs(gp.sg12 - gq.sg23)));
    acc[len].add(static_cast<double>(gp.sg12), static_cast<double>(gp.sg23));
    if (cyclic) acc[len].add_lg(eigen_gap12(a.p));
  };

  // Depth-first enumeration carrying the word product and its inverse.
  std::vector<int> stack;
  std::function<void(const Acc&)> dfs = [&](const Acc& a) {
    const int len = static_cast<int>(stack.size());
    if (len > 0) record(len, a, len == 1 || stack.back() != letter_inverse(stack.front()));
    if (len == scan.exhaustive_len) return;
    for (int l = 0; l < 8; ++l) {
      if (len > 0 && l == letter_inverse(stack.back())) continue;
      stack.push_back(l);
      dfs(step(a, l));
      stack.pop_back();
    }
  };
  dfs(start);

  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> first(0, 7);
  std::uniform_int_distribution<int> next(0, 6);
  for (int len = scan.exhaustive_len + 1; len <= opt.max_len; ++len) {
    scan.partial = true;
    for (std::size_t s = 0; s < opt.sample_budget; ++s) {
      Acc a = start;
      int prev = -1;
      int head = -1;
      for (int k = 0; k < len; ++k) {
        int l = first(rng);
        if (prev >= 0) {
          l = next(rng);
          if (l >= letter_inverse(prev)) ++l;
        }
        if (k == 0) head = l;
        a = step(a, l);
        prev = l;
      }
      record(len, a, prev != letter_inverse(head));
    }
  }

  for (int len = 1; len <= opt.max_len; ++len) {
    GapScanRow row;
    row.length = len;
    row.count = acc[len].sg12.size();
    if (row.count == 0) continue;
    row.min_sg12 = *std::min_element(acc[len].sg12.begin(), acc[len].sg12.end());
    row.med_sg12 = median(acc[len].sg12);
    row.min_sg23 = acc[len].min_sg23;
    row.min_lg12 = acc[len].min_lg12;
    row.cyclic_count = acc[len].cyclic;
    scan.rows.push_back(row);
  }
  scan.inverse_identity_defect = defect;

  // Least squares min_sg12 ~ A * length - B.
  const double n = static_cast<double>(scan.rows.size());
  if (n >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : scan.rows) {
      sx += r.length;
      sy += r.min_sg12;
      sxx += static_cast<double>(r.length) * r.length;
      sxy += r.length * r.min_sg12;
    }
    scan.slope_a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    scan.offset_b = -(sy - scan.slope_a * sx) / n;
  }
  return scan;
}

Flag limit_flag_sample(const Representation& rep, const Word& w) {
  if (w.letters.empty()) throw InvalidInput("limit_flag_sample needs a nonempty word");
  try {
    return attracting_flag(rep.eval(w), rep.eval(w.inverse()));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("word is not proximal: ") + e.what());
  }
}

ConicReport conic_position_check(const Representation& rep, int n_samples, std::uint64_t seed) {
  if (rep.family != Family::reducible_fuchsian)
    throw PreconditionError("conic_position_check applies to the reducible Fuchsian family");
  if (n_samples < 1) throw InvalidInput("n_samples must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> length(1, 6);
  std::uniform_int_distribution<int> letter(0, 7);
  ConicReport out;
  bool first = true;
  while (out.samples < n_samples) {
    Word w;
    const int len = length(rng);
    while (static_cast<int>(w.letters.size()) < len) {
      const int l = letter(rng);
      if (!w.letters.empty() && l == letter_inverse(w.letters.back())) continue;
      w.letters.push_back(l);
    }
    if (!w.is_cyclically_reduced()) {
      ++out.skipped;
      continue;
    }
    Flag f = Flag(Vec3(1, 0, 0), Vec3(0, 1, 0));
    try {
      f = limit_flag_sample(rep, w);
    } catch (const NumericalError&) {
      ++out.skipped;
      continue;
    }
    const double lm = conic_eval(f.line());
    const double pm = dual_conic_eval(f.plane());
    ++out.samples;
    if (lm > 0) ++out.lines_outside;
    if (pm > 0) ++out.planes_meeting_interior;
    if (first) {
      out.min_line_margin = lm;
      out.min_plane_margin = pm;
      first = false;
    } else {
      out.min_line_margin = std::min(out.min_line_margin, lm);
      out.min_plane_margin = std::min(out.min_plane_margin, pm);
    }
  }
  return out;
}

FlowReport flow_nesting_certify(double axis, const std::vector<double>& times, const SamplingSpec& spec) {
  FlowReport rep;
  rep.axis = axis;
  rep.all_nested = !times.empty();
  const Multicone U = Multicone::model(axis);
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidInput("flow times must be nonnegative");
    FlowStep step;
    step.t = t;
    const Multicone Ut = translate(U, t);
    step.nested = is_nested(U, Ut, spec);
    if (step.nested) step.estimate = nest_estimate(U, Ut, spec).lower;
    rep.all_nested = rep.all_nested && step.nested;
    rep.steps.push_back(step);
  }
  return rep;
}

}  // namespace anosov
