#include "anosov/flag.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace anosov {

namespace {

constexpr double kSignPin = 1e-12;

bool all_finite(const Vec3& v) { return v.allFinite(); }

template <class F>
Mat3 sym_apply(const Mat3& s, F f) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (s + s.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigendecomposition failed");
  Vec3 d = es.eigenvalues();
  for (int i = 0; i < 3; ++i) d[i] = f(d[i]);
  Mat3 r = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (r + r.transpose());
}

}  // namespace

Vec3 normalize_projective(const Vec3& v) {
  if (!all_finite(v)) throw InvalidInput("homogeneous coordinates must be finite");
  const double n = v.norm();
  if (!(n > 1e-300)) throw InvalidInput("homogeneous coordinates must not all vanish");
  Vec3 u = v / n;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(u[i]) > kSignPin) {
      if (u[i] < 0) u = -u;
      break;
    }
  }
  return u;
}

ProjectivePoint::ProjectivePoint(const Vec3& coords) : c_(normalize_projective(coords)) {}
ProjectiveCovector::ProjectiveCovector(const Vec3& coords) : c_(normalize_projective(coords)) {}

bool same_point(const Vec3& a, const Vec3& b, double eps) {
  const Vec3 ua = a.normalized();
  const Vec3 ub = b.normalized();
  return std::min((ua - ub).lpNorm<Eigen::Infinity>(), (ua + ub).lpNorm<Eigen::Infinity>()) <= eps;
}

bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) {
  return same_point(a.coords(), b.coords());
}
bool operator==(const ProjectiveCovector& a, const ProjectiveCovector& b) {
  return same_point(a.coords(), b.coords());
}

Flag::Flag(const ProjectivePoint& line, const ProjectiveCovector& plane, double incidence_tol)
    : Flag(line.coords(), plane.coords(), incidence_tol) {}

Flag::Flag(const Vec3& line, const Vec3& plane, double incidence_tol)
    : line_(line), plane_(plane) {
  const Vec3& x = line_.coords();
  const double d = x.dot(plane_.coords());
  if (std::abs(d) > incidence_tol)
    throw InvalidInput("flag line is not contained in its plane (pairing " + std::to_string(d) + ")");
  plane_ = ProjectiveCovector(plane_.coords() - d * x);
}

bool same_flag(const Flag& a, const Flag& b, double eps) {
  return same_point(a.line().coords(), b.line().coords(), eps) &&
         same_point(a.plane().coords(), b.plane().coords(), eps);
}

double flag_distance(const Flag& a, const Flag& b) {
  auto pd = [](const Vec3& u, const Vec3& v) {
    return std::min((u - v).lpNorm<Eigen::Infinity>(), (u + v).lpNorm<Eigen::Infinity>());
  };
  return std::max(pd(a.line().coords(), b.line().coords()), pd(a.plane().coords(), b.plane().coords()));
}

GroupElem::GroupElem(const Mat3& m, double det_tol) : m_(m) {
  if (!m.allFinite()) throw InvalidInput("group element must be finite");
  const double det = m.determinant();
  if (std::abs(det - 1.0) > det_tol)
    throw InvalidInput("group element must have determinant 1 (got " + std::to_string(det) + ")");
  m_ /= std::cbrt(det);
}

GroupElem GroupElem::inverse() const { return GroupElem(m_.inverse(), Unchecked{}); }

GroupElem GroupElem::operator*(const GroupElem& other) const {
  Mat3 p = m_ * other.m_;
  return GroupElem(p / std::cbrt(p.determinant()), Unchecked{});
}

SpdPoint::SpdPoint(const Mat3& m, double det_tol) {
  if (!m.allFinite()) throw InvalidInput("scalar product must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidInput("scalar product must be symmetric");
  m_ = 0.5 * (m + m.transpose());
  Eigen::LLT<Mat3> llt(m_);
  if (llt.info() != Eigen::Success) throw InvalidInput("scalar product must be positive definite");
  const double det = m_.determinant();
  // Rounding in det scales with the Hadamard bound of the diagonal.
  const double hadamard = std::max(1.0, m_(0, 0) * m_(1, 1) * m_(2, 2));
  if (!(det > 0) || std::abs(det - 1.0) > det_tol * hadamard)
    throw InvalidInput("scalar product must have determinant 1 (got " + std::to_string(det) + ")");
  m_ /= std::cbrt(det);
}

TangentDir::TangentDir(const Mat3& m) {
  if (!m.allFinite()) throw InvalidInput("tangent direction must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInput("tangent direction must be symmetric");
  if (std::abs(m.trace()) > 1e-12 * scale) throw InvalidInput("tangent direction must be trace-free");
  m_ = 0.5 * (m + m.transpose());
  m_ -= (m_.trace() / 3.0) * Mat3::Identity();
}

bool is_transverse(const Flag& f1, const Flag& f2, double eps) {
  const double p12 = f1.line().coords().dot(f2.plane().coords());
  const double p21 = f2.line().coords().dot(f1.plane().coords());
  return std::abs(p12) > eps && std::abs(p21) > eps;
}

bool thickening_contains(const Flag& f, const Flag& g, double eps) {
  return same_point(g.line().coords(), f.line().coords(), eps) ||
         same_point(g.plane().coords(), f.plane().coords(), eps);
}

double busemann(const Flag& f, const SpdPoint& O, const SpdPoint& X) {
  const Vec3& x = f.line().coords();
  const Vec3& y = f.plane().coords();
  const double xX = x.dot(X.mat() * x);
  const double xO = x.dot(O.mat() * x);
  const double yX = y.dot(X.mat().llt().solve(y));
  const double yO = y.dot(O.mat().llt().solve(y));
  if (!(xX > 0 && xO > 0 && yX > 0 && yO > 0))
    throw NumericalError("busemann: quadratic form is not positive");
  return std::log(xX / xO) + std::log(yX / yO);
}

Flag act_on_flag(const Mat3& g, const Flag& f) {
  const Vec3 x = g * f.line().coords();
  const Vec3 y = g.transpose().partialPivLu().solve(f.plane().coords());
  return Flag(x, y, 1e-6);
}

Flag act_on_flag(const GroupElem& g, const Flag& f) { return act_on_flag(g.mat(), f); }

namespace {

// Computed points drift off determinant one by rounding only.
SpdPoint renormalized(const Mat3& y) {
  const Mat3 s = 0.5 * (y + y.transpose());
  return SpdPoint(s / std::cbrt(s.determinant()));
}

}  // namespace

SpdPoint act_on_point(const GroupElem& g, const SpdPoint& X) {
  const Mat3 gi = g.mat().inverse();
  return renormalized(gi.transpose() * X.mat() * gi);
}

SpdPoint geodesic(const SpdPoint& X, const TangentDir& V, double t) {
  const Mat3 h = sym_sqrt(X.mat());
  return renormalized(h * sym_exp(t * V.mat()) * h);
}

double distance(const SpdPoint& X, const SpdPoint& Y) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat3> es(Y.mat(), X.mat());
  if (es.info() != Eigen::Success) throw NumericalError("distance: generalized eigensolver failed");
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double l = std::log(es.eigenvalues()[i]);
    s += l * l;
  }
  return std::sqrt(s);
}

namespace {

Mat3 cofactor(const Mat3& g) {
  Mat3 c;
  c.col(0) = g.col(1).cross(g.col(2));
  c.col(1) = g.col(2).cross(g.col(0));
  c.col(2) = g.col(0).cross(g.col(1));
  return c;
}

double top_singular(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m);
  return svd.singularValues()[0];
}

}  // namespace

GapVector gap_vector(const Mat3& g, bool with_eigen) {
  if (!g.allFinite()) throw NumericalError("gap_vector: non-finite matrix");
  // log s1, log s1 s2 and log s1 s2 s3 from the top singular values of g,
  // its second exterior power and the determinant.
  const double l1 = std::log(top_singular(g));
  const double l2 = std::log(top_singular(cofactor(g)));
  const double l3 = std::log(std::abs(g.determinant()));
  GapVector out;
  out.sg12 = std::max(0.0, 2.0 * l1 - l2);
  out.sg23 = std::max(0.0, 2.0 * l2 - l1 - l3);
  if (with_eigen) {
    Eigen::EigenSolver<Mat3> es(g, false);
    if (es.info() != Eigen::Success) throw NumericalError("gap_vector: eigenvalue computation failed");
    std::array<double, 3> m{};
    for (int i = 0; i < 3; ++i) m[i] = std::abs(es.eigenvalues()[i]);
    std::sort(m.begin(), m.end(), std::greater<>());
    if (!(m[2] > 0)) throw NumericalError("gap_vector: singular matrix");
    out.lg12 = std::max(0.0, std::log(m[0]) - std::log(m[1]));
    out.lg23 = std::max(0.0, std::log(m[1]) - std::log(m[2]));
    out.has_eigen = true;
  }
  return out;
}

GapVector gap_vector(const GroupElem& g, bool with_eigen) { return gap_vector(g.mat(), with_eigen); }

namespace {

// Real eigenvector of m for the eigenvalue of largest modulus.
// Eigenvector of m for the eigenvalue of largest (or smallest) modulus, which
// must be real and strictly separated from the others.
Vec3 extreme_eigenvector(const Mat3& m, bool largest, double gap_tol) {
  Eigen::EigenSolver<Mat3> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("eigen decomposition failed");
  std::array<int, 3> idx{0, 1, 2};
  auto mod = [&](int i) { return std::abs(es.eigenvalues()[i]); };
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return mod(a) > mod(b); });
  if (largest && !(mod(idx[0]) > mod(idx[1]) * (1.0 + gap_tol)))
    throw NumericalError("no strictly dominant eigenvalue");
  if (!largest && !(mod(idx[1]) > mod(idx[2]) * (1.0 + gap_tol)))
    throw NumericalError("no strictly smallest eigenvalue");
  Vec3 v = es.eigenvectors().col(largest ? idx[0] : idx[2]).real();
  // A few power (or inverse) iteration steps tidy the eigenvector.
  const Eigen::PartialPivLU<Mat3> lu(m);
  for (int k = 0; k < 3; ++k) {
    const Vec3 w = largest ? Vec3(m * v) : Vec3(lu.solve(v));
    if (!(w.allFinite() && w.norm() > 0)) break;
    v = w / w.norm();
  }
  return v;
}

}  // namespace

Flag attracting_flag(const Mat3& g, double gap_tol) {
  const Vec3 x = extreme_eigenvector(g, true, gap_tol);
  // left eigenvector of the smallest eigenvalue: it kills the two top eigenlines
  const Vec3 y = extreme_eigenvector(g.transpose(), false, gap_tol);
  return Flag(x, y, 1e-6);
}

Flag attracting_flag(const Mat3& g, const Mat3& g_inv, double gap_tol) {
  const Vec3 x = extreme_eigenvector(g, true, gap_tol);
  const Vec3 y = extreme_eigenvector(g_inv.transpose(), true, gap_tol);
  return Flag(x, y, 1e-6);
}

CMat3 frame_change_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  const std::complex<double> i(0.0, 1.0);
  CMat3 c;
  c << r, 0.0, i * r,
       0.0, 1.0, 0.0,
       r, 0.0, -i * r;
  return c;
}

CVec3 frame_change_real_to_complex(const CVec3& x) { return frame_change_matrix() * x; }

CVec3 frame_change_real_to_complex(const Vec3& x) {
  return frame_change_real_to_complex(CVec3(x.cast<std::complex<double>>()));
}

CVec3 frame_change_complex_to_real(const CVec3& z) { return frame_change_matrix().adjoint() * z; }

Mat3 real_endomorphism(const CMat3& m, double eps) {
  const CMat3 c = frame_change_matrix();
  const CMat3 r = c.adjoint() * m * c;
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if (r.imag().cwiseAbs().maxCoeff() > eps * scale)
    throw NumericalError("matrix does not preserve the real form");
  return r.real();
}

Mat3 sym_sqrt(const Mat3& s) {
  return sym_apply(s, [](double x) {
    if (!(x > 0)) throw NumericalError("sym_sqrt: matrix is not positive definite");
    return std::sqrt(x);
  });
}

Mat3 sym_inv_sqrt(const Mat3& s) {
  return sym_apply(s, [](double x) {
    if (!(x > 0)) throw NumericalError("sym_inv_sqrt: matrix is not positive definite");
    return 1.0 / std::sqrt(x);
  });
}

Mat3 sym_exp(const Mat3& s) {
  return sym_apply(s, [](double x) { return std::exp(x); });
}

Mat3 sym_log(const Mat3& s) {
  return sym_apply(s, [](double x) {
    if (!(x > 0)) throw NumericalError("sym_log: matrix is not positive definite");
    return std::log(x);
  });
}

}  // namespace anosov
