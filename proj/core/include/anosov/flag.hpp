#pragma once

#include <complex>

#include <Eigen/Core>

#include "anosov/errors.hpp"

namespace anosov {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

namespace tol {
inline constexpr double algebraic = 1e-12;
inline constexpr double spectral = 1e-10;
}  // namespace tol

// Homogeneous triple stored with unit norm and the first significant
// coordinate positive.
class ProjectivePoint {
 public:
  explicit ProjectivePoint(const Vec3& coords);
  ProjectivePoint(double x1, double x2, double x3) : ProjectivePoint(Vec3(x1, x2, x3)) {}

  const Vec3& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }

 private:
  Vec3 c_;
};

// Same storage convention as ProjectivePoint; pairs with points by the dot product.
class ProjectiveCovector {
 public:
  explicit ProjectiveCovector(const Vec3& coords);
  ProjectiveCovector(double y1, double y2, double y3) : ProjectiveCovector(Vec3(y1, y2, y3)) {}

  const Vec3& coords() const { return c_; }
  double operator[](int i) const { return c_[i]; }

 private:
  Vec3 c_;
};

Vec3 normalize_projective(const Vec3& v);

// Projective equality of normalized triples.
bool same_point(const Vec3& a, const Vec3& b, double eps = tol::spectral);
bool operator==(const ProjectivePoint& a, const ProjectivePoint& b);
bool operator==(const ProjectiveCovector& a, const ProjectiveCovector& b);

// A line contained in a plane. Construction rejects pairs whose normalized
// pairing exceeds `incidence_tol` and then removes the residual pairing, so a
// stored flag is incident to rounding level.
class Flag {
 public:
  Flag(const ProjectivePoint& line, const ProjectiveCovector& plane, double incidence_tol = 1e-8);
  Flag(const Vec3& line, const Vec3& plane, double incidence_tol = 1e-8);

  const ProjectivePoint& line() const { return line_; }
  const ProjectiveCovector& plane() const { return plane_; }
  double incidence_defect() const { return std::abs(line_.coords().dot(plane_.coords())); }

 private:
  ProjectivePoint line_;
  ProjectiveCovector plane_;
};

bool same_flag(const Flag& a, const Flag& b, double eps = tol::spectral);
double flag_distance(const Flag& a, const Flag& b);

// Element of SL(3,R). The constructor accepts determinants within `det_tol`
// of one and rescales to determinant exactly one.
class GroupElem {
 public:
  explicit GroupElem(const Mat3& m, double det_tol = tol::spectral);
  static GroupElem identity() { return GroupElem(Mat3::Identity()); }

  const Mat3& mat() const { return m_; }
  GroupElem inverse() const;
  GroupElem operator*(const GroupElem& other) const;

 private:
  struct Unchecked {};
  GroupElem(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;
};

// Unit-determinant positive definite symmetric matrix: a point of the
// symmetric space of SL(3,R).
class SpdPoint {
 public:
  explicit SpdPoint(const Mat3& m, double det_tol = 1e-8);
  static SpdPoint identity() { return SpdPoint(Mat3::Identity()); }

  const Mat3& mat() const { return m_; }

 private:
  Mat3 m_;
};

// Trace-free symmetric matrix, read in the orthonormal frame of a base point.
class TangentDir {
 public:
  explicit TangentDir(const Mat3& m);
  const Mat3& mat() const { return m_; }

 private:
  Mat3 m_;
};

struct GapVector {
  double sg12 = 0.0;
  double sg23 = 0.0;
  double lg12 = 0.0;
  double lg23 = 0.0;
  bool has_eigen = false;
};

bool is_transverse(const Flag& f1, const Flag& f2, double eps = tol::spectral);
bool thickening_contains(const Flag& f, const Flag& g, double eps = tol::spectral);

double busemann(const Flag& f, const SpdPoint& O, const SpdPoint& X);

// Lines move by g, covectors by the inverse transpose, scalar products by
// X -> g^{-T} X g^{-1}. These three together keep busemann invariant.
Flag act_on_flag(const GroupElem& g, const Flag& f);
Flag act_on_flag(const Mat3& g, const Flag& f);
SpdPoint act_on_point(const GroupElem& g, const SpdPoint& X);

SpdPoint geodesic(const SpdPoint& X, const TangentDir& V, double t);
double distance(const SpdPoint& X, const SpdPoint& Y);

GapVector gap_vector(const GroupElem& g, bool with_eigen = true);
GapVector gap_vector(const Mat3& g, bool with_eigen = true);

// Flag fixed by g whose line is the top eigendirection and whose plane is
// spanned by the top two. Throws NumericalError without strict dominance.
Flag attracting_flag(const Mat3& g, double gap_tol = 1e-9);
// Same flag, with the plane read off a separately computed inverse.
Flag attracting_flag(const Mat3& g, const Mat3& g_inv, double gap_tol = 1e-9);

// z1 = (x1 + i x3)/sqrt2, z2 = x2, z3 = (x1 - i x3)/sqrt2.
CVec3 frame_change_real_to_complex(const Vec3& x);
CVec3 frame_change_real_to_complex(const CVec3& x);
CVec3 frame_change_complex_to_real(const CVec3& z);
// Unitary C with z = C x.
CMat3 frame_change_matrix();
// Real matrix of a complex endomorphism that preserves the real form; throws
// NumericalError if the imaginary residue exceeds `eps`.
Mat3 real_endomorphism(const CMat3& m, double eps = 1e-9);

// Symmetric functions of symmetric matrices.
Mat3 sym_sqrt(const Mat3& s);
Mat3 sym_inv_sqrt(const Mat3& s);
Mat3 sym_exp(const Mat3& s);
Mat3 sym_log(const Mat3& s);

}  // namespace anosov
