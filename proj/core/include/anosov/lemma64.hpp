#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "anosov/flag.hpp"

namespace anosov {

using cplx = std::complex<double>;

// Hermitian 3x3 matrices that are also real for the form
// (z1, z2, z3) -> (conj z3, conj z2, conj z1).
struct HermitianMat {
  CMat3 mat;
};

// Rank-one nilpotent whose image is a flag line and whose kernel is its plane.
struct NilpotentFlagMat {
  CMat3 mat;
};

struct ModelMatrices {
  CMat3 H;
  CMat3 H0;
  CMat3 H0perp;
  CMat3 Ed;
  CMat3 Hprime;
};

// |J conj(M) J - M|_max with J the antidiagonal permutation.
double real_structure_defect(const CMat3& m);
double hermitian_defect(const CMat3& m);

// H(beta), H0, H0perp, the hyperbolic rotation Ed and H' in closed form.
// Requires |beta| < 1.
ModelMatrices model_matrices(cplx beta, double d);
// Ed H Ed^{-1} with Ed = expm(-d H0perp), computed by the matrix exponential.
CMat3 hprime_by_conjugation(cplx beta, double d);

NilpotentFlagMat projector_pi(cplx z);
HermitianMat pointing_vector(const NilpotentFlagMat& pi);

// M(A) = [A,pi]pi* + pi[A,pi]* - [A,pi]*pi - pi*[A,pi] for A = H' and A = H0perp.
std::pair<HermitianMat, HermitianMat> commutator_fields(cplx beta, double d, cplx z);
CMat3 commutator_field(const CMat3& A, const CMat3& pi);

// The (1,3) coefficient.
cplx alpha(const CMat3& m);

// Closed forms (3 - conj(z)^4)(cosh^2 d + sinh^2 d)/4 - sqrt2 i beta conj(z) sinh d
// and (3 + conj(z)^4) i/4; they equal the (3,1) coefficients of M1 and M2.
std::pair<cplx, cplx> alpha_closed_forms(cplx beta, double d, cplx z);

struct Margin {
  double margin = 0.0;   // |P| - (cosh^2 d + sinh^2 d)(1 - |beta|)/2
  double eta = 0.0;      // |P| / cosh^2 d
  double pairing = 0.0;  // P = Im(alpha(M1) conj(alpha(M2)))
};

Margin certificate_margin(cplx beta, double d, cplx z);

struct CertGrid {
  std::vector<double> beta_moduli{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  int beta_phases = 16;
  int z_phases = 64;
  double d_max = 5.0;
  double d_step = 0.05;

  void validate() const;
  std::size_t cells() const;
};

struct CertArgmin {
  double beta_re = 0.0;
  double beta_im = 0.0;
  double d = 0.0;
  double z_phase = 0.0;
};

struct CertReport {
  double min_margin = 0.0;
  double max_margin = 0.0;
  double min_eta = 0.0;
  // min over cells of eta - (1 - |beta|)/2
  double min_eta_excess = 0.0;
  // max over cells of |P| / (cosh^2 d + sinh^2 d)
  double max_eta_ratio = 0.0;
  CertArgmin argmin;
  double oracle_dev = 0.0;
  std::size_t cells = 0;
  std::size_t positive_pairings = 0;
  std::size_t negative_pairings = 0;
  CertGrid grid;
};

CertReport sweep(const CertGrid& grid);

struct PushforwardReport {
  cplx beta;
  double t_step = 0.0;
  int samples = 0;
  int inside = 0;
  int boundary = 0;
  int outside = 0;
  double min_displacement = 0.0;
  double worst_theta = 0.0;
  double worst_log_lam = 0.0;
};

// Flows boundary flags of the model multicone by exp(t H(beta)) written in real
// coordinates. At beta = 0 this flow translates the model plane along the
// diagonal geodesic towards the side of axis angle pi, so the cone tested is
// Multicone::model(pi).
PushforwardReport pushforward_check(cplx beta, double t_step, int n_samples);

}  // namespace anosov
