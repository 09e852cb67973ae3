#include "anosov/lemma64.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "anosov/multicone.hpp"

namespace anosov {

namespace {

template <class T>
using CM = Eigen::Matrix<std::complex<T>, 3, 3>;

constexpr double kPi = std::numbers::pi;

template <class T>
CM<T> hprime_closed(std::complex<T> beta, T d) {
  using C = std::complex<T>;
  const C i(0, 1);
  const T ch = std::cosh(d);
  const T sh = std::sinh(d);
  const C bb = std::conj(beta);
  CM<T> m;
  m << C(0, 2 * ch * sh), beta * ch + i * bb * sh, C(ch * ch + sh * sh, 0),
       bb * ch + i * beta * sh, C(0, 0), beta * ch - i * bb * sh,
       C(ch * ch + sh * sh, 0), bb * ch - i * beta * sh, C(0, -2 * ch * sh);
  return m;
}

template <class T>
CM<T> pi_matrix(std::complex<T> z) {
  using C = std::complex<T>;
  const T r2 = std::sqrt(T(2));
  const C zb = std::conj(z);
  CM<T> m;
  m << C(-1), r2 * z, -z * z,
       -r2 * zb, C(2), -r2 * z,
       -zb * zb, r2 * zb, C(-1);
  return m / T(4);
}

template <class T>
CM<T> field(const CM<T>& A, const CM<T>& pi) {
  const CM<T> c = A * pi - pi * A;
  const CM<T> ps = pi.adjoint();
  const CM<T> cs = c.adjoint();
  return c * ps + pi * cs - cs * pi - ps * c;
}

// Entries (0,2) and (2,0) of field(A, pi) without forming the whole product.
template <class T>
std::pair<std::complex<T>, std::complex<T>> field_corners(const CM<T>& A, const CM<T>& pi) {
  const CM<T> c = A * pi - pi * A;
  auto entry = [&](int r, int s) {
    std::complex<T> acc(0);
    for (int k = 0; k < 3; ++k) {
      acc += c(r, k) * std::conj(pi(s, k)) + pi(r, k) * std::conj(c(s, k)) -
             std::conj(c(k, r)) * pi(k, s) - std::conj(pi(k, r)) * c(k, s);
    }
    return acc;
  };
  return {entry(0, 2), entry(2, 0)};
}

void check_beta(cplx beta) {
  if (!(std::abs(beta) < 1.0)) throw InvalidInput("|beta| must be < 1");
}

void check_z(cplx z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw InvalidInput("z must have modulus 1");
}

CMat3 h_of(cplx beta) {
  CMat3 h;
  const cplx bb = std::conj(beta);
  h << 0.0, beta, 1.0,
       bb, 0.0, beta,
       1.0, bb, 0.0;
  return h;
}

CMat3 h0perp() {
  const cplx i(0, 1);
  CMat3 m = CMat3::Zero();
  m(0, 2) = -i;
  m(2, 0) = i;
  return m;
}

}  // namespace

double real_structure_defect(const CMat3& m) {
  CMat3 r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) r(a, b) = std::conj(m(2 - a, 2 - b));
  return (r - m).cwiseAbs().maxCoeff();
}

double hermitian_defect(const CMat3& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

ModelMatrices model_matrices(cplx beta, double d) {
  check_beta(beta);
  const cplx i(0, 1);
  ModelMatrices out;
  out.H = h_of(beta);
  out.H0 = CMat3::Zero();
  out.H0(0, 2) = 1.0;
  out.H0(2, 0) = 1.0;
  out.H0perp = h0perp();
  out.Ed = CMat3::Identity();
  out.Ed(0, 0) = std::cosh(d);
  out.Ed(2, 2) = std::cosh(d);
  out.Ed(0, 2) = i * std::sinh(d);
  out.Ed(2, 0) = -i * std::sinh(d);
  out.Hprime = hprime_closed<double>(beta, d);
  return out;
}

CMat3 hprime_by_conjugation(cplx beta, double d) {
  check_beta(beta);
  const CMat3 e = (CMat3(-d * h0perp())).exp();
  return e * h_of(beta) * e.inverse();
}

NilpotentFlagMat projector_pi(cplx z) {
  check_z(z);
  return {pi_matrix<double>(z)};
}

HermitianMat pointing_vector(const NilpotentFlagMat& pi) {
  const CMat3& p = pi.mat;
  return {p * p.adjoint() - p.adjoint() * p};
}

CMat3 commutator_field(const CMat3& A, const CMat3& pi) { return field<double>(A, pi); }

std::pair<HermitianMat, HermitianMat> commutator_fields(cplx beta, double d, cplx z) {
  check_beta(beta);
  check_z(z);
  const CMat3 p = pi_matrix<double>(z);
  return {HermitianMat{field<double>(hprime_closed<double>(beta, d), p)}, HermitianMat{field<double>(h0perp(), p)}};
}

cplx alpha(const CMat3& m) { return m(0, 2); }

std::pair<cplx, cplx> alpha_closed_forms(cplx beta, double d, cplx z) {
  check_beta(beta);
  check_z(z);
  const cplx i(0, 1);
  const cplx zb = std::conj(z);
  const cplx zb4 = zb * zb * zb * zb;
  const double ch = std::cosh(d);
  const double sh = std::sinh(d);
  const cplx a1 = (3.0 - zb4) * (ch * ch + sh * sh) / 4.0 - std::sqrt(2.0) * i * beta * zb * sh;
  const cplx a2 = (3.0 + zb4) * i / 4.0;
  return {a1, a2};
}

namespace {

using LD = long double;
using LC = std::complex<LD>;

Margin margin_from(LC a1, LC a2, LD beta_abs, LD d) {
  const LD ch = std::cosh(d);
  const LD sh = std::sinh(d);
  const LD p = std::imag(a1 * std::conj(a2));
  const LD c = ch * ch + sh * sh;
  Margin m;
  m.pairing = static_cast<double>(p);
  m.margin = static_cast<double>(std::abs(p) - c * (1 - beta_abs) / 2);
  m.eta = static_cast<double>(std::abs(p) / (ch * ch));
  return m;
}

LC to_ld(cplx z) { return LC(z.real(), z.imag()); }

}  // namespace

Margin certificate_margin(cplx beta, double d, cplx z) {
  check_beta(beta);
  check_z(z);
  const CM<LD> p = pi_matrix<LD>(to_ld(z));
  const LD dl = d;
  const auto m1 = field_corners<LD>(hprime_closed<LD>(to_ld(beta), dl), p);
  const auto m2 = field_corners<LD>(h0perp().cast<LC>(), p);
  return margin_from(m1.first, m2.first, std::abs(to_ld(beta)), dl);
}

void CertGrid::validate() const {
  if (beta_moduli.empty()) throw InvalidInput("grid needs at least one |beta|");
  for (double b : beta_moduli)
    if (!(b >= 0.0 && b < 1.0)) throw InvalidInput("grid |beta| values must lie in [0, 1)");
  if (beta_phases < 1 || z_phases < 1) throw InvalidInput("grid phase counts must be positive");
  if (!(d_max >= 0.0) || !(d_step > 0.0)) throw InvalidInput("grid needs d_max >= 0 and d_step > 0");
}

std::size_t CertGrid::cells() const {
  const std::size_t nd = static_cast<std::size_t>(std::llround(2.0 * d_max / d_step)) + 1;
  return beta_moduli.size() * beta_phases * z_phases * nd;
}

CertReport sweep(const CertGrid& grid) {
  grid.validate();
  const int nd = static_cast<int>(std::llround(2.0 * grid.d_max / grid.d_step)) + 1;

  struct ZData {
    cplx z;
    CM<LD> pi;
    LC a2;
  };
  std::vector<ZData> zs;
  zs.reserve(grid.z_phases);
  CertReport rep;
  rep.grid = grid;
  const CM<LD> hp = h0perp().cast<LC>();
  for (int k = 0; k < grid.z_phases; ++k) {
    const double ph = 2.0 * kPi * k / grid.z_phases;
    const cplx z = std::polar(1.0, ph);
    const CM<LD> p = pi_matrix<LD>(to_ld(z));
    const auto c2 = field_corners<LD>(hp, p);
    const cplx closed2 = alpha_closed_forms(0.0, 0.0, z).second;
    rep.oracle_dev = std::max(rep.oracle_dev, static_cast<double>(std::abs(c2.second - to_ld(closed2))));
    zs.push_back({z, p, c2.first});
  }

  bool first = true;
  for (int id = 0; id < nd; ++id) {
    const double d = -grid.d_max + id * grid.d_step;
    for (double bm : grid.beta_moduli) {
      for (int jp = 0; jp < grid.beta_phases; ++jp) {
        const cplx beta = std::polar(bm, 2.0 * kPi * jp / grid.beta_phases);
        const CM<LD> hpr = hprime_closed<LD>(to_ld(beta), static_cast<LD>(d));
        for (const ZData& zd : zs) {
          const auto c1 = field_corners<LD>(hpr, zd.pi);
          const cplx closed1 = alpha_closed_forms(beta, d, zd.z).first;
          rep.oracle_dev = std::max(rep.oracle_dev, static_cast<double>(std::abs(c1.second - to_ld(closed1))));
          const Margin m = margin_from(c1.first, zd.a2, static_cast<LD>(bm), static_cast<LD>(d));
          const double ch = std::cosh(d);
          const double sh = std::sinh(d);
          const double ratio = std::abs(m.pairing) / (ch * ch + sh * sh);
          const double excess = m.eta - (1.0 - bm) / 2.0;
          if (m.pairing > 0) ++rep.positive_pairings;
          else if (m.pairing < 0) ++rep.negative_pairings;
          if (first || m.margin < rep.min_margin) {
            rep.min_margin = m.margin;
            rep.argmin = {beta.real(), beta.imag(), d, std::arg(zd.z)};
          }
          if (first) {
            rep.max_margin = m.margin;
            rep.min_eta = m.eta;
            rep.min_eta_excess = excess;
            rep.max_eta_ratio = ratio;
            first = false;
          } else {
            rep.max_margin = std::max(rep.max_margin, m.margin);
            rep.min_eta = std::min(rep.min_eta, m.eta);
            rep.min_eta_excess = std::min(rep.min_eta_excess, excess);
            rep.max_eta_ratio = std::max(rep.max_eta_ratio, ratio);
          }
          ++rep.cells;
        }
      }
    }
  }
  return rep;
}

PushforwardReport pushforward_check(cplx beta, double t_step, int n_samples) {
  check_beta(beta);
  if (!(t_step >= 0.0) || !std::isfinite(t_step)) throw InvalidInput("t_step must be >= 0");
  if (n_samples < 1) throw InvalidInput("n_samples must be positive");
  const Mat3 hr = real_endomorphism(h_of(beta));
  const Mat3 flow = (t_step * hr).exp();
  const Multicone U = Multicone::model(kPi);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);

  PushforwardReport rep;
  rep.beta = beta;
  rep.t_step = t_step;
  rep.samples = n_samples;
  bool first = true;
  for (int i = 0; i < n_samples; ++i) {
    const double frac = std::fmod(i * golden, 1.0);
    const double theta = 2.0 * kPi * frac;
    const double ll = -6.0 + 12.0 * (i + 0.5) / n_samples;
    const Flag f = boundary_chart(U, theta, std::exp(ll));
    const Classification c = classify(U, act_on_flag(flow, f));
    switch (c.region) {
      case Region::inside: ++rep.inside; break;
      case Region::boundary: ++rep.boundary; break;
      case Region::outside: ++rep.outside; break;
    }
    if (first || c.signed_value < rep.min_displacement) {
      rep.min_displacement = c.signed_value;
      rep.worst_theta = theta;
      rep.worst_log_lam = ll;
      first = false;
    }
  }
  return rep;
}

}  // namespace anosov
