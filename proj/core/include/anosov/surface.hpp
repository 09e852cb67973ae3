#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "anosov/multicone.hpp"

namespace anosov {

// Letters 0..3 are a1, b1, a2, b2 and 4..7 their inverses.
struct Word {
  std::vector<int> letters;

  static Word parse(const std::string& s);  // e.g. "a1 B1 a2" (capital = inverse)
  std::string str() const;
  bool is_reduced() const;
  bool is_cyclically_reduced() const;
  Word inverse() const;
  std::size_t length() const { return letters.size(); }
};

inline int letter_inverse(int l) { return (l + 4) % 8; }

// The genus-two relator a1 b1 A1 B1 a2 b2 A2 B2.
Word relator();

// Four matrices of trace 2(1 + sqrt2) forming a standard generating set of the
// regular-octagon surface group, relator residual near rounding level.
std::array<Mat2, 4> octagon_fuchsian();

// Block embedding on coordinates 1 and 3 (middle coordinate fixed).
Mat3 iota_red(const Mat2& A);
// Symmetric square in the basis (e1^2, sqrt2 e1 e2, e2^2).
Mat3 iota_irr(const Mat2& A);

enum class Family { reducible_fuchsian, irreducible_fuchsian, barbot_twist };
const char* family_name(Family f);

struct Representation {
  std::array<Mat3, 4> images;
  Family family = Family::reducible_fuchsian;
  std::array<double, 4> chi{0, 0, 0, 0};

  Mat3 eval(const Word& w) const;
  double relation_residual() const;
};

Representation make_reducible(const std::array<Mat2, 4>& fuchsian);
Representation make_irreducible(const std::array<Mat2, 4>& fuchsian);
// gamma -> e^{chi(gamma)} j(gamma) on coordinates 1 and 3, e^{-2 chi(gamma)} on coordinate 2.
Representation barbot_twist(const std::array<Mat2, 4>& fuchsian, const std::array<double, 4>& chi);

struct GapScanRow {
  int length = 0;
  std::size_t count = 0;
  double min_sg12 = 0.0;
  double med_sg12 = 0.0;
  double min_sg23 = 0.0;
  // over cyclically reduced words of this length; zero if there are none
  double min_lg12 = 0.0;
  std::size_t cyclic_count = 0;
};

struct GapScan {
  std::vector<GapScanRow> rows;
  double slope_a = 0.0;
  double offset_b = 0.0;
  // max over scanned words of |sg12(w) - sg23(w^{-1})|
  double inverse_identity_defect = 0.0;
  int exhaustive_len = 5;
  bool partial = false;
  std::uint64_t seed = 0;
  Family family = Family::reducible_fuchsian;
  std::array<double, 4> chi{0, 0, 0, 0};
};

struct ScanOptions {
  int max_len = 5;
  int exhaustive_len = 5;
  // random words per length beyond the exhaustive range
  std::size_t sample_budget = 2000;
  std::uint64_t seed = 0;
};

GapScan gap_scan(const Representation& rep, const ScanOptions& opt);

// Attracting flag of the image of w.
Flag limit_flag_sample(const Representation& rep, const Word& w);

struct ConicReport {
  int samples = 0;
  int lines_outside = 0;
  int planes_meeting_interior = 0;
  double min_line_margin = 0.0;
  double min_plane_margin = 0.0;
  int skipped = 0;
};

ConicReport conic_position_check(const Representation& rep, int n_samples, std::uint64_t seed);

struct FlowStep {
  double t = 0.0;
  bool nested = false;
  double estimate = 0.0;
};

struct FlowReport {
  double axis = 0.0;
  std::vector<FlowStep> steps;
  bool all_nested = false;
};

FlowReport flow_nesting_certify(double axis, const std::vector<double>& times, const SamplingSpec& spec = {});

}  // namespace anosov
