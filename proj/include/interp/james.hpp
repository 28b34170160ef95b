#pragma once

#include "interp/interp_norm.hpp"

#include <vector>

namespace interp {

/// The explicit test vectors of the James modulation experiment:
///   xn   = sum_{j=1..2n} e_j (x)         (value x at positions 1..2n)
///   xn_s = sum_{j=1..2n} e^{ijs} e_j (x)
///   zn   = sum_{j=1..2n} (-1)^j e_j (x*)
struct JamesVectors {
  int n = 0;
  CVec x;
  CVec xstar;
  double s = 0.0;
  TruncSeq xn, xn_s, zn;
};

JamesVectors build_james_vectors(int n, const NormedSpace& base,
                                 const NormedSpace& dual_base, const CVec& x,
                                 const CVec& xstar, double s, int K = 0);

struct JamesCheckReport {
  double xn_james_norm = 0.0;  // = 1 exactly (DP)
  double max_pairing = 0.0;    // max |<zn, y>| over normalized samples
  double pairing_bound = 0.0;  // sqrt(2) sqrt(n)
  int violations = 0;
  double xn_l2 = 0.0;  // = sqrt(2n)
};

JamesCheckReport james_norm_checks(const JamesVectors& jv,
                                   const NormedSpace& base, int samples,
                                   std::uint64_t seed);

struct BlowupRow {
  int n = 0;
  double s = 0.0;
  double lower = 0.0;          // L(n,s) = |e^{2nis}-1| / (sqrt2 sqrt n |e^{is}+1|)
  double upper_paper = 0.0;    // sqrt(2) n^{1/4}
  double upper_product = 0.0;  // (2n)^{1/4}
  double ratio = 0.0;          // lower / upper_paper
};

/// The analytic lower bound on ||xn_s||_{J2} against the upper bound on
/// ||xn||_{J2}; the ratio grows without bound along s -> pi, n -> inf, so no
/// uniform modulation constant exists.
std::vector<BlowupRow> modulation_blowup(const std::vector<int>& n_list,
                                         const std::vector<double>& s_list);

struct J2Result {
  double value = 0.0;  // interp norm at theta = 1/2 of the flattened couple
  double j_norm = 0.0;
  double l2_norm = 0.0;
  SolveReport report;
};

/// Second-level use of the framework: the couple (J-norm, l2-norm) on the
/// flattened window, both with fourier(2) structures, evaluated at
/// theta = 1/2. Equivalent (not isometric) to the J2 norm; the method
/// constant is measured, never assumed 1.
J2Result j2_norm_dogfood(const TruncSeq& v, const NormedSpace& base,
                         const SolveOptions& opts = {}, int K2 = 6);

}  // namespace interp
