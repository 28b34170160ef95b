#include "interp/james.hpp"

#include "interp/rng.hpp"

#include <cmath>
#include <memory>

namespace interp {

JamesVectors build_james_vectors(int n, const NormedSpace& base,
                                 const NormedSpace& dual_base, const CVec& x,
                                 const CVec& xstar, double s, int K) {
  require(n >= 1, "n must be positive");
  if (K == 0) K = 2 * n + 1;
  require(K >= 2 * n, "window must contain positions 1..2n");
  require(std::abs(base.norm(x) - 1.0) <= 1e-9, "x must be a unit vector");
  require(std::abs(dual_base.norm(xstar) - 1.0) <= 1e-9,
          "x* must be a unit functional");
  require(std::abs(bilinear(xstar, x) - Complex(1.0)) <= 1e-9,
          "<x*, x> must equal 1");

  JamesVectors jv;
  jv.n = n;
  jv.x = x;
  jv.xstar = xstar;
  jv.s = s;
  jv.xn = TruncSeq(base.dim(), K);
  jv.xn_s = TruncSeq(base.dim(), K);
  jv.zn = TruncSeq(base.dim(), K);
  for (int j = 1; j <= 2 * n; ++j) {
    jv.xn.set_entry(j, x);
    jv.xn_s.set_entry(
        j, CVec(Complex(std::cos(j * s), std::sin(j * s)) * x));
    jv.zn.set_entry(j, CVec(double(j % 2 == 0 ? 1 : -1) * xstar));
  }
  return jv;
}

JamesCheckReport james_norm_checks(const JamesVectors& jv,
                                   const NormedSpace& base, int samples,
                                   std::uint64_t seed) {
  JamesCheckReport rep;
  SequenceStructure J = SequenceStructure::james(base);
  rep.xn_james_norm = seq_norm(J, jv.xn);
  rep.pairing_bound = std::sqrt(2.0) * std::sqrt(double(jv.n));
  rep.xn_l2 = seq_norm(SequenceStructure::lp(base, 2.0), jv.xn);

  Rng rng(seed);
  const int K = jv.zn.K();
  for (int t = 0; t < samples; ++t) {
    TruncSeq y(base.dim(), K);
    y.entries() = rng.cnormal_mat(base.dim(), 2 * K + 1);
    double jn = seq_norm(J, y);
    if (jn == 0.0) continue;
    y = Complex(1.0 / jn) * y;
    Complex pairing = 0.0;
    for (int k = -K; k <= K; ++k)
      pairing += bilinear(jv.zn.entry(k), y.entry(k));
    double val = std::abs(pairing);
    rep.max_pairing = std::max(rep.max_pairing, val);
    if (val > rep.pairing_bound + 1e-9) ++rep.violations;
  }
  return rep;
}

std::vector<BlowupRow> modulation_blowup(const std::vector<int>& n_list,
                                         const std::vector<double>& s_list) {
  std::vector<BlowupRow> rows;
  for (int n : n_list) {
    require(n >= 1, "n must be positive");
    for (double s : s_list) {
      BlowupRow r;
      r.n = n;
      r.s = s;
      double den = std::abs(std::cos(0.5 * s));
      double scale = std::sqrt(2.0) * std::sqrt(double(n));
      // |e^{2nis} - 1| / |e^{is} + 1| = |sin(ns)| / |cos(s/2)|;
      // the s -> pi limit of the quotient is 2n.
      r.lower = den < 1e-13 ? scale
                            : std::abs(std::sin(n * s)) / (den * scale);
      r.upper_paper = std::sqrt(2.0) * std::pow(double(n), 0.25);
      r.upper_product = std::pow(2.0 * n, 0.25);
      r.ratio = r.lower / r.upper_paper;
      rows.push_back(r);
    }
  }
  return rows;
}

J2Result j2_norm_dogfood(const TruncSeq& v, const NormedSpace& base,
                         const SolveOptions& opts, int K2) {
  const int K = v.K();
  const int n = v.dim();
  const int L = 2 * K + 1;
  const int dim = n * L;
  require(dim <= 64, "dogfood couple limited to flattened dimension 64");

  auto unflatten = [n, L](const CVec& u) {
    CMat m(n, L);
    for (int k = 0; k < L; ++k) m.col(k) = u.segment(k * n, n);
    return m;
  };
  auto flatten = [n, L](const CMat& m) {
    CVec u(n * L);
    for (int k = 0; k < L; ++k) u.segment(k * n, n) = m.col(k);
    return u;
  };

  auto j_eval = std::make_shared<StructureEval>(
      SequenceStructure::james(base), Complex(1.0), K);
  auto l2_eval = std::make_shared<StructureEval>(
      SequenceStructure::lp(base, 2.0), Complex(1.0), K);

  NormedSpace j_space = NormedSpace::custom(
      dim, [=](const CVec& u) { return j_eval->norm(unflatten(u)); },
      [=](const CVec& u) {
        CMat g;
        j_eval->norm_and_grad(unflatten(u), g);
        return flatten(g);
      });
  NormedSpace l2_space = NormedSpace::custom(
      dim, [=](const CVec& u) { return l2_eval->norm(unflatten(u)); },
      [=](const CVec& u) {
        CMat g;
        l2_eval->norm_and_grad(unflatten(u), g);
        return flatten(g);
      });

  StructuredCouple sc(SequenceStructure::fourier(j_space, 2.0),
                      SequenceStructure::fourier(l2_space, 2.0), K2);

  J2Result out;
  out.j_norm = j_eval->norm(v.entries());
  out.l2_norm = l2_eval->norm(v.entries());
  InterpResult r = interp_norm(sc, flatten(v.entries()), StripPoint(0.5), opts);
  out.value = r.value;
  out.report = r.report;
  return out;
}

}  // namespace interp
