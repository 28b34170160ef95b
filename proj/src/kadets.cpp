#include "interp/kadets.hpp"

#include <cmath>

namespace interp {

double cs_constant(StripPoint s) {
  double es = std::exp(s.re());
  return std::max(1.0 / (es - 1.0), 1.0 / (std::exp(1.0) - es));
}

PeriodicFunction multiply_shift(const PeriodicFunction& h, Complex e_s) {
  const int K = h.coeffs.K();
  const Complex et = std::exp(h.z0.value());
  TruncSeq c(h.coeffs.dim(), K + 1);
  // (e^z h)_k = e^{t} h_{k-1} at base t, (e^s h)_k = e^s h_k.
  for (int k = -K - 1; k <= K + 1; ++k)
    c.set_entry(k, CVec(et * h.coeffs.entry(k - 1) - e_s * h.coeffs.entry(k)));
  StructuredCouple wide(h.sc.struct0, h.sc.struct1, K + 1);
  return PeriodicFunction(h.z0, std::move(c), std::move(wide));
}

DivisionResult divide_vanishing(const PeriodicFunction& f, StripPoint s,
                                bool subtract_value) {
  const Complex t = f.z0.value();
  const Complex es = std::exp(s.value());
  const double fnorm = pf_h2_norm(f);

  TruncSeq y = f.coeffs;
  CVec at_s = pf_eval(f, s.value());
  double residual = cap2_norm(f.sc.couple(), at_s);
  if (residual > 1e-8 * std::max(fnorm, 1e-300)) {
    require(subtract_value,
            "divide_vanishing: f(s) != 0 (residual " +
                std::to_string(residual) + "); pass subtract_value to opt in");
    y.set_entry(0, CVec(y.entry(0) - at_s));
  }

  // The quotient of a degree-K_f coefficient polynomial vanishing at s by the
  // linear factor has support exactly [-K_f, K_f - 1]; wider windows only
  // collect cancellation noise that the exponential H2 weights then amplify.
  const int Kf = y.K();
  const int Kg = Kf;

  // Coefficients of g at base t. Both one-sided series are finite sums over
  // the support of y and agree when f(s) = 0; pick the one whose geometric
  // weights decay.
  TruncSeq gc(y.dim(), Kg);
  const Complex emt = std::exp(-t);
  const Complex r_up = std::exp(s.value() - t);    // |.| < 1 iff Re s < Re t
  const Complex r_down = std::exp(t - s.value());  // inverse ratio
  const bool up = s.re() <= f.z0.re();
  for (int k = -Kg; k <= Kg; ++k) {
    CVec acc = CVec::Zero(y.dim());
    if (up) {
      // e^{-t} sum_{n >= 0} e^{n(s-t)} y_{k+n+1}
      Complex wgt = emt;
      for (int n = 0; k + n + 1 <= Kf; ++n) {
        int idx = k + n + 1;
        if (idx >= -Kf) acc += wgt * y.entry(idx);
        wgt *= r_up;
      }
    } else {
      // -e^{-t} sum_{m >= 1} e^{-m(s-t)} y_{k+1-m}
      Complex wgt = -emt * r_down;
      for (int m = 1; k + 1 - m >= -Kf; ++m) {
        int idx = k + 1 - m;
        if (idx <= Kf) acc += wgt * y.entry(idx);
        wgt *= r_down;
      }
    }
    gc.set_entry(k, acc);
  }

  DivisionResult out{
      PeriodicFunction(f.z0, std::move(gc),
                       StructuredCouple(f.sc.struct0, f.sc.struct1, Kg)),
      cs_constant(s), 0.0};

  // Reconstruction check on a 5x5 strip grid.
  PeriodicFunction recon = multiply_shift(out.g, es);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      Complex zz(0.15 + 0.175 * i, -1.0 + 0.5 * j);
      CVec diff = pf_eval(recon, zz) - pf_eval(f, zz);
      out.reconstruction_defect =
          std::max(out.reconstruction_defect, cap2_norm(f.sc.couple(), diff));
    }
  }
  return out;
}

PerturbResult perturb_kernel(const PeriodicFunction& f, StripPoint s,
                             StripPoint t) {
  const double fnorm = pf_h2_norm(f);
  require(std::abs(fnorm - 1.0) <= 1e-6, "perturb_kernel expects ||f|| = 1");

  DivisionResult dv = divide_vanishing(f, s);
  PeriodicFunction h0 = multiply_shift(dv.g, std::exp(t.value()));
  double h0n = pf_h2_norm(h0);
  require(h0n > 0.0, "degenerate perturbation");
  PeriodicFunction h(h0.z0, (Complex(1.0 / h0n)) * h0.coeffs, h0.sc);

  // ||f - h|| with windows aligned.
  const int Kh = h.coeffs.K();
  TruncSeq diff = f.coeffs.with_radius(Kh) - h.coeffs;
  PerturbResult out{h, pf_h2_norm(PeriodicFunction(f.z0, std::move(diff), h.sc)),
                    2.0 * std::abs(std::exp(t.value()) - std::exp(s.value())) *
                        cs_constant(s)};
  return out;
}

double kadets_bound(StripPoint s, StripPoint t) {
  return 4.0 * std::abs(std::exp(t.value()) - std::exp(s.value())) *
         std::max(cs_constant(s), cs_constant(t));
}

}  // namespace interp
