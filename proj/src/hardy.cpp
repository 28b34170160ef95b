#include "interp/hardy.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace interp {

CVec pf_eval(const PeriodicFunction& f, Complex z) {
  const Complex d = z - f.z0.value();
  const int K = f.coeffs.K();

  double kappa = 0.0;  // max_k k*Re(d) over the window
  for (int k = -K; k <= K; ++k) kappa = std::max(kappa, k * d.real());

  CVec acc = CVec::Zero(f.coeffs.dim());
  for (int k = -K; k <= K; ++k) {
    double mag = std::exp(k * d.real() - kappa);
    if (mag == 0.0) continue;
    Complex w = mag * Complex(std::cos(k * d.imag()), std::sin(k * d.imag()));
    acc += w * f.coeffs.entry(k);
  }
  require(kappa < 700.0, "pf_eval overflow: |k Re(z - z0)| too large");
  return std::exp(kappa) * acc;
}

double pf_h2_norm(const PeriodicFunction& f) {
  auto [a0, a1] = strip_weights(f.z0);
  double n0 = weighted_seq_norm(f.sc.struct0, a0, f.coeffs);
  double n1 = weighted_seq_norm(f.sc.struct1, a1, f.coeffs);
  return std::hypot(n0, n1);
}

PeriodicFunction rebase(const PeriodicFunction& f, StripPoint z1) {
  const Complex d = z1.value() - f.z0.value();
  TruncSeq c = f.coeffs;
  for (int k = -c.K(); k <= c.K(); ++k)
    c.set_entry(k, CVec(std::exp(double(k) * d) * c.entry(k)));
  return PeriodicFunction(z1, std::move(c), f.sc);
}

std::string coeffs_csv(const TruncSeq& coeffs) {
  std::ostringstream out;
  out << "k";
  for (int i = 0; i < coeffs.dim(); ++i)
    out << ",re_" << i << ",im_" << i;
  out << "\n";
  char buf[40];
  for (int k = -coeffs.K(); k <= coeffs.K(); ++k) {
    out << k;
    CVec e = coeffs.entry(k);
    for (int i = 0; i < coeffs.dim(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", e[i].real());
      out << "," << buf;
      std::snprintf(buf, sizeof(buf), "%.17g", e[i].imag());
      out << "," << buf;
    }
    out << "\n";
  }
  return out.str();
}

CVec fourier_extract(const PeriodicFunction& f, StripPoint z, int k, int M,
                     bool* aliasing) {
  require(M >= 1, "need at least one quadrature point");
  if (aliasing) *aliasing = M < 4 * f.coeffs.K() + 4;
  CVec acc = CVec::Zero(f.coeffs.dim());
  for (int m = 0; m < M; ++m) {
    double t = 2.0 * kPi * m / M;
    Complex e = Complex(std::cos(k * t), -std::sin(k * t));
    acc += e * pf_eval(f, z.value() + Complex(0.0, t));
  }
  return acc / double(M);
}

}  // namespace interp
