#pragma once

#include "interp/interp_norm.hpp"

namespace interp {

/// A 2*pi*i-periodic analytic function on the strip in coefficient
/// representation: f(z) = sum_k e^{k(z - z0)} x_k. The coefficient form is
/// canonical; boundary values are always derived from it.
struct PeriodicFunction {
  StripPoint z0;
  TruncSeq coeffs;
  StructuredCouple sc;

  PeriodicFunction(StripPoint base, TruncSeq c, StructuredCouple couple)
      : z0(base), coeffs(std::move(c)), sc(std::move(couple)) {
    require(coeffs.dim() == sc.dim(), "coefficient dimension mismatch");
  }
};

/// sum_k e^{k(z - z0)} x_k, with the largest exponent factored out so the
/// per-term products stay in range.
CVec pf_eval(const PeriodicFunction& f, Complex z);

/// (||coeffs||^2_{S0(e^{-z0})} + ||coeffs||^2_{S1(e^{1-z0})})^{1/2}.
double pf_h2_norm(const PeriodicFunction& f);

/// The same analytic function represented at base z1:
/// coeffs'_k = e^{k(z1 - z0)} x_k.
PeriodicFunction rebase(const PeriodicFunction& f, StripPoint z1);

/// Trapezoid estimate of the k-th Fourier coefficient of t -> f(z + it).
/// Exact for M > 2(K + |k|); sets *aliasing if M is below 4K + 4.
CVec fourier_extract(const PeriodicFunction& f, StripPoint z, int k, int M,
                     bool* aliasing = nullptr);

/// Coefficient serialization for the harness: one row per index k with
/// columns k, re_0, im_0, ..., re_{n-1}, im_{n-1} (17 significant digits).
std::string coeffs_csv(const TruncSeq& coeffs);

}  // namespace interp
