#pragma once

#include <Eigen/Core>

#include <complex>
#include <stdexcept>
#include <string>

namespace interp {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

/// Sign convention for subgradients: x/|x| with phase(0) = 0.
inline Complex phase(Complex x) {
  double m = std::abs(x);
  return m == 0.0 ? Complex(0.0) : x / m;
}

/// Bilinear pairing <f, x> = sum_i f_i x_i (no conjugation; analytic in both
/// arguments, which the maximum-modulus constructions require).
inline Complex bilinear(const CVec& f, const CVec& x) {
  return (f.array() * x.array()).sum();
}

/// Real inner product of C^n viewed as R^{2n}; gradients are stored as complex
/// vectors g with directional derivative Re<g, d>_herm.
inline double re_dot(const CMat& a, const CMat& b) {
  return (a.conjugate().array() * b.array()).sum().real();
}

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

/// A point of the open strip 0 < Re z < 1.
class StripPoint {
 public:
  explicit StripPoint(Complex z) : z_(z) {
    require(z.real() > 0.0 && z.real() < 1.0,
            "strip point must satisfy 0 < Re(z) < 1");
  }
  StripPoint(double re, double im = 0.0) : StripPoint(Complex(re, im)) {}

  Complex value() const { return z_; }
  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }

 private:
  Complex z_;
};

enum class StepRule { automatic, fista, subgradient };

struct SolveOptions {
  int max_iter = 100000;
  double tol_grad = 1e-8;
  double tol_feas = 1e-8;
  StepRule step_rule = StepRule::automatic;
  bool precondition = true;
  double subgrad_scale = 0.1;  // c in the diminishing step c/sqrt(t)
  std::uint64_t seed = 0;
};

struct SolveReport {
  double value = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;
  double feasibility = 0.0;
  bool converged = false;
  double wall_time = 0.0;
};

}  // namespace interp
