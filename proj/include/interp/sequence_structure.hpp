#pragma once

#include "interp/normed_space.hpp"
#include "interp/trunc_seq.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace interp {

enum class SeqKind { lp, fourier, rademacher, gaussian, james };
enum class SampleMode { exact, monte_carlo };

/// Translation-invariant norm on finitely supported X-valued sequences.
///   lp         : (sum_k ||x_k||^p)^{1/p}
///   fourier    : L^p norm over normalized Haar measure of sum_k x_k e^{ikt},
///                M-point trapezoid quadrature (M = 0 -> 8*(2K+1))
///   rademacher : (E || sum_k eps_k x_k ||^p)^{1/p}, exact enumeration while
///                2K+1 <= 20, Monte Carlo beyond (or when forced)
///   gaussian   : same with standard complex Gaussians, Monte Carlo only
///   james      : 1/sqrt(2) * sup over chains p_1 < ... < p_m of
///                (sum ||x_{p_i} - x_{p_{i+1}}||^2)^{1/2}
struct SequenceStructure {
  SeqKind kind;
  double p;
  int quad_points;
  SampleMode mode;
  int samples;
  std::uint64_t seed;
  NormedSpace base;

  static SequenceStructure lp(NormedSpace base, double p);
  static SequenceStructure fourier(NormedSpace base, double p, int M = 0);
  static SequenceStructure rademacher(NormedSpace base, double p,
                                      SampleMode mode, int samples,
                                      std::uint64_t seed);
  static SequenceStructure gaussian(NormedSpace base, double p, int samples,
                                    std::uint64_t seed);
  static SequenceStructure james(NormedSpace base);

  bool monte_carlo() const {
    return kind == SeqKind::gaussian ||
           (kind == SeqKind::rademacher && mode == SampleMode::monte_carlo);
  }
  /// Whether the squared norm is smooth enough for accelerated gradient steps.
  bool smooth_for_solver() const;
  /// Sandwich constants (c, C) in c*linf <= ||.|| <= C*l1.
  std::pair<double, double> inclusion_constants() const;

 private:
  SequenceStructure(SeqKind k, NormedSpace b) : kind(k), p(2.0), quad_points(0),
      mode(SampleMode::exact), samples(0), seed(0), base(std::move(b)) {}
};

/// Norm evaluator for a fixed (structure, weight a, window K). Precomputes
/// the weight profile, quadrature transform and Monte Carlo samples, so that
/// repeated solver calls stay cheap and the MC objective is a fixed
/// sample-average (deterministic given the seed).
class StructureEval {
 public:
  StructureEval(const SequenceStructure& s, Complex a, int K);
  ~StructureEval();
  StructureEval(StructureEval&&) noexcept;
  StructureEval& operator=(StructureEval&&) noexcept;

  int K() const;
  int cols() const;

  double norm(const CMat& v, double* mc_stderr = nullptr) const;
  double norm_and_grad(const CMat& v, CMat& grad,
                       double* mc_stderr = nullptr) const;

  /// lp kinds only: adds c inside the p-th power, i.e. the norm becomes
  /// (sum_k m_k^p + c)^{1/p}. Used for analytically summed frozen tails.
  void set_power_offset(double c);

  /// |a|^k profile over the window (for preconditioners).
  const RVec& weight_magnitudes() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

double seq_norm(const SequenceStructure& s, const TruncSeq& v,
                double* mc_stderr = nullptr);
double weighted_seq_norm(const SequenceStructure& s, Complex a,
                         const TruncSeq& v, double* mc_stderr = nullptr);

struct ReflectionReport {
  bool pass = true;
  double worst = 0.0;
  int trials = 0;
};

/// ||(x_k)|| = ||(x_{-k})|| on random sequences; tolerance 1e-10 for exact
/// kinds, 3 MC standard errors for sampled ones.
ReflectionReport reflection_check(const SequenceStructure& s, int K,
                                  int trials, std::uint64_t seed);

/// Average of the symmetric truncations (1/(n+1)) sum_{m=0..n} T_m v.
TruncSeq cesaro_average(const TruncSeq& v, int n);

struct CesaroResult {
  double value = 0.0;     // ||C_n v||
  bool pass = false;      // contractivity (and exactness where it applies)
  double identity_gap = 0.0;  // max entry norm of C_n v - v
};

CesaroResult cesaro_check(const SequenceStructure& s, const TruncSeq& v, int n);

/// Oracle for tests: exhaustive chain enumeration of the James norm over the
/// support bounding box plus one zero sentinel on each side.
double james_norm_enumerated(const NormedSpace& base, const TruncSeq& v);

struct StructuredCouple {
  SequenceStructure struct0;
  SequenceStructure struct1;
  int K;

  StructuredCouple(SequenceStructure s0, SequenceStructure s1, int K_)
      : struct0(std::move(s0)), struct1(std::move(s1)), K(K_) {
    require(struct0.base.dim() == struct1.base.dim(),
            "structures must share the base dimension");
    require(K >= 0, "truncation radius must be nonnegative");
  }

  int dim() const { return struct0.base.dim(); }
  Couple couple() const { return Couple(struct0.base, struct1.base); }
};

}  // namespace interp
