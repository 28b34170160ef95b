#include "interp/sequence_structure.hpp"

#include "interp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace interp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
bool is_inf(double p) { return std::isinf(p); }
}  // namespace

SequenceStructure SequenceStructure::lp(NormedSpace base, double p) {
  require(p >= 1.0, "sequence exponent must satisfy p >= 1");
  SequenceStructure s(SeqKind::lp, std::move(base));
  s.p = p;
  return s;
}

SequenceStructure SequenceStructure::fourier(NormedSpace base, double p,
                                             int M) {
  require(p >= 1.0, "sequence exponent must satisfy p >= 1");
  require(M >= 0, "quadrature point count must be nonnegative");
  SequenceStructure s(SeqKind::fourier, std::move(base));
  s.p = p;
  s.quad_points = M;
  return s;
}

SequenceStructure SequenceStructure::rademacher(NormedSpace base, double p,
                                                SampleMode mode, int samples,
                                                std::uint64_t seed) {
  require(p >= 1.0, "sequence exponent must satisfy p >= 1");
  if (mode == SampleMode::monte_carlo) {
    require(samples > 0, "Monte Carlo mode needs a sample count");
    require(seed != 0, "Monte Carlo mode needs a seed");
  }
  SequenceStructure s(SeqKind::rademacher, std::move(base));
  s.p = p;
  s.mode = mode;
  s.samples = samples;
  s.seed = seed;
  return s;
}

SequenceStructure SequenceStructure::gaussian(NormedSpace base, double p,
                                              int samples,
                                              std::uint64_t seed) {
  require(p >= 1.0, "sequence exponent must satisfy p >= 1");
  require(samples > 0, "Monte Carlo mode needs a sample count");
  require(seed != 0, "Monte Carlo mode needs a seed");
  SequenceStructure s(SeqKind::gaussian, std::move(base));
  s.p = p;
  s.mode = SampleMode::monte_carlo;
  s.samples = samples;
  s.seed = seed;
  return s;
}

SequenceStructure SequenceStructure::james(NormedSpace base) {
  return SequenceStructure(SeqKind::james, std::move(base));
}

bool SequenceStructure::smooth_for_solver() const {
  if (kind == SeqKind::james) return false;
  if (p <= 1.0 || is_inf(p)) return false;
  return base.smooth();
}

std::pair<double, double> SequenceStructure::inclusion_constants() const {
  if (kind == SeqKind::james)
    return {1.0 / std::sqrt(2.0), std::sqrt(2.0)};
  return {1.0, 1.0};
}

// ---------------------------------------------------------------------------
// StructureEval
// ---------------------------------------------------------------------------

struct StructureEval::Impl {
  SequenceStructure s;
  Complex a;
  int K;
  int L;  // 2K+1

  RVec wmag;     // |a|^k
  CVec wfull;    // a^k
  double power_offset = 0.0;

  // fourier
  CMat trig;  // L x M, trig(kidx, m) = exp(i k t_m)

  // monte carlo (rademacher signs are stored as real +-1 in the same matrix)
  CMat mc;  // samples x L

  Impl(const SequenceStructure& structure, Complex weight, int radius)
      : s(structure), a(weight), K(radius), L(2 * radius + 1) {
    require(std::abs(a) > 0.0, "weight base a must be nonzero");
    wmag.resize(L);
    wfull.resize(L);
    const double logm = std::log(std::abs(a));
    const double arg = std::arg(a);
    for (int k = -K; k <= K; ++k) {
      double mag = std::exp(k * logm);
      wmag[k + K] = mag;
      wfull[k + K] = mag * Complex(std::cos(k * arg), std::sin(k * arg));
    }

    if (s.kind == SeqKind::fourier) {
      int M = s.quad_points > 0 ? s.quad_points : 8 * L;
      trig.resize(L, M);
      for (int m = 0; m < M; ++m) {
        double t = 2.0 * kPi * m / M;
        for (int k = -K; k <= K; ++k)
          trig(k + K, m) = Complex(std::cos(k * t), std::sin(k * t));
      }
    }

    if (use_monte_carlo()) {
      require(s.samples > 0 && s.seed != 0,
              "Monte Carlo sequence norms need samples and a seed");
      mc.resize(s.samples, L);
      Rng rng(s.seed);
      for (int i = 0; i < s.samples; ++i)
        for (int k = 0; k < L; ++k)
          mc(i, k) = s.kind == SeqKind::gaussian
                         ? rng.cnormal()
                         : Complex(double(rng.sign()), 0.0);
    }
  }

  bool use_monte_carlo() const {
    if (s.kind == SeqKind::gaussian) return true;
    if (s.kind != SeqKind::rademacher) return false;
    return s.mode == SampleMode::monte_carlo || L > 20;
  }

  CMat weighted(const CMat& v) const {
    CMat w = v;
    for (int k = 0; k < L; ++k) w.col(k) *= wfull[k];
    return w;
  }

  // --- lp ---------------------------------------------------------------

  double lp_norm(const CMat& v, CMat* grad) const {
    const double p = s.p;
    RVec m(L);
    for (int k = 0; k < L; ++k) m[k] = wmag[k] * s.base.norm(v.col(k));

    if (is_inf(p)) {
      require(power_offset == 0.0, "power offset needs a finite exponent");
      int kmax = 0;
      double n = m.maxCoeff(&kmax);
      if (grad) {
        grad->setZero();
        if (n > 0.0)
          grad->col(kmax) = wmag[kmax] * s.base.subgradient(v.col(kmax));
      }
      return n;
    }

    double sum = power_offset;
    for (int k = 0; k < L; ++k) sum += std::pow(m[k], p);
    double n = std::pow(sum, 1.0 / p);
    if (grad) {
      grad->setZero();
      if (n > 0.0) {
        for (int k = 0; k < L; ++k) {
          if (m[k] == 0.0) continue;
          double c = std::pow(n, 1.0 - p) * std::pow(m[k], p - 1.0) * wmag[k];
          grad->col(k) = c * s.base.subgradient(v.col(k));
        }
      }
    }
    return n;
  }

  // --- fourier ------------------------------------------------------------

  double fourier_norm(const CMat& v, CMat* grad) const {
    const double p = s.p;
    const int M = static_cast<int>(trig.cols());
    CMat f = weighted(v) * trig;  // n x M boundary samples

    RVec b(M);
    for (int m = 0; m < M; ++m) b[m] = s.base.norm(f.col(m));

    double n = 0.0;
    if (is_inf(p)) {
      n = b.maxCoeff();
    } else {
      double mean = 0.0;
      for (int m = 0; m < M; ++m) mean += std::pow(b[m], p);
      mean /= M;
      n = std::pow(mean, 1.0 / p);
    }

    if (grad) {
      grad->setZero();
      if (n > 0.0) {
        CMat df = CMat::Zero(v.rows(), M);
        if (is_inf(p)) {
          int mmax = 0;
          b.maxCoeff(&mmax);
          df.col(mmax) = s.base.subgradient(f.col(mmax));
        } else {
          for (int m = 0; m < M; ++m) {
            if (b[m] == 0.0) continue;
            double c = std::pow(n, 1.0 - p) * std::pow(b[m], p - 1.0) / M;
            df.col(m) = c * s.base.subgradient(f.col(m));
          }
        }
        *grad = df * trig.adjoint();
        for (int k = 0; k < L; ++k) grad->col(k) *= std::conj(wfull[k]);
      }
    }
    return n;
  }

  // --- rademacher (exact, Gray-code enumeration over the support) ---------

  double rademacher_exact(const CMat& v, CMat* grad) const {
    const double p = s.p;
    require(!is_inf(p), "expectation norms need a finite exponent");
    CMat wv = weighted(v);

    std::vector<int> idx;
    for (int k = 0; k < L; ++k)
      if (wv.col(k).norm() > 0.0) idx.push_back(k);
    const int m = static_cast<int>(idx.size());

    if (m == 0) {
      if (grad) grad->setZero();
      return 0.0;
    }

    CVec u = CVec::Zero(v.rows());
    for (int j = 0; j < m; ++j) u += wv.col(idx[j]);
    std::vector<int> sign(m, 1);

    const std::uint64_t total = 1ull << m;
    double acc = 0.0;
    CMat gacc;
    if (grad) gacc = CMat::Zero(v.rows(), m);

    for (std::uint64_t c = 0;; ++c) {
      double bn = s.base.norm(u);
      acc += std::pow(bn, p);
      if (grad && bn > 0.0) {
        CVec gb = std::pow(bn, p - 1.0) * s.base.subgradient(u);
        for (int j = 0; j < m; ++j) gacc.col(j) += double(sign[j]) * gb;
      }
      if (c + 1 == total) break;
      int j = std::countr_zero(c + 1);  // Gray code: flip one position
      u -= 2.0 * double(sign[j]) * wv.col(idx[j]);
      sign[j] = -sign[j];
    }

    double mean = acc / double(total);
    double n = std::pow(mean, 1.0 / p);
    if (grad) {
      grad->setZero();
      if (n > 0.0) {
        double c0 = std::pow(n, 1.0 - p) / double(total);
        for (int j = 0; j < m; ++j)
          grad->col(idx[j]) = c0 * std::conj(wfull[idx[j]]) * gacc.col(j);
      }
    }
    return n;
  }

  // --- monte carlo (rademacher or gaussian) --------------------------------

  double mc_norm(const CMat& v, CMat* grad, double* stderr_out) const {
    const double p = s.p;
    require(!is_inf(p), "expectation norms need a finite exponent");
    CMat wv = weighted(v);
    const int S = s.samples;

    CMat U = wv * mc.transpose();  // n x S
    RVec bp(S);
    for (int i = 0; i < S; ++i) bp[i] = std::pow(s.base.norm(U.col(i)), p);
    double mean = bp.mean();
    double n = std::pow(mean, 1.0 / p);

    if (stderr_out) {
      double var = (bp.array() - mean).square().sum() / std::max(1, S - 1);
      double se_mean = std::sqrt(var / S);
      *stderr_out = n > 0.0 ? se_mean * std::pow(n, 1.0 - p) / p : se_mean;
    }

    if (grad) {
      grad->setZero();
      if (n > 0.0) {
        CMat dU = CMat::Zero(v.rows(), S);
        for (int i = 0; i < S; ++i) {
          double bn = std::pow(bp[i], 1.0 / p);
          if (bn == 0.0) continue;
          double c = std::pow(n, 1.0 - p) * std::pow(bn, p - 1.0) / S;
          dU.col(i) = c * s.base.subgradient(U.col(i));
        }
        *grad = dU * mc.conjugate();
        for (int k = 0; k < L; ++k) grad->col(k) *= std::conj(wfull[k]);
      }
    }
    return n;
  }

  // --- james ---------------------------------------------------------------

  // DP over the window plus one zero sentinel on each side; chains over Z
  // never gain from further-out zeros.
  double james_norm(const CMat& v, CMat* grad) const {
    CMat wv = weighted(v);
    const int P = L + 2;  // sentinel, window, sentinel

    auto value_at = [&](int pos) -> CVec {
      if (pos == 0 || pos == P - 1) return CVec::Zero(v.rows());
      return wv.col(pos - 1);
    };

    std::vector<double> best(P, 0.0);
    std::vector<int> parent(P, -1);
    for (int j = 1; j < P; ++j) {
      CVec wj = value_at(j);
      for (int i = 0; i < j; ++i) {
        double d = s.base.norm(wj - value_at(i));
        double cand = best[i] + d * d;
        if (cand > best[j] + 1e-18) {
          best[j] = cand;
          parent[j] = i;
        }
      }
    }

    int end = 0;
    double m2 = 0.0;
    for (int j = 0; j < P; ++j)
      if (best[j] > m2) {
        m2 = best[j];
        end = j;
      }
    double n = std::sqrt(m2) / std::sqrt(2.0);

    if (grad) {
      grad->setZero();
      if (m2 > 0.0) {
        std::vector<int> chain;
        for (int j = end; j != -1; j = parent[j]) chain.push_back(j);
        std::reverse(chain.begin(), chain.end());
        double d_total = std::sqrt(m2);
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
          CVec diff = value_at(chain[i + 1]) - value_at(chain[i]);
          double dn = s.base.norm(diff);
          if (dn == 0.0) continue;
          CVec gb = (dn / (d_total * std::sqrt(2.0))) * s.base.subgradient(diff);
          int hi = chain[i + 1], lo = chain[i];
          if (hi != 0 && hi != P - 1)
            grad->col(hi - 1) += std::conj(wfull[hi - 1]) * gb;
          if (lo != 0 && lo != P - 1)
            grad->col(lo - 1) -= std::conj(wfull[lo - 1]) * gb;
        }
      }
    }
    return n;
  }

  double eval(const CMat& v, CMat* grad, double* stderr_out) const {
    require(v.cols() == L, "variable block must span the window");
    require(v.rows() == s.base.dim(), "dimension mismatch with the base space");
    if (stderr_out) *stderr_out = 0.0;
    switch (s.kind) {
      case SeqKind::lp:
        return lp_norm(v, grad);
      case SeqKind::fourier:
        return fourier_norm(v, grad);
      case SeqKind::rademacher:
        if (!use_monte_carlo()) return rademacher_exact(v, grad);
        return mc_norm(v, grad, stderr_out);
      case SeqKind::gaussian:
        return mc_norm(v, grad, stderr_out);
      case SeqKind::james:
        return james_norm(v, grad);
    }
    return 0.0;
  }
};

StructureEval::StructureEval(const SequenceStructure& s, Complex a, int K)
    : impl_(std::make_unique<Impl>(s, a, K)) {}
StructureEval::~StructureEval() = default;
StructureEval::StructureEval(StructureEval&&) noexcept = default;
StructureEval& StructureEval::operator=(StructureEval&&) noexcept = default;

int StructureEval::K() const { return impl_->K; }
int StructureEval::cols() const { return impl_->L; }

double StructureEval::norm(const CMat& v, double* mc_stderr) const {
  return impl_->eval(v, nullptr, mc_stderr);
}

double StructureEval::norm_and_grad(const CMat& v, CMat& grad,
                                    double* mc_stderr) const {
  grad.resize(v.rows(), v.cols());
  return impl_->eval(v, &grad, mc_stderr);
}

void StructureEval::set_power_offset(double c) {
  require(impl_->s.kind == SeqKind::lp,
          "analytic tail offsets are only defined for lp kinds");
  require(c >= 0.0, "power offset must be nonnegative");
  impl_->power_offset = c;
}

const RVec& StructureEval::weight_magnitudes() const { return impl_->wmag; }

// ---------------------------------------------------------------------------

double seq_norm(const SequenceStructure& s, const TruncSeq& v,
                double* mc_stderr) {
  StructureEval ev(s, Complex(1.0), v.K());
  return ev.norm(v.entries(), mc_stderr);
}

double weighted_seq_norm(const SequenceStructure& s, Complex a,
                         const TruncSeq& v, double* mc_stderr) {
  require(std::abs(a) > 0.0, "weight base a must be nonzero");
  StructureEval ev(s, a, v.K());
  return ev.norm(v.entries(), mc_stderr);
}

ReflectionReport reflection_check(const SequenceStructure& s, int K,
                                  int trials, std::uint64_t seed) {
  require(trials >= 1, "need at least one trial");
  ReflectionReport rep;
  rep.trials = trials;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    TruncSeq v(s.base.dim(), K);
    v.entries() = rng.cnormal_mat(s.base.dim(), 2 * K + 1);
    double se1 = 0.0, se2 = 0.0;
    double n1 = seq_norm(s, v, &se1);
    double n2 = seq_norm(s, v.reflected(), &se2);
    double dev = std::abs(n1 - n2);
    double tol = s.monte_carlo() ? 3.0 * (se1 + se2) + 1e-12
                                 : 1e-10 * (1.0 + n1);
    rep.worst = std::max(rep.worst, dev);
    if (dev > tol) rep.pass = false;
  }
  return rep;
}

TruncSeq cesaro_average(const TruncSeq& v, int n) {
  require(n >= 0, "Cesaro order must be nonnegative");
  TruncSeq out(v.dim(), v.K());
  for (int k = -v.K(); k <= v.K(); ++k) {
    int hits = std::max(0, n + 1 - std::abs(k));  // #{m : |k| <= m <= n}
    if (hits == 0) continue;
    out.set_entry(k, (double(hits) / double(n + 1)) * v.entry(k));
  }
  return out;
}

CesaroResult cesaro_check(const SequenceStructure& s, const TruncSeq& v,
                          int n) {
  CesaroResult res;
  TruncSeq cv = cesaro_average(v, n);
  double se_v = 0.0, se_c = 0.0;
  double nv = seq_norm(s, v, &se_v);
  res.value = seq_norm(s, cv, &se_c);
  double tol = s.monte_carlo() ? 3.0 * (se_v + se_c) + 1e-12 : 1e-10 * (1.0 + nv);
  res.pass = res.value <= nv + tol;

  for (int k = -v.K(); k <= v.K(); ++k)
    res.identity_gap =
        std::max(res.identity_gap, (cv.entry(k) - v.entry(k)).norm());

  // C_n v = v exactly iff every truncation T_0..T_n acts as the identity,
  // i.e. the support is {0}.
  bool support_origin_only = true;
  for (int k = -v.K(); k <= v.K(); ++k)
    if (k != 0 && v.entry(k).norm() > 0.0) support_origin_only = false;
  if (support_origin_only && res.identity_gap > 0.0) res.pass = false;
  return res;
}

double james_norm_enumerated(const NormedSpace& base, const TruncSeq& v) {
  int lo = v.K() + 1, hi = -v.K() - 1;
  for (int k = -v.K(); k <= v.K(); ++k)
    if (v.entry(k).norm() > 0.0) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  if (lo > hi) return 0.0;

  std::vector<CVec> vals;
  vals.push_back(CVec::Zero(v.dim()));
  for (int k = lo; k <= hi; ++k) vals.push_back(v.entry(k));
  vals.push_back(CVec::Zero(v.dim()));

  const int P = static_cast<int>(vals.size());
  require(P <= 22, "enumeration oracle limited to short supports");
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < (1ull << P); ++mask) {
    if (std::popcount(mask) < 2) continue;
    double sum = 0.0;
    int prev = -1;
    for (int j = 0; j < P; ++j) {
      if (!(mask >> j & 1)) continue;
      if (prev >= 0) {
        double d = base.norm(vals[j] - vals[prev]);
        sum += d * d;
      }
      prev = j;
    }
    best = std::max(best, sum);
  }
  return std::sqrt(best) / std::sqrt(2.0);
}

}  // namespace interp
