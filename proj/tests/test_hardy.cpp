#include "interp/hardy.hpp"
#include "interp/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace interp;

namespace {

StructuredCouple make_sc(int dim, int K, Rng& rng) {
  RVec w0(dim), w1(dim);
  for (int i = 0; i < dim; ++i) {
    w0[i] = 0.5 + rng.uniform();
    w1[i] = 0.5 + rng.uniform();
  }
  return StructuredCouple(
      SequenceStructure::lp(NormedSpace::lp(dim, 2.0, w0), 2.0),
      SequenceStructure::fourier(NormedSpace::lp(dim, 3.0, w1), 3.0), K);
}

PeriodicFunction random_pf(const StructuredCouple& sc, StripPoint z0,
                           Rng& rng) {
  TruncSeq c(sc.dim(), sc.K);
  c.entries() = rng.cnormal_mat(sc.dim(), 2 * sc.K + 1);
  return PeriodicFunction(z0, std::move(c), sc);
}

}  // namespace

TEST_CASE("pf_eval: base point, deltas, periodicity") {
  Rng rng(70);
  StructuredCouple sc = make_sc(2, 5, rng);
  StripPoint z0(0.4, 0.2);
  PeriodicFunction f = random_pf(sc, z0, rng);

  CHECK((pf_eval(f, z0.value()) - sigma(f.coeffs)).norm() <= 1e-12);

  CVec x = rng.cnormal_vec(2);
  PeriodicFunction d(z0, TruncSeq::delta(5, 3, x), sc);
  Complex z(0.7, -0.5);
  CHECK((pf_eval(d, z) - std::exp(3.0 * (z - z0.value())) * x).norm() <= 1e-12);

  Complex two_pi_i(0.0, 2.0 * kPi);
  CHECK((pf_eval(f, z + two_pi_i) - pf_eval(f, z)).norm() <=
        1e-10 * pf_eval(f, z).norm());
}

TEST_CASE("pf_eval stays finite for large K via exponent factoring") {
  Rng rng(71);
  StructuredCouple sc = make_sc(1, 40, rng);
  PeriodicFunction f = random_pf(sc, StripPoint(0.1), rng);
  CVec y = pf_eval(f, Complex(0.9, 0.0));
  CHECK(std::isfinite(std::abs(y[0])));
}

TEST_CASE("h2 norm is invariant under rebase; double rebase returns") {
  Rng rng(72);
  StructuredCouple sc = make_sc(2, 6, rng);
  StripPoint z0(0.3), z1(0.8, 0.4);
  PeriodicFunction f = random_pf(sc, z0, rng);

  PeriodicFunction g = rebase(f, z1);
  CHECK(pf_h2_norm(g) == doctest::Approx(pf_h2_norm(f)).epsilon(1e-10));

  PeriodicFunction back = rebase(g, z0);
  CHECK((back.coeffs.entries() - f.coeffs.entries()).norm() <=
        1e-12 * f.coeffs.entries().norm());

  PeriodicFunction same = rebase(f, z0);
  CHECK((same.coeffs.entries() - f.coeffs.entries()).norm() == 0.0);

  for (int t = 0; t < 20; ++t) {
    Complex z(0.05 + 0.9 * rng.uniform(), 3.0 * rng.normal());
    CHECK((pf_eval(g, z) - pf_eval(f, z)).norm() <=
          1e-9 * (1.0 + pf_eval(f, z).norm()));
  }
}

TEST_CASE("fourier_extract recovers coefficients and kills out-of-range k") {
  Rng rng(73);
  StructuredCouple sc = make_sc(2, 4, rng);
  StripPoint z0(0.5);
  PeriodicFunction f = random_pf(sc, z0, rng);
  const int M = 8 * sc.K + 8;

  // Round trip at the base point.
  for (int k = -sc.K; k <= sc.K; ++k) {
    CVec c = fourier_extract(f, z0, k, M);
    CHECK((c - f.coeffs.entry(k)).norm() <= 1e-8 * (1.0 + f.coeffs.entry(k).norm()));
  }
  CHECK(fourier_extract(f, z0, sc.K + 2, M).norm() <= 1e-10);

  // Single harmonic at a shifted point.
  CVec x = rng.cnormal_vec(2);
  PeriodicFunction d(z0, TruncSeq::delta(4, 2, x), sc);
  StripPoint z(0.3, 0.1);
  CVec c = fourier_extract(d, z, 2, M);
  CHECK((c - std::exp(2.0 * (z.value() - z0.value())) * x).norm() <= 1e-10);

  // (e^{-kz} f_z(k)) is independent of z.
  for (int k : {-2, 0, 3}) {
    CVec ref;
    bool first = true;
    for (StripPoint zz : {StripPoint(0.3), StripPoint(0.5, 0.2), StripPoint(0.7)}) {
      CVec v = std::exp(-double(k) * zz.value()) * fourier_extract(f, zz, k, M);
      if (first) {
        ref = v;
        first = false;
      } else {
        CHECK((v - ref).norm() <= 1e-8 * (1.0 + ref.norm()));
      }
    }
  }

  bool warn = false;
  fourier_extract(f, z0, 0, 6, &warn);
  CHECK(warn);
}

TEST_CASE("every function gives a feasible decomposition at every z") {
  Rng rng(74);
  StructuredCouple sc = make_sc(2, 6, rng);
  StripPoint z0(0.35);
  PeriodicFunction f = random_pf(sc, z0, rng);
  double h2 = pf_h2_norm(f);

  for (StripPoint z : {StripPoint(0.2), StripPoint(0.5, 0.3), StripPoint(0.8)}) {
    PeriodicFunction g = rebase(f, z);
    CVec x = pf_eval(f, z.value());
    // Seeded with the rebased coefficients, the solver can only improve.
    InterpResult r = interp_norm(sc, x, z, {}, &g.coeffs);
    CHECK(r.value <= h2 * (1.0 + 1e-9));
  }
}

TEST_CASE("optimal decompositions turn into norm-attaining functions") {
  Rng rng(75);
  StructuredCouple sc = make_sc(2, 8, rng);
  StripPoint z0(0.45);
  CVec x = rng.cnormal_vec(2);
  InterpResult r = interp_norm(sc, x, z0);
  PeriodicFunction f(z0, r.dec.seq, sc);
  CHECK(pf_h2_norm(f) == doctest::Approx(r.value).epsilon(1e-9));
  CHECK((pf_eval(f, z0.value()) - x).norm() <= 1e-8 * (1.0 + x.norm()));
}

TEST_CASE("coefficient CSV serialization") {
  TruncSeq v(2, 1);
  v.set_entry(-1, (CVec(2) << Complex(1, 2), Complex(0, 0)).finished());
  v.set_entry(1, (CVec(2) << Complex(0.5, 0), Complex(-3, 4)).finished());
  std::string csv = coeffs_csv(v);
  CHECK(csv ==
        "k,re_0,im_0,re_1,im_1\n"
        "-1,1,2,0,0\n"
        "0,0,0,0,0\n"
        "1,0.5,0,-3,4\n");
}
