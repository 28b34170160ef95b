#include "interp/normed_space.hpp"
#include "interp/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace interp;

namespace {
CVec cv(std::initializer_list<Complex> xs) {
  CVec v(static_cast<int>(xs.size()));
  int i = 0;
  for (Complex x : xs) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("lp norms on small vectors") {
  CHECK(norm_eval(NormedSpace::lp(2, 2.0), cv({3.0, 4.0})) == doctest::Approx(5.0));
  CHECK(norm_eval(NormedSpace::lp(2, 1.0), cv({1.0, Complex(0, -2)})) ==
        doctest::Approx(3.0));
  CHECK(norm_eval(NormedSpace::lp(3, 3.0), CVec::Zero(3)) == 0.0);

  NormedSpace winf = NormedSpace::lp(2, std::numeric_limits<double>::infinity(),
                                     (RVec(2) << 2.0, 1.0).finished());
  CHECK(winf.norm(cv({1.0, 3.0})) == doctest::Approx(3.0));
  CHECK(winf.norm(cv({2.0, 3.0})) == doctest::Approx(4.0));

  CHECK_THROWS_AS(norm_eval(NormedSpace::lp(2, 2.0), CVec::Zero(3)), Error);
}

TEST_CASE("dual norms: closed form") {
  CHECK(dual_norm_eval(NormedSpace::lp(2, 2.0), cv({1.0, 2.0})) ==
        doctest::Approx(std::sqrt(5.0)));
  CHECK(dual_norm_eval(NormedSpace::lp(2, 1.0), cv({1.0, -2.0})) ==
        doctest::Approx(2.0));
  CVec e1 = CVec::Zero(3);
  e1[0] = 1.0;
  CHECK(dual_norm_eval(NormedSpace::lp(3, 3.0), e1) == doctest::Approx(1.0));
}

TEST_CASE("homogeneity on random vectors") {
  Rng rng(11);
  for (double p : {1.0, 1.5, 2.0, 4.0}) {
    NormedSpace sp = NormedSpace::lp(4, p);
    for (int t = 0; t < 25; ++t) {
      CVec x = rng.cnormal_vec(4);
      Complex lam(rng.normal(), rng.normal());
      CHECK(sp.norm(lam * x) ==
            doctest::Approx(std::abs(lam) * sp.norm(x)).epsilon(1e-12));
    }
  }
}

TEST_CASE("duality consistency: ascent path matches the closed form") {
  Rng rng(12);
  for (double p : {1.5, 2.0, 3.0}) {
    RVec w = (RVec(3) << 0.5, 1.0, 2.0).finished();
    NormedSpace sp = NormedSpace::lp(3, p, w);
    for (int t = 0; t < 5; ++t) {
      CVec f = rng.cnormal_vec(3);
      double closed = dual_norm_eval(sp, f);
      double ascent = dual_norm_eval_ascent(sp, f).value;
      CHECK(std::abs(closed - ascent) <= 1e-6 * (1.0 + closed));
    }
  }
}

TEST_CASE("bipolar: dual of the dual returns the original lp norm") {
  Rng rng(13);
  for (double p : {1.5, 2.0, 4.0}) {
    RVec w = (RVec(3) << 0.7, 1.3, 2.5).finished();
    NormedSpace sp = NormedSpace::lp(3, p, w);
    NormedSpace bidual = sp.dual().dual();
    for (int t = 0; t < 100; ++t) {
      CVec x = rng.cnormal_vec(3);
      CHECK(bidual.norm(x) == doctest::Approx(sp.norm(x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("subgradients agree with finite differences away from kinks") {
  Rng rng(14);
  for (double p : {1.5, 2.0, 3.0}) {
    NormedSpace sp = NormedSpace::lp(3, p, (RVec(3) << 1.0, 2.0, 0.5).finished());
    for (int t = 0; t < 10; ++t) {
      CVec x = rng.cnormal_vec(3);
      CVec g = sp.subgradient(x);
      CVec d = rng.cnormal_vec(3);
      double h = 1e-6;
      double fd = (sp.norm(x + h * d) - sp.norm(x - h * d)) / (2.0 * h);
      CHECK(fd == doctest::Approx(re_dot(g, d)).epsilon(1e-4));
    }
  }
}

TEST_CASE("custom norm finite-difference subgradient") {
  NormedSpace ref = NormedSpace::lp(3, 3.0);
  NormedSpace cst =
      NormedSpace::custom(3, [&](const CVec& x) { return ref.norm(x); });
  Rng rng(15);
  CVec x = rng.cnormal_vec(3);
  CVec ga = ref.subgradient(x);
  CVec gf = cst.subgradient(x);
  CHECK((ga - gf).norm() <= 1e-5 * (1.0 + ga.norm()));
}

TEST_CASE("cap2 norm") {
  Couple eq(NormedSpace::lp(2, 2.0), NormedSpace::lp(2, 2.0));
  CHECK(cap2_norm(eq, cv({3.0, 4.0})) == doctest::Approx(5.0 * std::sqrt(2.0)));
  CHECK(cap2_norm(eq, CVec::Zero(2)) == 0.0);
  Couple mix(NormedSpace::lp(2, 1.0),
             NormedSpace::lp(2, std::numeric_limits<double>::infinity()));
  CHECK(cap2_norm(mix, cv({1.0, 1.0})) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("sum2 norm: equal spaces halve the vector") {
  for (double p : {1.5, 2.0, 3.0}) {
    NormedSpace sp = NormedSpace::lp(3, p);
    Couple c(sp, sp);
    Rng rng(16);
    CVec x = rng.cnormal_vec(3);
    Sum2Result r = sum2_norm(c, x);
    CHECK(r.report.converged);
    CHECK(r.value == doctest::Approx(sp.norm(x) / std::sqrt(2.0)).epsilon(1e-6));
    CHECK((r.split - 0.5 * x).norm() <= 1e-4 * x.norm());
  }
}

TEST_CASE("sum2 norm: a hugely scaled second space pushes the split to x") {
  NormedSpace s0 = NormedSpace::lp(3, 2.0);
  NormedSpace s1 = NormedSpace::lp(3, 2.0, RVec::Constant(3, 1e6));
  Couple c(s0, s1);
  Rng rng(17);
  CVec x = rng.cnormal_vec(3);
  Sum2Result r = sum2_norm(c, x);
  CHECK(std::abs(r.value - s0.norm(x)) <= 1e-3);
}

TEST_CASE("sum2 at zero and the cap2 domination") {
  Couple c(NormedSpace::lp(2, 2.0), NormedSpace::lp(2, 4.0));
  CHECK(sum2_norm(c, CVec::Zero(2)).value == 0.0);
  Rng rng(18);
  for (int t = 0; t < 10; ++t) {
    CVec x = rng.cnormal_vec(2);
    CHECK(sum2_norm(c, x).value <= cap2_norm(c, x) + 1e-9);
  }
}

TEST_CASE("diagonal operator norm") {
  NormedSpace sp = NormedSpace::lp(3, 4.0, (RVec(3) << 0.2, 1.0, 9.0).finished());
  CHECK(diag_operator_norm(sp, cv({1.0, Complex(0, -3), 2.0})) ==
        doctest::Approx(3.0));
}
