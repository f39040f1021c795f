#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <random>

#include "lexaudit/error.hpp"
#include "lexaudit/stats.hpp"
#include "oracles.hpp"

using namespace lexaudit;
using doctest::Approx;

TEST_SUITE("stats") {
  TEST_CASE("goodness of fit, uniform") {
    const auto r = chi2_gof({54, 12});
    CHECK(r.statistic == Approx(26.7273).epsilon(1e-5));
    CHECK(r.df == 1);
    CHECK(r.p < 0.001);
    CHECK(chi2_gof({1344, 1128}).statistic == Approx(18.8738).epsilon(1e-5));
    const auto s = chi2_gof({71, 50});
    CHECK(s.statistic == Approx(3.6446).epsilon(1e-4));
    CHECK(s.p == Approx(0.05625).epsilon(1e-3));
    CHECK(chi2_gof({10, 10, 10}).statistic == 0.0);
    CHECK(chi2_gof({10, 10, 10}).p == 1.0);
    CHECK(chi2_gof({5, 7, 9}).df == 2);
  }

  TEST_CASE("goodness of fit, weighted") {
    const double obs[] = {30, 70};
    const double prop[] = {0.25, 0.75};
    // (30-25)^2/25 + (70-75)^2/75
    CHECK(chi2_gof(obs, prop).statistic == Approx(1.0 + 1.0 / 3.0));
    const double bad_sum[] = {0.5, 0.6};
    CHECK_THROWS_AS(chi2_gof(obs, bad_sum), ValidationError);
    const double zero[] = {0.0, 1.0};
    CHECK_THROWS_AS(chi2_gof(obs, zero), ValidationError);
  }

  TEST_CASE("goodness of fit rejects bad counts") {
    CHECK_THROWS_AS(chi2_gof({5}), ValidationError);
    CHECK_THROWS_AS(chi2_gof({0, 0}), ValidationError);
    CHECK_THROWS_AS(chi2_gof({-1, 3}), ValidationError);
  }

  TEST_CASE("2x2 with and without Yates") {
    const std::array<std::array<double, 2>, 2> t{{{54, 12}, {1344, 1128}}};
    const auto y = chi2_2x2(t);
    CHECK(y.corrected);
    CHECK(y.statistic == Approx(18.4827).epsilon(1e-5));
    CHECK(chi2_2x2(t, false).statistic == Approx(19.5764).epsilon(1e-5));
    // Independent table: correction floors at zero.
    CHECK(chi2_2x2({{{10, 10}, {10, 10}}}).statistic == 0.0);
    CHECK_THROWS_AS(chi2_2x2({{{0, 0}, {1, 1}}}), ValidationError);
  }

  TEST_CASE("upper incomplete gamma against boost") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> a(0.05, 60.0), x(0.0, 120.0);
    for (int i = 0; i < 2000; ++i) {
      const double aa = a(rng), xx = x(rng);
      const double want = boost::math::gamma_q(aa, xx);
      INFO("a=" << aa << " x=" << xx);
      CHECK(gamma_q(aa, xx) == Approx(want).epsilon(1e-9).scale(1e-300));
    }
  }

  TEST_CASE("chi-square p with one df is erfc(sqrt(x/2))") {
    for (double x : {0.001, 0.5, 3.6446, 10.0, 26.73, 100.0})
      CHECK(chi2_p(x, 1) == Approx(std::erfc(std::sqrt(x / 2.0))).epsilon(1e-10));
    for (double x : {0.1, 2.0, 7.0, 40.0}) CHECK(chi2_p(x, 2) == Approx(std::exp(-x / 2.0)).epsilon(1e-10));
    CHECK(chi2_p(0.0, 3) == 1.0);
    CHECK_THROWS_AS(chi2_p(1.0, 0), ValidationError);
    CHECK_THROWS_AS(gamma_q(0.0, 1.0), ValidationError);
  }

  TEST_CASE("Krippendorff alpha") {
    RatingsMatrix unanimous;
    for (const char* item : {"a", "b", "c"})
      for (const char* r : {"r1", "r2", "r3"}) unanimous.set(item, r, "yes");
    CHECK(kripp_alpha(unanimous) == 1.0);

    RatingsMatrix two;
    two.set("t1", "r1", "x");
    two.set("t1", "r2", "y");
    two.set("t2", "r1", "x");
    two.set("t2", "r2", "y");
    CHECK(kripp_alpha(two) == Approx(-0.5).epsilon(1e-12));

    RatingsMatrix lone;
    lone.set("t1", "r1", "yes");
    CHECK_THROWS_AS(kripp_alpha(lone), ValidationError);
  }

  TEST_CASE("Krippendorff worked example with missing values") {
    // Four observers, twelve units; 0 marks a missing cell.
    const std::vector<std::vector<int>> v{{1, 2, 3, 3, 2, 1, 4, 1, 2, 0, 0, 0},
                                          {1, 2, 3, 3, 2, 2, 4, 1, 2, 5, 0, 3},
                                          {0, 3, 3, 3, 2, 3, 4, 2, 2, 5, 1, 0},
                                          {1, 2, 3, 3, 2, 4, 4, 1, 2, 5, 1, 0}};
    RatingsMatrix m;
    for (std::size_t o = 0; o < v.size(); ++o)
      for (std::size_t u = 0; u < v[o].size(); ++u)
        if (v[o][u]) m.set("u" + std::to_string(u), "o" + std::to_string(o), std::to_string(v[o][u]));
    CHECK(kripp_alpha(m) == Approx(0.743421052631579).epsilon(1e-12));
    CHECK(oracle::alpha_by_pairs(m) == Approx(0.743421052631579).epsilon(1e-12));
  }

  TEST_CASE("alpha agrees with pair enumeration") {
    std::mt19937 rng(17);
    for (int i = 0; i < 100; ++i) {
      const auto m = oracle::random_ratings(rng);
      CHECK(kripp_alpha(m) == Approx(oracle::alpha_by_pairs(m)).epsilon(1e-9));
    }
  }
}
