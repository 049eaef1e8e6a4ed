#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "exchlab/generators.hpp"
#include "exchlab/kernels.hpp"
#include "exchlab/statistics.hpp"

using namespace exchlab;

namespace {

ArrayRow make_row(std::vector<double> v) {
  ArrayRow r;
  r.values = std::move(v);
  return r;
}

ArrayRow random_normal_row(std::uint64_t m, std::uint64_t rep) {
  auto s = rng::derive_stream(101, m, rep);
  return gen_iid_symmetric(IidDist::std_normal, m, s);
}

}  // namespace

TEST_CASE("schedule k rule") {
  ScheduleSpec sched;
  sched.gamma = 0.5;
  sched.m_values = {10, 100, 1000};
  sched.validate();
  CHECK(sched.k_for(10) == 5);
  CHECK(sched.k_for(1000) == 500);

  SUBCASE("k stays in [1, m) and tracks gamma within 1/m") {
    for (double gamma : {0.0, 0.01, 0.25, 1.0 / 3.0, 0.5, 0.9, 0.999}) {
      ScheduleSpec s;
      s.gamma = gamma;
      for (std::uint64_t m = 2; m <= 5000; m = m * 3 / 2 + 1) {
        const auto k = s.k_for(m);
        CHECK(k >= 1);
        CHECK(k < m);
        CHECK(std::fabs(double(k) / double(m) - gamma) <= 1.0 / double(m));
      }
    }
  }
  SUBCASE("validation rejects bad schedules") {
    ScheduleSpec bad;
    bad.m_values = {10, 10};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.m_values = {10, 20};
    bad.gamma = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.gamma = 0.5;
    CHECK_NOTHROW(bad.validate());
  }
}

TEST_CASE("statistic kind targets") {
  StatisticKind full{StatKind::full_sum, 0.0};
  CHECK(full.target_sigma2() == 1.0);
  StatisticKind weber{StatKind::weber, 0.5};
  CHECK(weber.target_sigma2() == 0.5);
  StatisticKind bad{StatKind::weber, 1.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("sign_flip_tail") {
  const auto row = make_row({1, 2, -3, 4});
  SUBCASE("flips entries past k") {
    const auto y = sign_flip_tail(row, 2);
    CHECK(y.values == std::vector<double>{1, 2, 3, -4});
  }
  SUBCASE("k=m is the identity") {
    CHECK(sign_flip_tail(row, 4).values == row.values);
  }
  SUBCASE("zero rows stay zero") {
    const auto z = make_row({0, 0, 0});
    CHECK(sign_flip_tail(z, 1).values == z.values);
  }
  SUBCASE("involution") {
    for (std::uint64_t k = 1; k <= 4; ++k) {
      CHECK(sign_flip_tail(sign_flip_tail(row, k), k).values == row.values);
    }
    const auto r = random_normal_row(257, 0);
    CHECK(sign_flip_tail(sign_flip_tail(r, 100), 100).values == r.values);
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(sign_flip_tail(row, 0), std::invalid_argument);
    CHECK_THROWS_AS(sign_flip_tail(row, 5), std::invalid_argument);
  }
}

TEST_CASE("full_sum_statistic") {
  CHECK(full_sum_statistic(make_row({1, 1, 1, 1})) == 2.0);
  CHECK(full_sum_statistic(make_row({3, -3})) == 0.0);
  SUBCASE("zero-sum rows give zero") {
    const std::vector<double> base{1.0, -1.0, 1.0, -1.0};
    for (int r = 0; r < 20; ++r) {
      auto s = rng::derive_stream(7, 4, std::uint64_t(r));
      const auto row = gen_zero_sum_permutation(base, s);
      CHECK(std::fabs(full_sum_statistic(row)) < 1e-9);
    }
  }
  SUBCASE("negating the row negates the statistic exactly") {
    const auto r = random_normal_row(1001, 1);
    auto neg = r;
    for (auto& v : neg.values) v = -v;
    CHECK(full_sum_statistic(neg) == -full_sum_statistic(r));
  }
}

TEST_CASE("weber_statistic") {
  CHECK(weber_statistic(make_row({2, 0, 0, 0}), 1) == doctest::Approx(1.5));
  SUBCASE("constant rows give zero") {
    const auto row = make_row({2.5, 2.5, 2.5, 2.5, 2.5});
    for (std::uint64_t k = 1; k < 5; ++k) {
      CHECK(weber_statistic(row, k) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
  CHECK(weber_statistic(make_row({1, -1, 2, -2}), 2) == doctest::Approx(0.0));
  SUBCASE("k >= m rejected") {
    CHECK_THROWS_AS(weber_statistic(make_row({1, 2}), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(weber_statistic(make_row({1, 2}), 0),
                    std::invalid_argument);
  }
}

TEST_CASE("proof identity residual") {
  SUBCASE("hand example") {
    // lhs 0.5*3 + 1 = 2.5, rhs 10/4 = 2.5
    CHECK(proof_identity_residual(make_row({1, 2, 3, 4})) ==
          doctest::Approx(0.0).epsilon(1e-15));
  }
  CHECK(proof_identity_residual(make_row({0, 0, 0, 0})) == 0.0);
  SUBCASE("pure rounding on random rows") {
    double worst = 0.0;
    for (std::uint64_t rep = 0; rep < 10000; ++rep) {
      const auto row = random_normal_row(1000, rep);
      worst = std::max(worst, proof_identity_residual(row));
    }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("odd m rejected") {
    CHECK_THROWS_AS(proof_identity_residual(make_row({1, 2, 3})),
                    std::invalid_argument);
  }
}

TEST_CASE("truncate_to_even") {
  CHECK(truncate_to_even(make_row({1, 2, 3})).values ==
        std::vector<double>{1, 2});
  CHECK(truncate_to_even(make_row({1, 2, 3, 4})).values ==
        std::vector<double>{1, 2, 3, 4});
  CHECK(truncate_to_even(make_row({5, 7})).values == std::vector<double>{5, 7});
  CHECK_THROWS_AS(truncate_to_even(make_row({1})), std::invalid_argument);
}

TEST_CASE("pivotal equality: weber of the flipped row is the scaled mean") {
  // weber(Y, m/2) with Y = sign_flip_tail(X, m/2) equals
  // sqrt(m/2) * (1/m) * sum X, to rounding
  for (std::uint64_t rep = 0; rep < 50; ++rep) {
    const auto x = random_normal_row(512, rep);
    const auto y = sign_flip_tail(x, 256);
    const double lhs = weber_statistic(y, 256);
    const double rhs =
        std::sqrt(256.0) * kernels::sum(x.span()) / double(x.m());
    const double scale = 1.0 + kernels::sum_abs(x.span()) / double(x.m());
    CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
  }
}
