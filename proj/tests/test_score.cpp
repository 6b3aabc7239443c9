#include "approvalkit/score.hpp"

#include <boost/rational.hpp>
#include <catch_amalgamated.hpp>

#include <random>

using approvalkit::Score;

TEST_CASE("unit fractions sum exactly", "[score]") {
  const auto total = Score(1, 2) + Score(1, 3) + Score(1, 6);
  CHECK(total == Score(1));
  CHECK(total.to_string() == "1/1");
}

TEST_CASE("scores are kept in lowest terms with a positive denominator", "[score]") {
  const Score s(6, -4);
  CHECK(s.numerator() == -3);
  CHECK(s.denominator() == 2);
  CHECK(Score(0, 7).to_string() == "0/1");
  CHECK_THROWS_AS(Score(1, 0), std::invalid_argument);
}

TEST_CASE("ordering compares values, not representations", "[score]") {
  CHECK(Score(1, 3) < Score(1, 2));
  CHECK(Score(7, 2) > Score(3));
  CHECK(Score(2, 4) == Score(1, 2));
  CHECK(Score(-1, 2) < Score(0));
}

TEST_CASE("overflow is reported, never wrapped", "[score]") {
  const Score big(INT64_MAX);
  CHECK_THROWS_AS(big + Score(1), std::overflow_error);
  CHECK_THROWS_AS(big * Score(2), std::overflow_error);
  CHECK_THROWS_AS(Score(1) / Score(0), std::domain_error);
}

TEST_CASE("parse_score accepts integers and fractions", "[score]") {
  CHECK(approvalkit::parse_score("3") == Score(3));
  CHECK(approvalkit::parse_score("6/4") == Score(3, 2));
  CHECK(approvalkit::parse_score("-1/2") == Score(-1, 2));
  CHECK_THROWS_AS(approvalkit::parse_score("1/0"), approvalkit::InputError);
  CHECK_THROWS_AS(approvalkit::parse_score("x"), approvalkit::InputError);
  CHECK_THROWS_AS(approvalkit::parse_score("1/"), approvalkit::InputError);
  CHECK_THROWS_AS(approvalkit::parse_score("2.5"), approvalkit::InputError);
}

TEST_CASE("arithmetic agrees with boost::rational on random small fractions", "[score][prop]") {
  using Q = boost::rational<long long>;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> num(-50, 50);
  std::uniform_int_distribution<long long> den(1, 30);
  for (int trial = 0; trial < 2000; ++trial) {
    const long long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    const Q expected_sum = Q(a, b) + Q(c, d);
    const Q expected_product = Q(a, b) * Q(c, d);
    const auto sum = Score(a, b) + Score(c, d);
    const auto product = Score(a, b) * Score(c, d);
    REQUIRE(sum.numerator() == expected_sum.numerator());
    REQUIRE(sum.denominator() == expected_sum.denominator());
    REQUIRE(product.numerator() == expected_product.numerator());
    REQUIRE(product.denominator() == expected_product.denominator());
    REQUIRE((Score(a, b) < Score(c, d)) == (Q(a, b) < Q(c, d)));
  }
}
