#include "loidreau/distinguisher.hpp"

#include "doctest.h"
#include "loidreau/field.hpp"

using namespace loidreau;

TEST_CASE("frobenius_sum_dim") {
  Gf2m f(make_field(2, 1, 16));
  Rng rng(200);
  auto c = random_code(f, 12, 4, rng);
  CHECK(frobenius_sum_dim(c, 0) == 4);

  // Gabidulin code: k + s for any s <= n - k
  auto a = random_full_rank_vector(f, 12, rng);
  auto gab = gab_code(GabidulinCode<Gf2m>(a, 4));
  for (size_t s = 0; s <= 8; ++s) CHECK(frobenius_sum_dim(gab, s) == 4 + s);

  // monotone and capped at n
  size_t prev = 0;
  for (size_t s = 0; s < 16; ++s) {
    size_t d = frobenius_sum_dim(c, s);
    CHECK(d >= prev);
    CHECK(d <= 12);
    prev = d;
  }
}

TEST_CASE("random codes reach the full expected dimension") {
  Gf2m f(make_field(2, 1, 20));
  Rng rng(201);
  int hits = 0;
  for (int i = 0; i < 200; ++i) {
    auto c = random_code(f, 20, 8, rng);
    if (frobenius_sum_dim(c, 1) == 16) ++hits;
  }
  CHECK(hits >= 198);
}

TEST_CASE("distinguishable_range") {
  auto r30 = distinguishable_range(30, 2);
  REQUIRE(r30.has_value());
  CHECK(r30->first == 17);
  CHECK(r30->second == 27);

  auto r50 = distinguishable_range(50, 2);
  REQUIRE(r50.has_value());
  CHECK(r50->first == 27);  // 26 < k
  CHECK(r50->second == 47);  // k < 48

  CHECK_FALSE(distinguishable_range(10, 9).has_value());
}

TEST_CASE("distinguish separates Loidreau keys from random codes") {
  Gf2m f(make_field(2, 1, 30));
  Rng rng(202);
  SchemeParams prm(30, 17, 2);

  for (int i = 0; i < 5; ++i) {
    auto [pk, sk] = keygen(f, prm, rng);
    auto rep = distinguish(pk);
    CHECK(rep.dual_dim == 13);
    CHECK(rep.structured_bound == 28);
    CHECK(rep.random_expect == 30);
    CHECK(rep.observed_dim <= 28);
    CHECK(rep.verdict == Verdict::STRUCTURED);
  }

  int random_like = 0;
  for (int i = 0; i < 20; ++i) {
    auto c = random_code(f, 30, 17, rng);
    auto rep = distinguish(c, 2);
    CHECK(rep.observed_dim <= rep.random_expect);
    if (rep.verdict == Verdict::RANDOM_LIKE && rep.observed_dim == 30) ++random_like;
  }
  CHECK(random_like == 20);

  // k outside the window: INCONCLUSIVE regardless of structure
  auto c = random_code(f, 30, 14, rng);
  CHECK(distinguish(c, 2).verdict == Verdict::INCONCLUSIVE);
  SchemeParams prm_low(30, 14, 2);
  auto [pk_low, sk_low] = keygen(f, prm_low, rng);
  CHECK(distinguish(pk_low).verdict == Verdict::INCONCLUSIVE);
}

TEST_CASE("general lambda bound on generated keys") {
  Gf2m f(make_field(2, 1, 40));
  Rng rng(203);
  for (size_t lambda : {2u, 3u, 4u}) {
    SchemeParams prm(36, 36 - 2 * lambda, lambda);  // t = 1
    prm.check_field(f);
    for (int i = 0; i < 3; ++i) {
      auto [pk, sk] = keygen(f, prm, rng);
      size_t nk = prm.n - prm.k;
      CHECK(frobenius_sum_dim(pk.code().dual(), lambda) <= lambda * nk + lambda);
    }
  }
}

TEST_CASE("monte carlo dimension harness") {
  Gf2m f(make_field(2, 1, 20));
  Rng rng(204);
  // a = 0 holds by definition
  CHECK(monte_carlo_random_dim(f, 20, 8, 1, 0, 20, rng) == 1.0);
  // a = 1: drops are rare (theory: ~ q^-m = 2^-20)
  CHECK(monte_carlo_random_dim(f, 20, 8, 1, 1, 500, rng) <= 0.01);
  // structured (Gabidulin) inputs always drop to k + s
  auto sampler = [&] {
    return gab_code(GabidulinCode<Gf2m>(random_full_rank_vector(f, 20, rng), 8));
  };
  size_t a_max = std::min<size_t>(20, 2 * 8) - (8 + 1);
  CHECK(monte_carlo_dim<Gf2m>(20, 8, 1, a_max, 50, sampler) == 1.0);
  CHECK_THROWS_AS(monte_carlo_random_dim(f, 20, 4, 5, 0, 5, rng), std::invalid_argument);
}

TEST_CASE("gaussian binomials") {
  CHECK(gaussian_binomial(5, 0, 2) == 1);
  CHECK(gaussian_binomial(5, 5, 2) == 1);
  CHECK(gaussian_binomial(2, 1, 2) == 3);  // three lines in F_2^2
  CHECK(gaussian_binomial(4, 2, 2) == 35);
  CHECK_THROWS_AS(gaussian_binomial(3, 4, 2), std::invalid_argument);

  // Pascal-type recurrence [a b]_q = [a-1 b-1]_q + q^b [a-1 b]_q
  for (unsigned q : {2u, 3u}) {
    for (unsigned a = 1; a <= 10; ++a)
      for (unsigned b = 1; b < a; ++b) {
        BigInt lhs = gaussian_binomial(a, b, q);
        BigInt rhs = gaussian_binomial(a - 1, b - 1, q) +
                     boost::multiprecision::pow(BigInt(q), b) * gaussian_binomial(a - 1, b, q);
        CHECK(lhs == rhs);
      }
  }

  for (unsigned q : {2u, 3u})
    for (unsigned n = 1; n <= 8; ++n)
      for (unsigned k = 0; k <= n; ++k) CHECK(gb_bound_check(n, k, q));
}
