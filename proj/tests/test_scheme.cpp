#include "loidreau/scheme.hpp"

#include "doctest.h"
#include "loidreau/field.hpp"

using namespace loidreau;

TEST_CASE("scheme parameter validation") {
  CHECK_THROWS_AS((SchemeParams{10, 12, 2}), std::invalid_argument);
  CHECK_THROWS_AS((SchemeParams{10, 8, 2}), std::invalid_argument);  // t = 0
  CHECK_THROWS_AS((SchemeParams{10, 4, 0}), std::invalid_argument);
  SchemeParams prm(30, 16, 2);
  CHECK(prm.t == 3);
  Gf2m small(make_field(2, 1, 8));
  CHECK_THROWS_AS(prm.check_field(small), std::invalid_argument);  // n > m
}

TEST_CASE("keygen structure") {
  Gf2m f(make_field(2, 1, 14));
  Rng rng(100);
  SchemeParams prm(12, 5, 2);  // t = 1
  auto [pk, sk] = keygen(f, prm, rng);

  CHECK(pk.g_pub.rows() == 5);
  CHECK(pk.g_pub.cols() == 12);
  CHECK(pk.g_pub.rank() == 5);

  // row space of G_pub * P is the secret Gabidulin code
  auto masked = Code<Gf2m>::from_matrix(pk.g_pub * sk.p_mat);
  auto secret = gab_code(GabidulinCode<Gf2m>(sk.b, 5));
  CHECK(masked == secret);

  // V contains 1, dim lambda, and the entries of P span exactly V
  CHECK(f.equal(sk.v_basis[0], f.one()));
  auto vspace = FqSubspace<Gf2m>::span(f, sk.v_basis);
  CHECK(vspace.dim() == 2);
  std::vector<Gf2m::Elem> entries;
  for (size_t i = 0; i < 12; ++i)
    for (size_t j = 0; j < 12; ++j) entries.push_back(sk.p_mat.at(i, j));
  CHECK(FqSubspace<Gf2m>::span(f, entries) == vspace);

  // P^T = P0 + gamma P1
  auto recon = lift_fq_matrix(f, sk.p0) + lift_fq_matrix(f, sk.p1) * [&] {
    Mat<Gf2m> s(f, 12, 12);
    for (size_t i = 0; i < 12; ++i) s.at(i, i) = sk.gamma;
    return s;
  }();
  CHECK(recon == sk.p_mat.transpose());

  // dual support: Gab_{n-k}(a) = Gab_k(b)^perp, and g = a P0, h = a P1
  CHECK(gab_code(GabidulinCode<Gf2m>(sk.a, 7)) == secret.dual());
  CHECK(sk.g == mul_vec_fqmat(sk.a, sk.p0));
  CHECK(sk.h == mul_vec_fqmat(sk.a, sk.p1));
}

TEST_CASE("encrypt and decrypt") {
  Gf2m f(make_field(2, 1, 30));
  Rng rng(101);
  SchemeParams prm(30, 16, 2);
  auto [pk, sk] = keygen(f, prm, rng);

  for (int i = 0; i < 25; ++i) {
    auto msg = random_vector(f, 16, rng);
    auto c = encrypt(pk, msg, rng);
    CHECK(rank_weight(c - msg * pk.g_pub) == prm.t);
    auto back = decrypt(sk, c);
    REQUIRE(back.has_value());
    CHECK(*back == msg);
  }

  // zero message encrypts to a pure rank-t error
  Vec<Gf2m> zero(f, 16);
  auto c0 = encrypt(pk, zero, rng);
  CHECK(rank_weight(c0) == prm.t);
  auto back0 = decrypt(sk, c0);
  REQUIRE(back0.has_value());
  CHECK(back0->is_zero());

  // randomized encryption: two ciphertexts of one message differ
  auto msg = random_vector(f, 16, rng);
  CHECK(encrypt(pk, msg, rng) != encrypt(pk, msg, rng));

  // tampering with an oversized error defeats decoding
  auto tampered = encrypt(pk, msg, rng) + random_rank_t_vector(f, 30, 14, rng);
  CHECK_FALSE(decrypt(sk, tampered).has_value());
}

TEST_CASE("masked error stays in the product space") {
  Gf2m f(make_field(2, 1, 24));
  Rng rng(102);
  SchemeParams prm(20, 10, 2);  // t = 2
  auto [pk, sk] = keygen(f, prm, rng);
  auto vspace = FqSubspace<Gf2m>::span(f, sk.v_basis);
  for (int i = 0; i < 20; ++i) {
    auto e = random_rank_t_vector(f, 20, prm.t, rng);
    auto ep = e * sk.p_mat;
    auto bound = product_space(support(e), vspace);
    CHECK(bound.dim() <= prm.t * prm.lambda);
    for (size_t j = 0; j < ep.size(); ++j) CHECK(bound.contains(ep[j]));
    CHECK(rank_weight(ep) <= prm.t * prm.lambda);
  }
}

TEST_CASE("any dual generator decomposes through P^T") {
  Gf2m f(make_field(2, 1, 16));
  Rng rng(103);
  SchemeParams prm(14, 8, 2);
  auto [pk, sk] = keygen(f, prm, rng);
  auto hsec = moore_matrix(sk.b, 8).transpose();  // parity rows of Gab_k(b), as columns

  auto hpub = pk.code().dual().basis();
  auto pinv_t = sk.p_mat.inverse()->transpose();
  auto prod = (hpub * pinv_t) * hsec;
  for (size_t i = 0; i < prod.rows(); ++i)
    for (size_t j = 0; j < prod.cols(); ++j) CHECK(f.is_zero(prod.at(i, j)));
}

TEST_CASE("dual public code is spanned by g + gamma h and its shifts") {
  Gf2m f(make_field(2, 1, 18));
  Rng rng(104);
  SchemeParams prm(15, 9, 2);
  auto [pk, sk] = keygen(f, prm, rng);
  const size_t r = prm.n - prm.k;  // 6
  Mat<Gf2m> rows(f, r, prm.n);
  auto gi = sk.g, hi = sk.h;
  for (size_t i = 0; i < r; ++i) {
    rows.set_row(i, gi + hi.scaled(sk.gamma));
    gi = gi.frobenius(1);
    hi = hi.frobenius(1);
  }
  CHECK(Code<Gf2m>::from_matrix(rows) == pk.code().dual());
}

TEST_CASE("general lambda keygen and roundtrip") {
  Gf2m f(make_field(2, 1, 26));
  Rng rng(105);
  for (size_t lambda : {1u, 3u}) {
    SchemeParams prm(24, 10, lambda);  // t = 7 (lambda 1), 2 (lambda 3)
    auto [pk, sk] = keygen(f, prm, rng);
    CHECK(sk.v_basis.size() == lambda);
    for (int i = 0; i < 5; ++i) {
      auto msg = random_vector(f, 10, rng);
      auto back = decrypt(sk, encrypt(pk, msg, rng));
      REQUIRE(back.has_value());
      CHECK(*back == msg);
    }
  }
}

TEST_CASE("keygen determinism") {
  Gf2m f(make_field(2, 1, 14));
  SchemeParams prm(12, 5, 2);
  Rng r1(7), r2(7);
  auto [pk1, sk1] = keygen(f, prm, r1);
  auto [pk2, sk2] = keygen(f, prm, r2);
  CHECK(pk1.g_pub == pk2.g_pub);
  CHECK(sk1.b == sk2.b);
  CHECK(sk1.p_mat == sk2.p_mat);
}

TEST_CASE("scheme over the generic backend (q = 3)") {
  Fqm f(make_field(3, 1, 12));
  Rng rng(106);
  SchemeParams prm(10, 4, 2);  // t = 1
  auto [pk, sk] = keygen(f, prm, rng);
  for (int i = 0; i < 5; ++i) {
    auto msg = random_vector(f, 4, rng);
    auto back = decrypt(sk, encrypt(pk, msg, rng));
    REQUIRE(back.has_value());
    CHECK(*back == msg);
  }
}
