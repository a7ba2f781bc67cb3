#include "loidreau/field.hpp"

#include <set>

#include "doctest.h"
#include "loidreau/rng.hpp"

using namespace loidreau;

namespace {

// Exercised for both backends over the same descriptor.
template <class F>
void field_axioms(const F& f, Rng& rng, int rounds) {
  for (int i = 0; i < rounds; ++i) {
    auto a = f.random_element(rng);
    auto b = f.random_element(rng);
    auto c = f.random_element(rng);
    CHECK(f.equal(f.add(a, b), f.add(b, a)));
    CHECK(f.equal(f.mul(a, b), f.mul(b, a)));
    CHECK(f.equal(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c))));
    CHECK(f.equal(f.add(a, f.neg(a)), f.zero()));
    if (!f.is_zero(a)) CHECK(f.equal(f.mul(a, f.inv(a)), f.one()));
  }
}

template <class F>
void frobenius_properties(const F& f, Rng& rng, int rounds) {
  const long long m = f.m();
  for (int i = 0; i < rounds; ++i) {
    auto x = f.random_element(rng);
    auto y = f.random_element(rng);
    long long s = (long long)rng.below(2 * m) - m;
    long long t = (long long)rng.below(2 * m) - m;
    CHECK(f.equal(f.frobenius(f.frobenius(x, s), t), f.frobenius(x, s + t)));
    CHECK(f.equal(f.frobenius(f.add(x, y), s), f.add(f.frobenius(x, s), f.frobenius(y, s))));
    CHECK(f.equal(f.frobenius(f.mul(x, y), s), f.mul(f.frobenius(x, s), f.frobenius(y, s))));
    CHECK(f.equal(f.frobenius(x, m), x));
    // x^(q^m - 1) = 1, computed as frob(x, m) / x
    if (!f.is_zero(x)) CHECK(f.equal(f.mul(f.frobenius(x, m), f.inv(x)), f.one()));
  }
}

template <class F>
void orbit_matches_subfield_test(const F& f, Rng& rng, int rounds) {
  for (int i = 0; i < rounds; ++i) {
    auto x = f.random_element(rng);
    size_t orbit = 1;
    auto y = f.frobenius(x, 1);
    while (!f.equal(y, x)) {
      ++orbit;
      y = f.frobenius(y, 1);
    }
    CHECK(f.in_proper_subfield(x) == (orbit < f.m()));
  }
}

}  // namespace

TEST_CASE("make_field validation") {
  auto d8 = make_field(2, 1, 3, {}, {1, 1, 0, 1});
  CHECK(d8.top_modulus == std::vector<uint16_t>{1, 1, 0, 1});
  CHECK(d8.base_modulus.empty());

  auto d16 = make_field(2, 1, 4, {}, {1, 1, 0, 0, 1});
  CHECK(d16.m == 4);

  // x^3 + x^2 + x + 1 = (x+1)(x^2+1) is reducible
  CHECK_THROWS_AS(make_field(2, 1, 3, {}, {1, 1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_field(6, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_field(2, 1, 0), std::invalid_argument);

  // defaults are deterministic and match the explicit spellings above
  CHECK(make_field(2, 1, 3).top_modulus == d8.top_modulus);
  CHECK(make_field(2, 1, 4).top_modulus == d16.top_modulus);
}

TEST_CASE("GF(8) arithmetic oracle values") {
  Gf2m f(make_field(2, 1, 3));
  auto alpha = f.gen();
  // alpha * alpha^2 = alpha^3 = alpha + 1 (reduce x^3 mod x^3+x+1)
  auto a3 = f.mul(alpha, f.mul(alpha, alpha));
  CHECK(f.coeffs(a3) == std::vector<uint16_t>{1, 1, 0});
  // frobenius: squaring
  CHECK(f.equal(f.frobenius(alpha, 1), f.mul(alpha, alpha)));
  CHECK(f.equal(f.frobenius(alpha, 0), alpha));
  // alpha^(q^-1) = alpha^4 = alpha^2 + alpha, and its square is alpha again
  auto am1 = f.frobenius(alpha, -1);
  CHECK(f.coeffs(am1) == std::vector<uint16_t>{0, 1, 1});
  CHECK(f.equal(f.frobenius(am1, 1), alpha));
  CHECK(f.equal(am1, f.pow(alpha, 4)));
}

TEST_CASE("GF(4): characteristic 2") {
  Gf2m f(make_field(2, 1, 2));
  auto w = f.gen();
  CHECK(f.is_zero(f.add(w, w)));
  // w^2 = w + 1 for the default modulus x^2+x+1
  CHECK(f.coeffs(f.mul(w, w)) == std::vector<uint16_t>{1, 1});
}

TEST_CASE("subfield membership") {
  Gf2m f16(make_field(2, 1, 4));
  // fixed points of x -> x^4 form F_4; x^2+x is one of them
  auto u = f16.from_coeffs({0, 1, 1, 0});
  CHECK(f16.equal(f16.frobenius(u, 2), u));
  CHECK(f16.in_proper_subfield(u));
  // enumerate all 16 elements; exactly 4 are fixed by x -> x^4
  int fixed = 0;
  for (uint16_t v = 0; v < 16; ++v) {
    auto x = f16.from_coeffs({uint16_t(v & 1), uint16_t((v >> 1) & 1), uint16_t((v >> 2) & 1),
                              uint16_t((v >> 3) & 1)});
    bool in_f4 = f16.equal(f16.frobenius(x, 2), x);
    if (in_f4) ++fixed;
    CHECK(f16.in_proper_subfield(x) == in_f4);  // F_2 subset F_4, so F_4 covers both checks
  }
  CHECK(fixed == 4);

  Gf2m f8(make_field(2, 1, 3));
  CHECK_FALSE(f8.in_proper_subfield(f8.gen()));
  CHECK(f8.in_proper_subfield(f8.one()));
  CHECK(f8.in_proper_subfield(f8.zero()));
}

TEST_CASE("random sampling") {
  Gf2m f(make_field(2, 1, 30));
  Rng r1(0), r2(0);
  CHECK(f.equal(f.random_element(r1), f.random_element(r2)));

  Rng rng(7);
  for (int i = 0; i < 10000; ++i) CHECK_FALSE(f.is_zero(f.random_nonzero(rng)));

  Gf2m f16(make_field(2, 1, 4));
  for (int i = 0; i < 200; ++i) {
    auto g = f16.random_outside_subfields(rng);
    CHECK_FALSE(f16.equal(f16.frobenius(g, 2), g));
    CHECK_FALSE(f16.equal(f16.frobenius(g, 1), g));
  }

  Gf2m f2(make_field(2, 1, 1));
  CHECK_THROWS_AS(f2.random_outside_subfields(rng), std::domain_error);
}

TEST_CASE("Gf2m axioms and frobenius at attack sizes") {
  Rng rng(42);
  for (uint32_t m : {8u, 30u, 50u, 63u, 64u, 65u, 120u, 127u, 128u}) {
    CAPTURE(m);
    Gf2m f(make_field(2, 1, m));
    field_axioms(f, rng, 25);
    frobenius_properties(f, rng, 10);
  }
  Gf2m f12(make_field(2, 1, 12));
  orbit_matches_subfield_test(f12, rng, 50);
}

TEST_CASE("generic backend axioms: q = 3, 4, 9") {
  Rng rng(43);
  Fqm f3(make_field(3, 1, 4));
  field_axioms(f3, rng, 25);
  frobenius_properties(f3, rng, 10);
  orbit_matches_subfield_test(f3, rng, 30);

  Fqm f4(make_field(2, 2, 3));  // tower: F_2 < F_4 < F_4^3
  CHECK(f4.q() == 4);
  field_axioms(f4, rng, 25);
  frobenius_properties(f4, rng, 10);

  Fqm f9(make_field(3, 2, 2));
  CHECK(f9.q() == 9);
  field_axioms(f9, rng, 25);
  frobenius_properties(f9, rng, 10);
}

TEST_CASE("frobenius is F_q-linear for q > 2") {
  Rng rng(11);
  Fqm f(make_field(3, 1, 5));
  for (int i = 0; i < 20; ++i) {
    auto x = f.random_element(rng);
    // scalars from F_q embed as degree-0 elements and are Frobenius-fixed
    auto c = f.from_coeffs({uint16_t(rng.below(3))});
    CHECK(f.equal(f.frobenius(c, 1), c));
    CHECK(f.equal(f.frobenius(f.mul(c, x), 1), f.mul(c, f.frobenius(x, 1))));
  }
}

TEST_CASE("backends agree on q = 2") {
  auto d = make_field(2, 1, 16);
  Gf2m fast(d);
  Fqm slow(d);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto ca = fast.coeffs(fast.random_element(rng));
    auto cb = fast.coeffs(fast.random_element(rng));
    auto a1 = fast.from_coeffs(ca), b1 = fast.from_coeffs(cb);
    auto a2 = slow.from_coeffs(ca), b2 = slow.from_coeffs(cb);
    CHECK(fast.coeffs(fast.mul(a1, b1)) == slow.coeffs(slow.mul(a2, b2)));
    CHECK(fast.coeffs(fast.add(a1, b1)) == slow.coeffs(slow.add(a2, b2)));
    if (!fast.is_zero(a1)) CHECK(fast.coeffs(fast.inv(a1)) == slow.coeffs(slow.inv(a2)));
    CHECK(fast.coeffs(fast.frobenius(a1, 5)) == slow.coeffs(slow.frobenius(a2, 5)));
    CHECK(fast.coeffs(fast.frobenius(a1, -3)) == slow.coeffs(slow.frobenius(a2, -3)));
  }
}

TEST_CASE("exhaustive multiplicative order in GF(256)") {
  Gf2m f(make_field(2, 1, 8));
  for (uint32_t v = 1; v < 256; ++v) {
    std::vector<uint16_t> c(8);
    for (int i = 0; i < 8; ++i) c[i] = (v >> i) & 1;
    auto x = f.from_coeffs(c);
    CHECK(f.equal(f.pow(x, 255), f.one()));
  }
}

TEST_CASE("element ordering is a strict total order on small fields") {
  Gf2m f(make_field(2, 1, 4));
  std::set<uint32_t> seen;
  std::vector<Gf2m::Elem> all;
  for (uint16_t v = 0; v < 16; ++v)
    all.push_back(f.from_coeffs({uint16_t(v & 1), uint16_t((v >> 1) & 1), uint16_t((v >> 2) & 1),
                                 uint16_t((v >> 3) & 1)}));
  for (auto& a : all)
    for (auto& b : all) {
      if (f.equal(a, b)) {
        CHECK_FALSE(f.less(a, b));
      } else {
        CHECK(f.less(a, b) != f.less(b, a));
      }
    }
}
