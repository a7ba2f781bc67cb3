#ifndef LOIDREAU_FIELD_HPP
#define LOIDREAU_FIELD_HPP

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "loidreau/rng.hpp"
#include "loidreau/smallfield.hpp"

#if defined(__PCLMUL__)
#include <immintrin.h>
#endif

namespace loidreau {

/// Everything needed to reconstruct a field tower F_p <= F_q <= F_{q^m}.
/// Coefficient lists are little-endian (constant term first); top_modulus
/// coefficients are F_q element indices.
struct FieldDescriptor {
  uint32_t p = 2;
  uint32_t e = 1;
  uint32_t m = 1;
  std::vector<uint16_t> base_modulus;  // over F_p, size e+1; empty when e == 1
  std::vector<uint16_t> top_modulus;   // over F_q, size m+1, monic

  bool operator==(const FieldDescriptor& o) const = default;
};

/// Validates parameters, fills in default moduli (smallest-encoding monic
/// irreducibles) and checks user-supplied ones for irreducibility.
FieldDescriptor make_field(uint32_t p, uint32_t e, uint32_t m,
                           std::vector<uint16_t> base_modulus = {},
                           std::vector<uint16_t> top_modulus = {});

// ---------------------------------------------------------------------------
// Gf2m: F_{2^m}, m <= 128, bit-packed in two words
// ---------------------------------------------------------------------------

class Gf2m {
 public:
  struct Elem {
    const Gf2m* f = nullptr;
    uint64_t w0 = 0, w1 = 0;

    Elem() = default;
    Elem(const Gf2m* field, uint64_t a, uint64_t b) : f(field), w0(a), w1(b) {}

    bool is_zero() const { return (w0 | w1) == 0; }

    friend Elem operator+(const Elem& a, const Elem& b) {
      assert(a.f && a.f == b.f);
      return {a.f, a.w0 ^ b.w0, a.w1 ^ b.w1};
    }
    friend Elem operator-(const Elem& a, const Elem& b) { return a + b; }
    Elem operator-() const { return *this; }
    friend Elem operator*(const Elem& a, const Elem& b) {
      assert(a.f && a.f == b.f);
      return a.f->mul(a, b);
    }
    friend Elem operator/(const Elem& a, const Elem& b) { return a * b.f->inv(b); }
    Elem& operator+=(const Elem& b) { return *this = *this + b; }
    Elem& operator-=(const Elem& b) { return *this = *this + b; }
    Elem& operator*=(const Elem& b) { return *this = *this * b; }
    friend bool operator==(const Elem& a, const Elem& b) {
      return a.w0 == b.w0 && a.w1 == b.w1;
    }
    friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  };

  explicit Gf2m(const FieldDescriptor& d);

  const FieldDescriptor& descriptor() const { return desc_; }
  uint32_t p() const { return 2; }
  uint32_t e() const { return 1; }
  uint32_t q() const { return 2; }
  uint32_t m() const { return m_; }
  const SmallField& base() const { return base_; }

  Elem zero() const { return {this, 0, 0}; }
  Elem one() const { return {this, 1, 0}; }
  /// The residue class of X (the canonical primitive-basis element).
  Elem gen() const { return gen_; }

  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }
  /// Total order by integer encoding sum c_i 2^i; used for canonical output.
  bool less(const Elem& a, const Elem& b) const {
    return a.w1 != b.w1 ? a.w1 < b.w1 : a.w0 < b.w0;
  }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a + b; }
  Elem neg(const Elem& a) const { return a; }

  Elem mul(const Elem& a, const Elem& b) const {
    uint64_t prod[4];
    clmul128(a.w0, a.w1, b.w0, b.w1, prod);
    Elem r{this, 0, 0};
    reduce(prod, r);
    return r;
  }

  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, uint64_t n) const;

  /// x^(q^s); s is interpreted mod m, so negative s is the inverse map.
  Elem frobenius(const Elem& x, long long s) const {
    long long r = s % (long long)m_;
    if (r < 0) r += m_;
    if (r == 0) return x;
    const std::array<uint64_t, 2>* rows = &frob_[size_t(r) * m_];
    Elem acc{this, 0, 0};
    uint64_t bits = x.w0;
    while (bits) {
      int i = __builtin_ctzll(bits);
      bits &= bits - 1;
      acc.w0 ^= rows[i][0];
      acc.w1 ^= rows[i][1];
    }
    bits = x.w1;
    while (bits) {
      int i = 64 + __builtin_ctzll(bits);
      bits &= bits - 1;
      acc.w0 ^= rows[i][0];
      acc.w1 ^= rows[i][1];
    }
    return acc;
  }

  /// True iff x lies in F_{q^d} for some proper divisor d of m.
  bool in_proper_subfield(const Elem& x) const {
    for (uint32_t d : subfield_checks_)
      if (frobenius(x, d) == x) return true;
    return false;
  }

  uint16_t coeff(const Elem& a, uint32_t i) const {
    assert(i < m_);
    return i < 64 ? (a.w0 >> i) & 1 : (a.w1 >> (i - 64)) & 1;
  }
  Elem from_coeffs(const std::vector<uint16_t>& c) const;
  std::vector<uint16_t> coeffs(const Elem& a) const {
    std::vector<uint16_t> r(m_);
    for (uint32_t i = 0; i < m_; ++i) r[i] = coeff(a, i);
    return r;
  }

  Elem random_element(Rng& rng) const {
    Elem r{this, rng.next() & mask0_, 0};
    if (m_ > 64) r.w1 = rng.next() & mask1_;
    return r;
  }
  Elem random_nonzero(Rng& rng) const {
    for (;;) {
      Elem r = random_element(rng);
      if (!r.is_zero()) return r;
    }
  }
  Elem random_outside_subfields(Rng& rng) const {
    if (m_ == 1) throw std::domain_error("no element outside subfields when m = 1");
    for (;;) {
      Elem r = random_element(rng);
      if (!in_proper_subfield(r)) return r;
    }
  }

 private:
  static void clmul64(uint64_t a, uint64_t b, uint64_t& lo, uint64_t& hi) {
#if defined(__PCLMUL__)
    __m128i va = _mm_set_epi64x(0, (long long)a);
    __m128i vb = _mm_set_epi64x(0, (long long)b);
    __m128i t = _mm_clmulepi64_si128(va, vb, 0x00);
    lo = (uint64_t)_mm_cvtsi128_si64(t);
    hi = (uint64_t)_mm_cvtsi128_si64(_mm_srli_si128(t, 8));
#else
    // 4-bit windowed comb
    uint64_t tl[16], th[16];
    tl[0] = 0;
    th[0] = 0;
    tl[1] = a;
    th[1] = 0;
    for (int i = 2; i < 16; i += 2) {
      th[i] = (th[i / 2] << 1) | (tl[i / 2] >> 63);
      tl[i] = tl[i / 2] << 1;
      tl[i + 1] = tl[i] ^ a;
      th[i + 1] = th[i];
    }
    lo = 0;
    hi = 0;
    for (int k = 15; k >= 0; --k) {
      hi = (hi << 4) | (lo >> 60);
      lo <<= 4;
      unsigned idx = (b >> (4 * k)) & 15;
      lo ^= tl[idx];
      hi ^= th[idx];
    }
#endif
  }

  static void clmul128(uint64_t a0, uint64_t a1, uint64_t b0, uint64_t b1, uint64_t r[4]) {
    uint64_t x0, x1, y0, y1;
    clmul64(a0, b0, r[0], r[1]);
    clmul64(a1, b1, r[2], r[3]);
    clmul64(a0, b1, x0, x1);
    clmul64(a1, b0, y0, y1);
    r[1] ^= x0 ^ y0;
    r[2] ^= x1 ^ y1;
  }

  // reduces a product of degree <= 2m-2 modulo x^m + tail
  void reduce(uint64_t r[4], Elem& out) const;

  FieldDescriptor desc_;
  SmallField base_;
  uint32_t m_;
  uint64_t tail_[2];  // modulus - x^m, degree < m
  int tail_deg_;
  uint64_t mask0_, mask1_;  // low-m-bit mask
  Elem gen_;
  std::vector<std::array<uint64_t, 2>> frob_;  // m matrices, row-major by shift
  std::vector<uint32_t> subfield_checks_;      // m/r for prime r | m
};

// ---------------------------------------------------------------------------
// Fqm: F_{q^m} for any prime power q = p^e <= 2^16; dense coefficients
// ---------------------------------------------------------------------------

class Fqm {
 public:
  struct Elem {
    const Fqm* f = nullptr;
    std::vector<uint16_t> c;  // size m, F_q element indices

    Elem() = default;
    Elem(const Fqm* field, std::vector<uint16_t> v) : f(field), c(std::move(v)) {}

    bool is_zero() const {
      for (auto x : c)
        if (x) return false;
      return true;
    }

    friend Elem operator+(const Elem& a, const Elem& b) { return a.f->add(a, b); }
    friend Elem operator-(const Elem& a, const Elem& b) { return a.f->sub(a, b); }
    Elem operator-() const { return f->neg(*this); }
    friend Elem operator*(const Elem& a, const Elem& b) { return a.f->mul(a, b); }
    friend Elem operator/(const Elem& a, const Elem& b) { return a.f->div(a, b); }
    Elem& operator+=(const Elem& b) { return *this = *this + b; }
    Elem& operator-=(const Elem& b) { return *this = *this - b; }
    Elem& operator*=(const Elem& b) { return *this = *this * b; }
    friend bool operator==(const Elem& a, const Elem& b) { return a.c == b.c; }
    friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  };

  explicit Fqm(const FieldDescriptor& d);

  const FieldDescriptor& descriptor() const { return desc_; }
  uint32_t p() const { return base_.p(); }
  uint32_t e() const { return base_.e(); }
  uint32_t q() const { return base_.q(); }
  uint32_t m() const { return m_; }
  const SmallField& base() const { return base_; }

  Elem zero() const { return {this, std::vector<uint16_t>(m_, 0)}; }
  Elem one() const {
    std::vector<uint16_t> v(m_, 0);
    v[0] = 1;
    return {this, std::move(v)};
  }
  Elem gen() const { return gen_; }

  bool is_zero(const Elem& a) const { return a.is_zero(); }
  bool equal(const Elem& a, const Elem& b) const { return a.c == b.c; }
  bool less(const Elem& a, const Elem& b) const {
    for (uint32_t i = m_; i-- > 0;)
      if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (uint32_t i = 0; i < m_; ++i) r.c[i] = base_.add(r.c[i], b.c[i]);
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (uint32_t i = 0; i < m_; ++i) r.c[i] = base_.sub(r.c[i], b.c[i]);
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& x : r.c) x = base_.neg(x);
    return r;
  }

  Elem mul(const Elem& a, const Elem& b) const;
  Elem inv(const Elem& a) const;
  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, uint64_t n) const;

  Elem frobenius(const Elem& x, long long s) const;

  bool in_proper_subfield(const Elem& x) const {
    for (uint32_t d : subfield_checks_)
      if (frobenius(x, d) == x) return true;
    return false;
  }

  uint16_t coeff(const Elem& a, uint32_t i) const { return a.c[i]; }
  Elem from_coeffs(const std::vector<uint16_t>& c) const;
  std::vector<uint16_t> coeffs(const Elem& a) const { return a.c; }

  Elem random_element(Rng& rng) const {
    std::vector<uint16_t> v(m_);
    for (auto& x : v) x = uint16_t(rng.below(q()));
    return {this, std::move(v)};
  }
  Elem random_nonzero(Rng& rng) const {
    for (;;) {
      Elem r = random_element(rng);
      if (!r.is_zero()) return r;
    }
  }
  Elem random_outside_subfields(Rng& rng) const {
    if (m_ == 1) throw std::domain_error("no element outside subfields when m = 1");
    for (;;) {
      Elem r = random_element(rng);
      if (!in_proper_subfield(r)) return r;
    }
  }

 private:
  FieldDescriptor desc_;
  SmallField base_;
  uint32_t m_;
  std::vector<uint16_t> top_;  // monic, size m+1
  Elem gen_;
  std::vector<uint16_t> frob_;  // m matrices of m x m entries
  std::vector<uint32_t> subfield_checks_;
};

/// Dispatches to the fast characteristic-2 backend when possible. Both
/// branches instantiate the same templated pipeline.
template <class Fn>
decltype(auto) with_field(const FieldDescriptor& d, Fn&& fn) {
  if (d.p == 2 && d.e == 1 && d.m <= 128) {
    Gf2m f(d);
    return fn(f);
  }
  Fqm f(d);
  return fn(f);
}

}  // namespace loidreau

#endif
