#ifndef LOIDREAU_SMALLFIELD_HPP
#define LOIDREAU_SMALLFIELD_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace loidreau {

/// Bit-packed polynomials over GF(2); coefficient i lives in bit i of word
/// i/64. Used for modulus search and validation in characteristic 2, where
/// the dense generic representation would be needlessly slow.
namespace f2x {

using Poly = std::vector<uint64_t>;

int deg(const Poly& a);
void trim(Poly& a);
bool get(const Poly& a, int i);
void set(Poly& a, int i, bool v);
Poly shifted(const Poly& a, int s);
void add_inplace(Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);
Poly mod(Poly a, const Poly& f);
Poly gcd(Poly a, Poly b);
Poly powmod(const Poly& a, uint64_t e, const Poly& f);
bool irreducible(const Poly& f);
Poly from_indices(const std::vector<uint16_t>& coeffs);
std::vector<uint16_t> to_indices(const Poly& a, size_t len);

}  // namespace f2x

/// Arithmetic in a small field F_q, q = p^e <= 2^16, realized as
/// F_p[y]/(base_modulus). Elements are indices 0..q-1 encoding the
/// coefficient tuple (c_0,...,c_{e-1}) as sum c_i p^i. Multiplication and
/// inversion run off exp/log tables over a fixed primitive element;
/// addition is digitwise mod p (plain XOR when p = 2).
class SmallField {
 public:
  using Elem = uint16_t;

  /// base_modulus: little-endian coefficients over F_p, degree e, monic.
  /// Pass an empty vector to select the default modulus (the monic
  /// irreducible of degree e with the smallest integer encoding
  /// sum c_i p^i). For e = 1 the modulus is ignored.
  SmallField(uint32_t p, uint32_t e, std::vector<uint16_t> base_modulus = {});

  uint32_t p() const { return p_; }
  uint32_t e() const { return e_; }
  uint32_t q() const { return q_; }
  const std::vector<uint16_t>& modulus() const { return modulus_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  bool is_zero(Elem a) const { return a == 0; }
  bool equal(Elem a, Elem b) const { return a == b; }
  bool less(Elem a, Elem b) const { return a < b; }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    return add_[size_t(a) * q_ + b];
  }
  Elem neg(Elem a) const { return p_ == 2 ? a : neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[size_t(log_[a]) + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, uint64_t n) const;

  /// A fixed primitive element (generator of the multiplicative group).
  Elem generator() const { return gen_; }

  /// Index <-> F_p digit conversions (little-endian, length e).
  std::vector<uint16_t> digits(Elem a) const;
  Elem from_digits(const std::vector<uint16_t>& d) const;

  bool operator==(const SmallField& o) const {
    return p_ == o.p_ && e_ == o.e_ && modulus_ == o.modulus_;
  }

 private:
  uint32_t p_, e_, q_;
  std::vector<uint16_t> modulus_;  // little-endian over F_p, size e+1
  Elem gen_ = 0;
  std::vector<uint16_t> exp_;  // size 2(q-1)
  std::vector<uint16_t> log_;  // size q, log_[0] unused
  std::vector<uint16_t> add_;  // q*q, only when p is odd
  std::vector<uint16_t> neg_;
};

/// Dense polynomials over a SmallField: little-endian index vectors.
namespace fqx {

using Poly = std::vector<uint16_t>;

int deg(const Poly& a);
void trim(Poly& a);
Poly add(const SmallField& f, const Poly& a, const Poly& b);
Poly mul(const SmallField& f, const Poly& a, const Poly& b);
Poly mod(const SmallField& f, Poly a, const Poly& m);
void divmod(const SmallField& f, const Poly& a, const Poly& b, Poly& quot, Poly& rem);
Poly gcd(const SmallField& f, Poly a, Poly b);
Poly powmod(const SmallField& f, const Poly& a, uint64_t e, const Poly& m);
bool irreducible(const SmallField& f, const Poly& poly);

}  // namespace fqx

bool is_prime_u32(uint32_t n);
std::vector<uint32_t> prime_divisors(uint32_t n);

/// Monic irreducible of the given degree over F_q with the smallest integer
/// encoding sum c_i q^i (digits taken as element indices). Results are
/// memoized per (p, e, degree).
std::vector<uint16_t> default_irreducible(const SmallField& fq, uint32_t degree);

}  // namespace loidreau

#endif
