#ifndef LOIDREAU_UPOLY_HPP
#define LOIDREAU_UPOLY_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "loidreau/rng.hpp"

namespace loidreau {

/// Ordinary (non-linearized) univariate polynomial over F_{q^m},
/// little-endian coefficients, trimmed so deg() is size-1.
template <class F>
class UnivariatePoly {
 public:
  using Elem = typename F::Elem;

  UnivariatePoly() = default;  // empty shell, only usable as an assignment target
  explicit UnivariatePoly(const F& f) : f_(&f) {}
  UnivariatePoly(const F& f, std::vector<Elem> c) : f_(&f), c_(std::move(c)) { trim(); }

  static UnivariatePoly monomial(const F& f, size_t d, const Elem& coeff) {
    std::vector<Elem> c(d + 1, f.zero());
    c[d] = coeff;
    return {f, std::move(c)};
  }
  static UnivariatePoly x(const F& f) { return monomial(f, 1, f.one()); }

  const F& field() const { return *f_; }
  int deg() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(size_t i) const { return i < c_.size() ? c_[i] : f_->zero(); }
  const std::vector<Elem>& coeffs() const { return c_; }

  Elem eval(const Elem& at) const {
    Elem acc = f_->zero();
    for (size_t i = c_.size(); i-- > 0;) acc = f_->add(f_->mul(acc, at), c_[i]);
    return acc;
  }

  UnivariatePoly operator+(const UnivariatePoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), f_->zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = f_->add(coeff(i), o.coeff(i));
    return {*f_, std::move(c)};
  }
  UnivariatePoly operator-(const UnivariatePoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), f_->zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = f_->sub(coeff(i), o.coeff(i));
    return {*f_, std::move(c)};
  }
  UnivariatePoly operator*(const UnivariatePoly& o) const {
    if (is_zero() || o.is_zero()) return UnivariatePoly(*f_);
    std::vector<Elem> c(c_.size() + o.c_.size() - 1, f_->zero());
    for (size_t i = 0; i < c_.size(); ++i) {
      if (f_->is_zero(c_[i])) continue;
      for (size_t j = 0; j < o.c_.size(); ++j)
        c[i + j] = f_->add(c[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return {*f_, std::move(c)};
  }
  UnivariatePoly scaled(const Elem& s) const {
    std::vector<Elem> c = c_;
    for (auto& x : c) x = f_->mul(s, x);
    return {*f_, std::move(c)};
  }

  UnivariatePoly pow(unsigned e) const {
    UnivariatePoly r = monomial(*f_, 0, f_->one());
    UnivariatePoly b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  void divmod(const UnivariatePoly& d, UnivariatePoly& quot, UnivariatePoly& rem) const {
    if (d.is_zero()) throw std::domain_error("UnivariatePoly: division by zero polynomial");
    const Elem lead_inv = f_->inv(d.c_.back());
    std::vector<Elem> r = c_;
    std::vector<Elem> q(c_.size() > d.c_.size() ? c_.size() - d.c_.size() + 1 : 1, f_->zero());
    for (size_t pos = r.size(); pos-- > 0 && pos + 1 >= d.c_.size();) {
      if (f_->is_zero(r[pos])) continue;
      const Elem c = f_->mul(r[pos], lead_inv);
      const size_t shift = pos + 1 - d.c_.size();
      q[shift] = c;
      for (size_t i = 0; i < d.c_.size(); ++i)
        r[shift + i] = f_->sub(r[shift + i], f_->mul(c, d.c_[i]));
    }
    quot = UnivariatePoly(*f_, std::move(q));
    rem = UnivariatePoly(*f_, std::move(r));
  }

  UnivariatePoly mod(const UnivariatePoly& d) const {
    UnivariatePoly q(*f_), r(*f_);
    divmod(d, q, r);
    return r;
  }

  UnivariatePoly monic() const {
    if (is_zero()) return *this;
    return scaled(f_->inv(c_.back()));
  }

  bool operator==(const UnivariatePoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!f_->equal(c_[i], o.c_[i])) return false;
    return true;
  }
  bool operator!=(const UnivariatePoly& o) const { return !(*this == o); }

 private:
  void trim() {
    while (!c_.empty() && f_->is_zero(c_.back())) c_.pop_back();
  }

  const F* f_ = nullptr;
  std::vector<Elem> c_;
};

template <class F>
UnivariatePoly<F> upoly_gcd(UnivariatePoly<F> a, UnivariatePoly<F> b) {
  while (!b.is_zero()) {
    auto r = a.mod(b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class F>
UnivariatePoly<F> upoly_powmod(const UnivariatePoly<F>& a, uint64_t e,
                               const UnivariatePoly<F>& m) {
  const F& f = a.field();
  auto r = UnivariatePoly<F>::monomial(f, 0, f.one());
  auto b = a.mod(m);
  while (e) {
    if (e & 1) r = (r * b).mod(m);
    e >>= 1;
    if (e) b = (b * b).mod(m);
  }
  return r;
}

namespace detail {

/// Equal-degree splitting to linear factors of a squarefree product of
/// linears. Char 2 uses the F_2-trace of a random multiple of X; odd
/// characteristic uses the classic (q^m-1)/2 power, assembled as
/// norm-then-(q-1)/2 so no exponent ever exceeds q.
template <class F>
void split_linear(const UnivariatePoly<F>& r, std::vector<typename F::Elem>& roots, Rng& rng) {
  const F& f = r.field();
  if (r.deg() <= 0) return;
  if (r.deg() == 1) {
    roots.push_back(f.neg(f.div(r.coeff(0), r.coeff(1))));
    return;
  }
  const uint64_t q = f.q();
  for (;;) {
    UnivariatePoly<F> g(f);
    auto a = f.random_nonzero(rng);
    auto ax = UnivariatePoly<F>::monomial(f, 1, a).mod(r);
    if (f.p() == 2) {
      const uint64_t nbits = uint64_t(f.e()) * f.m();  // |F| = 2^nbits
      auto cur = ax;
      auto acc = cur;
      for (uint64_t i = 1; i < nbits; ++i) {
        cur = upoly_powmod(cur, 2, r);
        acc = acc + cur;
      }
      g = upoly_gcd(r, acc);
    } else {
      auto norm = UnivariatePoly<F>::monomial(f, 0, f.one());
      auto cur = ax + UnivariatePoly<F>::monomial(f, 0, f.random_element(rng));
      for (uint32_t i = 0; i < f.m(); ++i) {
        norm = (norm * cur).mod(r);
        if (i + 1 < f.m()) cur = upoly_powmod(cur, q, r);
      }
      auto half = upoly_powmod(norm, (q - 1) / 2, r);
      g = upoly_gcd(r, half - UnivariatePoly<F>::monomial(f, 0, f.one()));
    }
    if (g.deg() > 0 && g.deg() < r.deg()) {
      split_linear(g, roots, rng);
      UnivariatePoly<F> quot(f), rem(f);
      r.divmod(g, quot, rem);
      split_linear(quot.monic(), roots, rng);
      return;
    }
  }
}

}  // namespace detail

/// All roots of P in F_{q^m}: gcd with X^(q^m) - X (computed by iterated
/// modular q-th powers), then randomized equal-degree splitting. The output
/// is sorted by coefficient encoding, so it is independent of the RNG.
template <class F>
std::vector<typename F::Elem> find_roots(const UnivariatePoly<F>& p, Rng& rng) {
  const F& f = p.field();
  if (p.is_zero()) throw std::invalid_argument("find_roots: zero polynomial");
  std::vector<typename F::Elem> roots;

  // strip X^v: 0 is a root iff the constant term vanishes
  std::vector<typename F::Elem> c = p.coeffs();
  size_t v = 0;
  while (v < c.size() && f.is_zero(c[v])) ++v;
  if (v > 0) {
    roots.push_back(f.zero());
    c.erase(c.begin(), c.begin() + v);
  }
  UnivariatePoly<F> q(f, std::move(c));
  if (q.deg() >= 1) {
    // X^(q^m) mod q via m successive q-th powers
    auto y = UnivariatePoly<F>::x(f).mod(q);
    for (uint32_t i = 0; i < f.m(); ++i) y = upoly_powmod(y, f.q(), q);
    auto r = upoly_gcd(q, y - UnivariatePoly<F>::x(f));
    detail::split_linear(r, roots, rng);
  }
  std::sort(roots.begin(), roots.end(), [&](const auto& a, const auto& b) { return f.less(a, b); });
  return roots;
}

}  // namespace loidreau

#endif
