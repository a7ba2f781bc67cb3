#ifndef LOIDREAU_QPOLY_HPP
#define LOIDREAU_QPOLY_HPP

#include <stdexcept>
#include <vector>

#include "loidreau/linalg.hpp"

namespace loidreau {

/// Linearized polynomial sum p_i X^(q^i); induces an F_q-linear map on
/// F_{q^m}. Coefficient i multiplies X^(q^i); the list is kept trimmed so
/// qdeg() is size-1 (-1 for the zero polynomial).
template <class F>
class LinearizedPoly {
 public:
  using Elem = typename F::Elem;

  explicit LinearizedPoly(const F& f) : f_(&f) {}
  LinearizedPoly(const F& f, std::vector<Elem> coeffs) : f_(&f), c_(std::move(coeffs)) {
    trim();
  }

  static LinearizedPoly identity(const F& f) { return {f, {f.one()}}; }
  static LinearizedPoly monomial(const F& f, size_t qexp, const Elem& coeff) {
    std::vector<Elem> c(qexp + 1, f.zero());
    c[qexp] = coeff;
    return {f, std::move(c)};
  }

  const F& field() const { return *f_; }
  int qdeg() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Elem coeff(size_t i) const { return i < c_.size() ? c_[i] : f_->zero(); }
  const std::vector<Elem>& coeffs() const { return c_; }

  Elem eval(const Elem& x) const {
    Elem acc = f_->zero();
    Elem y = x;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (!f_->is_zero(c_[i])) acc = f_->add(acc, f_->mul(c_[i], y));
      if (i + 1 < c_.size()) y = f_->frobenius(y, 1);
    }
    return acc;
  }

  Vec<F> eval_vec(const Vec<F>& a) const {
    Vec<F> r(*f_, a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = eval(a[i]);
    return r;
  }

  LinearizedPoly operator+(const LinearizedPoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), f_->zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = f_->add(coeff(i), o.coeff(i));
    return {*f_, std::move(c)};
  }
  LinearizedPoly operator-(const LinearizedPoly& o) const {
    std::vector<Elem> c(std::max(c_.size(), o.c_.size()), f_->zero());
    for (size_t i = 0; i < c.size(); ++i) c[i] = f_->sub(coeff(i), o.coeff(i));
    return {*f_, std::move(c)};
  }

  /// Composition (this o other)(x) = this(other(x)); the twisted product,
  /// with coefficients passing through Frobenius powers.
  LinearizedPoly compose(const LinearizedPoly& o) const {
    if (is_zero() || o.is_zero()) return LinearizedPoly(*f_);
    std::vector<Elem> c(c_.size() + o.c_.size() - 1, f_->zero());
    for (size_t i = 0; i < c_.size(); ++i) {
      if (f_->is_zero(c_[i])) continue;
      for (size_t j = 0; j < o.c_.size(); ++j) {
        if (f_->is_zero(o.c_[j])) continue;
        c[i + j] = f_->add(c[i + j], f_->mul(c_[i], f_->frobenius(o.c_[j], (long long)i)));
      }
    }
    return {*f_, std::move(c)};
  }

  bool operator==(const LinearizedPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    for (size_t i = 0; i < c_.size(); ++i)
      if (!f_->equal(c_[i], o.c_[i])) return false;
    return true;
  }
  bool operator!=(const LinearizedPoly& o) const { return !(*this == o); }

 private:
  void trim() {
    while (!c_.empty() && f_->is_zero(c_.back())) c_.pop_back();
  }

  const F* f_;
  std::vector<Elem> c_;
};

/// Left division: P = V o quotient + remainder with qdeg(remainder) <
/// qdeg(V). The quotient/remainder pair is unique.
template <class F>
void qpoly_left_divide(const LinearizedPoly<F>& p, const LinearizedPoly<F>& v,
                       LinearizedPoly<F>& quotient, LinearizedPoly<F>& remainder) {
  const F& f = p.field();
  if (v.is_zero()) throw std::domain_error("qpoly_left_divide: zero divisor");
  const int s = v.qdeg();
  const auto vs = v.coeff(size_t(s));
  LinearizedPoly<F> r = p;
  std::vector<typename F::Elem> q(p.qdeg() >= s ? size_t(p.qdeg() - s) + 1 : 0, f.zero());
  while (r.qdeg() >= s) {
    const int d = r.qdeg();
    const int t = d - s;
    // leading term of v o (c X^(q^t)) is v_s * c^(q^s) X^(q^d)
    auto c = f.frobenius(f.div(r.coeff(size_t(d)), vs), -(long long)s);
    q[size_t(t)] = f.add(q[size_t(t)], c);
    r = r - v.compose(LinearizedPoly<F>::monomial(f, size_t(t), c));
    if (r.qdeg() >= d) throw std::logic_error("qpoly_left_divide: no degree drop");
  }
  quotient = LinearizedPoly<F>(f, std::move(q));
  remainder = std::move(r);
}

}  // namespace loidreau

#endif
