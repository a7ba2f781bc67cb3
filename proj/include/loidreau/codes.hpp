#ifndef LOIDREAU_CODES_HPP
#define LOIDREAU_CODES_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "loidreau/field.hpp"
#include "loidreau/linalg.hpp"
#include "loidreau/rng.hpp"

namespace loidreau {

/// m x n matrix over F_q whose column j holds the coefficients of x_j in the
/// power basis; its F_q-rank is the rank weight of x.
template <class F>
Mat<SmallField> expand_to_fq(const Vec<F>& x) {
  const F& f = x.field();
  Mat<SmallField> r(f.base(), f.m(), x.size());
  for (size_t j = 0; j < x.size(); ++j)
    for (uint32_t i = 0; i < f.m(); ++i) r.at(i, j) = f.coeff(x[j], i);
  return r;
}

template <class F>
size_t rank_weight(const Vec<F>& x) {
  return expand_to_fq(x).rank();
}

/// An F_q-subspace of F_{q^m}, held as the canonical RREF of the coefficient
/// rows of its generators. Houses vector supports and the masking space V.
template <class F>
class FqSubspace {
 public:
  using Elem = typename F::Elem;

  explicit FqSubspace(const F& f) : f_(&f), rref_(f.base(), 0, f.m()) {}

  static FqSubspace span(const F& f, const std::vector<Elem>& gens) {
    Mat<SmallField> rows(f.base(), gens.size(), f.m());
    for (size_t i = 0; i < gens.size(); ++i)
      for (uint32_t j = 0; j < f.m(); ++j) rows.at(i, j) = f.coeff(gens[i], j);
    FqSubspace s(f);
    size_t rank = rows.rref(&s.pivots_);
    rows.truncate_rows(rank);
    s.rref_ = std::move(rows);
    return s;
  }

  const F& field() const { return *f_; }
  size_t dim() const { return rref_.rows(); }

  std::vector<Elem> basis() const {
    std::vector<Elem> b;
    b.reserve(dim());
    for (size_t i = 0; i < dim(); ++i) {
      std::vector<uint16_t> c(f_->m());
      for (uint32_t j = 0; j < f_->m(); ++j) c[j] = rref_.at(i, j);
      b.push_back(f_->from_coeffs(c));
    }
    return b;
  }

  bool contains(const Elem& x) const {
    std::vector<uint16_t> c = f_->coeffs(x);
    const SmallField& fq = f_->base();
    for (size_t i = 0; i < dim(); ++i) {
      uint16_t fac = c[pivots_[i]];
      if (fac == 0) continue;
      for (uint32_t j = 0; j < f_->m(); ++j) c[j] = fq.sub(c[j], fq.mul(fac, rref_.at(i, j)));
    }
    for (auto v : c)
      if (v) return false;
    return true;
  }

  bool operator==(const FqSubspace& o) const { return rref_ == o.rref_; }

  friend FqSubspace sum(const FqSubspace& a, const FqSubspace& b) {
    auto ga = a.basis();
    auto gb = b.basis();
    ga.insert(ga.end(), gb.begin(), gb.end());
    return span(*a.f_, ga);
  }

  /// Span of all pairwise products of basis elements ("product space").
  friend FqSubspace product_space(const FqSubspace& a, const FqSubspace& b) {
    std::vector<Elem> prods;
    for (const auto& x : a.basis())
      for (const auto& y : b.basis()) prods.push_back(a.f_->mul(x, y));
    return span(*a.f_, prods);
  }

 private:
  const F* f_;
  Mat<SmallField> rref_;
  std::vector<size_t> pivots_;
};

template <class F>
FqSubspace<F> support(const Vec<F>& x) {
  return FqSubspace<F>::span(x.field(), x.data());
}

/// An F_{q^m}-linear code of length n, stored as the unique RREF basis of its
/// row space, so two codes are equal iff their representations are equal.
template <class F>
class Code {
 public:
  Code() = default;  // empty shell, only usable as an assignment target
  Code(const F& f, size_t n) : f_(&f), n_(n), basis_(f, 0, n) {}

  static Code from_matrix(Mat<F> rows) {
    Code c(rows.field(), rows.cols());
    std::vector<size_t> pivots;
    size_t rank = rows.rref(&pivots);
    rows.truncate_rows(rank);
    c.basis_ = std::move(rows);
    c.pivots_ = std::move(pivots);
    return c;
  }

  const F& field() const { return *f_; }
  size_t n() const { return n_; }
  size_t dim() const { return basis_.rows(); }
  const Mat<F>& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }

  bool contains(const Vec<F>& v) const {
    Vec<F> r = v;
    for (size_t i = 0; i < dim(); ++i) {
      const auto fac = r[pivots_[i]];
      if (f_->is_zero(fac)) continue;
      for (size_t j = pivots_[i]; j < n_; ++j)
        r[j] = f_->sub(r[j], f_->mul(fac, basis_.at(i, j)));
    }
    return r.is_zero();
  }

  Code dual() const { return from_matrix(basis_.right_kernel()); }

  Code frobenius(long long s) const {
    // a coordinatewise field automorphism preserves RREF structure
    Mat<F> b = basis_;
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < n_; ++j) b.at(i, j) = f_->frobenius(b.at(i, j), s);
    Code c(*f_, n_);
    c.basis_ = std::move(b);
    c.pivots_ = pivots_;
    return c;
  }

  bool operator==(const Code& o) const { return n_ == o.n_ && basis_ == o.basis_; }
  bool operator!=(const Code& o) const { return !(*this == o); }

 private:
  const F* f_ = nullptr;
  size_t n_ = 0;
  Mat<F> basis_;
  std::vector<size_t> pivots_;
};

template <class F>
Code<F> code_sum(const Code<F>& a, const Code<F>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("code_sum: length mismatch");
  if (a.dim() == 0) return b;
  if (b.dim() == 0) return a;
  return Code<F>::from_matrix(stack(a.basis(), b.basis()));
}

template <class F>
Code<F> code_intersect(const Code<F>& a, const Code<F>& b) {
  if (a.n() != b.n()) throw std::invalid_argument("code_intersect: length mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Code<F>(a.field(), a.n());
  // left kernel of the stacked bases: x A + y B = 0 gives x A in both spaces
  Mat<F> st = stack(a.basis(), b.basis());
  Mat<F> ker = st.left_kernel();
  Mat<F> rows(a.field(), ker.rows(), a.n());
  const F& f = a.field();
  for (size_t i = 0; i < ker.rows(); ++i)
    for (size_t k = 0; k < a.dim(); ++k) {
      const auto& c = ker.at(i, k);
      if (f.is_zero(c)) continue;
      for (size_t j = 0; j < a.n(); ++j)
        rows.at(i, j) = f.add(rows.at(i, j), f.mul(c, a.basis().at(k, j)));
    }
  return Code<F>::from_matrix(std::move(rows));
}

// ---------------------------------------------------------------------------
// samplers
// ---------------------------------------------------------------------------

template <class F>
Vec<F> random_vector(const F& f, size_t n, Rng& rng) {
  Vec<F> v(f, n);
  for (size_t i = 0; i < n; ++i) v[i] = f.random_element(rng);
  return v;
}

/// Uniform over k-dimensional subspaces: resample the k x n matrix until it
/// has full rank (deficiency probability ~ q^{-m(n-k+1)}).
template <class F>
Code<F> random_code(const F& f, size_t n, size_t k, Rng& rng) {
  if (k > n) throw std::invalid_argument("random_code: k > n");
  for (;;) {
    Mat<F> g(f, k, n);
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < n; ++j) g.at(i, j) = f.random_element(rng);
    Code<F> c = Code<F>::from_matrix(std::move(g));
    if (c.dim() == k) return c;
  }
}

/// n entries that are F_q-linearly independent (requires n <= m).
template <class F>
Vec<F> random_full_rank_vector(const F& f, size_t n, Rng& rng) {
  if (n > f.m()) throw std::invalid_argument("random_full_rank_vector: n > m");
  for (;;) {
    Vec<F> v = random_vector(f, n, rng);
    if (rank_weight(v) == n) return v;
  }
}

/// Rank weight exactly t: x = beta M with beta an independent t-tuple over
/// F_{q^m} and M a uniform full-rank t x n matrix over F_q.
template <class F>
Vec<F> random_rank_t_vector(const F& f, size_t n, size_t t, Rng& rng) {
  if (t > n || t > f.m()) throw std::invalid_argument("random_rank_t_vector: t too large");
  if (t == 0) return Vec<F>(f, n);
  Vec<F> beta = random_full_rank_vector(f, t, rng);
  const SmallField& fq = f.base();
  for (;;) {
    Mat<SmallField> mt(fq, t, n);
    for (size_t i = 0; i < t; ++i)
      for (size_t j = 0; j < n; ++j) mt.at(i, j) = uint16_t(rng.below(fq.q()));
    if (mt.rank() != t) continue;
    Vec<F> x(f, n);
    for (size_t j = 0; j < n; ++j) {
      auto acc = f.zero();
      for (size_t i = 0; i < t; ++i) {
        uint16_t c = mt.at(i, j);
        if (!c) continue;
        auto term = beta[i];
        if (c != 1) {
          // scale by the F_q constant c (embedded as a degree-0 element)
          term = f.mul(f.from_coeffs({c}), term);
        }
        acc = f.add(acc, term);
      }
      x[j] = acc;
    }
    return x;
  }
}

}  // namespace loidreau

#endif
