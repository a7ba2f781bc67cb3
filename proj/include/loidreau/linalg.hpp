#ifndef LOIDREAU_LINALG_HPP
#define LOIDREAU_LINALG_HPP

#include <cassert>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace loidreau {

/// Row vector over a field backend F (Gf2m, Fqm or SmallField).
template <class F>
class Vec {
 public:
  using Elem = typename F::Elem;

  Vec() = default;
  Vec(const F& f, size_t n) : f_(&f), v_(n, f.zero()) {}
  Vec(const F& f, std::vector<Elem> v) : f_(&f), v_(std::move(v)) {}

  const F& field() const { return *f_; }
  size_t size() const { return v_.size(); }
  Elem& operator[](size_t i) { return v_[i]; }
  const Elem& operator[](size_t i) const { return v_[i]; }
  const std::vector<Elem>& data() const { return v_; }

  bool is_zero() const {
    for (const auto& x : v_)
      if (!f_->is_zero(x)) return false;
    return true;
  }

  Vec operator+(const Vec& o) const {
    assert(size() == o.size());
    Vec r = *this;
    for (size_t i = 0; i < size(); ++i) r.v_[i] = f_->add(r.v_[i], o.v_[i]);
    return r;
  }
  Vec operator-(const Vec& o) const {
    assert(size() == o.size());
    Vec r = *this;
    for (size_t i = 0; i < size(); ++i) r.v_[i] = f_->sub(r.v_[i], o.v_[i]);
    return r;
  }
  Vec scaled(const Elem& c) const {
    Vec r = *this;
    for (auto& x : r.v_) x = f_->mul(c, x);
    return r;
  }
  Vec frobenius(long long s) const {
    Vec r = *this;
    for (auto& x : r.v_) x = f_->frobenius(x, s);
    return r;
  }
  Elem dot(const Vec& o) const {
    assert(size() == o.size());
    Elem acc = f_->zero();
    for (size_t i = 0; i < size(); ++i) acc = f_->add(acc, f_->mul(v_[i], o.v_[i]));
    return acc;
  }

  bool operator==(const Vec& o) const {
    if (size() != o.size()) return false;
    for (size_t i = 0; i < size(); ++i)
      if (!f_->equal(v_[i], o.v_[i])) return false;
    return true;
  }
  bool operator!=(const Vec& o) const { return !(*this == o); }

 private:
  const F* f_ = nullptr;
  std::vector<Elem> v_;
};

/// Dense row-major matrix with exact Gaussian elimination.
template <class F>
class Mat {
 public:
  using Elem = typename F::Elem;

  Mat() = default;
  Mat(const F& f, size_t rows, size_t cols)
      : f_(&f), rows_(rows), cols_(cols), a_(rows * cols, f.zero()) {}

  static Mat identity(const F& f, size_t n) {
    Mat r(f, n, n);
    for (size_t i = 0; i < n; ++i) r.at(i, i) = f.one();
    return r;
  }

  static Mat from_rows(const std::vector<Vec<F>>& rows) {
    if (rows.empty()) throw std::invalid_argument("Mat::from_rows: no rows");
    Mat r(rows[0].field(), rows.size(), rows[0].size());
    for (size_t i = 0; i < rows.size(); ++i) {
      assert(rows[i].size() == r.cols_);
      for (size_t j = 0; j < r.cols_; ++j) r.at(i, j) = rows[i][j];
    }
    return r;
  }

  const F& field() const { return *f_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  Elem& at(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const Elem& at(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  Vec<F> row(size_t r) const {
    Vec<F> v(*f_, cols_);
    for (size_t j = 0; j < cols_; ++j) v[j] = at(r, j);
    return v;
  }
  void set_row(size_t r, const Vec<F>& v) {
    assert(v.size() == cols_);
    for (size_t j = 0; j < cols_; ++j) at(r, j) = v[j];
  }

  Mat transpose() const {
    Mat r(*f_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  Mat operator*(const Mat& o) const {
    assert(cols_ == o.rows_);
    Mat r(*f_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t k = 0; k < cols_; ++k) {
        const Elem& x = at(i, k);
        if (f_->is_zero(x)) continue;
        for (size_t j = 0; j < o.cols_; ++j)
          r.at(i, j) = f_->add(r.at(i, j), f_->mul(x, o.at(k, j)));
      }
    return r;
  }

  /// x * M for a row vector x.
  friend Vec<F> operator*(const Vec<F>& x, const Mat& m) {
    assert(x.size() == m.rows_);
    Vec<F> r(*m.f_, m.cols_);
    for (size_t i = 0; i < m.rows_; ++i) {
      const Elem& c = x[i];
      if (m.f_->is_zero(c)) continue;
      for (size_t j = 0; j < m.cols_; ++j)
        r[j] = m.f_->add(r[j], m.f_->mul(c, m.at(i, j)));
    }
    return r;
  }

  Mat operator+(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat r = *this;
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_->add(r.a_[i], o.a_[i]);
    return r;
  }

  bool operator==(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t i = 0; i < a_.size(); ++i)
      if (!f_->equal(a_[i], o.a_[i])) return false;
    return true;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  /// In-place reduced row echelon form; returns the rank and optionally the
  /// pivot columns. Fully deterministic: first nonzero entry scanning down.
  size_t rref(std::vector<size_t>* pivots = nullptr) {
    if (pivots) pivots->clear();
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
      size_t sel = r;
      while (sel < rows_ && f_->is_zero(at(sel, c))) ++sel;
      if (sel == rows_) continue;
      if (sel != r)
        for (size_t j = c; j < cols_; ++j) std::swap(at(r, j), at(sel, j));
      const Elem pinv = f_->inv(at(r, c));
      for (size_t j = c; j < cols_; ++j) at(r, j) = f_->mul(pinv, at(r, j));
      for (size_t i = 0; i < rows_; ++i) {
        if (i == r) continue;
        const Elem fac = at(i, c);
        if (f_->is_zero(fac)) continue;
        for (size_t j = c; j < cols_; ++j)
          at(i, j) = f_->sub(at(i, j), f_->mul(fac, at(r, j)));
      }
      if (pivots) pivots->push_back(c);
      ++r;
    }
    return r;
  }

  size_t rank() const {
    Mat copy = *this;
    return copy.rref();
  }

  void truncate_rows(size_t r) {
    rows_ = r;
    a_.resize(r * cols_);
  }

  /// Basis (as rows) of the right null space {x : M x^T = 0}.
  Mat right_kernel() const {
    Mat red = *this;
    std::vector<size_t> pivots;
    size_t rank = red.rref(&pivots);
    std::vector<char> is_pivot(cols_, 0);
    for (size_t c : pivots) is_pivot[c] = 1;
    Mat ker(*f_, cols_ - rank, cols_);
    size_t kr = 0;
    for (size_t fc = 0; fc < cols_; ++fc) {
      if (is_pivot[fc]) continue;
      ker.at(kr, fc) = f_->one();
      for (size_t i = 0; i < rank; ++i)
        ker.at(kr, pivots[i]) = f_->neg(red.at(i, fc));
      ++kr;
    }
    return ker;
  }

  /// Basis (as rows) of the left null space {x : x M = 0}.
  Mat left_kernel() const { return transpose().right_kernel(); }

  /// Solves x * M = b; empty when the system is inconsistent. Free variables
  /// are fixed to zero, so the solution is deterministic.
  std::optional<Vec<F>> solve_left(const Vec<F>& b) const {
    assert(b.size() == cols_);
    // augment M^T with b^T and reduce
    Mat aug(*f_, cols_, rows_ + 1);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) aug.at(j, i) = at(i, j);
    for (size_t j = 0; j < cols_; ++j) aug.at(j, rows_) = b[j];
    std::vector<size_t> pivots;
    size_t rank = aug.rref(&pivots);
    Vec<F> x(*f_, rows_);
    for (size_t i = 0; i < rank; ++i) {
      if (pivots[i] == rows_) return std::nullopt;  // pivot in the b column
      x[pivots[i]] = aug.at(i, rows_);
    }
    return x;
  }

  std::optional<Mat> inverse() const {
    assert(rows_ == cols_);
    Mat aug(*f_, rows_, 2 * cols_);
    for (size_t i = 0; i < rows_; ++i) {
      for (size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
      aug.at(i, cols_ + i) = f_->one();
    }
    // the identity block keeps the row rank full, so invertibility shows up
    // as every pivot landing in the left block
    std::vector<size_t> pivots;
    aug.rref(&pivots);
    if (pivots.size() != rows_ || pivots.back() >= cols_) return std::nullopt;
    Mat inv(*f_, rows_, cols_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) inv.at(i, j) = aug.at(i, cols_ + j);
    return inv;
  }

 private:
  const F* f_ = nullptr;
  size_t rows_ = 0, cols_ = 0;
  std::vector<Elem> a_;
};

/// Vertical concatenation.
template <class F>
Mat<F> stack(const Mat<F>& a, const Mat<F>& b) {
  assert(a.cols() == b.cols());
  Mat<F> r(a.field(), a.rows() + b.rows(), a.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r.at(a.rows() + i, j) = b.at(i, j);
  return r;
}

}  // namespace loidreau

#endif
