#ifndef LOIDREAU_GABIDULIN_HPP
#define LOIDREAU_GABIDULIN_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "loidreau/codes.hpp"
#include "loidreau/qpoly.hpp"

namespace loidreau {

/// Raised when an input claimed to be (a shift of) a Gabidulin code fails the
/// structural checks of support recovery.
class support_recovery_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moore matrix: row s holds the coordinatewise q^s powers of a.
template <class F>
Mat<F> moore_matrix(const Vec<F>& a, size_t rows) {
  Mat<F> m(a.field(), rows, a.size());
  Vec<F> cur = a;
  for (size_t s = 0; s < rows; ++s) {
    m.set_row(s, cur);
    if (s + 1 < rows) cur = cur.frobenius(1);
  }
  return m;
}

/// Evaluations of q-polynomials of q-degree < k on an independent support.
template <class F>
struct GabidulinCode {
  Vec<F> support;
  size_t k;

  GabidulinCode(Vec<F> a, size_t dim) : support(std::move(a)), k(dim) {
    const size_t n = support.size();
    if (k < 1 || k > n) throw std::invalid_argument("GabidulinCode: need 1 <= k <= n");
    if (n > support.field().m())
      throw std::invalid_argument("GabidulinCode: need n <= m");
    if (rank_weight(support) != n)
      throw std::invalid_argument("GabidulinCode: support entries must be F_q-independent");
  }
};

template <class F>
Mat<F> gab_generator_matrix(const GabidulinCode<F>& g) {
  return moore_matrix(g.support, g.k);
}

template <class F>
Code<F> gab_code(const GabidulinCode<F>& g) {
  return Code<F>::from_matrix(gab_generator_matrix(g));
}

/// Inverts the intersection identity Gab_k(a) cap Gab_k(a)^[1] =
/// Gab_{k-1}(a^[1]): k-1 intersection steps reach the line spanned by
/// a^[k-1], and the (k-1)-fold inverse Frobenius of its RREF generator is a
/// support (unique up to a scalar, which RREF pins to leading coefficient 1).
template <class F>
Vec<F> recover_support(const Code<F>& c) {
  const size_t k = c.dim();
  if (k == 0) throw support_recovery_error("zero code has no support");
  Code<F> cur = c;
  for (size_t i = 1; i < k; ++i) {
    Code<F> next = code_intersect(cur, cur.frobenius(1));
    if (next.dim() != cur.dim() - 1)
      throw support_recovery_error(
          "intersection chain dimension " + std::to_string(next.dim()) + " at step " +
          std::to_string(i) + ", expected " + std::to_string(cur.dim() - 1) +
          ": input is not a Gabidulin code");
    cur = std::move(next);
  }
  Vec<F> a = cur.basis().row(0).frobenius(-(long long)(k - 1));
  if (rank_weight(a) != c.n())
    throw support_recovery_error("recovered support is not full rank");
  if (gab_code(GabidulinCode<F>(a, k)) != c)
    throw support_recovery_error("candidate support does not regenerate the code");
  return a;
}

/// Dual support via the Moore kernel: the vector h orthogonal to
/// b^[s], s = 0..n-2, shifted down so that Gab_{n-k}(result) = Gab_k(b)^perp.
/// One kernel computation instead of a chain of intersections; used where
/// the dual support is needed at scale (key generation).
template <class F>
Vec<F> dual_gabidulin_support(const Vec<F>& b, size_t k) {
  const size_t n = b.size();
  if (k < 1 || k >= n) throw std::invalid_argument("dual_gabidulin_support: need 1 <= k < n");
  Mat<F> ker = moore_matrix(b, n - 1).right_kernel();
  if (ker.rows() != 1) throw std::logic_error("dual_gabidulin_support: kernel is not a line");
  Vec<F> a = ker.row(0).frobenius(-(long long)(n - k - 1));
  if (rank_weight(a) != n) throw std::logic_error("dual_gabidulin_support: degenerate kernel");
  return a;
}

/// Lemma: the dual of a Gabidulin code is Gabidulin. Computed per the
/// definitional route (dualize, then recover the support).
template <class F>
GabidulinCode<F> gab_dual(const GabidulinCode<F>& g) {
  const size_t n = g.support.size();
  if (g.k >= n) throw std::invalid_argument("gab_dual: k = n has a trivial dual");
  return GabidulinCode<F>(recover_support(gab_code(g).dual()), n - g.k);
}

template <class F>
struct GabDecodeResult {
  LinearizedPoly<F> f;  // message polynomial, qdeg < k
  Vec<F> e;             // error vector, rank weight <= t
};

/// Decoding by linearized-polynomial reconstruction: find a nonzero (V, N)
/// with qdeg V <= t, qdeg N <= k-1+t and V(y_i) = N(a_i) for all i, then
/// f = left quotient of N by V. Any nonzero kernel vector works when some
/// codeword lies within rank distance t; the final checks reject everything
/// else, so failure is a value rather than a wrong answer.
template <class F>
std::optional<GabDecodeResult<F>> gab_decode(const GabidulinCode<F>& g, const Vec<F>& y,
                                             size_t t) {
  const F& f = g.support.field();
  const size_t n = g.support.size(), k = g.k;
  if (y.size() != n) throw std::invalid_argument("gab_decode: length mismatch");
  if (2 * t > n - k) throw std::invalid_argument("gab_decode: t beyond half minimum distance");

  if (t == 0) {
    // interpolation only: solve x * Moore = y
    auto sol = moore_matrix(g.support, k).solve_left(y);
    if (!sol) return std::nullopt;
    LinearizedPoly<F> fp(f, sol->data());
    return GabDecodeResult<F>{fp, Vec<F>(f, n)};
  }

  const size_t cols = (t + 1) + (k + t);
  Mat<F> sys(f, n, cols);
  for (size_t i = 0; i < n; ++i) {
    auto yq = y[i];
    for (size_t j = 0; j <= t; ++j) {
      sys.at(i, j) = yq;
      if (j < t) yq = f.frobenius(yq, 1);
    }
    auto aq = g.support[i];
    for (size_t l = 0; l < k + t; ++l) {
      sys.at(i, t + 1 + l) = f.neg(aq);
      if (l + 1 < k + t) aq = f.frobenius(aq, 1);
    }
  }
  Mat<F> ker = sys.right_kernel();
  if (ker.rows() == 0) return std::nullopt;

  std::vector<typename F::Elem> vc, nc;
  for (size_t j = 0; j <= t; ++j) vc.push_back(ker.at(0, j));
  for (size_t l = 0; l < k + t; ++l) nc.push_back(ker.at(0, t + 1 + l));
  LinearizedPoly<F> vpoly(f, std::move(vc)), npoly(f, std::move(nc));
  if (vpoly.is_zero()) return std::nullopt;

  LinearizedPoly<F> fp(f), rem(f);
  qpoly_left_divide(npoly, vpoly, fp, rem);
  if (!rem.is_zero()) return std::nullopt;
  if (fp.qdeg() >= int(k)) return std::nullopt;
  Vec<F> e = y - fp.eval_vec(g.support);
  if (rank_weight(e) > t) return std::nullopt;
  return GabDecodeResult<F>{std::move(fp), std::move(e)};
}

}  // namespace loidreau

#endif
