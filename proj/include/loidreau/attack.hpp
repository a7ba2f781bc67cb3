#ifndef LOIDREAU_ATTACK_HPP
#define LOIDREAU_ATTACK_HPP

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "loidreau/distinguisher.hpp"
#include "loidreau/gabidulin.hpp"
#include "loidreau/scheme.hpp"
#include "loidreau/upoly.hpp"

namespace loidreau {

/// Any failure inside the key recovery carries the stage it occurred in;
/// dimension mismatches double as a "not a masked Gabidulin key" oracle.
class attack_error : public std::runtime_error {
 public:
  attack_error(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class step1_dimension_error : public attack_error {
 public:
  step1_dimension_error(const std::string& stage, size_t expected, size_t got)
      : attack_error(stage, "dimension " + std::to_string(got) + ", expected " +
                                std::to_string(expected)),
        expected(expected),
        got(got) {}
  size_t expected, got;
};

/// The attack needs lambda = 2, a rate above 1/2 (2k - 2 > n), k < n - 2 and
/// r = n - k - 1 >= 3 so that the pairs (S_1,S_2), (S_1,S_3) exist.
inline std::vector<std::string> check_parameters(const SchemeParams& prm) {
  std::vector<std::string> v;
  if (prm.lambda != 2) v.push_back("lambda != 2");
  if (2 * prm.k <= prm.n + 2) v.push_back("2k - 2 <= n (rate too low for the distinguisher)");
  if (prm.k + 2 >= prm.n) v.push_back("k >= n - 2");
  if (prm.n - prm.k < 4) v.push_back("n - k < 4 (need r >= 3)");
  return v;
}

/// White-box evaluation of the two attack assumptions against ground truth.
template <class F>
std::vector<std::string> check_assumptions(const Vec<F>& g, const Vec<F>& h,
                                           const typename F::Elem& gamma,
                                           const SchemeParams& prm) {
  const F& f = g.field();
  std::vector<std::string> v;
  const size_t s = prm.n - prm.k + 2;
  if (rank_weight(g) < s) v.push_back("rank(g) < n - k + 2");
  if (rank_weight(h) < s) v.push_back("rank(h) < n - k + 2");
  auto cg = Code<F>::from_matrix(moore_matrix(g, s));
  auto ch = Code<F>::from_matrix(moore_matrix(h, s));
  if (code_intersect(cg, ch).dim() != 0)
    v.push_back("Gab_{n-k+2}(g) and Gab_{n-k+2}(h) intersect nontrivially");
  if (f.m() <= 2) v.push_back("m <= 2");
  if (f.in_proper_subfield(gamma)) v.push_back("gamma lies in a proper subfield");
  return v;
}

/// Step-1 result: the line <g + gamma h> with its chosen generator w, the
/// plane <g, h>, and the lines S_i = <g + gamma^(q^-i) h> for i = 0..r.
template <class F>
struct Step1Output {
  Vec<F> w;
  Code<F> gh;
  std::vector<Code<F>> s;
  size_t r = 0;
};

namespace detail {
template <class F>
void expect_dim(const char* stage, const Code<F>& c, size_t want) {
  if (c.dim() != want) throw step1_dimension_error(stage, want, c.dim());
}
}  // namespace detail

/// Step 1: shrink the dual public code down to the hidden subspaces by
/// iterated Frobenius sums and intersections. Every intermediate dimension
/// is asserted; a mismatch signals an assumption failure or a non-masked
/// input.
template <class F>
Step1Output<F> step1_recover_spaces(const Code<F>& c_pub) {
  using detail::expect_dim;
  const F& f = c_pub.field();
  const size_t n = c_pub.n(), k = c_pub.dim();
  if (k + 4 > n || 2 * k <= n + 2)
    throw attack_error("step1", "parameters outside the distinguishable window");
  const size_t r = n - k - 1;

  Code<F> chat = c_pub.dual();
  expect_dim("step1.dual", chat, n - k);

  // (a) iterated intersection of (C^[i] + C^[i+1]), i = 0..r
  Code<F> cur = chat;
  Code<F> next = chat.frobenius(1);
  Code<F> acc = code_sum(cur, next);
  expect_dim("step1.a/sum", acc, 2 * r + 2);
  for (size_t i = 1; i <= r; ++i) {
    cur = next;
    next = next.frobenius(1);
    acc = code_intersect(acc, code_sum(cur, next));
    expect_dim("step1.a/intersection", acc, 2 * (r + 1 - i));
  }

  // (b) un-shift: D' = <g + gamma h, g^[1] + gamma^(q^(1-r)) h^[1]>
  Code<F> dprime = acc.frobenius(-(long long)r);

  // (c) W = C^perp cap D' = <g + gamma h>
  Code<F> wline = code_intersect(chat, dprime);
  expect_dim("step1.c/line", wline, 1);
  Vec<F> w = wline.basis().row(0);

  // (d) E = D' + W^[1] = <g + gamma h, g^[1], h^[1]>
  Code<F> espace = code_sum(dprime, wline.frobenius(1));
  expect_dim("step1.d/span", espace, 3);

  // (e) F = C^perp[-1] cap E, then GH = W + F^[-1] = <g, h>
  Code<F> fline = code_intersect(chat.frobenius(-1), espace);
  expect_dim("step1.e/line", fline, 1);
  Code<F> gh = code_sum(wline, fline.frobenius(-1));
  expect_dim("step1.e/plane", gh, 2);

  // (f) S_i = Frobenius^(-i) of (C^perp cap GH^[i])
  Step1Output<F> out;
  out.w = std::move(w);
  out.r = r;
  Code<F> gh_shift = gh;
  for (size_t i = 0; i <= r; ++i) {
    if (i > 0) gh_shift = gh_shift.frobenius(1);
    Code<F> si = code_intersect(chat, gh_shift).frobenius(-(long long)i);
    expect_dim("step1.f/line", si, 1);
    out.s.push_back(std::move(si));
  }
  if (out.s[0] != wline) throw attack_error("step1", "S_0 differs from <w>");
  out.gh = std::move(gh);
  return out;
}

/// The unique (u, v) in S_i x S_j with u + v = w.
template <class F>
std::pair<Vec<F>, Vec<F>> unique_pair(const Code<F>& si, const Code<F>& sj, const Vec<F>& w) {
  if (si.dim() != 1 || sj.dim() != 1) throw attack_error("step2", "S_i spaces must be lines");
  Mat<F> m = stack(si.basis(), sj.basis());
  auto sol = m.solve_left(w);
  if (!sol) throw attack_error("step2", "u + v = w system inconsistent (assumption breach)");
  return {si.basis().row(0).scaled((*sol)[0]), sj.basis().row(0).scaled((*sol)[1])};
}

/// Q_gamma(X) = (X^q - X^(q^3))(X - X^(q^2)) - alpha^(q^3) (X - X^(q^3))(X^q - X^(q^2))
/// is divisible by (X^q - X)^(q+1); the quotient P_gamma has degree q^3 - q
/// and its roots form the PGL_2(F_q)-orbit of gamma.
template <class F>
UnivariatePoly<F> build_P_gamma(const F& f, const typename F::Elem& alpha) {
  const uint64_t q = f.q();
  if (q > 64) throw attack_error("step2", "q too large for the P_gamma construction");
  auto mono = [&](size_t d) { return UnivariatePoly<F>::monomial(f, d, f.one()); };
  const size_t q2 = size_t(q) * q, q3 = q2 * q;
  auto t1 = (mono(q) - mono(q3)) * (mono(1) - mono(q2));
  auto t2 = (mono(1) - mono(q3)) * (mono(q) - mono(q2));
  auto qgamma = t1 - t2.scaled(f.frobenius(alpha, 3));
  if (qgamma.is_zero()) throw attack_error("step2", "Q_gamma is identically zero");
  auto divisor = (mono(q) - mono(1)).pow(unsigned(q + 1));
  UnivariatePoly<F> quot(f), rem(f);
  qgamma.divmod(divisor, quot, rem);
  if (!rem.is_zero())
    throw attack_error("step2", "(X^q - X)^(q+1) does not divide Q_gamma exactly");
  if (quot.deg() != int(q3 - q))
    throw attack_error("step2", "deg P_gamma = " + std::to_string(quot.deg()) +
                                    ", expected " + std::to_string(q3 - q));
  return quot;
}

template <class F>
struct GammaSolution {
  typename F::Elem gamma;  // chosen root gamma'
  Vec<F> g, h;             // g', h' with g' + gamma' h' = w
  typename F::Elem alpha;  // collinearity scalar u_12 = alpha u_13
  UnivariatePoly<F> p_gamma;
  std::vector<typename F::Elem> roots;  // all roots, sorted
};

/// Step 2: u_12 and u_13 are collinear; their ratio pins gamma down to the
/// roots of P_gamma, any of which yields a working triple. The first root in
/// coefficient order is taken for reproducibility.
template <class F>
GammaSolution<F> step2_find_gamma(const Step1Output<F>& s1, Rng& rng) {
  const F& f = s1.w.field();
  if (s1.r < 3) throw attack_error("step2", "need r >= 3 for the pairs (1,2) and (1,3)");
  auto u12 = unique_pair(s1.s[1], s1.s[2], s1.w).first;
  auto u13 = unique_pair(s1.s[1], s1.s[3], s1.w).first;
  if (u13.is_zero() || u12.is_zero())
    throw attack_error("step2", "degenerate pair decomposition (w lies in S_2 or S_3)");

  size_t idx = 0;
  while (f.is_zero(u13[idx])) ++idx;
  auto alpha = f.div(u12[idx], u13[idx]);
  for (size_t j = 0; j < u12.size(); ++j)
    if (!f.equal(u12[j], f.mul(alpha, u13[j])))
      throw attack_error("step2", "u_12 and u_13 are not collinear (assumption breach)");

  GammaSolution<F> sol;
  sol.alpha = alpha;
  sol.p_gamma = build_P_gamma(f, alpha);
  sol.roots = find_roots(sol.p_gamma, rng);
  if (sol.roots.empty()) throw attack_error("step2", "P_gamma has no roots in F_(q^m)");
  for (const auto& root : sol.roots)
    if (f.equal(f.frobenius(root, 1), root))
      throw attack_error("step2", "a root of P_gamma lies in F_q");
  sol.gamma = sol.roots.front();

  // g' + gamma'^(q^-1) h' = (gamma'^(q^-2) - gamma'^(q^-1)) / (gamma'^(q^-2) - gamma') * u_12
  auto gm1 = f.frobenius(sol.gamma, -1);
  auto gm2 = f.frobenius(sol.gamma, -2);
  if (f.equal(gm2, sol.gamma) || f.equal(gm1, sol.gamma))
    throw attack_error("step2", "gamma' fixed by a small Frobenius power");
  auto x = u12.scaled(f.div(f.sub(gm2, gm1), f.sub(gm2, sol.gamma)));
  sol.h = (s1.w - x).scaled(f.inv(f.sub(sol.gamma, gm1)));
  sol.g = s1.w - sol.h.scaled(sol.gamma);
  return sol;
}

/// Decryption-equivalent key: support a', its dual-side partner a'', and the
/// F_q pair (Q_0, Q_1) with a' Q_0 = g', a' Q_1 = h'.
template <class F>
struct RecoveredKey {
  SchemeParams prm;
  Vec<F> a_prime;
  Vec<F> a_dprime;  // Gab_k(a'') = Gab_{n-k}(a')^perp
  typename F::Elem gamma;
  Mat<SmallField> q0, q1;
  Mat<F> q_mat;  // Q = Q_0^T + gamma' Q_1^T, nonsingular
  Mat<F> q_inv;
  Mat<F> g_pub;  // retained to map recovered codewords back to plaintexts
  size_t decode_radius = 0;
};

/// Step 3: pick a rank-n support a' whose span contains every entry of g'
/// and h', express both through F_q matrices, and verify the two row-space
/// identities that make the key decrypt.
template <class F>
RecoveredKey<F> step3_build_key(const GammaSolution<F>& sol, const Code<F>& c_pub,
                                const SchemeParams& prm, const Mat<F>& g_pub) {
  const F& f = c_pub.field();
  const size_t n = prm.n, k = prm.k;
  const SmallField& fq = f.base();

  // U = supp(g') + supp(h'), extended greedily by power-basis elements
  std::vector<typename F::Elem> gens;
  for (size_t i = 0; i < n; ++i) gens.push_back(sol.g[i]);
  for (size_t i = 0; i < n; ++i) gens.push_back(sol.h[i]);
  auto u = FqSubspace<F>::span(f, gens);
  if (u.dim() > n)
    throw attack_error("step3", "supp(g') + supp(h') exceeds dimension n (corrupt step 2)");

  std::vector<typename F::Elem> basis = u.basis();
  {
    // incremental elimination state over F_q: rows indexed by pivot
    std::vector<std::vector<uint16_t>> rows(f.m());
    std::vector<char> used(f.m(), 0);
    auto try_absorb = [&](const typename F::Elem& x) {
      std::vector<uint16_t> c = f.coeffs(x);
      for (uint32_t p = 0; p < f.m(); ++p) {
        if (!c[p]) continue;
        if (!used[p]) {
          uint16_t inv = fq.inv(c[p]);
          for (auto& ci : c) ci = fq.mul(ci, inv);
          rows[p] = std::move(c);
          used[p] = 1;
          return true;
        }
        uint16_t fac = c[p];
        for (uint32_t j = 0; j < f.m(); ++j) c[j] = fq.sub(c[j], fq.mul(fac, rows[p][j]));
      }
      return false;
    };
    for (const auto& b : basis) try_absorb(b);
    for (uint32_t i = 0; i < f.m() && basis.size() < n; ++i) {
      std::vector<uint16_t> unit(f.m(), 0);
      unit[i] = 1;
      auto cand = f.from_coeffs(unit);
      if (try_absorb(cand)) basis.push_back(cand);
    }
    if (basis.size() < n) throw attack_error("step3", "could not extend a' to rank n");
  }
  Vec<F> a_prime(f, n);
  for (size_t i = 0; i < n; ++i) a_prime[i] = basis[i];

  // a' Q_0 = g' and a' Q_1 = h', solved columnwise over F_q in one pass
  Mat<SmallField> aug(fq, f.m(), n + 2 * n);
  for (size_t j = 0; j < n; ++j)
    for (uint32_t i = 0; i < f.m(); ++i) {
      aug.at(i, j) = f.coeff(a_prime[j], i);
      aug.at(i, n + j) = f.coeff(sol.g[j], i);
      aug.at(i, 2 * n + j) = f.coeff(sol.h[j], i);
    }
  std::vector<size_t> pivots;
  size_t rank = aug.rref(&pivots);
  if (rank < n || pivots[n - 1] != n - 1)
    throw attack_error("step3", "a' coordinate system is rank deficient");
  if (rank > n) throw attack_error("step3", "g' or h' entries outside the span of a'");

  RecoveredKey<F> rk;
  rk.prm = prm;
  rk.gamma = sol.gamma;
  rk.q0 = Mat<SmallField>(fq, n, n);
  rk.q1 = Mat<SmallField>(fq, n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      rk.q0.at(i, j) = aug.at(i, n + j);
      rk.q1.at(i, j) = aug.at(i, 2 * n + j);
    }

  Mat<F> gamma_diag(f, n, n);
  for (size_t i = 0; i < n; ++i) gamma_diag.at(i, i) = sol.gamma;
  rk.q_mat = lift_fq_matrix(f, rk.q0).transpose() +
             gamma_diag * lift_fq_matrix(f, rk.q1).transpose();
  auto qinv = rk.q_mat.inverse();
  if (!qinv) throw attack_error("step3", "Q is singular");
  rk.q_inv = std::move(*qinv);

  rk.a_prime = a_prime;
  auto gab_dual_code = gab_code(GabidulinCode<F>(a_prime, n - k));
  if (Code<F>::from_matrix(moore_matrix(a_prime, n - k) * rk.q_mat.transpose()) != c_pub.dual())
    throw attack_error("step3", "C_pub^perp = Gab_(n-k)(a') Q^T identity failed");

  try {
    rk.a_dprime = recover_support(gab_dual_code.dual());
  } catch (const support_recovery_error& e) {
    throw attack_error("step3", std::string("dual support recovery: ") + e.what());
  }
  if (Code<F>::from_matrix(moore_matrix(rk.a_dprime, k) * rk.q_inv) != c_pub)
    throw attack_error("step3", "C_pub = Gab_k(a'') Q^(-1) identity failed");

  rk.g_pub = g_pub;
  rk.decode_radius = (n - k) / 2;
  return rk;
}

struct AttackReport {
  size_t n = 0, k = 0, r = 0;
  size_t root_count = 0;
  double step1_ms = 0, step2_ms = 0, step3_ms = 0, total_ms = 0;
};

/// Full pipeline. Throws attack_error (with a stage tag) when any structural
/// check fails; on success the returned key decrypts everything the real
/// secret key does.
template <class F>
std::pair<RecoveredKey<F>, AttackReport> attack(const PublicKey<F>& pk, Rng& rng) {
  using clock = std::chrono::steady_clock;
  auto ms_since = [](clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
  };

  auto violations = check_parameters(pk.prm);
  if (!violations.empty()) {
    std::string all;
    for (const auto& v : violations) all += (all.empty() ? "" : "; ") + v;
    throw attack_error("parameters", all);
  }
  Code<F> c_pub = pk.code();
  if (c_pub.dim() != pk.prm.k) throw attack_error("parameters", "G_pub is not full rank");

  AttackReport rep;
  rep.n = pk.prm.n;
  rep.k = pk.prm.k;

  auto t0 = clock::now();
  auto s1 = step1_recover_spaces(c_pub);
  rep.r = s1.r;
  rep.step1_ms = ms_since(t0);

  auto t1 = clock::now();
  auto sol = step2_find_gamma(s1, rng);
  rep.root_count = sol.roots.size();
  rep.step2_ms = ms_since(t1);

  auto t2 = clock::now();
  auto rk = step3_build_key(sol, c_pub, pk.prm, pk.g_pub);
  rep.step3_ms = ms_since(t2);
  rep.total_ms = ms_since(t0);
  return {std::move(rk), rep};
}

/// Decrypts with the recovered key: c Q is a corrupted codeword of
/// Gab_k(a'') since e Q keeps rank at most 2t <= (n-k)/2.
template <class F>
std::optional<Vec<F>> attack_decrypt(const RecoveredKey<F>& rk, const Vec<F>& c) {
  const F& f = rk.a_prime.field();
  const size_t n = rk.prm.n, k = rk.prm.k;
  if (c.size() != n) throw std::invalid_argument("attack_decrypt: ciphertext length != n");
  Vec<F> y = c * rk.q_mat;
  auto dec = gab_decode(GabidulinCode<F>(rk.a_dprime, k), y, rk.decode_radius);
  if (!dec) return std::nullopt;
  Vec<F> clean = (y - dec->e) * rk.q_inv;  // = m G_pub
  auto msg = rk.g_pub.solve_left(clean);
  if (!msg) return std::nullopt;
  return msg;
}

}  // namespace loidreau

#endif
