#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "graded.hpp"
#include "objects.hpp"
#include "poly.hpp"
#include "sl2_core.hpp"

namespace sl2pc {

// ---------------------------------------------------------------------------
// Structure constants of the real Lie algebra sl2(C), basis dual to the
// coordinates x1,y1,x2,y2,x3,y3 under x_i(A) = Re tr(X_i A).

struct LieStructure {
  std::array<std::array<std::array<Rational, 6>, 6>, 6> c{};  // [X_i, X_j] = c[i][j][k] X_k

  Poly6 bracket_linear(int i, int j) const {
    Poly6 p;
    for (int k = 0; k < 6; ++k) p += c[i][j][k] * Poly6::var(k);
    return p;
  }
};

inline Rational to_rational(double v) {
  Rational q(v);
  q.canonicalize();
  return q;
}

inline LieStructure structure_from_matrices() {
  std::array<Mat2, 6> b;
  for (int i = 0; i < 6; ++i) {
    Vec6 e{};
    e[i] = 1;
    b[i] = coords_to_matrix(e);
  }
  // Gram matrix of Re tr is diagonal for this basis
  std::array<Rational, 6> g;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      Mat2 m = b[i] * b[j];
      if (i != j && (m.a + m.d).real() != 0) throw Error(Errc::structure_mismatch, "trace form not diagonal");
    }
    Mat2 m = b[i] * b[i];
    g[i] = to_rational((m.a + m.d).real());
  }
  // X_i = B_i / g_i, and B_k = g_k X_k
  LieStructure s;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Vec6 v = matrix_to_coords(commutator(b[i], b[j]));
      for (int k = 0; k < 6; ++k) s.c[i][j][k] = to_rational(v[k]) * g[k] / (g[i] * g[j]);
    }
  return s;
}

inline LieStructure structure_from_poisson() {
  PoissonStructure p(pi1());
  LieStructure s;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Poly6 b = p.bracket(Poly6::var(i), Poly6::var(j));
      if (!b.is_zero() && !b.is_homogeneous(1)) throw Error(Errc::structure_mismatch, "pi1 is not linear");
      for (int k = 0; k < 6; ++k) {
        Exponent<6> e{};
        e[k] = 1;
        s.c[i][j][k] = b.coeff(e);
      }
    }
  return s;
}

inline LieStructure derive_structure_constants() {
  LieStructure a = structure_from_matrices(), b = structure_from_poisson();
  if (a.c != b.c) throw Error(Errc::structure_mismatch, "matrix and Poisson structure constants differ");
  return a;
}

// sum over cyclic (i,j,l) of [[X_i,X_j],X_l], max |coefficient|
inline Rational jacobi_residual(const LieStructure& s) {
  Rational worst = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int l = 0; l < 6; ++l)
        for (int m = 0; m < 6; ++m) {
          Rational r = 0;
          for (int k = 0; k < 6; ++k)
            r += s.c[i][j][k] * s.c[k][l][m] + s.c[j][l][k] * s.c[k][i][m] + s.c[l][i][k] * s.c[k][j][m];
          worst = std::max(worst, Rational(abs(r)));
        }
  return worst;
}

// ---------------------------------------------------------------------------
// Chevalley-Eilenberg complex with coefficients in Poly_d, X . h = {x_X, h}.

template <int N>
std::vector<Exponent<N>> monomials_of_degree(int d) {
  std::vector<Exponent<N>> out;
  Exponent<N> e{};
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == N - 1) {
      e[i] = static_cast<std::uint8_t>(left);
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[i] = static_cast<std::uint8_t>(v);
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), GrlexLess<N>{});
  return out;
}

// Basis of Lambda^k g* (x) Poly_d: index = mask position * #monomials + monomial position.
struct CochainBasis {
  int k = 0, d = 0;
  std::vector<Mask> masks;
  std::vector<Exponent<6>> monos;
  std::map<Mask, int> mask_pos;
  std::map<Exponent<6>, int, GrlexLess<6>> mono_pos;

  CochainBasis(int k_, int d_) : k(k_), d(d_), masks(subsets(6, k_)), monos(monomials_of_degree<6>(d_)) {
    for (std::size_t i = 0; i < masks.size(); ++i) mask_pos[masks[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < monos.size(); ++i) mono_pos[monos[i]] = static_cast<int>(i);
  }
  int size() const { return static_cast<int>(masks.size() * monos.size()); }
  int index(Mask m, const Exponent<6>& e) const {
    return mask_pos.at(m) * static_cast<int>(monos.size()) + mono_pos.at(e);
  }
};

// Column-sparse exact matrix.
struct SparseMatrix {
  int rows = 0, cols = 0;
  std::vector<std::map<int, Rational>> col;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : rows(r), cols(c), col(c) {}

  void add(int r, int c, const Rational& v) {
    if (v == 0) return;
    auto [it, fresh] = col[c].try_emplace(r, v);
    if (!fresh) {
      it->second += v;
      if (it->second == 0) col[c].erase(it);
    }
  }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (auto& c : col) n += c.size();
    return n;
  }
  bool is_zero() const { return nnz() == 0; }
};

inline SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix shapes");
  SparseMatrix r(a.rows, b.cols);
  for (int j = 0; j < b.cols; ++j)
    for (auto& [k, v] : b.col[j])
      for (auto& [i, w] : a.col[k]) r.add(i, j, w * v);
  return r;
}

constexpr int kDefaultDegreeCap = 8;

// Cochains in the CE basis as multivector fields: e^I (x) m <-> m d/dx_I.
inline GradedField cochain_to_field(const CochainBasis& b, const std::vector<Rational>& v) {
  GradedField g(Variance::multivector, b.k);
  for (int i = 0; i < b.size(); ++i) {
    if (v[i] == 0) continue;
    Mask m = b.masks[i / b.monos.size()];
    g.add(m, Poly6::monomial(b.monos[i % b.monos.size()], v[i]));
  }
  return g;
}

inline std::vector<Rational> field_to_cochain(const CochainBasis& b, const GradedField& g) {
  std::vector<Rational> v(b.size());
  for (auto& [m, p] : g.terms)
    for (auto& [e, c] : p.terms()) {
      if (total_degree<6>(e) != b.d || popcount(m) != b.k)
        throw std::invalid_argument("field outside the cochain slice");
      v[b.index(m, e)] += c;
    }
  return v;
}

// d(e^I (x) m) = d(e^I) (x) m + sum_i e^i ^ e^I (x) {x_i, m},
// d e^c = -sum_{a<b} c_ab^c e^a ^ e^b.
inline SparseMatrix ce_differential(const LieStructure& s, int k, int d, int cap = kDefaultDegreeCap) {
  if (d > cap) throw Error(Errc::degree_cap, "polynomial degree above cap");
  if (k < 0 || k > 5) throw std::invalid_argument("cochain degree out of range");
  CochainBasis src(k, d), dst(k + 1, d);
  SparseMatrix m(dst.size(), src.size());
  // {x_i, x_j} as linear polynomials
  std::array<std::array<Poly6, 6>, 6> br;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) br[i][j] = s.bracket_linear(i, j);
  for (std::size_t mi = 0; mi < src.masks.size(); ++mi) {
    Mask I = src.masks[mi];
    for (std::size_t pi = 0; pi < src.monos.size(); ++pi) {
      int c = src.index(I, src.monos[pi]);
      Poly6 mono = Poly6::monomial(src.monos[pi]);
      // structure part
      for (int cc : mask_indices(I)) {
        int pos = position_in(I, cc);
        Mask rest = static_cast<Mask>(I & ~(1u << cc));
        for (int a = 0; a < 6; ++a)
          for (int b2 = a + 1; b2 < 6; ++b2) {
            const Rational& coef = s.c[a][b2][cc];
            if (coef == 0) continue;
            Mask ab = static_cast<Mask>((1u << a) | (1u << b2));
            // e^I = (-1)^pos e^cc ^ e^rest, replace e^cc by -coef e^a^e^b
            int sg = wedge_sign(ab, rest);
            if (!sg) continue;
            Rational v = coef * (pos % 2 ? 1 : -1) * sg;
            m.add(dst.index(ab | rest, src.monos[pi]), c, v);
          }
      }
      // action part
      for (int i = 0; i < 6; ++i) {
        Mask ei = static_cast<Mask>(1u << i);
        int sg = wedge_sign(ei, I);
        if (!sg) continue;
        Poly6 act;
        for (int j = 0; j < 6; ++j)
          if (!br[i][j].is_zero() && src.monos[pi][j]) act += br[i][j] * mono.diff(j);
        for (auto& [e, v] : act.terms()) m.add(dst.index(ei | I, e), c, Rational(sg) * v);
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Rank: connected blocks of the sparsity pattern, then elimination mod three
// 62-bit primes; disagreement falls back to exact fraction-free elimination.

constexpr std::array<std::uint64_t, 3> kRankPrimes = {4611686018427387847ULL, 4611686018427387817ULL,
                                                      4611686018427387787ULL};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t rational_mod(const Rational& q, std::uint64_t p) {
  auto red = [p](const mpz_class& z) -> std::uint64_t {
    if (z.fits_slong_p()) {
      long v = z.get_si();
      std::uint64_t a = static_cast<std::uint64_t>(v < 0 ? -v : v) % p;
      return v < 0 && a ? p - a : a;
    }
    mpz_class r = z % mpz_class(std::to_string(p));
    if (r < 0) r += mpz_class(std::to_string(p));
    return std::stoull(r.get_str());
  };
  std::uint64_t den = red(q.get_den());
  if (den == 0) throw Error(Errc::modular_disagreement, "prime divides a denominator");
  return mulmod(red(q.get_num()), powmod(den, p - 2, p), p);
}

// Montgomery arithmetic modulo an odd p < 2^62, R = 2^64.
struct Montgomery {
  std::uint64_t p, pinv, r2;

  explicit Montgomery(std::uint64_t p_) : p(p_) {
    pinv = 1;
    for (int i = 0; i < 6; ++i) pinv *= 2 - p * pinv;  // p * pinv = 1 mod 2^64
    unsigned __int128 r = (static_cast<unsigned __int128>(1) << 64) % p;
    r2 = static_cast<std::uint64_t>(r * r % p);
  }
  std::uint64_t reduce(unsigned __int128 t) const {
    std::uint64_t m = static_cast<std::uint64_t>(t) * (0 - pinv);
    std::uint64_t u = static_cast<std::uint64_t>((t + static_cast<unsigned __int128>(m) * p) >> 64);
    return u >= p ? u - p : u;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(static_cast<unsigned __int128>(a) * b); }
  std::uint64_t to(std::uint64_t a) const { return mul(a, r2); }
  std::uint64_t inv(std::uint64_t a) const {  // a in Montgomery form
    std::uint64_t r = to(1), e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
};

// Rank mod p of a sparse matrix given by rows of (column, residue). Rows are
// bucketed by leading column; the shortest row in a bucket becomes the pivot.
using SparseRow = std::vector<std::pair<int, std::uint64_t>>;

inline int rank_mod(std::vector<SparseRow> rows, int cols, std::uint64_t p) {
  using Row = SparseRow;
  Montgomery M(p);
  std::vector<std::vector<Row>> bucket(cols);
  for (auto& r : rows) {
    if (r.empty()) continue;
    std::sort(r.begin(), r.end());
    for (auto& [c, v] : r) v = M.to(v);
    bucket[r[0].first].push_back(std::move(r));
  }
  int rank = 0;
  Row tmp;
  for (int c = 0; c < cols; ++c) {
    auto& b = bucket[c];
    if (b.empty()) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < b.size(); ++i)
      if (b[i].size() < b[best].size()) best = i;
    std::swap(b[best], b[0]);
    Row piv = std::move(b[0]);
    std::uint64_t inv = M.inv(piv[0].second);
    for (auto& [j, v] : piv) v = M.mul(v, inv);
    ++rank;
    for (std::size_t i = 1; i < b.size(); ++i) {
      Row& r = b[i];
      std::uint64_t nf = p - r[0].second;
      tmp.clear();
      std::size_t x = 1, y = 1;
      while (x < r.size() || y < piv.size()) {
        if (y == piv.size() || (x < r.size() && r[x].first < piv[y].first)) tmp.push_back(r[x++]);
        else if (x == r.size() || piv[y].first < r[x].first) { tmp.push_back({piv[y].first, M.mul(nf, piv[y].second)}); ++y; }
        else {
          std::uint64_t v = r[x].second + M.mul(nf, piv[y].second);
          if (v >= p) v -= p;
          if (v) tmp.push_back({r[x].first, v});
          ++x; ++y;
        }
      }
      if (!tmp.empty()) bucket[tmp[0].first].push_back(tmp);
    }
    b.clear();
    b.shrink_to_fit();
  }
  return rank;
}

// Exact rank by Bareiss elimination over the integers (rows scaled to clear denominators).
inline int rank_exact_dense(std::vector<std::vector<Rational>> q) {
  int rows = static_cast<int>(q.size());
  if (!rows) return 0;
  int cols = static_cast<int>(q[0].size());
  std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
  for (int i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (auto& v : q[i]) l = lcm(l, v.get_den());
    for (int j = 0; j < cols; ++j) a[i][j] = q[i][j].get_num() * (l / q[i][j].get_den());
  }
  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (a[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(a[piv], a[r]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

struct Block {
  std::vector<int> rows, cols;
};

// connected components of the bipartite row/column incidence graph
inline std::vector<Block> sparsity_blocks(const SparseMatrix& m) {
  std::vector<int> parent(m.rows + m.cols);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int c = 0; c < m.cols; ++c)
    for (auto& [r, v] : m.col[c]) parent[find(m.rows + c)] = find(r);
  std::map<int, Block> by_root;
  for (int c = 0; c < m.cols; ++c)
    if (!m.col[c].empty()) by_root[find(m.rows + c)].cols.push_back(c);
  for (int r = 0; r < m.rows; ++r) {
    auto it = by_root.find(find(r));
    if (it != by_root.end()) it->second.rows.push_back(r);
  }
  std::vector<Block> out;
  for (auto& [root, b] : by_root) out.push_back(std::move(b));
  return out;
}

struct RankReport {
  int rank = 0;
  std::array<int, 3> per_prime{};
  bool exact = false;  // fraction-free elimination was used
  std::size_t blocks = 0, largest = 0;
};


inline RankReport matrix_rank(const SparseMatrix& m, bool force_exact = false, int threads = 1) {
  RankReport rep;
  auto blocks = sparsity_blocks(m);
  rep.blocks = blocks.size();
  std::vector<std::array<int, 4>> res(blocks.size());  // 3 primes + exact (-1 if unused)
  auto work = [&](std::size_t bi) {
    const Block& b = blocks[bi];
    std::map<int, int> rpos;
    for (std::size_t i = 0; i < b.rows.size(); ++i) rpos[b.rows[i]] = static_cast<int>(i);
    // orient so the elimination runs over the shorter side
    bool tr = b.cols.size() < b.rows.size();
    int nr = static_cast<int>(tr ? b.cols.size() : b.rows.size());
    int nc = static_cast<int>(tr ? b.rows.size() : b.cols.size());
    std::array<int, 4> out{0, 0, 0, -1};
    for (int pi = 0; pi < 3; ++pi) {
      std::uint64_t p = kRankPrimes[pi];
      std::vector<SparseRow> a(b.cols.size());
      for (std::size_t j = 0; j < b.cols.size(); ++j)
        for (auto& [r, v] : m.col[b.cols[j]]) a[j].push_back({rpos.at(r), rational_mod(v, p)});
      out[pi] = rank_mod(std::move(a), static_cast<int>(b.rows.size()), p);
    }
    bool agree = out[0] == out[1] && out[1] == out[2];
    if (force_exact || !agree) {
      std::vector<std::vector<Rational>> q(nr, std::vector<Rational>(nc));
      for (std::size_t j = 0; j < b.cols.size(); ++j)
        for (auto& [r, v] : m.col[b.cols[j]]) {
          int i = rpos.at(r);
          (tr ? q[j][i] : q[i][j]) = v;
        }
      out[3] = rank_exact_dense(std::move(q));
    }
    res[bi] = out;
  };
  threads = std::max(1, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < blocks.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < blocks.size(); i += threads) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    rep.largest = std::max(rep.largest, std::max(blocks[i].rows.size(), blocks[i].cols.size()));
    for (int p = 0; p < 3; ++p) rep.per_prime[p] += res[i][p];
    if (res[i][3] >= 0) {
      rep.exact = true;
      rep.rank += res[i][3];
    } else {
      rep.rank += res[i][0];
    }
  }
  if (!force_exact && (rep.per_prime[0] != rep.per_prime[1] || rep.per_prime[1] != rep.per_prime[2]) && !rep.exact)
    throw Error(Errc::modular_disagreement, "modular ranks disagree");
  return rep;
}

// ---------------------------------------------------------------------------

struct CohomologySlice {
  int d = 0;
  std::array<int, 7> dims{};   // dim C^k
  std::array<int, 6> ranks{};  // rank M_k
  std::array<int, 7> betti{};
};

inline int cochain_dim(int k, int d) { return CochainBasis(k, d).size(); }

inline CohomologySlice cohomology_slice(const LieStructure& s, int d, int cap = kDefaultDegreeCap, int threads = 1) {
  if (d > cap) throw Error(Errc::degree_cap, "polynomial degree above cap");
  CohomologySlice out;
  out.d = d;
  for (int k = 0; k <= 6; ++k) out.dims[k] = cochain_dim(k, d);
  for (int k = 0; k < 6; ++k) out.ranks[k] = matrix_rank(ce_differential(s, k, d, cap), false, threads).rank;
  for (int k = 0; k <= 6; ++k) {
    int in = k > 0 ? out.ranks[k - 1] : 0;
    int outr = k < 6 ? out.ranks[k] : 0;
    out.betti[k] = out.dims[k] - outr - in;
  }
  return out;
}

inline int betti(const LieStructure& s, int k, int d, int cap = kDefaultDegreeCap) {
  if (k < 0 || k > 6) throw std::invalid_argument("cochain degree out of range");
  return cohomology_slice(s, d, cap).betti[k];
}

// m(d) (1,0,0,2,0,0,1), m(d) = d/2 + 1 for even d, 0 for odd d
inline int expected_betti(int k, int d) {
  static const int h[7] = {1, 0, 0, 2, 0, 0, 1};
  return d % 2 ? 0 : (d / 2 + 1) * h[k];
}

// ---------------------------------------------------------------------------
// Degree-3 representatives f1^a f2^b C_R, f1^a f2^b C_I.

struct WitnessReport {
  std::vector<GradedField> witnesses;
  int rank_image = 0;        // rank of M_2
  int rank_with_witnesses = 0;
};

inline std::vector<GradedField> cocycle_candidates(int d) {
  std::vector<GradedField> out;
  if (d % 2) return out;
  auto [cr, ci] = cartan_cocycles();
  for (int a = 0; a <= d / 2; ++a) {
    Poly6 g = f1_poly().pow(a) * f2_poly().pow(d / 2 - a);
    out.push_back(g * cr);
    out.push_back(g * ci);
  }
  return out;
}

inline SparseMatrix append_columns(const SparseMatrix& m, const CochainBasis& b, const std::vector<GradedField>& w) {
  SparseMatrix r(m.rows, m.cols + static_cast<int>(w.size()));
  for (int c = 0; c < m.cols; ++c) r.col[c] = m.col[c];
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto v = field_to_cochain(b, w[i]);
    for (int j = 0; j < b.size(); ++j) r.add(j, m.cols + static_cast<int>(i), v[j]);
  }
  return r;
}

inline std::vector<Rational> sparse_apply(const SparseMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> r(m.rows);
  for (int c = 0; c < m.cols; ++c) {
    if (v[c] == 0) continue;
    for (auto& [i, x] : m.col[c]) r[i] += x * v[c];
  }
  return r;
}

inline WitnessReport verify_witnesses(const LieStructure& s, int d, std::vector<GradedField> cands,
                                      int cap = kDefaultDegreeCap) {
  WitnessReport rep;
  rep.witnesses = std::move(cands);
  CochainBasis b(3, d);
  SparseMatrix m3 = ce_differential(s, 3, d, cap);
  for (auto& w : rep.witnesses) {
    auto img = sparse_apply(m3, field_to_cochain(b, w));
    for (auto& x : img)
      if (x != 0) throw Error(Errc::witness_not_closed, "candidate is not a cocycle");
  }
  SparseMatrix m2 = ce_differential(s, 2, d, cap);
  rep.rank_image = matrix_rank(m2).rank;
  rep.rank_with_witnesses = matrix_rank(append_columns(m2, b, rep.witnesses)).rank;
  if (rep.rank_with_witnesses - rep.rank_image != static_cast<int>(rep.witnesses.size()))
    throw Error(Errc::witness_not_independent, "candidates are dependent modulo coboundaries");
  return rep;
}

inline WitnessReport cocycle_witness(const LieStructure& s, int k, int d, int cap = kDefaultDegreeCap) {
  if (k != 3) throw std::invalid_argument("witnesses are provided in cochain degree 3");
  return verify_witnesses(s, d, cocycle_candidates(d), cap);
}

// k rows, d columns
inline std::string betti_table_text(const std::vector<CohomologySlice>& slices) {
  std::ostringstream os;
  os << "k\\d";
  for (auto& sl : slices) os << ' ' << sl.d;
  os << '\n';
  for (int k = 0; k <= 6; ++k) {
    os << k;
    for (auto& sl : slices) os << ' ' << sl.betti[k];
    os << '\n';
  }
  return os.str();
}

// Order-dependent fingerprint of a sparse matrix, for golden comparisons.
inline std::string matrix_fingerprint(const SparseMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  for (int c = 0; c < m.cols; ++c)
    for (auto& [r, v] : m.col[c]) {
      mix(static_cast<std::uint64_t>(c));
      mix(static_cast<std::uint64_t>(r));
      mix(rational_mod(v, kRankPrimes[0]));
    }
  std::ostringstream os;
  os << m.rows << 'x' << m.cols << " nnz=" << m.nnz() << " h=" << std::hex << h;
  return os.str();
}

}  // namespace sl2pc
