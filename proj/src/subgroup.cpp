#include "trk/subgroup.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace trk {

namespace {

int64_t igcd(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// g = gcd(a,b) together with x,y such that x*a + y*b = g.
struct ExtGcd {
  int64_t g, x, y;
};
ExtGcd extgcd(int64_t a, int64_t b) {
  if (b == 0) {
    if (a < 0) return {-a, -1, 0};
    return {a, 1, 0};
  }
  ExtGcd r = extgcd(b, a % b);
  return {r.g, r.y, r.x - (a / b) * r.y};
}

int64_t checked_pow(int64_t n, int64_t e) {
  __int128 r = 1;
  for (int64_t i = 0; i < e; ++i) {
    r *= n;
    if (r > INT64_MAX / 2) fail(ErrKind::DepthExceeded, "n-power overflow");
  }
  return static_cast<int64_t>(r);
}

int64_t mod_pos(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// --- letters for free-group machinery -------------------------------------

// letter 2g = generator g, 2g+1 = its inverse
std::vector<int> letters_of(const Word& w) {
  std::vector<int> out;
  for (const auto& s : w.syls) {
    int l = s.exp > 0 ? 2 * s.gen : 2 * s.gen + 1;
    int64_t n = s.exp > 0 ? s.exp : -s.exp;
    for (int64_t i = 0; i < n; ++i) out.push_back(l);
  }
  return out;
}

int inv_letter(int l) { return l ^ 1; }

Word word_from_letters(const std::vector<int>& ls) {
  Word w;
  for (int l : ls) w.push(l / 2, (l & 1) ? -1 : 1);
  return w;
}

SubExpr expr_concat(const SubExpr& a, const SubExpr& b, int64_t bsign) {
  SubExpr r = a;
  if (bsign > 0) {
    for (auto& p : b) r.push_back(p);
  } else {
    for (auto it = b.rbegin(); it != b.rend(); ++it)
      r.push_back({it->first, -it->second});
  }
  return r;
}

}  // namespace

// --- Stallings core ---------------------------------------------------------

struct SubgroupOracle::FreeCore {
  int num_letters = 0;
  int base = 0;
  std::vector<std::vector<int>> trans;  // trans[v][letter] = target or -1
  std::vector<Word> least_to;           // shortlex-least core word base -> v
  std::vector<Word> nielsen;
  std::vector<SubExpr> nielsen_expr;

  int new_vertex() {
    trans.emplace_back(num_letters, -1);
    return static_cast<int>(trans.size()) - 1;
  }
};

namespace {

// Folding with a union-find; classic worklist construction.
struct Folder {
  std::vector<int> parent;
  std::vector<std::map<int, int>> out;
  int num_letters;

  explicit Folder(int letters) : num_letters(letters) {}

  int add_vertex() {
    parent.push_back(static_cast<int>(parent.size()));
    out.emplace_back();
    return static_cast<int>(parent.size()) - 1;
  }

  int find(int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }

  void add_edge(int u, int l, int v) {
    std::deque<std::array<int, 3>> work{{u, l, v}};
    while (!work.empty()) {
      auto [a, la, b] = work.front();
      work.pop_front();
      a = find(a);
      b = find(b);
      auto it = out[a].find(la);
      if (it != out[a].end()) {
        int c = find(it->second);
        if (c != b) {
          // fold b into c
          parent[b] = c;
          for (auto& [l2, t2] : out[b]) work.push_back({b, l2, find(t2)});
          out[b].clear();
        }
        continue;
      }
      out[a][la] = b;
      auto jt = out[b].find(inv_letter(la));
      if (jt == out[b].end()) {
        out[b][inv_letter(la)] = a;
      } else if (find(jt->second) != a) {
        work.push_back({b, inv_letter(la), a});
      }
    }
  }
};

}  // namespace

SubgroupOracle::SubgroupOracle(const GroupOracle& oracle, std::vector<Word> gens)
    : oracle_(&oracle) {
  for (auto& g : gens) {
    Word n = oracle.normalize(g);
    if (!n.empty()) gens_.push_back(std::move(g));
  }
  // keep declared generator order; drop identities only
  switch (oracle.kind()) {
    case OracleKind::Finite: {
      int64_t d = oracle.order();
      for (const auto& g : gens_) {
        Word n = oracle.normalize(g);
        int64_t k = n.empty() ? 0 : n.syls[0].exp;
        d = igcd(d, k);
      }
      finite_d_ = d == 0 ? oracle.order() : d;
      break;
    }
    case OracleKind::Free: {
      free_ = std::make_shared<FreeCore>();
      free_->num_letters = 2 * oracle.rank();
      Folder f(free_->num_letters);
      int base = f.add_vertex();
      for (const auto& g : gens_) {
        auto ls = letters_of(oracle.normalize(g));
        int cur = base;
        for (size_t i = 0; i < ls.size(); ++i) {
          int nxt = (i + 1 == ls.size()) ? base : f.add_vertex();
          f.add_edge(cur, ls[i], nxt);
          cur = nxt;
        }
      }
      // compact
      std::map<int, int> remap;
      for (int v = 0; v < static_cast<int>(f.parent.size()); ++v) {
        int r = f.find(v);
        if (!remap.count(r)) remap[r] = -1;
      }
      int idx = 0;
      // deterministic order: BFS from base over letter order
      std::deque<int> q{f.find(base)};
      remap[f.find(base)] = idx++;
      std::vector<int> order{f.find(base)};
      while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (auto& [l, t] : f.out[v]) {
          int r = f.find(t);
          if (remap[r] == -1) {
            remap[r] = idx++;
            order.push_back(r);
            q.push_back(r);
          }
        }
      }
      // unreachable folded-away ids are dropped (all live vertices reachable)
      free_->base = 0;
      free_->trans.assign(idx, std::vector<int>(free_->num_letters, -1));
      for (int v : order)
        for (auto& [l, t] : f.out[v]) free_->trans[remap[v]][l] = remap[f.find(t)];
      // shortlex-least words to each vertex
      free_->least_to.assign(idx, Word{});
      std::vector<bool> seen(idx, false);
      seen[0] = true;
      std::deque<int> bq{0};
      while (!bq.empty()) {
        int v = bq.front();
        bq.pop_front();
        for (int l = 0; l < free_->num_letters; ++l) {
          int t = free_->trans[v][l];
          if (t >= 0 && !seen[t]) {
            seen[t] = true;
            Word w = free_->least_to[v];
            w.push(l / 2, (l & 1) ? -1 : 1);
            free_->least_to[t] = std::move(w);
            bq.push_back(t);
          }
        }
      }
      // Nielsen-reduced tuple with recorded expressions, for express()
      std::vector<std::pair<Word, SubExpr>> items;
      for (int i = 0; i < static_cast<int>(gens_.size()); ++i)
        items.push_back({oracle.normalize(gens_[i]), {{i, 1}}});
      bool changed = true;
      while (changed) {
        changed = false;
        for (auto& it : items)
          if (it.first.empty()) {
            it = items.back();
            items.pop_back();
            changed = true;
            break;
          }
        if (changed) continue;
        for (size_t i = 0; i < items.size() && !changed; ++i) {
          for (size_t j = 0; j < items.size() && !changed; ++j) {
            if (i == j) continue;
            for (int s : {1, -1}) {
              Word cand = oracle.multiply(
                  items[i].first,
                  s > 0 ? items[j].first : oracle.inverse(items[j].first));
              if (cand.syl_length() < items[i].first.syl_length()) {
                items[i] = {cand, expr_concat(items[i].second, items[j].second, s)};
                changed = true;
                break;
              }
            }
          }
        }
      }
      for (auto& it : items) {
        free_->nielsen.push_back(it.first);
        free_->nielsen_expr.push_back(it.second);
      }
      break;
    }
    case OracleKind::FreeAbelian: {
      abel_ = std::make_shared<AbelData>();
      build_abel();
      break;
    }
    case OracleKind::BaumslagSolitar: {
      bs_ = std::make_shared<BsData>();
      build_bs();
      break;
    }
  }
}

// --- free-abelian lattice ----------------------------------------------------

struct SubgroupOracle::AbelData {
  int r = 0;
  // basis columns with strictly increasing pivot rows; positive pivots
  std::vector<std::vector<int64_t>> basis;
  std::vector<int> pivot;
  std::vector<std::vector<int64_t>> expr;  // column expression over gens_
};

namespace {
std::vector<int64_t> vec_of(const Word& w, int r) {
  std::vector<int64_t> v(r, 0);
  for (const auto& s : w.syls) v[s.gen] += s.exp;
  return v;
}
}  // namespace

void SubgroupOracle::build_abel() {
  auto& d = *abel_;
  d.r = oracle_->rank();
  std::vector<std::vector<int64_t>> cols, exprs;
  for (size_t i = 0; i < gens_.size(); ++i) {
    cols.push_back(vec_of(oracle_->normalize(gens_[i]), d.r));
    std::vector<int64_t> e(gens_.size(), 0);
    e[i] = 1;
    exprs.push_back(e);
  }
  size_t k = 0;
  for (int row = 0; row < d.r && k < cols.size(); ++row) {
    // Euclid on entries of row `row` among columns k..end
    while (true) {
      size_t best = cols.size();
      for (size_t j = k; j < cols.size(); ++j)
        if (cols[j][row] != 0 &&
            (best == cols.size() ||
             std::abs(cols[j][row]) < std::abs(cols[best][row])))
          best = j;
      if (best == cols.size()) break;  // whole row zero
      std::swap(cols[k], cols[best]);
      std::swap(exprs[k], exprs[best]);
      bool others = false;
      for (size_t j = k + 1; j < cols.size(); ++j) {
        if (cols[j][row] == 0) continue;
        int64_t q = cols[j][row] / cols[k][row];
        for (int i2 = 0; i2 < d.r; ++i2) cols[j][i2] -= q * cols[k][i2];
        for (size_t i2 = 0; i2 < exprs[j].size(); ++i2)
          exprs[j][i2] -= q * exprs[k][i2];
        if (cols[j][row] != 0) others = true;
      }
      if (!others) break;
    }
    if (cols[k][row] != 0) {
      if (cols[k][row] < 0) {
        for (auto& x : cols[k]) x = -x;
        for (auto& x : exprs[k]) x = -x;
      }
      d.basis.push_back(cols[k]);
      d.pivot.push_back(row);
      d.expr.push_back(exprs[k]);
      ++k;
    }
  }
}

// --- bs(1,n) ------------------------------------------------------------------

// Affine form of a bs(1,n) element: x -> n^deg * x + num / n^pow,
// with pow >= 0 and (num == 0 => pow == 0) and (pow > 0 => n does not
// divide num).
struct BsAffine {
  int64_t deg = 0;
  int64_t num = 0;
  int64_t pow = 0;
};

struct SubgroupOracle::BsData {
  int64_t n = 0;
  int64_t D = 0;  // gcd of degrees; 0 when all generators lie in the base
  Word u;         // degree-D element (oracle word), D > 0 only
  SubExpr u_expr;
  int64_t g0 = 0;                 // K = g0 * Z[1/n]; 0 means trivial module
  int64_t dnum = 0, dpow = 0;     // D == 0: H = (dnum/n^dpow) * Z
  std::vector<BsAffine> bvals;
  std::vector<SubExpr> bexpr;
  std::vector<int64_t> kvals;
};

namespace {

void bs_reduce(BsAffine& a, int64_t n) {
  if (a.num == 0) {
    a.pow = 0;
    return;
  }
  while (a.pow > 0 && a.num % n == 0) {
    a.num /= n;
    --a.pow;
  }
}

BsAffine bs_aff_of(const GroupOracle& o, const Word& w) {
  Word nf = o.normalize(w);
  int64_t p = 0, m = 0, q = 0;
  for (const auto& s : nf.syls) {
    if (s.gen == 1 && s.exp < 0) p = -s.exp;
    if (s.gen == 0) m = s.exp;
    if (s.gen == 1 && s.exp > 0) q = s.exp;
  }
  // nf = t^-p a^m t^q : x -> n^(q-p) x + m/n^p
  BsAffine a{q - p, m, p};
  bs_reduce(a, o.bs_n());
  return a;
}

// sum = a + b over Z[1/n]
std::pair<int64_t, int64_t> bs_frac_add(int64_t an, int64_t ap, int64_t bn,
                                        int64_t bp, int64_t n) {
  int64_t P = std::max(ap, bp);
  __int128 A = static_cast<__int128>(an) * checked_pow(n, P - ap);
  __int128 B = static_cast<__int128>(bn) * checked_pow(n, P - bp);
  __int128 S = A + B;
  if (S > INT64_MAX / 2 || S < INT64_MIN / 2)
    fail(ErrKind::DepthExceeded, "bs fraction overflow");
  return {static_cast<int64_t>(S), P};
}

BsAffine bs_mul(const BsAffine& a, const BsAffine& b, int64_t n) {
  // (a*b)(x) = a(b(x)) = n^da (n^db x + cb) + ca = n^(da+db) x + n^da cb + ca
  BsAffine r;
  r.deg = a.deg + b.deg;
  int64_t cn = b.num, cp = b.pow;
  if (a.deg >= 0) {
    __int128 v = static_cast<__int128>(cn) * checked_pow(n, a.deg);
    if (v > INT64_MAX / 2 || v < INT64_MIN / 2)
      fail(ErrKind::DepthExceeded, "bs fraction overflow");
    cn = static_cast<int64_t>(v);
  } else {
    cp += -a.deg;
  }
  auto [sn, sp] = bs_frac_add(cn, cp, a.num, a.pow, n);
  r.num = sn;
  r.pow = sp;
  bs_reduce(r, n);
  return r;
}

Word bs_word_of(const BsAffine& a, int64_t n) {
  // reconstruct t^-p a^m t^q
  int64_t p = std::max(a.pow, -a.deg);
  int64_t m = a.num * checked_pow(n, p - a.pow);
  int64_t q = a.deg + p;
  Word w;
  w.push(1, -p);
  w.push(0, m);
  w.push(1, q);
  return w;
}

int64_t strip_n_part(int64_t g, int64_t n) {
  if (g == 0) return 0;
  g = g < 0 ? -g : g;
  while (true) {
    int64_t d = igcd(g, n);
    if (d == 1) return g;
    while (g % d == 0) g /= d;
    if (g == 1) return 1;
  }
}

}  // namespace

void SubgroupOracle::build_bs() {
  auto& d = *bs_;
  d.n = oracle_->bs_n();
  std::vector<BsAffine> affs;
  for (const auto& g : gens_) affs.push_back(bs_aff_of(*oracle_, g));
  int64_t D = 0;
  for (const auto& a : affs) D = igcd(D, a.deg);
  d.D = D;
  if (D == 0) {
    // every generator is in the base Z[1/n]; H is cyclic
    int64_t P = 0;
    for (const auto& a : affs) P = std::max(P, a.pow);
    int64_t g = 0;
    for (const auto& a : affs) g = igcd(g, a.num * checked_pow(d.n, P - a.pow));
    d.dnum = g;
    d.dpow = g == 0 ? 0 : P;
    BsAffine delta{0, d.dnum, d.dpow};
    bs_reduce(delta, d.n);
    d.dnum = delta.num;
    d.dpow = delta.pow;
    return;
  }
  // stable-letter word u of degree D via iterated Bezout
  Word u;  // identity
  SubExpr uexpr;
  int64_t du = 0;
  for (size_t i = 0; i < gens_.size(); ++i) {
    if (affs[i].deg == 0) continue;
    if (du == 0) {
      u = gens_[i];
      uexpr = {{static_cast<int>(i), 1}};
      du = affs[i].deg;
      continue;
    }
    ExtGcd e = extgcd(du, affs[i].deg);
    // u' = u^x * g_i^y
    Word nu;
    SubExpr nexpr;
    for (int64_t k = 0; k < std::abs(e.x); ++k)
      nu.append(e.x > 0 ? u : oracle_->inverse(u));
    nexpr = expr_concat({}, uexpr, 1);
    SubExpr tmp;
    for (int64_t k = 0; k < std::abs(e.x); ++k) tmp = expr_concat(tmp, uexpr, e.x > 0 ? 1 : -1);
    nexpr = tmp;
    for (int64_t k = 0; k < std::abs(e.y); ++k) {
      nu.append(e.y > 0 ? gens_[i] : oracle_->inverse(gens_[i]));
      nexpr.push_back({static_cast<int>(i), e.y > 0 ? 1 : -1});
    }
    u = oracle_->normalize(nu);
    uexpr = nexpr;
    du = e.g;
  }
  if (du < 0) {
    u = oracle_->inverse(u);
    SubExpr inv;
    for (auto it = uexpr.rbegin(); it != uexpr.rend(); ++it)
      inv.push_back({it->first, -it->second});
    uexpr = inv;
    du = -du;
  }
  d.D = du;
  d.u = u;
  d.u_expr = uexpr;
  BsAffine ua = bs_aff_of(*oracle_, u);
  // base parts b_i = g_i u^{-k_i}
  int64_t P = 0;
  for (size_t i = 0; i < gens_.size(); ++i) {
    int64_t k = affs[i].deg / d.D;
    d.kvals.push_back(k);
    BsAffine ui{0, 0, 0};
    BsAffine uinv = bs_aff_of(*oracle_, oracle_->inverse(u));
    BsAffine acc{0, 0, 0};
    if (k >= 0)
      for (int64_t j = 0; j < k; ++j) acc = bs_mul(acc, uinv, d.n);
    else
      for (int64_t j = 0; j < -k; ++j) acc = bs_mul(acc, ua, d.n);
    BsAffine b = bs_mul(affs[i], acc, d.n);
    (void)ui;
    d.bvals.push_back(b);
    SubExpr be{{static_cast<int>(i), 1}};
    SubExpr uinv_rep;
    for (int64_t j = 0; j < std::abs(k); ++j)
      be = expr_concat(be, d.u_expr, k > 0 ? -1 : 1);
    (void)uinv_rep;
    d.bexpr.push_back(be);
    P = std::max(P, b.pow);
  }
  int64_t g = 0;
  for (const auto& b : d.bvals) g = igcd(g, b.num * checked_pow(d.n, P - b.pow));
  d.g0 = strip_n_part(g, d.n);
}

// --- queries -------------------------------------------------------------------

bool SubgroupOracle::contains(const Word& w) const {
  Word nf = oracle_->normalize(w);
  switch (oracle_->kind()) {
    case OracleKind::Finite: {
      int64_t k = nf.empty() ? 0 : nf.syls[0].exp;
      return k % finite_d_ == 0;
    }
    case OracleKind::Free: {
      auto ls = letters_of(nf);
      int v = free_->base;
      for (int l : ls) {
        v = free_->trans[v][l];
        if (v < 0) return false;
      }
      return v == free_->base;
    }
    case OracleKind::FreeAbelian: {
      auto v = vec_of(nf, abel_->r);
      for (size_t j = 0; j < abel_->basis.size(); ++j) {
        int p = abel_->pivot[j];
        int64_t dpv = abel_->basis[j][p];
        if (v[p] % dpv != 0) return false;
        int64_t q = v[p] / dpv;
        for (int i = 0; i < abel_->r; ++i) v[i] -= q * abel_->basis[j][i];
      }
      for (auto x : v)
        if (x != 0) return false;
      return true;
    }
    case OracleKind::BaumslagSolitar: {
      auto& d = *bs_;
      BsAffine a = bs_aff_of(*oracle_, nf);
      if (d.D == 0) {
        if (a.deg != 0) return false;
        if (d.dnum == 0) return a.num == 0;
        // a.num/n^a.pow in (dnum/n^dpow) Z ?
        __int128 T = static_cast<__int128>(a.num) * checked_pow(d.n, d.dpow);
        __int128 U = static_cast<__int128>(d.dnum) * checked_pow(d.n, a.pow);
        return U != 0 && T % U == 0;
      }
      if (a.deg % d.D != 0) return false;
      BsAffine ua = bs_aff_of(*oracle_, d.u);
      BsAffine uinv = bs_aff_of(*oracle_, oracle_->inverse(d.u));
      BsAffine acc = a;
      int64_t k = a.deg / d.D;
      for (int64_t j = 0; j < std::abs(k); ++j)
        acc = bs_mul(acc, k > 0 ? uinv : ua, d.n);
      // acc is in the base now
      if (acc.deg != 0) return false;
      if (d.g0 == 0) return acc.num == 0;
      return acc.num % d.g0 == 0;
    }
  }
  return false;
}

Word SubgroupOracle::coset_canon(const Word& w) const {
  Word nf = oracle_->normalize(w);
  switch (oracle_->kind()) {
    case OracleKind::Finite: {
      int64_t k = nf.empty() ? 0 : nf.syls[0].exp;
      Word r;
      r.push(0, mod_pos(k, finite_d_));
      return r;
    }
    case OracleKind::Free: {
      // state of w^-1 in the Schreier picture: longest core prefix + residue
      auto ls = letters_of(oracle_->inverse(nf));
      int v = free_->base;
      size_t i = 0;
      for (; i < ls.size(); ++i) {
        int t = free_->trans[v][ls[i]];
        if (t < 0) break;
        v = t;
      }
      std::vector<int> path = letters_of(free_->least_to[v]);
      path.insert(path.end(), ls.begin() + i, ls.end());
      Word rep_inv = word_from_letters(path);
      return oracle_->inverse(rep_inv);
    }
    case OracleKind::FreeAbelian: {
      auto v = vec_of(nf, abel_->r);
      for (size_t j = 0; j < abel_->basis.size(); ++j) {
        int p = abel_->pivot[j];
        int64_t dpv = abel_->basis[j][p];
        int64_t q = v[p] >= 0 ? v[p] / dpv : -((-v[p] + dpv - 1) / dpv);
        for (int i = 0; i < abel_->r; ++i) v[i] -= q * abel_->basis[j][i];
      }
      Word r;
      for (int i = 0; i < abel_->r; ++i) r.push(i, v[i]);
      return r;
    }
    case OracleKind::BaumslagSolitar: {
      auto& d = *bs_;
      BsAffine a = bs_aff_of(*oracle_, nf);
      if (d.D == 0) {
        if (d.dnum == 0) return nf;  // trivial subgroup
        // residue of the base part modulo n^deg * delta * Z
        // modulus = dnum / n^(dpow - deg)
        int64_t mp = d.dpow - a.deg;  // modulus = dnum / n^mp
        int64_t T = std::max({a.pow, mp, int64_t(0)});
        int64_t M = a.num * checked_pow(d.n, T - a.pow);
        int64_t G = d.dnum * checked_pow(d.n, T - mp);
        if (G < 0) G = -G;
        BsAffine r{a.deg, mod_pos(M, G), T};
        bs_reduce(r, d.n);
        return bs_word_of(r, d.n);
      }
      int64_t q0 = mod_pos(a.deg, d.D);
      int64_t f = q0 - a.deg;  // multiple of D
      BsAffine ua = bs_aff_of(*oracle_, d.u);
      BsAffine uinv = bs_aff_of(*oracle_, oracle_->inverse(d.u));
      BsAffine uf{0, 0, 0};
      for (int64_t j = 0; j < std::abs(f / d.D); ++j)
        uf = bs_mul(uf, f > 0 ? ua : uinv, d.n);
      // c' = c + n^deg * base(uf)
      int64_t cn = uf.num, cp = uf.pow;
      if (a.deg >= 0) {
        __int128 v2 = static_cast<__int128>(cn) * checked_pow(d.n, a.deg);
        if (v2 > INT64_MAX / 2 || v2 < INT64_MIN / 2)
          fail(ErrKind::DepthExceeded, "bs overflow");
        cn = static_cast<int64_t>(v2);
      } else {
        cp += -a.deg;
      }
      auto [sn, sp] = bs_frac_add(cn, cp, a.num, a.pow, d.n);
      BsAffine c{0, sn, sp};
      bs_reduce(c, d.n);
      int64_t cstar;
      if (d.g0 == 0) {
        // K trivial: keep exact base value
        BsAffine r{q0, c.num, c.pow};
        bs_reduce(r, d.n);
        return bs_word_of(r, d.n);
      }
      // residue r = num * (n^pow)^-1 mod g0, in [0, g0)
      int64_t ninv = 1;
      {
        ExtGcd e = extgcd(mod_pos(d.n, d.g0), d.g0);
        ninv = mod_pos(e.x, d.g0);
      }
      int64_t r = mod_pos(c.num, d.g0);
      for (int64_t j = 0; j < c.pow; ++j)
        r = static_cast<int64_t>((static_cast<__int128>(r) * ninv) % d.g0);
      cstar = r;
      BsAffine res{q0, cstar, 0};
      bs_reduce(res, d.n);
      return bs_word_of(res, d.n);
    }
  }
  return nf;
}

std::optional<SubExpr> SubgroupOracle::express(const Word& w) const {
  if (!contains(w)) return std::nullopt;
  Word nf = oracle_->normalize(w);
  auto verify = [&](const SubExpr& e) {
    Word acc;
    for (auto [i, k] : e) {
      Word g = k > 0 ? gens_[i] : oracle_->inverse(gens_[i]);
      for (int64_t j = 0; j < std::abs(k); ++j) acc = oracle_->multiply(acc, g);
    }
    return oracle_->equal(acc, nf);
  };
  switch (oracle_->kind()) {
    case OracleKind::Finite: {
      int64_t k = nf.empty() ? 0 : nf.syls[0].exp;
      // iterated Bezout over (order, k_1, ..., k_m)
      int64_t g = oracle_->order();
      std::vector<int64_t> coef(gens_.size(), 0);
      for (size_t i = 0; i < gens_.size(); ++i) {
        Word n2 = oracle_->normalize(gens_[i]);
        int64_t ki = n2.empty() ? 0 : n2.syls[0].exp;
        ExtGcd e = extgcd(g, ki);
        for (auto& c : coef) c *= e.x;
        coef[i] = e.y;
        g = e.g;
      }
      SubExpr r;
      int64_t mult = k / g;
      for (size_t i = 0; i < gens_.size(); ++i)
        if (coef[i] * mult != 0)
          r.push_back({static_cast<int>(i),
                       mod_pos(coef[i] * mult, oracle_->order())});
      if (verify(r)) return r;
      return std::nullopt;
    }
    case OracleKind::Free: {
      // single-generator fast path
      if (gens_.size() == 1) {
        Word u = oracle_->normalize(gens_[0]);
        for (int s : {1, -1}) {
          Word acc;
          Word step = s > 0 ? u : oracle_->inverse(u);
          for (int64_t k = 1; ; ++k) {
            acc = oracle_->multiply(acc, step);
            if (acc == nf) return SubExpr{{0, s * k}};
            if (acc.syl_length() > nf.syl_length() + u.syl_length()) break;
            if (k > 4096) break;
          }
        }
        return std::nullopt;
      }
      // greedy over the Nielsen-reduced tuple
      {
        Word cur = nf;
        SubExpr out;
        bool stuck = false;
        int guard = 0;
        while (!cur.empty() && !stuck && ++guard < 10000) {
          stuck = true;
          int64_t best_len = cur.syl_length();
          int best_i = -1, best_s = 0;
          for (size_t i = 0; i < free_->nielsen.size(); ++i) {
            for (int s : {1, -1}) {
              Word u = s > 0 ? free_->nielsen[i] : oracle_->inverse(free_->nielsen[i]);
              Word rem = oracle_->multiply(oracle_->inverse(u), cur);
              if (rem.syl_length() < best_len) {
                best_len = rem.syl_length();
                best_i = static_cast<int>(i);
                best_s = s;
              }
            }
          }
          if (best_i >= 0) {
            Word u = best_s > 0 ? free_->nielsen[best_i]
                                : oracle_->inverse(free_->nielsen[best_i]);
            cur = oracle_->multiply(oracle_->inverse(u), cur);
            out = expr_concat(out, free_->nielsen_expr[best_i], best_s);
            stuck = false;
          }
        }
        if (cur.empty() && verify(out)) return out;
      }
      // bounded BFS over products of generators
      {
        struct State {
          Word w;
          SubExpr e;
        };
        std::unordered_set<Word, WordHash> seen{Word{}};
        std::deque<State> q{{Word{}, {}}};
        size_t expansions = 0;
        while (!q.empty() && expansions < 200000) {
          State st = q.front();
          q.pop_front();
          ++expansions;
          for (size_t i = 0; i < gens_.size(); ++i) {
            for (int s : {1, -1}) {
              Word nw = oracle_->multiply(
                  st.w, s > 0 ? gens_[i] : oracle_->inverse(gens_[i]));
              if (nw == nf) {
                SubExpr e = st.e;
                e.push_back({static_cast<int>(i), s});
                return e;
              }
              if (nw.syl_length() > nf.syl_length() + 24) continue;
              if (seen.insert(nw).second) {
                SubExpr e = st.e;
                e.push_back({static_cast<int>(i), s});
                q.push_back({nw, e});
              }
            }
          }
        }
      }
      return std::nullopt;
    }
    case OracleKind::FreeAbelian: {
      auto v = vec_of(nf, abel_->r);
      std::vector<int64_t> coef(gens_.size(), 0);
      for (size_t j = 0; j < abel_->basis.size(); ++j) {
        int p = abel_->pivot[j];
        int64_t q = v[p] / abel_->basis[j][p];
        for (int i = 0; i < abel_->r; ++i) v[i] -= q * abel_->basis[j][i];
        for (size_t i = 0; i < gens_.size(); ++i)
          coef[i] += q * abel_->expr[j][i];
      }
      SubExpr r;
      for (size_t i = 0; i < gens_.size(); ++i)
        if (coef[i] != 0) r.push_back({static_cast<int>(i), coef[i]});
      if (verify(r)) return r;
      return std::nullopt;
    }
    case OracleKind::BaumslagSolitar: {
      auto& d = *bs_;
      BsAffine a = bs_aff_of(*oracle_, nf);
      if (d.D == 0) {
        if (d.dnum == 0) return SubExpr{};
        // w = delta^z with z = value(w)/delta
        __int128 T = static_cast<__int128>(a.num) * checked_pow(d.n, d.dpow);
        __int128 U = static_cast<__int128>(d.dnum) * checked_pow(d.n, a.pow);
        int64_t z = static_cast<int64_t>(T / U);
        // express delta over generators by iterated Bezout on scaled numerators
        int64_t P = 0;
        std::vector<BsAffine> affs;
        for (const auto& g : gens_) affs.push_back(bs_aff_of(*oracle_, g));
        for (const auto& b : affs) P = std::max(P, b.pow);
        int64_t g = 0;
        std::vector<int64_t> coef(gens_.size(), 0);
        for (size_t i = 0; i < gens_.size(); ++i) {
          int64_t mi = affs[i].num * checked_pow(d.n, P - affs[i].pow);
          ExtGcd e = extgcd(g, mi);
          for (auto& c : coef) c *= e.x;
          coef[i] = e.y;
          g = e.g;
        }
        SubExpr r;
        for (size_t i = 0; i < gens_.size(); ++i)
          if (coef[i] * z != 0) r.push_back({static_cast<int>(i), coef[i] * z});
        if (verify(r)) return r;
        return std::nullopt;
      }
      int64_t k = a.deg / d.D;
      BsAffine ua = bs_aff_of(*oracle_, d.u);
      BsAffine uinv = bs_aff_of(*oracle_, oracle_->inverse(d.u));
      BsAffine beta = a;
      for (int64_t j = 0; j < std::abs(k); ++j)
        beta = bs_mul(beta, k > 0 ? uinv : ua, d.n);
      // solve beta = sum lambda_i b_i over Z[1/n]
      SubExpr out;
      if (beta.num != 0) {
        int64_t P = beta.pow;
        for (const auto& b : d.bvals) P = std::max(P, b.pow);
        // solve  sum_i z_i * num(b_i) = n^E * beta  over Z, raising E until
        // the n-part of gcd(num(b_i)) divides the right-hand side
        int64_t E = std::max(P, beta.pow);
        std::vector<int64_t> m(d.bvals.size());
        int64_t g = 0;
        for (size_t i = 0; i < m.size(); ++i) {
          m[i] = d.bvals[i].num;
          g = igcd(g, m[i]);
        }
        int64_t B = beta.num * checked_pow(d.n, E - beta.pow);
        while (g != 0 && B % g != 0) {
          ++E;
          __int128 B128 = static_cast<__int128>(B) * d.n;
          if (B128 > INT64_MAX / 2 || B128 < INT64_MIN / 2)
            fail(ErrKind::DepthExceeded, "bs express overflow");
          B = static_cast<int64_t>(B128);
          if (E > P + 64) return std::nullopt;
        }
        std::vector<int64_t> z(m.size(), 0);
        int64_t run = 0;
        for (size_t i = 0; i < m.size(); ++i) {
          ExtGcd e = extgcd(run, m[i]);
          for (auto& c : z) c *= e.x;
          z[i] = e.y;
          run = e.g;
        }
        if (run == 0) return std::nullopt;
        int64_t mult = B / run;
        // each lambda_i = z_i * mult / n^(E - s_i); realize by u-conjugation
        for (size_t i = 0; i < m.size(); ++i) {
          int64_t zi = z[i] * mult;
          if (zi == 0) continue;
          int64_t t = E - d.bvals[i].pow;  // lambda_i = zi / n^t
          int64_t md = ((t + d.D - 1) / d.D);  // conjugate by u^md
          int64_t r = md * d.D - t;
          int64_t scaled = zi * checked_pow(d.n, r);
          SubExpr term;
          for (int64_t j = 0; j < md; ++j) term = expr_concat(term, d.u_expr, -1);
          SubExpr bi = d.bexpr[i];
          for (int64_t rep = 0; rep < std::abs(scaled); ++rep)
            term = expr_concat(term, bi, scaled > 0 ? 1 : -1);
          for (int64_t j = 0; j < md; ++j) term = expr_concat(term, d.u_expr, 1);
          out = expr_concat(out, term, 1);
          if (std::abs(scaled) > 4096) return std::nullopt;
        }
      }
      for (int64_t j = 0; j < std::abs(k); ++j)
        out = expr_concat(out, d.u_expr, k > 0 ? 1 : -1);
      if (verify(out)) return out;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

Word SubgroupOracle::apply_expr(const SubExpr& e, const std::vector<Word>& images,
                                const GroupOracle& target) const {
  Word acc;
  for (auto [i, k] : e) {
    Word g = k > 0 ? images[i] : target.inverse(images[i]);
    for (int64_t j = 0; j < std::abs(k); ++j) acc = target.multiply(acc, g);
  }
  return acc;
}

bool SubgroupOracle::is_whole_group() const {
  for (int g = 0; g < oracle_->num_gens(); ++g)
    if (!contains(word_of({{g, 1}}))) return false;
  return true;
}

bool SubgroupOracle::is_trivial() const {
  for (const auto& g : gens_)
    if (!oracle_->is_identity(g)) return false;
  return true;
}

int SubgroupOracle::free_rank() const {
  if (oracle_->kind() != OracleKind::Free)
    fail(ErrKind::UnsupportedOracle, "free_rank on non-free oracle " + oracle_->id());
  int v = static_cast<int>(free_->trans.size());
  int e2 = 0;
  for (const auto& row : free_->trans)
    for (int t : row)
      if (t >= 0) ++e2;
  return e2 / 2 - v + 1;
}

std::optional<int64_t> SubgroupOracle::index(int64_t cap) const {
  switch (oracle_->kind()) {
    case OracleKind::Finite:
      return finite_d_;
    case OracleKind::Free: {
      for (const auto& row : free_->trans)
        for (int t : row)
          if (t < 0) {
            // incomplete core: finite index only when the whole graph is
            // complete, except the rank-0 oracle
            if (oracle_->rank() == 0) return 1;
            return std::nullopt;
          }
      int64_t v = static_cast<int64_t>(free_->trans.size());
      return v <= cap ? std::optional<int64_t>(v) : std::nullopt;
    }
    case OracleKind::FreeAbelian: {
      if (static_cast<int>(abel_->basis.size()) != abel_->r) return std::nullopt;
      int64_t idx = 1;
      for (size_t j = 0; j < abel_->basis.size(); ++j)
        idx *= abel_->basis[j][abel_->pivot[j]];
      return idx <= cap ? std::optional<int64_t>(idx) : std::nullopt;
    }
    case OracleKind::BaumslagSolitar: {
      if (is_whole_group()) return 1;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<Word> SubgroupOracle::coset_reps_in_ball(int radius) const {
  std::vector<Word> reps;
  std::unordered_set<Word, WordHash> seen;
  for (const auto& w : oracle_->ball(radius)) {
    Word c = coset_canon(w);
    if (seen.insert(c).second) reps.push_back(w);
  }
  return reps;
}

}  // namespace trk
