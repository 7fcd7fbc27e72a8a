#include "trk/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

namespace trk {

namespace {

int64_t checked_mul(int64_t a, int64_t b) {
  __int128 r = static_cast<__int128>(a) * b;
  if (r > INT64_MAX / 4 || r < INT64_MIN / 4)
    fail(ErrKind::Internal, "exponent overflow in bs normal form");
  return static_cast<int64_t>(r);
}

int64_t checked_add(int64_t a, int64_t b) {
  __int128 r = static_cast<__int128>(a) + b;
  if (r > INT64_MAX / 4 || r < INT64_MIN / 4)
    fail(ErrKind::Internal, "exponent overflow in bs normal form");
  return static_cast<int64_t>(r);
}

// bs(1,n) element as t^-p a^m t^q, fully reduced.
struct BsForm {
  int64_t p = 0, m = 0, q = 0;

  void reduce(int64_t n) {
    while (p > 0 && q > 0 && m % n == 0) {
      m /= n;
      --p;
      --q;
    }
    if (m == 0) {
      // t^-p t^q = t^(q-p)
      int64_t d = q - p;
      p = d < 0 ? -d : 0;
      q = d > 0 ? d : 0;
    }
  }

  void mul_a(int64_t k, int64_t n) {
    // t^-p a^m t^q a^k = t^-p a^(m + k n^q) t^q
    int64_t scaled = k;
    for (int64_t i = 0; i < q; ++i) scaled = checked_mul(scaled, n);
    m = checked_add(m, scaled);
  }

  void mul_t(int64_t k, int64_t n) {
    int64_t q2 = checked_add(q, k);
    if (q2 >= 0) {
      q = q2;
    } else {
      // a^m t^-j = t^-j a^(m n^j)
      int64_t j = -q2;
      for (int64_t i = 0; i < j; ++i) m = checked_mul(m, n);
      p = checked_add(p, j);
      q = 0;
    }
    reduce(n);
  }

  Word to_word() const {
    Word w;
    w.push(1, -p);
    w.push(0, m);
    w.push(1, q);
    return w;
  }
};

}  // namespace

const char* oracle_kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::Finite: return "finite";
    case OracleKind::Free: return "free";
    case OracleKind::FreeAbelian: return "free-abelian";
    case OracleKind::BaumslagSolitar: return "bs";
  }
  return "?";
}

GroupOracle GroupOracle::finite_cyclic(std::string id, int64_t order,
                                       std::vector<std::string> gens) {
  if (order < 1) fail(ErrKind::MalformedElement, "finite order must be >= 1");
  if (gens.empty()) gens = {"g"};
  if (gens.size() != 1)
    fail(ErrKind::UnsupportedOracle, "finite oracle is cyclic: one generator");
  GroupOracle o;
  o.kind_ = OracleKind::Finite;
  o.id_ = std::move(id);
  o.order_ = order;
  o.rank_ = 1;
  o.gens_ = std::move(gens);
  return o;
}

GroupOracle GroupOracle::free_group(std::string id, int rank,
                                    std::vector<std::string> gens) {
  GroupOracle o;
  o.kind_ = OracleKind::Free;
  o.id_ = std::move(id);
  o.rank_ = rank;
  o.gens_ = std::move(gens);
  if (static_cast<int>(o.gens_.size()) != rank)
    fail(ErrKind::UnsupportedOracle, "free oracle: one name per generator");
  return o;
}

GroupOracle GroupOracle::free_abelian(std::string id, int rank,
                                      std::vector<std::string> gens) {
  GroupOracle o;
  o.kind_ = OracleKind::FreeAbelian;
  o.id_ = std::move(id);
  o.rank_ = rank;
  o.gens_ = std::move(gens);
  if (static_cast<int>(o.gens_.size()) != rank)
    fail(ErrKind::UnsupportedOracle, "free-abelian oracle: one name per generator");
  return o;
}

GroupOracle GroupOracle::baumslag_solitar(std::string id, int64_t n,
                                          std::vector<std::string> gens) {
  if (n < 2) fail(ErrKind::UnsupportedOracle, "bs oracle requires n >= 2");
  if (gens.empty()) gens = {"a", "t"};
  if (gens.size() != 2)
    fail(ErrKind::UnsupportedOracle, "bs oracle has generators a, t");
  GroupOracle o;
  o.kind_ = OracleKind::BaumslagSolitar;
  o.id_ = std::move(id);
  o.bs_n_ = n;
  o.rank_ = 2;
  o.gens_ = std::move(gens);
  return o;
}

void GroupOracle::check_word(const Word& w) const {
  for (const auto& s : w.syls)
    if (s.gen < 0 || s.gen >= num_gens())
      fail(ErrKind::MalformedElement,
           "unknown generator index " + std::to_string(s.gen) + " in oracle " + id_);
}

Word GroupOracle::normalize(const Word& w) const {
  check_word(w);
  switch (kind_) {
    case OracleKind::Finite: {
      int64_t k = 0;
      for (const auto& s : w.syls) k = (k + s.exp) % order_;
      k %= order_;
      if (k < 0) k += order_;
      Word r;
      r.push(0, k);
      return r;
    }
    case OracleKind::Free: {
      Word r;
      for (const auto& s : w.syls) r.push(s.gen, s.exp);
      return r;
    }
    case OracleKind::FreeAbelian: {
      std::map<int32_t, int64_t> e;
      for (const auto& s : w.syls) e[s.gen] += s.exp;
      Word r;
      for (const auto& [g, x] : e) r.push(g, x);
      return r;
    }
    case OracleKind::BaumslagSolitar: {
      BsForm f;
      for (const auto& s : w.syls) {
        if (s.gen == 0)
          f.mul_a(s.exp, bs_n_);
        else
          f.mul_t(s.exp, bs_n_);
      }
      f.reduce(bs_n_);
      return f.to_word();
    }
  }
  fail(ErrKind::Internal, "bad oracle kind");
}

Word GroupOracle::multiply(const Word& a, const Word& b) const {
  Word c = a;
  c.append(b);
  return normalize(c);
}

Word GroupOracle::inverse(const Word& a) const {
  return normalize(a.reversed_inverse());
}

bool GroupOracle::has_infinite_order(const Word& a) const {
  if (kind_ == OracleKind::Finite) return false;
  return !is_identity(a);  // free, free-abelian and bs(1,n) are torsion-free
}

std::vector<Word> GroupOracle::ball(int radius) const {
  std::vector<Word> gens_pm;
  for (int g = 0; g < num_gens(); ++g) {
    gens_pm.push_back(word_of({{g, 1}}));
    gens_pm.push_back(word_of({{g, -1}}));
  }
  std::vector<Word> out{Word{}};
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int d = 0; d < radius; ++d) {
    std::vector<Word> next;
    for (const auto& w : frontier) {
      for (const auto& g : gens_pm) {
        Word v = multiply(w, g);
        if (seen.insert(v).second) next.push_back(v);
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return out;
}

std::optional<int> GroupOracle::true_length(const Word& w, int max_radius) const {
  Word target = normalize(w);
  if (target.empty()) return 0;
  std::vector<Word> gens_pm;
  for (int g = 0; g < num_gens(); ++g) {
    gens_pm.push_back(word_of({{g, 1}}));
    gens_pm.push_back(word_of({{g, -1}}));
  }
  std::unordered_set<Word, WordHash> seen{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int d = 1; d <= max_radius; ++d) {
    std::vector<Word> next;
    for (const auto& u : frontier) {
      for (const auto& g : gens_pm) {
        Word v = multiply(u, g);
        if (v == target) return d;
        if (seen.insert(v).second) next.push_back(v);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

std::string GroupOracle::print(const Word& w) const {
  if (w.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& s : w.syls) {
    if (!first) os << " ";
    first = false;
    os << gens_[s.gen];
    if (s.exp != 1) os << "^" << s.exp;
  }
  return os.str();
}

int GroupOracle::gen_index(const std::string& name) const {
  for (int i = 0; i < num_gens(); ++i)
    if (gens_[i] == name) return i;
  return -1;
}

}  // namespace trk
