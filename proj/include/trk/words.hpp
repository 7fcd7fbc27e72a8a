#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace trk {

// A syllable is a generator with a nonzero exponent.
struct Syllable {
  int32_t gen = 0;
  int64_t exp = 0;

  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend auto operator<=>(const Syllable&, const Syllable&) = default;
};

// A word in the free monoid over a generator alphabet. Oracles interpret
// and normalize words; a Word by itself carries no group semantics.
struct Word {
  std::vector<Syllable> syls;

  Word() = default;
  explicit Word(std::vector<Syllable> s) : syls(std::move(s)) {}

  bool empty() const { return syls.empty(); }

  // Written length: sum of |exponents|.
  int64_t syl_length() const {
    int64_t n = 0;
    for (const auto& s : syls) n += s.exp < 0 ? -s.exp : s.exp;
    return n;
  }

  void push(int32_t gen, int64_t exp) {
    if (exp == 0) return;
    if (!syls.empty() && syls.back().gen == gen) {
      syls.back().exp += exp;
      if (syls.back().exp == 0) syls.pop_back();
      return;
    }
    syls.push_back({gen, exp});
  }

  // Free-monoid concatenation with adjacent-syllable merging only.
  Word& append(const Word& w) {
    for (const auto& s : w.syls) push(s.gen, s.exp);
    return *this;
  }

  Word reversed_inverse() const {
    Word r;
    r.syls.reserve(syls.size());
    for (auto it = syls.rbegin(); it != syls.rend(); ++it)
      r.syls.push_back({it->gen, -it->exp});
    return r;
  }

  friend bool operator==(const Word&, const Word&) = default;

  // Shortlex-flavoured total order: by written length, then lexicographic
  // on (gen, exp) with positive exponents preferred. Used for tie-breaking
  // in deterministic policies.
  friend bool operator<(const Word& a, const Word& b) {
    int64_t la = a.syl_length(), lb = b.syl_length();
    if (la != lb) return la < lb;
    return a.syls < b.syls;
  }
};

inline Word word_of(std::initializer_list<Syllable> syls) {
  Word w;
  for (auto& s : syls) w.push(s.gen, s.exp);
  return w;
}

struct WordHash {
  size_t operator()(const Word& w) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& s : w.syls) {
      h ^= std::hash<int64_t>()((int64_t(s.gen) << 40) ^ s.exp) + 0x9e3779b9 +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace trk
