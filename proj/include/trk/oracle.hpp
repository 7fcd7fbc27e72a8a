#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trk/errors.hpp"
#include "trk/words.hpp"

namespace trk {

enum class OracleKind { Finite, Free, FreeAbelian, BaumslagSolitar };

const char* oracle_kind_name(OracleKind k);

// Decidable group arithmetic for the four supported classes.
//
//   finite        cyclic of a given order, one generator
//   free          free of rank r, generators 0..r-1
//   free-abelian  Z^r, generators 0..r-1
//   bs(1,n)       <a,t | t a t^-1 = a^n>, generators a=0, t=1
//
// Normal forms are unique per class:
//   finite:        g^k with 0 <= k < order
//   free:          freely reduced word
//   free-abelian:  syllables sorted by generator index
//   bs(1,n):       t^-p a^m t^q with p,q >= 0 and (n does not divide m,
//                  or p = 0, or q = 0); this is the minimal-p form
//
// All operations are pure; an oracle is immutable after construction.
class GroupOracle {
 public:
  static GroupOracle finite_cyclic(std::string id, int64_t order,
                                   std::vector<std::string> gens);
  static GroupOracle free_group(std::string id, int rank,
                                std::vector<std::string> gens);
  static GroupOracle free_abelian(std::string id, int rank,
                                  std::vector<std::string> gens);
  static GroupOracle baumslag_solitar(std::string id, int64_t n,
                                      std::vector<std::string> gens);

  OracleKind kind() const { return kind_; }
  const std::string& id() const { return id_; }
  int rank() const { return rank_; }
  int64_t order() const { return order_; }
  int64_t bs_n() const { return bs_n_; }
  int num_gens() const { return static_cast<int>(gens_.size()); }
  const std::vector<std::string>& gen_names() const { return gens_; }

  bool is_trivial_group() const {
    return kind_ == OracleKind::Finite && order_ == 1;
  }

  Word normalize(const Word& w) const;
  Word multiply(const Word& a, const Word& b) const;
  Word inverse(const Word& a) const;
  bool is_identity(const Word& a) const { return normalize(a).empty(); }
  bool equal(const Word& a, const Word& b) const {
    return normalize(a) == normalize(b);
  }
  bool has_infinite_order(const Word& a) const;

  // All elements at generator-metric distance <= radius from the identity,
  // sorted by (length, normal form). Closed under inversion.
  std::vector<Word> ball(int radius) const;

  // Exact generator-metric length, or nullopt if it exceeds max_radius.
  std::optional<int> true_length(const Word& w, int max_radius) const;

  std::string print(const Word& w) const;
  int gen_index(const std::string& name) const;  // -1 if unknown

 private:
  GroupOracle() = default;
  void check_word(const Word& w) const;

  OracleKind kind_ = OracleKind::Free;
  std::string id_;
  int rank_ = 0;
  int64_t order_ = 0;
  int64_t bs_n_ = 0;
  std::vector<std::string> gens_;
};

}  // namespace trk
