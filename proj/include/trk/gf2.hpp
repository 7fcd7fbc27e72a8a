#pragma once

#include <cstdint>
#include <vector>

namespace trk {

// Dense GF(2) row vectors packed into 64-bit limbs; enough linear algebra
// for rank computations on desk-scale chain complexes.
class Gf2Matrix {
 public:
  Gf2Matrix(size_t rows, size_t cols)
      : rows_(rows), cols_(cols), limbs_((cols + 63) / 64),
        data_(rows * limbs_, 0) {}

  void set(size_t r, size_t c) { data_[r * limbs_ + c / 64] ^= 1ull << (c % 64); }
  bool get(size_t r, size_t c) const {
    return (data_[r * limbs_ + c / 64] >> (c % 64)) & 1;
  }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  // Row-reduction rank; destroys nothing (works on a copy).
  size_t rank() const {
    std::vector<uint64_t> m = data_;
    size_t rank = 0;
    for (size_t c = 0; c < cols_ && rank < rows_; ++c) {
      size_t limb = c / 64, bit = c % 64;
      size_t pivot = rows_;
      for (size_t r = rank; r < rows_; ++r) {
        if ((m[r * limbs_ + limb] >> bit) & 1) {
          pivot = r;
          break;
        }
      }
      if (pivot == rows_) continue;
      for (size_t i = 0; i < limbs_; ++i)
        std::swap(m[rank * limbs_ + i], m[pivot * limbs_ + i]);
      for (size_t r = 0; r < rows_; ++r) {
        if (r != rank && ((m[r * limbs_ + limb] >> bit) & 1))
          for (size_t i = 0; i < limbs_; ++i) m[r * limbs_ + i] ^= m[rank * limbs_ + i];
      }
      ++rank;
    }
    return rank;
  }

 private:
  size_t rows_, cols_, limbs_;
  std::vector<uint64_t> data_;
};

}  // namespace trk
