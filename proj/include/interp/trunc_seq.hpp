#pragma once

#include "interp/types.hpp"

namespace interp {

/// Finitely supported Z-indexed sequence of C^n vectors, stored as the block
/// k = -K..K. Reads outside the window are zero; writes outside are rejected.
class TruncSeq {
 public:
  TruncSeq() = default;
  TruncSeq(int dim, int K) : K_(K), entries_(CMat::Zero(dim, 2 * K + 1)) {
    require(K >= 0, "truncation radius must be nonnegative");
    require(dim >= 1, "dimension must be positive");
  }
  TruncSeq(int K, CMat entries) : K_(K), entries_(std::move(entries)) {
    require(entries_.cols() == 2 * K + 1, "entry count must be 2K+1");
  }

  int K() const { return K_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMat& entries() const { return entries_; }
  CMat& entries() { return entries_; }

  bool inside(int k) const { return k >= -K_ && k <= K_; }

  CVec entry(int k) const {
    if (!inside(k)) return CVec::Zero(dim());
    return entries_.col(k + K_);
  }

  void set_entry(int k, const CVec& x) {
    require(inside(k), "index outside truncation window");
    require(x.size() == dim(), "dimension mismatch in set_entry");
    entries_.col(k + K_) = x;
  }

  /// Sequence with entry k equal to this->entry(k + j), on the same window.
  /// Mass shifted past the window is clipped; enlarge K first to avoid that.
  TruncSeq shifted(int j) const {
    TruncSeq out(dim(), K_);
    for (int k = -K_; k <= K_; ++k)
      if (inside(k + j)) out.set_entry(k, entry(k + j));
    return out;
  }

  TruncSeq with_radius(int K_new) const {
    require(K_new >= 0, "truncation radius must be nonnegative");
    TruncSeq out(dim(), K_new);
    int m = std::min(K_, K_new);
    out.entries_.middleCols(K_new - m, 2 * m + 1) =
        entries_.middleCols(K_ - m, 2 * m + 1);
    return out;
  }

  TruncSeq reflected() const {
    return TruncSeq(K_, entries_.rowwise().reverse());
  }

  static TruncSeq delta(int K, int k, const CVec& x) {
    TruncSeq v(static_cast<int>(x.size()), K);
    v.set_entry(k, x);
    return v;
  }

  friend TruncSeq operator+(const TruncSeq& a, const TruncSeq& b) {
    require(a.K_ == b.K_ && a.dim() == b.dim(), "window/dimension mismatch");
    return TruncSeq(a.K_, a.entries_ + b.entries_);
  }
  friend TruncSeq operator-(const TruncSeq& a, const TruncSeq& b) {
    require(a.K_ == b.K_ && a.dim() == b.dim(), "window/dimension mismatch");
    return TruncSeq(a.K_, a.entries_ - b.entries_);
  }
  friend TruncSeq operator*(Complex c, const TruncSeq& v) {
    return TruncSeq(v.K_, c * v.entries_);
  }

 private:
  int K_ = 0;
  CMat entries_;
};

/// The summation operator: coordinate-wise sum of all entries.
inline CVec sigma(const TruncSeq& v) { return v.entries().rowwise().sum(); }

}  // namespace interp
