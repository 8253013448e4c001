#pragma once

#include <cassert>
#include <limits>

namespace bpyield {

/// A value of ℝ ∪ {+∞}. The yield function is +∞ outside the meridian cap,
/// and that case has to compare exactly, so it is carried as a tag rather
/// than as a large float.
template <typename Scalar>
class Extended {
 public:
  constexpr Extended(Scalar value) : value_(value), infinite_(false) {}  // NOLINT

  static constexpr Extended infinity() { return Extended(); }

  constexpr bool finite() const { return !infinite_; }
  constexpr bool infinite() const { return infinite_; }

  /// Finite value; calling this on +∞ is a logic error.
  constexpr Scalar value() const {
    assert(!infinite_);
    return value_;
  }

  /// IEEE view, +inf for the infinite case.
  constexpr Scalar to_ieee() const {
    return infinite_ ? std::numeric_limits<Scalar>::infinity() : value_;
  }

  friend constexpr bool operator==(const Extended& a, const Extended& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend constexpr bool operator<(const Extended& a, const Extended& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend constexpr bool operator>(const Extended& a, const Extended& b) { return b < a; }
  friend constexpr bool operator<=(const Extended& a, const Extended& b) { return !(b < a); }
  friend constexpr bool operator>=(const Extended& a, const Extended& b) { return !(a < b); }

 private:
  constexpr Extended() : value_(0), infinite_(true) {}

  Scalar value_;
  bool infinite_;
};

}  // namespace bpyield
