#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mahler/exact/errors.hpp"
#include "mahler/exact/rational.hpp"

namespace mahler {

/// Point of (Q^*)^n: every coordinate is a nonzero rational.
class RationalPoint {
 public:
  RationalPoint() = default;
  explicit RationalPoint(std::vector<BigRational> coords) : coords_(std::move(coords)) {
    for (const auto& c : coords_)
      if (c == 0) throw DomainError("rational point with a zero coordinate");
  }

  std::size_t size() const noexcept { return coords_.size(); }
  const std::vector<BigRational>& coords() const noexcept { return coords_; }
  std::span<const BigRational> span() const noexcept { return coords_; }
  const BigRational& operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
    return a.coords_ == b.coords_;
  }

  /// "(p1/q1, p2/q2, ...)".
  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i > 0) s += ", ";
      s += ::mahler::to_string(coords_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<BigRational> coords_;
};

}  // namespace mahler
