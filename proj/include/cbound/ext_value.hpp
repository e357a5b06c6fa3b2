#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace cbound {

/// Element of {-inf} u Z u {+inf}. Used for displacements.
class ExtValue {
 public:
  enum class Kind : std::uint8_t { Bottom, Finite, Top };

  constexpr ExtValue() = default;
  constexpr explicit ExtValue(std::int64_t v) : kind_(Kind::Finite), value_(v) {}

  static constexpr ExtValue bottom() { return ExtValue{}; }
  static constexpr ExtValue top() {
    ExtValue v;
    v.kind_ = Kind::Top;
    return v;
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_bottom() const { return kind_ == Kind::Bottom; }
  constexpr bool is_top() const { return kind_ == Kind::Top; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  /// Precondition: is_finite().
  constexpr std::int64_t value() const { return value_; }

  /// Sum with -inf absorbing; +inf + finite = +inf.
  friend constexpr ExtValue operator+(ExtValue a, ExtValue b) {
    if (a.is_bottom() || b.is_bottom()) return bottom();
    if (a.is_top() || b.is_top()) return top();
    return ExtValue(a.value_ + b.value_);
  }

  friend constexpr bool operator==(ExtValue a, ExtValue b) {
    return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtValue a, ExtValue b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::Bottom: return "-inf";
      case Kind::Top: return "+inf";
      case Kind::Finite: break;
    }
    return std::to_string(value_);
  }

 private:
  Kind kind_ = Kind::Bottom;
  std::int64_t value_ = 0;
};

/// Element of N u {-inf}: input/output annotation of a flow tree node.
///
/// -inf is below every natural; -inf < -inf is false, so comparisons are total
/// without special cases at call sites.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr ExtNat(std::int64_t v) : finite_(true), value_(v) {}  // NOLINT: implicit by intent

  static constexpr ExtNat bottom() { return ExtNat{}; }

  constexpr bool is_bottom() const { return !finite_; }
  constexpr bool is_finite() const { return finite_; }
  constexpr std::int64_t value() const { return value_; }

  friend constexpr bool operator==(ExtNat a, ExtNat b) {
    return a.finite_ == b.finite_ && (!a.finite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(ExtNat a, ExtNat b) {
    if (a.finite_ != b.finite_) return a.finite_ <=> b.finite_;
    if (!a.finite_) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return finite_ ? std::to_string(value_) : "-inf"; }

 private:
  bool finite_ = false;
  std::int64_t value_ = 0;
};

/// True iff `out <= in + delta` over N u {-inf}, where in + delta may be a
/// negative integer (which only -inf lies below).
constexpr bool leq_shifted(ExtNat out, ExtNat in, std::int64_t delta) {
  if (out.is_bottom()) return true;
  if (in.is_bottom()) return false;
  return out.value() <= in.value() + delta;
}

}  // namespace cbound
