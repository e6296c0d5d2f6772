#pragma once

#include <cctype>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "thickening/errors.hpp"

namespace thk {

/// Exponent in [1, inf]. Infinity is a tag, never a large float.
class PValue {
 public:
  constexpr PValue() = default;

  explicit PValue(double p) : p_(p) {
    if (!(p >= 1.0) || std::isinf(p)) {
      throw Error(ErrorKind::InvalidExponent, "exponent must be a finite real >= 1 (use PValue::infinity())");
    }
  }

  static constexpr PValue infinity() {
    PValue v;
    v.infinite_ = true;
    return v;
  }

  /// Accepts a decimal number or "inf"/"infinity" (case-insensitive).
  static PValue parse(std::string_view text) {
    std::string lower;
    for (char c : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "inf" || lower == "infinity") return infinity();
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(lower, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidExponent, "cannot parse exponent '" + std::string(text) + "'");
    }
    if (used != lower.size()) {
      throw Error(ErrorKind::InvalidExponent, "cannot parse exponent '" + std::string(text) + "'");
    }
    return PValue(value);
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  /// Finite exponent value; +inf for the infinite tag.
  double value() const { return infinite_ ? std::numeric_limits<double>::infinity() : p_; }

  std::string to_string() const {
    if (infinite_) return "inf";
    std::string s = std::to_string(p_);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

  friend bool operator==(const PValue& a, const PValue& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }
  /// Orders exponents with infinity last.
  friend bool operator<(const PValue& a, const PValue& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.p_ < b.p_;
  }
  friend bool operator<=(const PValue& a, const PValue& b) { return a < b || a == b; }

 private:
  double p_ = 1.0;
  bool infinite_ = false;
};

}  // namespace thk
