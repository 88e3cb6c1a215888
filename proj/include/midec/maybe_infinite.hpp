#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace midec {

/// A real value that may be +infinity or -infinity, never NaN.
///
/// Mutual information of a variable with itself, or entropy of a degenerate
/// Gaussian, are infinite; this type keeps that case explicit so it survives
/// reporting and serialization.
class MaybeInfinite {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  constexpr MaybeInfinite() = default;

  static MaybeInfinite finite(double v) {
    if (std::isnan(v)) throw std::domain_error("MaybeInfinite: NaN is not representable");
    if (std::isinf(v)) return v > 0 ? pos_inf() : neg_inf();
    return MaybeInfinite(Kind::Finite, v);
  }
  static constexpr MaybeInfinite pos_inf() { return MaybeInfinite(Kind::PosInf, 0.0); }
  static constexpr MaybeInfinite neg_inf() { return MaybeInfinite(Kind::NegInf, 0.0); }

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr bool is_finite() const noexcept { return kind_ == Kind::Finite; }
  constexpr bool is_infinite() const noexcept { return kind_ != Kind::Finite; }

  /// Finite value; throws std::logic_error when infinite.
  double value() const;

  /// The value as a double, mapping the infinite tags to +-inf.
  double as_double() const noexcept {
    switch (kind_) {
      case Kind::PosInf:
        return std::numeric_limits<double>::infinity();
      case Kind::NegInf:
        return -std::numeric_limits<double>::infinity();
      default:
        return value_;
    }
  }

  /// "inf", "-inf", or the value with 17 significant digits.
  std::string to_string() const;

 private:
  constexpr MaybeInfinite(Kind k, double v) : kind_(k), value_(v) {}

  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// 17-significant-digit rendering used for every serialized float; "inf" for +infinity.
std::string format_real(double v);

}  // namespace midec
