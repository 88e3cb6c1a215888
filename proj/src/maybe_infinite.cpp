#include "midec/maybe_infinite.hpp"

#include <cstdio>

namespace midec {

double MaybeInfinite::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("MaybeInfinite::value on an infinite value");
  return value_;
}

std::string MaybeInfinite::to_string() const {
  switch (kind_) {
    case Kind::PosInf:
      return "inf";
    case Kind::NegInf:
      return "-inf";
    default:
      return format_real(value_);
  }
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace midec
