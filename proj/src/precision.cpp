#include "shadercanny/precision.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "shadercanny/errors.hpp"

namespace shadercanny {
namespace {

double quantize_lowp(double value) {
  if (std::isnan(value)) {
    throw InvalidValue("lowp cannot represent NaN");
  }
  // std::round is half-away-from-zero; the product is exact for |value| < 2^45.
  const double scaled = std::round(value * 256.0) * kLowpStep;
  return std::clamp(scaled, kLowpMin, kLowpMax);
}

double quantize_mediump(double value) {
  if (std::isnan(value)) {
    return value;
  }
  const double magnitude = std::fabs(value);
  // Everything at or above the largest finite half rounds to it (or would
  // overflow, which saturates instead).
  if (magnitude >= kMediumpMax) {
    return std::copysign(kMediumpMax, value);
  }
  // Subnormals share the 2^-14 exponent; 10 mantissa bits below the leading one.
  const int exponent = magnitude >= kMediumpMinNormal ? std::ilogb(magnitude) : -14;
  const double ulp = std::ldexp(1.0, exponent - 10);
  const double rounded = std::nearbyint(magnitude / ulp) * ulp;
  return std::copysign(rounded, value);
}

double quantize_highp(double value) {
  if (std::isnan(value)) {
    return value;
  }
  const float narrowed = static_cast<float>(value);
  if (std::isinf(narrowed)) {
    return std::copysign(static_cast<double>(FLT_MAX), value);
  }
  return narrowed;
}

}  // namespace

double quantize(double value, Precision precision) {
  switch (precision) {
    case Precision::lowp:
      return quantize_lowp(value);
    case Precision::mediump:
      return quantize_mediump(value);
    case Precision::highp:
      return quantize_highp(value);
  }
  return value;
}

float quantize(float value, Precision precision) {
  // Every lowp and mediump value is exactly representable in binary32.
  return static_cast<float>(quantize(static_cast<double>(value), precision));
}

bool is_representable(double value, Precision precision) {
  if (std::isnan(value)) {
    return precision != Precision::lowp;
  }
  return quantize(value, precision) == value;
}

std::string_view to_string(Precision precision) {
  switch (precision) {
    case Precision::lowp:
      return "lowp";
    case Precision::mediump:
      return "mediump";
    case Precision::highp:
      return "highp";
  }
  return "unknown";
}

std::optional<Precision> parse_precision(std::string_view name) {
  if (name == "lowp") return Precision::lowp;
  if (name == "mediump") return Precision::mediump;
  if (name == "highp") return Precision::highp;
  return std::nullopt;
}

}  // namespace shadercanny
