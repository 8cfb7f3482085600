#pragma once

#include <optional>
#include <string_view>

namespace shadercanny {

/// Storage precision of a texture, after the OpenGL ES shader qualifiers.
///   lowp    : fixed point, step 1/256, range [-2, 2 - 1/256]
///   mediump : IEEE 754 binary16 (saturating)
///   highp   : IEEE 754 binary32 (saturating)
enum class Precision { lowp, mediump, highp };

inline constexpr double kLowpStep = 1.0 / 256.0;
inline constexpr double kLowpMin = -2.0;
inline constexpr double kLowpMax = 2.0 - kLowpStep;  // 1.99609375
inline constexpr double kMediumpMax = 65504.0;
inline constexpr double kMediumpMinNormal = 1.0 / 16384.0;  // 2^-14

/// Rounds `value` to the nearest value representable in `precision`.
///
/// lowp rounds half away from zero; mediump and highp round half to even.
/// Out-of-range magnitudes (including infinities) saturate to the extreme
/// finite value. NaN passes through for mediump/highp and throws
/// InvalidValue for lowp, which has no NaN encoding.
double quantize(double value, Precision precision);

/// Binary32 convenience overload used on texture stores.
float quantize(float value, Precision precision);

/// True if `value` is exactly representable in `precision`.
bool is_representable(double value, Precision precision);

std::string_view to_string(Precision precision);
std::optional<Precision> parse_precision(std::string_view name);

}  // namespace shadercanny
