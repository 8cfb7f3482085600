#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <limits>
#include <random>

#include "shadercanny/errors.hpp"
#include "shadercanny/precision.hpp"

using namespace shadercanny;

TEST(Quantize, WorkedExamples) {
  EXPECT_EQ(quantize(0.5, Precision::mediump), 0.5);
  EXPECT_EQ(quantize(0.3, Precision::lowp), 77.0 / 256.0);
  EXPECT_EQ(quantize(70000.0, Precision::mediump), 65504.0);
  EXPECT_EQ(quantize(-2.5, Precision::lowp), -2.0);
}

// Expected values produced offline with numpy.float16 (round-half-even
// binary16) for inputs inside the finite range.
TEST(Quantize, MediumpMatchesBinary16Oracle) {
  struct Case {
    double in;
    double out;
  };
  const Case cases[] = {
      {0.1, 0.0999755859375},
      {0.3, 0.300048828125},
      {1.0 / 3.0, 0.333251953125},
      {2.0 / 3.0, 0.66650390625},
      {1e-5, 1.0013580322265625e-05},
      {6.1e-5, 6.097555160522461e-05},
      {3e-8, 5.960464477539063e-08},
      {1000.7, 1000.5},
      {65503.0, 65504.0},
      {65519.9, 65504.0},
      {-0.7, -0.7001953125},
      {0.5 + 0x1p-12, 0.5},               // tie, rounds to even
      {1.0 + 0x1p-11, 1.0},               // tie, rounds to even
      {1.0 + 3 * 0x1p-11, 1.001953125},   // tie, rounds to even (up)
      {2049.0, 2048.0},
      {2051.0, 2052.0},
  };
  for (const auto& c : cases) {
    EXPECT_EQ(quantize(c.in, Precision::mediump), c.out) << "input " << c.in;
  }
}

// Fixed-point oracle: round(|v| * 256 + 1/2) with sign, clamped to [-512, 511].
TEST(Quantize, LowpRoundsHalfAwayFromZero) {
  EXPECT_EQ(quantize(1.5 / 256, Precision::lowp), 2.0 / 256);
  EXPECT_EQ(quantize(-1.5 / 256, Precision::lowp), -2.0 / 256);
  EXPECT_EQ(quantize(0.5 / 256, Precision::lowp), 1.0 / 256);
  EXPECT_EQ(quantize(-0.5 / 256, Precision::lowp), -1.0 / 256);
  EXPECT_EQ(quantize(-0.3, Precision::lowp), -77.0 / 256);
  EXPECT_EQ(quantize(1.999, Precision::lowp), 1.99609375);
  EXPECT_EQ(quantize(-1.998, Precision::lowp), -1.99609375);
}

TEST(Quantize, Saturation) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(quantize(inf, Precision::lowp), kLowpMax);
  EXPECT_EQ(quantize(-inf, Precision::lowp), kLowpMin);
  EXPECT_EQ(quantize(2.0, Precision::lowp), 1.99609375);
  EXPECT_EQ(quantize(inf, Precision::mediump), 65504.0);
  EXPECT_EQ(quantize(-1e9, Precision::mediump), -65504.0);
  EXPECT_EQ(quantize(65520.0, Precision::mediump), 65504.0);
  EXPECT_EQ(quantize(inf, Precision::highp), static_cast<double>(FLT_MAX));
  EXPECT_EQ(quantize(-1e300, Precision::highp), -static_cast<double>(FLT_MAX));
}

TEST(Quantize, NaNHandling) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(std::isnan(quantize(nan, Precision::mediump)));
  EXPECT_TRUE(std::isnan(quantize(nan, Precision::highp)));
  EXPECT_THROW(quantize(nan, Precision::lowp), InvalidValue);
  EXPECT_FALSE(is_representable(nan, Precision::lowp));
}

TEST(Quantize, MediumpSubnormals) {
  EXPECT_EQ(quantize(0x1p-24, Precision::mediump), 0x1p-24);
  EXPECT_EQ(quantize(0x1p-26, Precision::mediump), 0.0);       // below half the smallest step
  EXPECT_EQ(quantize(0x1.8p-25, Precision::mediump), 0x1p-24);  // 0.75 step rounds up
  EXPECT_TRUE(std::signbit(quantize(-0x1p-30, Precision::mediump)));
}

TEST(Quantize, HighpIsBinary32) {
  EXPECT_EQ(quantize(0.1, Precision::highp), static_cast<double>(0.1f));
  EXPECT_EQ(quantize(1.0 / 3.0, Precision::highp), static_cast<double>(1.0f / 3.0f));
}

TEST(Quantize, PropertiesOnRandomValues) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wide(-70000.0, 70000.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Precision p : {Precision::lowp, Precision::mediump, Precision::highp}) {
    for (int i = 0; i < 20000; ++i) {
      const double a = i % 2 ? wide(rng) : unit(rng);
      const double b = i % 3 ? wide(rng) : unit(rng);
      const double qa = quantize(a, p);
      EXPECT_EQ(quantize(qa, p), qa);
      EXPECT_TRUE(is_representable(qa, p));
      if (a <= b) {
        EXPECT_LE(qa, quantize(b, p));
      } else {
        EXPECT_GE(qa, quantize(b, p));
      }
    }
  }
}

TEST(Quantize, FloatOverloadAgrees) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<float> dist(-3.0f, 3.0f);
  for (int i = 0; i < 10000; ++i) {
    const float v = dist(rng);
    for (Precision p : {Precision::lowp, Precision::mediump, Precision::highp}) {
      EXPECT_EQ(static_cast<double>(quantize(v, p)), quantize(static_cast<double>(v), p));
    }
  }
}

TEST(Precision, Names) {
  for (Precision p : {Precision::lowp, Precision::mediump, Precision::highp}) {
    EXPECT_EQ(parse_precision(to_string(p)), p);
  }
  EXPECT_FALSE(parse_precision("ultrap").has_value());
}
