#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "shadercanny/canny.hpp"
#include "shadercanny/errors.hpp"
#include "shadercanny/reference.hpp"
#include "test_support.hpp"

using namespace shadercanny;
using namespace shadercanny::reference;

namespace {

Grid random_grid(std::mt19937& rng, int w, int h) {
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  Grid g(w, h);
  for (float& v : g.values) v = dist(rng);
  return g;
}

Texture2D to_texture(const Grid& g) {
  return Texture2D(g.width, g.height, 1, Precision::highp, g.values);
}

}  // namespace

TEST(DirectionOracle, Examples) {
  EXPECT_EQ(direction_oracle(0, 1), (Direction{0, 1}));
  EXPECT_EQ(direction_oracle(1, 0.9), (Direction{1, 1}));    // ~42 deg
  EXPECT_EQ(direction_oracle(-1, 0.1), (Direction{-1, 0}));  // ~174.3 deg
  EXPECT_EQ(direction_oracle(-1, -0.0), (Direction{-1, 0}));
  EXPECT_EQ(direction_oracle(1, -0.5), (Direction{1, -1}));  // ~-26.6 deg
  EXPECT_THROW(direction_oracle(0, 0), InvalidInput);
}

TEST(DirectionOracle, HalfOpenSectors) {
  // Exactly on a boundary the counterclockwise sector wins.
  const double a = 22.5 * std::numbers::pi / 180.0;
  const double gx = std::cos(a);
  const double gy = std::sin(a);
  // atan2 may land a hair either side of 22.5; nudge clearly above.
  EXPECT_EQ(direction_oracle(gx, gy + 1e-12), (Direction{1, 1}));
  EXPECT_EQ(direction_oracle(gx, gy - 1e-12), (Direction{1, 0}));
}

TEST(Convolve2d, Examples) {
  std::mt19937 rng(1);
  const Grid g = random_grid(rng, 7, 5);
  EXPECT_EQ(convolve2d_reference(g, Kernel2D{}).values, g.values);

  Grid impulse(5, 5);
  impulse.at(2, 2) = 1.0f;
  const auto w = binomial_weights(3);
  const Grid stamp = convolve2d_reference(impulse, Kernel2D::outer(w, w));
  EXPECT_EQ(stamp.at(2, 2), 0.25f);
  EXPECT_EQ(stamp.at(1, 2), 0.125f);
  EXPECT_EQ(stamp.at(1, 1), 0.0625f);
  EXPECT_EQ(stamp.at(0, 0), 0.0f);

  const Grid c(6, 6, 0.4f);
  for (float v : convolve2d_reference(c, Kernel2D::outer(w, w)).values) EXPECT_FLOAT_EQ(v, 0.4f);
}

TEST(Convolve2d, RejectsEvenKernels) {
  Kernel2D k;
  k.width = 2;
  k.height = 1;
  k.weights = {0.5f, 0.5f};
  EXPECT_THROW(convolve2d_reference(Grid(3, 3), k), InvalidInput);
  k.width = 3;
  EXPECT_THROW(convolve2d_reference(Grid(3, 3), k), InvalidInput);
}

TEST(Convolve2d, SeparablePassesMatchOuterProduct) {
  std::mt19937 rng(2);
  for (int size : {3, 5}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Grid g = random_grid(rng, 19, 13);
      const auto w = binomial_weights(size);
      const Grid direct = convolve2d_reference(g, Kernel2D::outer(w, w));
      const Texture2D sep = gaussian_1d(gaussian_1d(to_texture(g), Axis::x, size, Precision::highp),
                                        Axis::y, size, Precision::highp);
      for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) EXPECT_NEAR(sep.at(x, y), direct.at(x, y), 1e-6);
      }
    }
  }
}

TEST(ClassicCanny, ConstantImageIsEmpty) {
  EXPECT_EQ(classic_canny(Grid(20, 20, 0.7f), CannyParams{}).count(), 0u);
}

TEST(ClassicCanny, RectangleEdgesHugThePerimeter) {
  const ImageBuffer img = fixtures::filled_rectangle(64, 16, 20, 48, 40);
  const auto edges = classic_canny(grid_from_image(img), CannyParams{});
  ASSERT_GT(edges.count(), 0u);
  auto near_boundary = [](int x, int y) {
    const bool x_in = x >= 15 && x <= 48;
    const bool y_in = y >= 19 && y <= 40;
    const bool on_vertical = (std::abs(x - 15.5) <= 1.0 || std::abs(x - 47.5) <= 1.0) && y_in;
    const bool on_horizontal = (std::abs(y - 19.5) <= 1.0 || std::abs(y - 39.5) <= 1.0) && x_in;
    return on_vertical || on_horizontal;
  };
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 64; ++x) {
      if (edges.at(x, y)) EXPECT_TRUE(near_boundary(x, y)) << x << "," << y;
    }
  }
  // Every perimeter row/column position is covered.
  for (int y = 21; y < 39; ++y) {
    EXPECT_TRUE(edges.at(15, y) || edges.at(16, y)) << y;
    EXPECT_TRUE(edges.at(47, y) || edges.at(48, y)) << y;
  }
}

TEST(ClassicCanny, WeakIsolatedPixelIsRejected) {
  // A faint dot whose smoothed gradient never reaches the lower threshold.
  Grid g(15, 15, 0.5f);
  g.at(7, 7) = 0.6f;
  EXPECT_EQ(classic_canny(g, CannyParams{}).count(), 0u);
}

TEST(ClassicCanny, HysteresisIsTransitive) {
  // A ramp of weak-but-connected pixels along a chain reaching one strong pixel.
  ClassicStages st;
  Grid g(40, 9, 0.0f);
  for (int x = 0; x < 40; ++x) {
    const float contrast = x < 5 ? 0.9f : 0.3f;  // strong at the left, weak to the right
    for (int y = 5; y < 9; ++y) g.at(x, y) = contrast;
  }
  st = classic_canny_stages(g, CannyParams{});
  EXPECT_GT(st.strong.count(), 0u);
  EXPECT_GT(st.edges.count(), st.strong.count());
  // Far end of the weak chain is still connected.
  EXPECT_TRUE(st.edges.at(35, 4) || st.edges.at(35, 5));
}

TEST(ClassicCanny, StrongSetMatchesPipelineBeforeWeakPass) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    const ImageBuffer img = fixtures::random_image(rng, 48, 40);
    DetectOptions o;
    o.storage = Precision::highp;
    const auto run = detect_edges(img, CannyParams{}, o);
    const Texture2D& nms = run.run.stages[3];
    const auto classic = classic_canny_stages(grid_from_texture(run.source), CannyParams{});
    int mismatches = 0;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        mismatches += (nms.at(x, y) == 1.0f) != classic.strong.at(x, y);
      }
    }
    EXPECT_EQ(mismatches, 0) << "trial " << trial;
  }
}

TEST(BranchyKernels, BitIdenticalToBranchFree) {
  std::mt19937 rng(17);
  const PassEngine engine(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Texture2D img = fixtures::random_texture(rng, 29, 23);
    auto same = [&](const PassKernel& a, const PassKernel& b, const Texture2D& in) {
      const Texture2D* inputs[] = {&in};
      const auto ra = engine.run_pass(a, inputs, in.width(), in.height());
      const auto rb = engine.run_pass(b, inputs, in.width(), in.height());
      EXPECT_EQ(ra.output, rb.output) << a.name;
      return ra.output;
    };
    const auto gx = same(kernels::gaussian(Axis::x, 3, Precision::highp),
                         branchy::gaussian(Axis::x, 3), img);
    const auto gy = same(kernels::gaussian(Axis::y, 5, Precision::highp),
                         branchy::gaussian(Axis::y, 5), gx);
    const auto grad = same(kernels::gradient(MagnitudeMode::exact, Precision::highp),
                           branchy::gradient(MagnitudeMode::exact), gy);
    same(kernels::gradient(MagnitudeMode::manhattan, Precision::highp),
         branchy::gradient(MagnitudeMode::manhattan), gy);
    const auto nms = same(kernels::nms_threshold(0.02f, 0.05f, Precision::highp),
                          branchy::nms_threshold(0.02f, 0.05f), grad);
    same(kernels::weak_pixels(Precision::highp), branchy::weak_pixels(), nms);
  }
}

TEST(CompareEdges, Conventions) {
  BinaryEdgeMap empty{3, 3, std::vector<std::uint8_t>(9, 0)};
  const auto both_empty = compare_edges(empty, empty);
  EXPECT_EQ(both_empty.f1, 1.0);
  BinaryEdgeMap some = empty;
  some.bits[4] = 1;
  some.bits[5] = 1;
  EXPECT_EQ(compare_edges(some, some).f1, 1.0);
  EXPECT_EQ(compare_edges(empty, some).f1, 0.0);
  EXPECT_EQ(compare_edges(some, empty).f1, 0.0);
  BinaryEdgeMap half = empty;
  half.bits[4] = 1;
  half.bits[0] = 1;
  const auto c = compare_edges(half, some);
  EXPECT_EQ(c.true_positive, 1u);
  EXPECT_DOUBLE_EQ(c.precision, 0.5);
  EXPECT_DOUBLE_EQ(c.recall, 0.5);
  EXPECT_DOUBLE_EQ(c.f1, 0.5);
  EXPECT_THROW(compare_edges(empty, BinaryEdgeMap{2, 2, {0, 0, 0, 0}}), InvalidInput);
}
