#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "mpslime/segmentation.hpp"
#include "support/oracles.hpp"
#include "support/scenes.hpp"

namespace mpslime {
namespace {

void ExpectValidMap(const SuperpixelMap& map) {
    ASSERT_GE(map.num_segments(), 1);
    const auto sizes = map.segment_sizes();
    for (std::size_t s = 0; s < sizes.size(); ++s) EXPECT_GT(sizes[s], 0u) << "segment " << s << " empty";
    EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), map.pixel_count());
    const auto comps = oracle::components_per_label(map.width(), map.height(), map.labels());
    EXPECT_EQ(comps.size(), static_cast<std::size_t>(map.num_segments()));
    for (const auto& [label, count] : comps) EXPECT_EQ(count, 1) << "segment " << label << " is split";
}

TEST(SegmentImage, UniformImageGivesRegularGrid) {
    const auto img = Image::filled(32, 32, {90, 140, 200});
    const auto map = segment_image(img, {4, 10.0, 10});
    ExpectValidMap(map);
    ASSERT_EQ(map.num_segments(), 4);
    for (auto size : map.segment_sizes()) {
        EXPECT_NEAR(static_cast<double>(size), 256.0, 256.0 * 0.25);
    }
    // One segment per quadrant.
    std::set<int> corners{map.label(0, 0), map.label(31, 0), map.label(0, 31), map.label(31, 31)};
    EXPECT_EQ(corners.size(), 4u);
}

TEST(SegmentImage, TwoColorHalvesSplitAtColorBoundary) {
    Image img(16, 16);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) img.set(x, y, x < 8 ? std::array<std::uint8_t, 3>{255, 0, 0}
                                                           : std::array<std::uint8_t, 3>{0, 0, 255});
    const auto map = segment_image(img, {2, 10.0, 10});
    ExpectValidMap(map);
    ASSERT_EQ(map.num_segments(), 2);
    // Boundary column per row within one pixel of the color edge at x = 8.
    for (int y = 0; y < 16; ++y) {
        int first_right = 16;
        for (int x = 0; x < 16; ++x) {
            if (map.label(x, y) != map.label(0, y)) {
                first_right = x;
                break;
            }
        }
        EXPECT_NEAR(first_right, 8, 1) << "row " << y;
    }
}

TEST(SegmentImage, TwoSegmentsAlwaysPresent) {
    for (std::uint32_t seed = 0; seed < 5; ++seed) {
        const auto map = segment_image(scenes::random_scene(seed, 24), {2, 10.0, 5});
        ExpectValidMap(map);
        EXPECT_GE(map.num_segments(), 2);
        EXPECT_LE(map.num_segments(), 4);
    }
}

TEST(SegmentImage, RandomScenesSatisfyPartitionAndConnectivity) {
    for (std::uint32_t seed = 10; seed < 16; ++seed) {
        const auto map = segment_image(scenes::random_scene(seed), {});
        ExpectValidMap(map);
        EXPECT_GE(map.num_segments(), 2);
        EXPECT_LE(map.num_segments(), 100);
    }
}

TEST(SegmentImage, NonSquareImages) {
    const auto img = scenes::random_scene(3, 64);
    std::vector<std::uint8_t> wide(static_cast<std::size_t>(64) * 20 * 3);
    std::copy_n(img.data().begin(), wide.size(), wide.begin());
    const auto map = segment_image(Image(64, 20, wide), {12, 10.0, 10});
    ExpectValidMap(map);
    EXPECT_GE(map.num_segments(), 2);
    EXPECT_LE(map.num_segments(), 24);
}

TEST(SegmentImage, Deterministic) {
    const auto img = scenes::random_scene(42);
    EXPECT_EQ(segment_image(img, {}), segment_image(img, {}));
}

TEST(SegmentImage, RejectsTinyImage) {
    EXPECT_THROW(segment_image(Image::filled(15, 32, {0, 0, 0}), {}), ImageTooSmallError);
    EXPECT_THROW(segment_image(Image::filled(32, 8, {0, 0, 0}), {}), ImageTooSmallError);
}

TEST(SegmentImage, RejectsBadParameters) {
    const auto img = Image::filled(16, 16, {0, 0, 0});
    EXPECT_THROW(segment_image(img, {257, 10.0, 10}), ParameterError);
    EXPECT_THROW(segment_image(img, {1, 10.0, 10}), ParameterError);
    EXPECT_THROW(segment_image(img, {4, 0.0, 10}), ParameterError);
    EXPECT_THROW(segment_image(img, {4, 10.0, 0}), ParameterError);
    EXPECT_NO_THROW(segment_image(img, {256, 10.0, 1}));
}

TEST(FullMask, AllOnesOfSegmentCount) {
    EXPECT_EQ(full_mask(SuperpixelMap(5, 1, {0, 1, 2, 3, 4})), PerturbationMask({1, 1, 1, 1, 1}));
    EXPECT_EQ(full_mask(SuperpixelMap(2, 2, {0, 0, 0, 0})), PerturbationMask({1}));
    const auto map = segment_image(scenes::random_scene(1), {});
    const auto mask = full_mask(map);
    EXPECT_EQ(mask.size(), static_cast<std::size_t>(map.num_segments()));
    EXPECT_EQ(mask.count_zeros(), 0u);
}

TEST(SuperpixelMapTest, RejectsMismatchedLabels) {
    EXPECT_THROW(SuperpixelMap(2, 2, {0, 1, 2}), ShapeError);
    EXPECT_THROW(SuperpixelMap(2, 1, {0, -1}), ShapeError);
}

TEST(LabelMapRendering, IdsModulo256InRed) {
    std::vector<int> labels(300);
    std::iota(labels.begin(), labels.end(), 0);
    const auto img = render_label_map(SuperpixelMap(300, 1, labels));
    EXPECT_EQ(img.at(5, 0), (std::array<std::uint8_t, 3>{5, 0, 0}));
    EXPECT_EQ(img.at(261, 0), (std::array<std::uint8_t, 3>{5, 0, 0}));
}

} // namespace
} // namespace mpslime
