#include <gtest/gtest.h>

#include <random>

#include "diytab/components.hpp"
#include "diytab/ink.hpp"
#include "test_util.hpp"

using namespace diytab;

namespace {

oracle::Offsets offsets_of(const StructuringElement& se) {
    oracle::Offsets o;
    for (int y = 0; y < se.height(); ++y)
        for (int x = 0; x < se.width(); ++x)
            if (se.get(x, y)) o.push_back({x - se.origin_x(), y - se.origin_y()});
    return o;
}

StructuringElement random_se(std::mt19937_64& rng) {
    const int w = 1 + 2 * static_cast<int>(rng() % 3), h = 1 + 2 * static_cast<int>(rng() % 3);
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
    for (auto& b : bits) b = rng() % 3 != 0;
    bits[static_cast<std::size_t>(h / 2) * w + w / 2] = 1;
    return StructuringElement(w, h, bits);
}

}  // namespace

TEST(AdaptiveThreshold, ConstantImageIsBackground) {
    EXPECT_EQ(adaptive_threshold(Raster(20, 20, 1, 137), {5, 10}).count(), 0u);
}

TEST(AdaptiveThreshold, BlackPageWithZeroOffsetIsBackground) {
    EXPECT_EQ(adaptive_threshold(Raster(9, 9, 1, 0), {3, 0}).count(), 0u);
}

TEST(AdaptiveThreshold, CentreDotMatchesDirectComputation) {
    Raster img(5, 5, 1, 200);
    img.at(2, 2) = 0;
    const auto m = adaptive_threshold(img, {3, 10});
    const auto expected = oracle::threshold_direct(img.data(), 5, 5, 3, 10);
    EXPECT_EQ(to_grid(m).v, expected.v);
    // The centre's 3x3 mean is 1600/9 -> 177; only the centre falls below 167.
    EXPECT_TRUE(m.get(2, 2));
    EXPECT_EQ(m.count(), 1u);
}

TEST(AdaptiveThreshold, RandomImagesMatchDirectLoopsBitExactly) {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        const int w = 8 + static_cast<int>(rng() % 40), h = 8 + static_cast<int>(rng() % 40);
        const int window = 3 + 2 * static_cast<int>(rng() % ((std::min(w, h) - 1) / 2));
        const int offset = static_cast<int>(rng() % 20);
        const Raster img = random_gray(w, h, rng);
        const auto m = adaptive_threshold(img, {window, offset});
        ASSERT_EQ(to_grid(m).v, oracle::threshold_direct(img.data(), w, h, window, offset).v)
            << w << "x" << h << " window " << window;
    }
}

TEST(AdaptiveThreshold, Errors) {
    EXPECT_THROW(adaptive_threshold(Raster(10, 10), {11, 5}), Error);
    EXPECT_THROW(adaptive_threshold(Raster(10, 10), {4, 5}), Error);
    EXPECT_THROW(adaptive_threshold(Raster(10, 10), {3, -1}), Error);
    EXPECT_THROW(adaptive_threshold(Raster(10, 10, 3), {3, 1}), Error);
}

TEST(Morphology, SinglePixel) {
    BinaryMask m(7, 7);
    m.set(3, 3);
    const auto se = StructuringElement::box(3);
    EXPECT_EQ(erode(m, se).count(), 0u);
    const auto d = dilate(m, se);
    EXPECT_EQ(d.count(), 9u);
    for (int y = 2; y <= 4; ++y)
        for (int x = 2; x <= 4; ++x) EXPECT_TRUE(d.get(x, y));
}

TEST(Morphology, EmptyStructuringElementRejected) {
    EXPECT_THROW(StructuringElement(3, 3, std::vector<std::uint8_t>(9, 0)), Error);
    EXPECT_THROW(StructuringElement(2, 3, std::vector<std::uint8_t>(6, 1)), Error);
}

TEST(Morphology, MatchesSetDefinitions) {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = oracle::random_grid(32, 32, 0.3 + 0.4 * (trial % 5) / 4.0, rng);
        const auto se = trial % 2 ? StructuringElement::box(3) : random_se(rng);
        const auto off = offsets_of(se);
        const auto m = to_mask(g);
        const auto e = oracle::erode_def(g, off);
        const auto d = oracle::dilate_def(g, off);
        ASSERT_EQ(to_grid(erode(m, se)).v, e.v);
        ASSERT_EQ(to_grid(dilate(m, se)).v, d.v);
        ASSERT_EQ(to_grid(open(m, se)).v, oracle::dilate_def(e, off).v);
        ASSERT_EQ(to_grid(close(m, se)).v, oracle::erode_def(d, off).v);
    }
}

TEST(Morphology, DualityOnInterior) {
    // With out-of-bounds as background for both operators, duality holds away
    // from the border (within the element radius of the edge it cannot).
    std::mt19937_64 rng(83);
    const auto se = StructuringElement::box(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = to_mask(oracle::random_grid(32, 32, 0.5, rng));
        const auto lhs = dilate(m, se);
        const auto rhs = mask_complement(erode(mask_complement(m), se));
        for (int y = 1; y < 31; ++y)
            for (int x = 1; x < 31; ++x) ASSERT_EQ(lhs.get(x, y), rhs.get(x, y));
    }
}

TEST(Morphology, IdempotenceAndMonotonicity) {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 50; ++trial) {
        const auto se = trial % 2 ? StructuringElement::box(3) : random_se(rng);
        const auto m = to_mask(oracle::random_grid(32, 32, 0.5, rng));
        EXPECT_EQ(open(open(m, se), se), open(m, se));
        EXPECT_EQ(close(close(m, se), se), close(m, se));
        const auto bigger = mask_union(m, to_mask(oracle::random_grid(32, 32, 0.2, rng)));
        EXPECT_TRUE(mask_subset(dilate(m, se), dilate(bigger, se)));
        EXPECT_TRUE(mask_subset(erode(m, se), erode(bigger, se)));
    }
}

TEST(Filter, SpeckAndPalm) {
    BinaryMask speck(10, 10);
    speck.set(4, 4);
    speck.set(5, 4);
    ComponentFilterConfig cfg;
    cfg.min_area = 5;
    EXPECT_EQ(filter_components(label_components(speck, Connectivity::Eight), cfg).count(), 0u);

    BinaryMask blob(10, 10);
    for (int y = 2; y < 8; ++y)
        for (int x = 2; x < 9; ++x) blob.set(x, y);  // 42 % of the image, interior
    cfg.min_area = 1;
    cfg.max_area_fraction = 0.25;
    const auto lm = label_components(blob, Connectivity::Eight);
    EXPECT_EQ(classify_component(lm.stats[0], cfg, 10, 10), ComponentVerdict::Palm);
    EXPECT_EQ(filter_components(lm, cfg).count(), 0u);
}

TEST(Filter, BorderRuleWithFingerExemption) {
    BinaryMask m(100, 100);
    for (int y = 0; y < 30; ++y)
        for (int x = 40; x < 60; ++x) m.set(x, y);  // 600 px touching the top
    for (int y = 80; y < 100; ++y) m.set(5, y);      // 20 px stroke touching the bottom
    for (int x = 70; x < 90; ++x) m.set(x, 50);      // interior stroke
    ComponentFilterConfig cfg;
    const auto lm = label_components(m, Connectivity::Eight);
    ASSERT_EQ(lm.count(), 3);
    EXPECT_EQ(classify_component(lm.stats[0], cfg, 100, 100), ComponentVerdict::BorderBlob);
    const auto kept = filter_components(lm, cfg);
    EXPECT_EQ(kept.count(), 40u);
    cfg.reject_border_blobs = false;
    EXPECT_EQ(filter_components(lm, cfg).count(), 640u);
}

TEST(Filter, SubsetAndMonotoneInMinArea) {
    std::mt19937_64 rng(97);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = to_mask(oracle::random_grid(40, 40, 0.45, rng));
        const auto lm = label_components(m, Connectivity::Eight);
        ComponentFilterConfig cfg;
        cfg.max_area_fraction = 1.0;
        cfg.reject_border_blobs = trial % 2;
        BinaryMask prev = m;
        for (int min_area = 1; min_area < 60; min_area += 7) {
            cfg.min_area = min_area;
            const auto kept = filter_components(lm, cfg);
            EXPECT_TRUE(mask_subset(kept, m));
            EXPECT_TRUE(mask_subset(kept, prev));
            prev = kept;
        }
    }
}

TEST(Filter, ConfigValidation) {
    ComponentFilterConfig cfg;
    cfg.min_area = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.max_area_fraction = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg.max_area_fraction = 1.5;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(RenderInk, ExtremesAndRoundTrip) {
    EXPECT_EQ(render_ink(BinaryMask(4, 4)), Raster(4, 4, 1, 255));
    EXPECT_EQ(render_ink(BinaryMask(4, 4, true)), Raster(4, 4, 1, 0));
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = to_mask(oracle::random_grid(30, 30, 0.05 + 0.05 * (trial % 6), rng));
        const Raster img = render_ink(m);
        for (int window : {3, 7, 15})
            for (int offset : {0, 20, 64, 127}) {
                const auto back = adaptive_threshold(img, {window, offset});
                EXPECT_TRUE(mask_subset(back, m));
                // Exact recovery whenever each ink pixel sees enough paper
                // in its window for the local mean to exceed the offset.
                const auto means_ok = oracle::threshold_direct(img.data(), 30, 30, window, offset);
                bool all_clear = true;
                for (std::size_t i = 0; i < means_ok.v.size(); ++i) all_clear &= !m.bits()[i] || means_ok.v[i];
                if (all_clear) EXPECT_EQ(back, m) << window << " " << offset;
            }
    }
    // A solid blob wider than the window loses its interior.
    BinaryMask blob(20, 20);
    for (int y = 5; y < 15; ++y)
        for (int x = 5; x < 15; ++x) blob.set(x, y);
    EXPECT_FALSE(adaptive_threshold(render_ink(blob), {3, 0}).get(10, 10));
}
