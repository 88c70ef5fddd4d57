#include <gtest/gtest.h>

#include "diytab/quad.hpp"
#include "diytab/segmenter.hpp"
#include "test_util.hpp"

using namespace diytab;

namespace {

BinaryMask fill_convex(int w, int h, const OrderedQuad& q) {
    const auto c = q.corners();
    BinaryMask m(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            bool inside = true;
            for (int i = 0; i < 4 && inside; ++i) inside = cross(c[i], c[(i + 1) % 4], {double(x), double(y)}) >= 0.0;
            if (inside) m.set(x, y);
        }
    return m;
}

Raster paint(const BinaryMask& m, std::uint8_t fg, std::uint8_t bg) {
    Raster r(m.width(), m.height(), 1, bg);
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.get(x, y)) r.at(x, y) = fg;
    return r;
}

double iou(const BinaryMask& a, const BinaryMask& b) {
    const double inter = static_cast<double>(mask_intersection(a, b).count());
    const double uni = static_cast<double>(mask_union(a, b).count());
    return uni == 0 ? 1.0 : inter / uni;
}

}  // namespace

TEST(Segmenter, BrightQuadOnDarkBackground) {
    const OrderedQuad q{{150, 90}, {500, 110}, {560, 400}, {90, 380}};
    const auto truth = fill_convex(640, 480, q);
    const auto r = segment_paper(paint(truth, 220, 40), {});
    EXPECT_GE(iou(r.mask, truth), 0.95);
    EXPECT_GT(r.threshold, 40.0);
    EXPECT_LT(r.threshold, 220.0);
    EXPECT_GT(r.confidence, 0.95);
}

TEST(Segmenter, RandomQuadsWithNoise) {
    std::mt19937_64 rng(107);
    std::normal_distribution<double> noise(0.0, 4.0);
    for (int trial = 0; trial < 10; ++trial) {
        auto q = random_convex_quad(rng, 480.0);
        while (quad_area(q) < 0.15 * 640 * 480) q = random_convex_quad(rng, 480.0);
        const auto truth = fill_convex(640, 480, q);
        Raster img = paint(truth, 210, 50);
        for (auto& v : img.data()) v = round_intensity(v + noise(rng));
        const auto r = segment_paper(img, {});
        EXPECT_GE(iou(r.mask, truth), 0.95) << trial;
    }
}

TEST(Segmenter, HolesAreFilled) {
    const OrderedQuad q{{100, 100}, {500, 100}, {500, 400}, {100, 400}};
    const auto truth = fill_convex(640, 480, q);
    Raster img = paint(truth, 220, 40);
    for (int y = 200; y < 260; ++y)
        for (int x = 250; x < 330; ++x) img.at(x, y) = 40;  // a dark object lying on the page
    const auto r = segment_paper(img, {});
    EXPECT_TRUE(r.mask.get(290, 230));
    EXPECT_GE(iou(r.mask, truth), 0.97);
}

TEST(Segmenter, NoPaper) {
    EXPECT_THROW(segment_paper(Raster(640, 480, 1, 0), {}), NoPaperFound);
    // A bright speck well under the area gate.
    Raster img(640, 480, 1, 30);
    for (int y = 10; y < 30; ++y)
        for (int x = 10; x < 30; ++x) img.at(x, y) = 230;
    EXPECT_THROW(segment_paper(img, {}), NoPaperFound);
}

TEST(Segmenter, UniformBrightFrameIsAllPaper) {
    const auto r = segment_paper(Raster(320, 240, 1, 220), {});
    EXPECT_EQ(r.mask.count(), 320u * 240u);
    EXPECT_NEAR(r.confidence, 1.0, 1e-9);
}

TEST(Segmenter, GateIsMonotone) {
    // A page covering ~15 % of the frame passes a 10 % gate but not a 20 % one.
    const OrderedQuad q{{200, 150}, {420, 150}, {420, 360}, {200, 360}};
    const Raster img = paint(fill_convex(640, 480, q), 220, 40);
    SegmenterConfig cfg;
    cfg.min_region_fraction = 0.10;
    EXPECT_NO_THROW(segment_paper(img, cfg));
    cfg.min_region_fraction = 0.20;
    EXPECT_THROW(segment_paper(img, cfg), NoPaperFound);
}

TEST(Segmenter, ConfigValidation) {
    SegmenterConfig cfg;
    cfg.downscale_factor = 0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.min_region_fraction = 1.5;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = {};
    cfg.brightness_percentile = 101;
    EXPECT_THROW(cfg.validate(), Error);
    EXPECT_THROW(make_segmenter("neural", {}), Error);
    EXPECT_NE(make_segmenter("classical", {}), nullptr);
}

TEST(Handedness, MirrorsOnlyForLeft) {
    Raster r(3, 1, 1, std::vector<std::uint8_t>{1, 2, 3});
    EXPECT_EQ(apply_handedness(r, Handedness::Right), r);
    EXPECT_EQ(apply_handedness(r, Handedness::Left), Raster(3, 1, 1, std::vector<std::uint8_t>{3, 2, 1}));
    EXPECT_EQ(apply_handedness(apply_handedness(r, Handedness::Left), Handedness::Left), r);
}
