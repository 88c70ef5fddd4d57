#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "diytab/perspective.hpp"
#include "diytab/synth.hpp"

using namespace diytab;
namespace fs = std::filesystem;

namespace {

synth::SceneSpec clean_scene(BinaryMask ink, const OrderedQuad& quad, int fw, int fh) {
    synth::SceneSpec s;
    s.frame_width = fw;
    s.frame_height = fh;
    s.page_ink = std::move(ink);
    s.true_quad = quad;
    return s;
}

/// Ideal rendering of page ink at the scene's paper and ink levels.
Raster ideal_page(const synth::SceneSpec& s) {
    Raster r(s.page_ink.width(), s.page_ink.height(), 1, s.paper_intensity);
    for (int y = 0; y < r.height(); ++y)
        for (int x = 0; x < r.width(); ++x)
            if (s.page_ink.get(x, y)) r.at(x, y) = s.ink_intensity;
    return r;
}

double interior_mad(const Raster& a, const Raster& b, int border) {
    double sum = 0;
    int n = 0;
    for (int y = border; y < a.height() - border; ++y)
        for (int x = border; x < a.width() - border; ++x) {
            sum += std::abs(a.at(x, y) - b.at(x, y));
            ++n;
        }
    return sum / n;
}

}  // namespace

TEST(Synth, FrontoParallelIdentityShowsInkVerbatim) {
    const auto ink = synth::generate_ink(120, 90, 3.0, 5);
    const auto s = clean_scene(ink, extent_quad(120, 90), 120, 90);
    const auto f = synth::render_scene(s, 0);
    EXPECT_EQ(f.frame, ideal_page(s));
    EXPECT_EQ(f.truth.occlusion.count(), 0u);
}

TEST(Synth, TiltedPageUnwarpRecoversInk) {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto s = synth::make_static_scene(seed);
        s.noise_sigma = 0;
        s.light_gradient = 0;
        // Page resolution the far (foreshortened) edge can still resolve.
        s.page_ink = synth::generate_ink(280, 210, 4.0, seed);
        const auto f = synth::render_scene(s, 0);
        const Raster back = unwarp(f.frame, s.true_quad, {s.page_ink.width(), s.page_ink.height()});
        const double mad = interior_mad(back, ideal_page(s), 2);
        EXPECT_LE(mad, 3.0) << seed;
    }
}

TEST(Synth, RenderingIsDeterministic) {
    const auto s = synth::make_hand_session(4, 30);
    const synth::SceneRenderer a(s), b(s);
    for (int t : {0, 7, 29}) {
        const auto fa = a.render(t), fb = b.render(t);
        EXPECT_EQ(fa.frame, fb.frame);
        EXPECT_EQ(fa.truth.occlusion, fb.truth.occlusion);
    }
    EXPECT_NE(a.render(0).frame, a.render(1).frame);  // noise and hand move
}

TEST(Synth, HandPathInterpolates) {
    synth::SceneSpec s;
    s.hand_path = {{0, {0, 0}}, {10, {100, 50}}, {20, {100, 150}}};
    EXPECT_FALSE(synth::hand_position(s, -1));
    EXPECT_FALSE(synth::hand_position(s, 21));
    EXPECT_EQ(*synth::hand_position(s, 5), (Point2{50, 25}));
    EXPECT_EQ(*synth::hand_position(s, 15), (Point2{100, 100}));
}

TEST(Synth, HandIsOccludingAndDark) {
    const auto s = synth::make_hand_session(2, 20);
    const auto f = synth::render_scene(s, 10);
    const auto& occ = f.truth.occlusion;
    ASSERT_GT(occ.count(), 2000u);
    const auto p = *synth::hand_position(s, 10);
    EXPECT_TRUE(occ.get(static_cast<int>(p.x), static_cast<int>(p.y)));
    EXPECT_NEAR(f.frame.at(static_cast<int>(p.x), static_cast<int>(p.y)), s.hand.intensity, 20);
    // The forearm reaches the bottom edge.
    bool bottom = false;
    for (int x = 0; x < occ.width(); ++x) bottom |= occ.get(x, occ.height() - 1);
    EXPECT_TRUE(bottom);
}

TEST(Synth, SceneFileRoundTrip) {
    const auto dir = fs::temp_directory_path() / "diytab_synth_scene";
    fs::create_directories(dir);
    const auto s = synth::make_hand_session(6, 40);
    const auto path = (dir / "s.ini").string();
    std::ofstream(path) << synth::scene_to_config(s);
    const auto back = synth::load_scene_file(path);
    EXPECT_EQ(back.true_quad, s.true_quad);
    EXPECT_EQ(back.page_ink, s.page_ink);
    EXPECT_EQ(back.hand_path.size(), s.hand_path.size());
    EXPECT_EQ(back.noise_sigma, s.noise_sigma);
    EXPECT_EQ(synth::render_scene(back, 17).frame, synth::render_scene(s, 17).frame);
    EXPECT_THROW(synth::parse_scene("[scene]\nbogus = 1\n"), Error);
}

TEST(Synth, F1AndResample) {
    BinaryMask a(4, 4), b(4, 4);
    a.set(0, 0);
    a.set(1, 0);
    b.set(1, 0);
    b.set(2, 0);
    const auto s = synth::f1_score(a, b);
    EXPECT_DOUBLE_EQ(s.precision, 0.5);
    EXPECT_DOUBLE_EQ(s.recall, 0.5);
    EXPECT_DOUBLE_EQ(s.f1, 0.5);
    EXPECT_DOUBLE_EQ(synth::f1_score(BinaryMask(4, 4), BinaryMask(4, 4)).f1, 1.0);
    EXPECT_EQ(synth::resample_mask(a, 4, 4), a);
    const auto up = synth::resample_mask(a, 8, 8);
    EXPECT_EQ(up.count(), 8u);
    EXPECT_TRUE(up.get(3, 1));
}

TEST(Synth, TiltedQuadsAreForeshortenedAndInside) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto q = synth::tilted_page_quad(seed);
        ASSERT_TRUE(is_strictly_convex(q));
        EXPECT_LT(distance(q.tl, q.tr), distance(q.bl, q.br));
        for (const auto& p : q.corners()) {
            EXPECT_GE(p.x, 5.0);
            EXPECT_LE(p.x, 634.0);
        }
    }
}
