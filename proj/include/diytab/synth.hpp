#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diytab/quad.hpp"
#include "diytab/raster.hpp"

namespace diytab::synth {

struct HandKeyframe {
    int frame = 0;
    Point2 position;  // palm center, camera pixels
};

/// Filled ellipse (palm) plus a rectangle (forearm) running from the palm
/// center out past the frame edge.
struct HandSprite {
    double palm_rx = 42.0;
    double palm_ry = 32.0;
    double arm_width = 50.0;
    double arm_angle_deg = 15.0;  // from straight down, positive leans right
    std::uint8_t intensity = 90;
};

/// How `page_ink` was produced, so a spec can be written back to a file.
struct InkRecipe {
    int width = 400;
    int height = 300;
    double stroke_width = 4.0;
    std::uint64_t seed = 0;
    std::string png;  // when set, the ink is loaded from this file instead
};

struct SceneSpec {
    int frame_width = 640;
    int frame_height = 480;
    BinaryMask page_ink;
    OrderedQuad true_quad;  // page pixel extent in camera coordinates
    std::uint8_t bg_intensity = 40;
    std::uint8_t paper_intensity = 220;
    std::uint8_t ink_intensity = 30;
    double light_gradient = 0.0;      // total additive delta across the frame
    double gradient_angle_deg = 0.0;  // 0 = brightening left to right
    std::vector<HandKeyframe> hand_path;
    HandSprite hand;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::optional<InkRecipe> ink_recipe;

    void validate() const;
};

struct SceneTruth {
    OrderedQuad quad;
    BinaryMask ink;        // page space
    BinaryMask occlusion;  // camera space, hand pixel centers
};

struct SceneFrame {
    Raster frame;  // single channel
    SceneTruth truth;
};

/// Palm position at frame t by linear interpolation of the keyframes;
/// empty outside the path's frame range.
std::optional<Point2> hand_position(const SceneSpec& spec, int t);

/// Renders frames of one scene, caching the static page projection.
/// The page is forward-mapped with 4x4 supersampling through a closed-form
/// square-to-quad projection.
class SceneRenderer {
public:
    explicit SceneRenderer(SceneSpec spec);
    SceneFrame render(int t) const;
    const SceneSpec& spec() const { return spec_; }

    /// Camera position of a page-space continuous point (pixel-center coords).
    Point2 page_to_camera(Point2 page) const;
    /// Page-space mask of camera-space pixels (nearest camera pixel per page pixel).
    BinaryMask camera_mask_to_page(const BinaryMask& camera) const;

private:
    SceneSpec spec_;
    std::vector<float> base_;  // static camera frame before hand, gradient and noise
    double proj_[8];           // square-to-quad coefficients a..h
};

SceneFrame render_scene(const SceneSpec& spec, int t);

/// Text-like pen strokes: wavy word segments along ruled lines.
BinaryMask generate_ink(int width, int height, double stroke_width, std::uint64_t seed);

/// Trapezoid mimicking a laptop camera looking down at a sheet with the
/// lid tilted about 45 degrees, perturbed by `seed`.
OrderedQuad tilted_page_quad(std::uint64_t seed, int frame_width = 640, int frame_height = 480);

/// Static scene with varying quad, lighting gradient and noise (sigma <= 4).
SceneSpec make_static_scene(std::uint64_t seed);

/// Session with a hand moving along the writing lines over `frames` frames.
SceneSpec make_hand_session(std::uint64_t seed, int frames);

/// Nearest-neighbour resample of a page mask onto a width x height grid
/// with matching pixel extents.
BinaryMask resample_mask(const BinaryMask& mask, int width, int height);

struct F1Score {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

F1Score f1_score(const BinaryMask& predicted, const BinaryMask& truth);

BinaryMask make_ink(const InkRecipe& recipe, const std::string& base_dir = ".");

/// Key/value form of a SceneSpec, in the pipeline's config file format.
/// A relative `ink.png` path resolves against the scene file's directory.
SceneSpec load_scene_file(const std::string& path);
SceneSpec parse_scene(const std::string& text, const std::string& base_dir = ".");
/// Requires `ink_recipe`.
std::string scene_to_config(const SceneSpec& spec);

}  // namespace diytab::synth
