#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diytab/components.hpp"
#include "diytab/ink.hpp"
#include "diytab/quad.hpp"

namespace diytab {

enum class QuadOutcome { None, Initialized, Smoothed, Rejected, Missing, Reacquired };

/// Exponentially smoothed paper quad with jump rejection.
struct QuadTrack {
    std::optional<OrderedQuad> current;
    double ema_alpha = 0.4;
    std::int64_t last_good_age = 0;
    double jump_threshold = 40.0;
    /// After this many consecutive rejected detections that agree with each
    /// other, the track snaps to the new position. 0 disables re-acquisition.
    int reacquire_after = 10;

    QuadOutcome last_outcome = QuadOutcome::None;
    int rejected_streak = 0;
    std::optional<OrderedQuad> rejected_anchor;
};

double max_corner_displacement(const OrderedQuad& a, const OrderedQuad& b);

/// `detected` is empty when the frame had no usable paper detection.
QuadTrack update_quad(QuadTrack track, const std::optional<OrderedQuad>& detected);

/// Accumulated rectified ink. Dimensions are fixed for a session.
struct InkCanvas {
    BinaryMask ink;
    /// Frame index of the last unoccluded observation; -1 = never seen.
    std::vector<std::int64_t> last_seen;
    std::int64_t frame_index = -1;

    InkCanvas() = default;
    InkCanvas(int width, int height);
    int width() const { return ink.width(); }
    int height() const { return ink.height(); }
};

/// Unoccluded pixels take the frame's ink; occluded pixels are untouched.
/// Throws DimensionMismatch, or Error when t does not increase.
InkCanvas update_canvas(InkCanvas canvas, const BinaryMask& frame_ink, const BinaryMask& occlusion,
                        std::int64_t t);

/// Components rejected as palm or border blob, each filled to its convex
/// hull and dilated by `margin` pixels.
BinaryMask occlusion_mask(const LabelMap& lm, const ComponentFilterConfig& cfg, int margin = 5);

struct PageChangePolicy {
    double vanish_fraction = 0.6;
    int frames = 15;
    /// Reference pages with less visible ink than this never trigger.
    std::int64_t min_ink = 50;
};

/// Tracks how much of the last stable page's ink has vanished outside
/// occlusion; fires after `frames` consecutive frames over the fraction.
class PageChangeDetector {
public:
    explicit PageChangeDetector(PageChangePolicy policy = {}) : policy_(policy) {}

    /// Call before the canvas is updated with this frame.
    bool observe(const InkCanvas& canvas, const BinaryMask& frame_ink, const BinaryMask& occlusion);
    void reset(const InkCanvas& canvas);
    int streak() const { return streak_; }

private:
    PageChangePolicy policy_;
    BinaryMask reference_;
    int streak_ = 0;
};

}  // namespace diytab
