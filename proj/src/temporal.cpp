#include "diytab/temporal.hpp"

#include <algorithm>
#include <cmath>

namespace diytab {

double max_corner_displacement(const OrderedQuad& a, const OrderedQuad& b) {
    const auto ca = a.corners();
    const auto cb = b.corners();
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, distance(ca[i], cb[i]));
    return d;
}

QuadTrack update_quad(QuadTrack track, const std::optional<OrderedQuad>& detected) {
    auto reject = [&track](QuadOutcome outcome) {
        ++track.last_good_age;
        track.last_outcome = outcome;
        return track;
    };

    if (!detected || !is_strictly_convex(*detected)) {
        track.rejected_streak = 0;
        track.rejected_anchor.reset();
        return reject(QuadOutcome::Missing);
    }
    if (!track.current) {
        track.current = *detected;
        track.last_good_age = 0;
        track.last_outcome = QuadOutcome::Initialized;
        return track;
    }

    if (max_corner_displacement(*detected, *track.current) > track.jump_threshold) {
        if (track.rejected_anchor &&
            max_corner_displacement(*detected, *track.rejected_anchor) <= track.jump_threshold)
            ++track.rejected_streak;
        else
            track.rejected_streak = 1;
        track.rejected_anchor = *detected;
        if (track.reacquire_after > 0 && track.rejected_streak >= track.reacquire_after) {
            track.current = *detected;
            track.last_good_age = 0;
            track.rejected_streak = 0;
            track.rejected_anchor.reset();
            track.last_outcome = QuadOutcome::Reacquired;
            return track;
        }
        return reject(QuadOutcome::Rejected);
    }

    const double a = track.ema_alpha;
    const auto cur = track.current->corners();
    const auto det = detected->corners();
    std::array<Point2, 4> blended;
    for (int i = 0; i < 4; ++i) blended[i] = a * det[i] + (1.0 - a) * cur[i];
    const OrderedQuad candidate = OrderedQuad::from_corners(blended);
    if (!is_strictly_convex(candidate)) return reject(QuadOutcome::Rejected);

    track.current = candidate;
    track.last_good_age = 0;
    track.rejected_streak = 0;
    track.rejected_anchor.reset();
    track.last_outcome = QuadOutcome::Smoothed;
    return track;
}

InkCanvas::InkCanvas(int width, int height)
    : ink(width, height), last_seen(static_cast<std::size_t>(width) * height, -1) {}

InkCanvas update_canvas(InkCanvas canvas, const BinaryMask& frame_ink, const BinaryMask& occlusion,
                        std::int64_t t) {
    if (frame_ink.width() != canvas.width() || frame_ink.height() != canvas.height() ||
        occlusion.width() != canvas.width() || occlusion.height() != canvas.height())
        throw DimensionMismatch("canvas, frame ink and occlusion dimensions differ");
    if (t <= canvas.frame_index) throw Error("canvas frame index must strictly increase");
    auto& ink = canvas.ink.bits();
    const auto& fresh = frame_ink.bits();
    const auto& occ = occlusion.bits();
    for (std::size_t i = 0; i < ink.size(); ++i) {
        if (occ[i]) continue;
        ink[i] = fresh[i];
        canvas.last_seen[i] = t;
    }
    canvas.frame_index = t;
    return canvas;
}

namespace {

/// Fills the convex hull of one component's pixel centers into `out`.
void fill_component_hull(const LabelMap& lm, std::int32_t label, BinaryMask& out) {
    const auto& bb = lm.stats[label - 1].bbox;
    std::vector<Point2> pts;
    for (int y = bb.y0; y <= bb.y1; ++y) {
        int lo = -1, hi = -1;
        for (int x = bb.x0; x <= bb.x1; ++x) {
            if (lm.at(x, y) != label) continue;
            if (lo < 0) lo = x;
            hi = x;
        }
        if (lo < 0) continue;
        pts.push_back({static_cast<double>(lo), static_cast<double>(y)});
        pts.push_back({static_cast<double>(hi), static_cast<double>(y)});
    }
    std::vector<Point2> hull;
    try {
        hull = convex_hull(pts);
    } catch (const DegenerateHull&) {
        // A straight run of pixels; the component itself is its hull.
        for (int y = bb.y0; y <= bb.y1; ++y)
            for (int x = bb.x0; x <= bb.x1; ++x)
                if (lm.at(x, y) == label) out.set(x, y);
        return;
    }
    constexpr double kEps = 1e-9;
    for (int y = bb.y0; y <= bb.y1; ++y) {
        double xmin = bb.x1 + 1.0, xmax = bb.x0 - 1.0;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Point2 a = hull[i];
            const Point2 b = hull[(i + 1) % hull.size()];
            if ((y < std::min(a.y, b.y) - kEps) || (y > std::max(a.y, b.y) + kEps)) continue;
            if (std::abs(b.y - a.y) < kEps) {
                xmin = std::min({xmin, a.x, b.x});
                xmax = std::max({xmax, a.x, b.x});
            } else {
                const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
            }
        }
        const int x0 = std::max(bb.x0, static_cast<int>(std::ceil(xmin - kEps)));
        const int x1 = std::min(bb.x1, static_cast<int>(std::floor(xmax + kEps)));
        for (int x = x0; x <= x1; ++x) out.set(x, y);
    }
}

}  // namespace

BinaryMask occlusion_mask(const LabelMap& lm, const ComponentFilterConfig& cfg, int margin) {
    BinaryMask out(lm.width, lm.height);
    bool any = false;
    for (std::size_t k = 0; k < lm.count(); ++k) {
        const auto verdict = classify_component(lm.stats[k], cfg, lm.width, lm.height);
        if (verdict != ComponentVerdict::Palm && verdict != ComponentVerdict::BorderBlob) continue;
        fill_component_hull(lm, static_cast<std::int32_t>(k + 1), out);
        any = true;
    }
    if (!any || margin <= 0) return out;
    return dilate(out, StructuringElement::box(2 * margin + 1));
}

bool PageChangeDetector::observe(const InkCanvas& canvas, const BinaryMask& frame_ink, const BinaryMask& occlusion) {
    if (reference_.width() != canvas.width() || reference_.height() != canvas.height()) reference_ = canvas.ink;
    const auto& ref = reference_.bits();
    const auto& fresh = frame_ink.bits();
    const auto& occ = occlusion.bits();
    std::int64_t visible = 0, vanished = 0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (!ref[i] || occ[i]) continue;
        ++visible;
        if (!fresh[i]) ++vanished;
    }
    if (visible < policy_.min_ink ||
        static_cast<double>(vanished) < policy_.vanish_fraction * static_cast<double>(visible)) {
        streak_ = 0;
        reference_ = canvas.ink;
        return false;
    }
    if (++streak_ < policy_.frames) return false;
    streak_ = 0;
    return true;
}

void PageChangeDetector::reset(const InkCanvas& canvas) {
    reference_ = canvas.ink;
    streak_ = 0;
}

}  // namespace diytab
