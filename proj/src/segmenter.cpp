#include "diytab/segmenter.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "diytab/components.hpp"
#include "diytab/quad.hpp"

namespace diytab {

namespace {

// Below this spread between the bright and dark percentiles the frame is
// treated as uniform.
constexpr double kMinContrast = 24.0;
constexpr double kUniformPaperLevel = 128.0;
constexpr double kDarkPercentile = 2.0;

Raster box_downscale(const Raster& gray, int f) {
    const int w = std::max(1, gray.width() / f);
    const int h = std::max(1, gray.height() / f);
    const int fx = std::min(f, gray.width());
    const int fy = std::min(f, gray.height());
    Raster out(w, h, 1);
    std::vector<int> acc(w);
    for (int y = 0; y < h; ++y) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int k = 0; k < fy; ++k) {
            auto src = gray.row(y * fy + k);
            for (int x = 0; x < w; ++x)
                for (int j = 0; j < fx; ++j) acc[x] += src[x * fx + j];
        }
        auto dst = out.row(y);
        const int n = fx * fy;
        for (int x = 0; x < w; ++x) dst[x] = static_cast<std::uint8_t>((acc[x] + n / 2) / n);
    }
    return out;
}

int percentile(const std::array<std::int64_t, 256>& hist, std::int64_t total, double pct) {
    const auto rank = static_cast<std::int64_t>(std::ceil(pct / 100.0 * static_cast<double>(total)));
    std::int64_t seen = 0;
    for (int v = 0; v < 256; ++v) {
        seen += hist[v];
        if (seen >= std::max<std::int64_t>(rank, 1)) return v;
    }
    return 255;
}

/// Ridler-Calvard iteration from the seed.
double isodata_threshold(const std::array<std::int64_t, 256>& hist, double t) {
    for (int iter = 0; iter < 64; ++iter) {
        double lo_sum = 0, hi_sum = 0;
        std::int64_t lo_n = 0, hi_n = 0;
        for (int v = 0; v < 256; ++v) {
            if (v < t) {
                lo_sum += static_cast<double>(v) * hist[v];
                lo_n += hist[v];
            } else {
                hi_sum += static_cast<double>(v) * hist[v];
                hi_n += hist[v];
            }
        }
        if (lo_n == 0 || hi_n == 0) return t;
        const double next = 0.5 * (lo_sum / lo_n + hi_sum / hi_n);
        if (std::abs(next - t) < 0.25) return next;
        t = next;
    }
    return t;
}

BinaryMask largest_component(const BinaryMask& m, std::int64_t& area) {
    const LabelMap lm = label_components(m, Connectivity::Four);
    area = 0;
    std::int32_t best = 0;
    for (std::size_t k = 0; k < lm.count(); ++k) {
        if (lm.stats[k].area > area) {
            area = lm.stats[k].area;
            best = static_cast<std::int32_t>(k + 1);
        }
    }
    return best == 0 ? BinaryMask(m.width(), m.height()) : lm.component_mask(best);
}

void fill_holes(BinaryMask& m) {
    const LabelMap bg = label_components(mask_complement(m), Connectivity::Eight);
    for (std::size_t i = 0; i < bg.labels.size(); ++i) {
        const auto l = bg.labels[i];
        if (l != 0 && !bg.stats[l - 1].border_contact) m.bits()[i] = 1;
    }
}

/// Area of the region over the area of the hull of its pixel squares.
double hull_fill_ratio(const BinaryMask& m, std::int64_t area) {
    std::vector<Point2> pts;
    for (int y = 0; y < m.height(); ++y) {
        int lo = -1, hi = -1;
        for (int x = 0; x < m.width(); ++x) {
            if (!m.get(x, y)) continue;
            if (lo < 0) lo = x;
            hi = x;
        }
        if (lo < 0) continue;
        for (double px : {lo - 0.5, hi + 0.5})
            for (double py : {y - 0.5, y + 0.5}) pts.push_back({px, py});
    }
    try {
        const double hull = std::abs(polygon_area(convex_hull(pts)));
        return hull > 0.0 ? std::clamp(static_cast<double>(area) / hull, 0.0, 1.0) : 0.0;
    } catch (const DegenerateHull&) {
        return 0.0;
    }
}

}  // namespace

void SegmenterConfig::validate() const {
    if (downscale_factor < 1) throw Error("segmenter downscale_factor must be >= 1");
    if (!(min_region_fraction > 0.0 && min_region_fraction < 1.0))
        throw Error("segmenter min_region_fraction must be in (0, 1)");
    if (!(brightness_percentile > 50.0 && brightness_percentile < 100.0))
        throw Error("segmenter brightness_percentile must be in (50, 100)");
}

Raster apply_handedness(const Raster& frame, Handedness handedness) {
    return handedness == Handedness::Left ? flip_horizontal(frame) : frame;
}

ClassicalSegmenter::ClassicalSegmenter(SegmenterConfig cfg) : cfg_(cfg) { cfg_.validate(); }

SegmentationResult ClassicalSegmenter::segment(const Raster& gray) const {
    if (gray.empty()) throw Error("segment_paper: empty frame");
    if (gray.channels() != 1) throw Error("segment_paper expects a single-channel raster");

    const int f = std::max(1, std::min({cfg_.downscale_factor, gray.width(), gray.height()}));
    const Raster small = f > 1 ? box_downscale(gray, f) : gray;

    std::array<std::int64_t, 256> hist{};
    for (auto v : small.data()) ++hist[v];
    const auto total = static_cast<std::int64_t>(small.data().size());
    const int bright = percentile(hist, total, cfg_.brightness_percentile);
    // A low fixed percentile so frames dominated by paper still show contrast.
    const int dark = percentile(hist, total, kDarkPercentile);

    SegmentationResult result;
    if (bright - dark < kMinContrast) {
        if (bright < kUniformPaperLevel) throw NoPaperFound("frame has no bright region");
        result.mask = BinaryMask(gray.width(), gray.height(), true);
        result.confidence = 1.0;
        result.threshold = dark;
        return result;
    }
    const double t = isodata_threshold(hist, 0.5 * (bright + dark));
    result.threshold = t;

    BinaryMask coarse(small.width(), small.height());
    for (std::size_t i = 0; i < small.data().size(); ++i) coarse.bits()[i] = small.data()[i] >= t ? 1 : 0;
    std::int64_t area = 0;
    coarse = largest_component(coarse, area);
    if (area == 0 || static_cast<double>(area) < cfg_.min_region_fraction * static_cast<double>(total))
        throw NoPaperFound("no bright region passes the area gate");
    fill_holes(coarse);
    area = static_cast<std::int64_t>(coarse.count());
    result.confidence = hull_fill_ratio(coarse, area);

    // Nearest-neighbour upscale; cells on the coarse boundary are
    // re-thresholded at full resolution.
    const int cw = coarse.width();
    const int ch = coarse.height();
    BinaryMask boundary(cw, ch);
    for (int y = 0; y < ch; ++y)
        for (int x = 0; x < cw; ++x) {
            const bool v = coarse.get(x, y);
            bool edge = false;
            for (int dy = -1; dy <= 1 && !edge; ++dy)
                for (int dx = -1; dx <= 1 && !edge; ++dx) {
                    const int xx = std::clamp(x + dx, 0, cw - 1);
                    const int yy = std::clamp(y + dy, 0, ch - 1);
                    edge = coarse.get(xx, yy) != v;
                }
            boundary.set(x, y, edge);
        }

    BinaryMask full(gray.width(), gray.height());
    for (int y = 0; y < gray.height(); ++y) {
        const int cy = std::min(y / f, ch - 1);
        auto src = gray.row(y);
        for (int x = 0; x < gray.width(); ++x) {
            const int cx = std::min(x / f, cw - 1);
            const bool v = boundary.get(cx, cy) ? src[x] >= t : coarse.get(cx, cy);
            if (v) full.set(x, y);
        }
    }
    std::int64_t full_area = 0;
    result.mask = largest_component(full, full_area);
    if (full_area == 0) throw NoPaperFound("refined region vanished");
    return result;
}

SegmentationResult segment_paper(const Raster& gray, const SegmenterConfig& cfg) {
    return ClassicalSegmenter(cfg).segment(gray);
}

std::unique_ptr<PaperSegmenter> make_segmenter(const std::string& backend, const SegmenterConfig& cfg) {
    if (backend == "classical") return std::make_unique<ClassicalSegmenter>(cfg);
    throw Error("unknown segmenter backend: " + backend);
}

}  // namespace diytab
