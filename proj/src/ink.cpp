#include "diytab/ink.hpp"

#include <algorithm>

namespace diytab {

void ThresholdConfig::validate() const {
    if (window < 3 || window % 2 == 0) throw Error("threshold window must be odd and >= 3");
    if (offset_c < 0) throw Error("threshold offset_c must be >= 0");
}

BinaryMask adaptive_threshold(const Raster& gray, const ThresholdConfig& cfg) {
    cfg.validate();
    if (gray.channels() != 1) throw Error("adaptive_threshold expects a single-channel raster");
    const int w = gray.width();
    const int h = gray.height();
    if (cfg.window > std::min(w, h)) throw Error("threshold window larger than image");
    const int r = cfg.window / 2;
    const std::int64_t area = static_cast<std::int64_t>(cfg.window) * cfg.window;

    // Horizontal box sums with replicated borders, via a padded prefix sum.
    std::vector<std::int32_t> hsum(static_cast<std::size_t>(w) * h);
    std::vector<std::int32_t> prefix(static_cast<std::size_t>(w) + 2 * r + 1);
    for (int y = 0; y < h; ++y) {
        auto src = gray.row(y);
        prefix[0] = 0;
        for (int i = 0; i < w + 2 * r; ++i) prefix[i + 1] = prefix[i] + src[std::clamp(i - r, 0, w - 1)];
        for (int x = 0; x < w; ++x) hsum[static_cast<std::size_t>(y) * w + x] = prefix[x + cfg.window] - prefix[x];
    }

    // Vertical running sum over the replicated rows.
    std::vector<std::int32_t> col(w, 0);
    for (int k = -r; k <= r; ++k) {
        const int yy = std::clamp(k, 0, h - 1);
        for (int x = 0; x < w; ++x) col[x] += hsum[static_cast<std::size_t>(yy) * w + x];
    }
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        auto src = gray.row(y);
        for (int x = 0; x < w; ++x) {
            const auto mean = static_cast<std::int32_t>(col[x] / area);
            if (static_cast<std::int32_t>(src[x]) < mean - cfg.offset_c) out.set(x, y);
        }
        if (y + 1 < h) {
            const int drop = std::clamp(y - r, 0, h - 1);
            const int add = std::clamp(y + 1 + r, 0, h - 1);
            for (int x = 0; x < w; ++x)
                col[x] += hsum[static_cast<std::size_t>(add) * w + x] - hsum[static_cast<std::size_t>(drop) * w + x];
        }
    }
    return out;
}

StructuringElement::StructuringElement(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0)
        throw Error("structuring element sides must be odd and positive");
    if (bits_.size() != static_cast<std::size_t>(width) * height)
        throw DimensionMismatch("structuring element bit count mismatch");
    if (std::none_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; }))
        throw Error("empty structuring element");
}

StructuringElement StructuringElement::box(int size) {
    return StructuringElement(size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

bool StructuringElement::symmetric() const {
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x)
            if (get(x, y) != get(width_ - 1 - x, height_ - 1 - y)) return false;
    return true;
}

namespace {

/// AND (erode) or OR (dilate) of the mask shifted by each kernel offset.
BinaryMask shift_combine(const BinaryMask& mask, const StructuringElement& se, bool erosion) {
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask out(w, h, erosion);
    const auto& in = mask.bits();
    auto& dst = out.bits();
    for (int sy = 0; sy < se.height(); ++sy) {
        for (int sx = 0; sx < se.width(); ++sx) {
            if (!se.get(sx, sy)) continue;
            // Erosion reads m(p + d); dilation reads m(p - d).
            int dx = sx - se.origin_x();
            int dy = sy - se.origin_y();
            if (!erosion) {
                dx = -dx;
                dy = -dy;
            }
            for (int y = 0; y < h; ++y) {
                const int yy = y + dy;
                auto* row = dst.data() + static_cast<std::size_t>(y) * w;
                if (yy < 0 || yy >= h) {
                    if (erosion) std::fill(row, row + w, 0);
                    continue;
                }
                const auto* src = in.data() + static_cast<std::size_t>(yy) * w;
                const int x_lo = std::min(w, std::max(0, -dx));
                const int x_hi = std::max(x_lo, std::min(w, w - dx));
                if (erosion) {
                    for (int x = 0; x < x_lo; ++x) row[x] = 0;
                    for (int x = x_hi; x < w; ++x) row[x] = 0;
                    for (int x = x_lo; x < x_hi; ++x) row[x] &= src[x + dx];
                } else {
                    for (int x = x_lo; x < x_hi; ++x) row[x] |= src[x + dx];
                }
            }
        }
    }
    return out;
}

}  // namespace

BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) { return shift_combine(mask, se, true); }
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) { return shift_combine(mask, se, false); }
BinaryMask open(const BinaryMask& mask, const StructuringElement& se) { return dilate(erode(mask, se), se); }
BinaryMask close(const BinaryMask& mask, const StructuringElement& se) { return erode(dilate(mask, se), se); }

void ComponentFilterConfig::validate() const {
    if (min_area < 1) throw Error("filter min_area must be >= 1");
    if (!(max_area_fraction > 0.0 && max_area_fraction <= 1.0))
        throw Error("filter max_area_fraction must be in (0, 1]");
    if (finger_exemption < 0) throw Error("filter finger_exemption must be >= 0");
}

ComponentVerdict classify_component(const ComponentStats& s, const ComponentFilterConfig& cfg, int width,
                                    int height) {
    if (s.area < cfg.min_area) return ComponentVerdict::Speckle;
    if (static_cast<double>(s.area) > cfg.max_area_fraction * static_cast<double>(width) * height)
        return ComponentVerdict::Palm;
    if (cfg.reject_border_blobs && s.border_contact && s.area > cfg.finger_exemption)
        return ComponentVerdict::BorderBlob;
    return ComponentVerdict::Keep;
}

BinaryMask filter_components(const LabelMap& lm, const ComponentFilterConfig& cfg) {
    cfg.validate();
    std::vector<std::uint8_t> keep(lm.count() + 1, 0);
    for (std::size_t k = 0; k < lm.count(); ++k)
        keep[k + 1] = classify_component(lm.stats[k], cfg, lm.width, lm.height) == ComponentVerdict::Keep;
    BinaryMask out(lm.width, lm.height);
    for (std::size_t i = 0; i < lm.labels.size(); ++i) out.bits()[i] = keep[lm.labels[i]];
    return out;
}

Raster render_ink(const BinaryMask& mask) {
    Raster out(std::max(mask.width(), 1), std::max(mask.height(), 1), 1, 255);
    for (std::size_t i = 0; i < mask.bits().size(); ++i)
        if (mask.bits()[i]) out.data()[i] = 0;
    return out;
}

}  // namespace diytab
