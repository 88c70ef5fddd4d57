#include "diytab/raster.hpp"

#include <algorithm>
#include <cmath>

namespace diytab {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double cross(Point2 a, Point2 b, Point2 c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

Raster::Raster(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1) throw Error("raster dimensions must be positive");
    if (channels != 1 && channels != 3) throw Error("raster must have 1 or 3 channels");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Raster::Raster(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
    if (width < 1 || height < 1) throw Error("raster dimensions must be positive");
    if (channels != 1 && channels != 3) throw Error("raster must have 1 or 3 channels");
    if (data_.size() != static_cast<std::size_t>(width) * height * channels)
        throw DimensionMismatch("raster data length does not match width*height*channels");
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("mask dimensions must be non-negative");
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

namespace {

void require_same_dims(const BinaryMask& a, const BinaryMask& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw DimensionMismatch("mask dimensions differ");
}

}  // namespace

BinaryMask mask_complement(const BinaryMask& m) {
    BinaryMask out = m;
    for (auto& b : out.bits()) b = b ? 0 : 1;
    return out;
}

BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b) {
    require_same_dims(a, b);
    BinaryMask out = a;
    for (std::size_t i = 0; i < out.bits().size(); ++i) out.bits()[i] |= b.bits()[i];
    return out;
}

BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b) {
    require_same_dims(a, b);
    BinaryMask out = a;
    for (std::size_t i = 0; i < out.bits().size(); ++i) out.bits()[i] &= b.bits()[i];
    return out;
}

bool mask_subset(const BinaryMask& a, const BinaryMask& b) {
    require_same_dims(a, b);
    for (std::size_t i = 0; i < a.bits().size(); ++i)
        if (a.bits()[i] && !b.bits()[i]) return false;
    return true;
}

Raster to_grayscale(const Raster& frame) {
    if (frame.channels() != 3) throw Error("to_grayscale expects a 3-channel raster");
    Raster out(frame.width(), frame.height(), 1);
    const auto& src = frame.data();
    auto& dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const int r = src[3 * i], g = src[3 * i + 1], b = src[3 * i + 2];
        // 0.299/0.587/0.114 scaled by 1000, +500 for round half-up.
        dst[i] = static_cast<std::uint8_t>(std::min(255, (299 * r + 587 * g + 114 * b + 500) / 1000));
    }
    return out;
}

Raster flip_horizontal(const Raster& frame) {
    Raster out = frame;
    const int c = frame.channels();
    for (int y = 0; y < frame.height(); ++y) {
        auto src = frame.row(y);
        auto dst = out.row(y);
        for (int x = 0; x < frame.width(); ++x) {
            const int mx = frame.width() - 1 - x;
            for (int k = 0; k < c; ++k) dst[x * c + k] = src[mx * c + k];
        }
    }
    return out;
}

BinaryMask flip_horizontal(const BinaryMask& mask) {
    BinaryMask out(mask.width(), mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) out.set(x, y, mask.get(mask.width() - 1 - x, y));
    return out;
}

double sample_bilinear(const Raster& frame, Point2 p) {
    if (frame.channels() != 1) throw Error("sample_bilinear expects a single-channel raster");
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 ||
        p.x > frame.width() - 1 || p.y > frame.height() - 1)
        throw OutOfBounds("sample point outside raster");
    const int x0 = std::min(static_cast<int>(p.x), frame.width() - 1);
    const int y0 = std::min(static_cast<int>(p.y), frame.height() - 1);
    const int x1 = std::min(x0 + 1, frame.width() - 1);
    const int y1 = std::min(y0 + 1, frame.height() - 1);
    const double fx = p.x - x0;
    const double fy = p.y - y0;
    const double top = frame.at(x0, y0) * (1.0 - fx) + frame.at(x1, y0) * fx;
    const double bottom = frame.at(x0, y1) * (1.0 - fx) + frame.at(x1, y1) * fx;
    return top * (1.0 - fy) + bottom * fy;
}

std::uint8_t round_intensity(double v) {
    const double r = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

}  // namespace diytab
