#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace diytab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class OutOfBounds : public Error {
public:
    using Error::Error;
};

/// Continuous image coordinate. Pixel (x, y) has its center at (x, y);
/// origin top-left, y grows downward.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }

double distance(Point2 a, Point2 b);
/// z-component of (b - a) x (c - a).
double cross(Point2 a, Point2 b, Point2 c);

/// Row-major 8-bit image with 1 (gray) or 3 (RGB) interleaved channels.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, int channels = 1, std::uint8_t fill = 0);
    Raster(int width, int height, int channels, std::vector<std::uint8_t> data);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }
    bool empty() const { return data_.empty(); }

    std::uint8_t at(int x, int y, int c = 0) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t& at(int x, int y, int c = 0) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<const std::uint8_t> row(int y) const {
        return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
                static_cast<std::size_t>(width_) * channels_};
    }
    std::span<std::uint8_t> row(int y) {
        return {data_.data() + static_cast<std::size_t>(y) * width_ * channels_,
                static_cast<std::size_t>(width_) * channels_};
    }

    const std::vector<std::uint8_t>& data() const { return data_; }
    std::vector<std::uint8_t>& data() { return data_; }

    friend bool operator==(const Raster&, const Raster&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    int channels_ = 1;
    std::vector<std::uint8_t> data_;
};

/// Per-pixel foreground flag (0 or 1), row-major.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return bits_.empty(); }

    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v = true) {
        bits_[static_cast<std::size_t>(y) * width_ + x] = v ? 1 : 0;
    }
    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }
    /// Out-of-bounds reads as background.
    bool get_or_zero(int x, int y) const { return contains(x, y) && get(x, y); }

    std::size_t count() const;
    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::vector<std::uint8_t>& bits() { return bits_; }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

BinaryMask mask_complement(const BinaryMask& m);
BinaryMask mask_union(const BinaryMask& a, const BinaryMask& b);
BinaryMask mask_intersection(const BinaryMask& a, const BinaryMask& b);
bool mask_subset(const BinaryMask& a, const BinaryMask& b);

/// BT.601 luma, round half-up, computed in integer arithmetic.
Raster to_grayscale(const Raster& frame);

Raster flip_horizontal(const Raster& frame);
BinaryMask flip_horizontal(const BinaryMask& mask);

/// Bilinear interpolation on a single-channel raster. Returns the
/// unrounded blend; throws OutOfBounds outside [0,w-1]x[0,h-1].
double sample_bilinear(const Raster& frame, Point2 p);

/// Round half-up and clamp to [0,255].
std::uint8_t round_intensity(double v);

}  // namespace diytab
