#pragma once

#include <cstdint>
#include <vector>

#include "diytab/components.hpp"
#include "diytab/raster.hpp"

namespace diytab {

struct ThresholdConfig {
    int window = 31;   // odd, >= 3
    int offset_c = 12; // >= 0

    void validate() const;
};

/// Ink where intensity < floor(local mean) - offset_c. The local mean uses
/// a window x window box with replicated borders and is truncated toward zero.
BinaryMask adaptive_threshold(const Raster& gray, const ThresholdConfig& cfg);

/// Odd-sided boolean kernel with its origin at the center cell.
class StructuringElement {
public:
    StructuringElement(int width, int height, std::vector<std::uint8_t> bits);
    static StructuringElement box(int size);

    int width() const { return width_; }
    int height() const { return height_; }
    bool get(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
    int origin_x() const { return width_ / 2; }
    int origin_y() const { return height_ / 2; }
    bool symmetric() const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

// Out-of-bounds pixels count as background for every operator.
BinaryMask erode(const BinaryMask& mask, const StructuringElement& se);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se);
BinaryMask open(const BinaryMask& mask, const StructuringElement& se);
BinaryMask close(const BinaryMask& mask, const StructuringElement& se);

struct ComponentFilterConfig {
    std::int64_t min_area = 8;
    double max_area_fraction = 0.25;
    bool reject_border_blobs = true;
    /// Border-touching components up to this area survive the border rule.
    std::int64_t finger_exemption = 400;

    void validate() const;
};

enum class ComponentVerdict { Keep, Speckle, Palm, BorderBlob };

ComponentVerdict classify_component(const ComponentStats& stats, const ComponentFilterConfig& cfg,
                                    int width, int height);

/// Union of the components whose verdict is Keep.
BinaryMask filter_components(const LabelMap& lm, const ComponentFilterConfig& cfg);

/// Ink -> 0, background -> 255.
Raster render_ink(const BinaryMask& mask);

}  // namespace diytab
