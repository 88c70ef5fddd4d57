#pragma once

#include <cstdint>
#include <vector>

#include "diytab/raster.hpp"

namespace diytab {

enum class Connectivity { Four = 4, Eight = 8 };

struct BoundingBox {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // inclusive

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ComponentStats {
    std::int64_t area = 0;
    BoundingBox bbox;
    bool border_contact = false;

    friend bool operator==(const ComponentStats&, const ComponentStats&) = default;
};

/// Labels 1..N in first-encounter raster order, 0 = background.
/// stats[k] describes label k + 1.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::int32_t> labels;
    std::vector<ComponentStats> stats;

    std::int32_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const { return stats.size(); }
    BinaryMask component_mask(std::int32_t label) const;
};

/// Two-pass union-find labeling.
LabelMap label_components(const BinaryMask& mask, Connectivity connectivity);

}  // namespace diytab
