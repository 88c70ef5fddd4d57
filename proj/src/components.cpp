#include "diytab/components.hpp"

#include <algorithm>
#include <numeric>

namespace diytab {

namespace {

class DisjointSet {
public:
    std::int32_t make() {
        parent_.push_back(static_cast<std::int32_t>(parent_.size()));
        return parent_.back();
    }

    std::int32_t find(std::int32_t v) {
        while (parent_[v] != v) {
            parent_[v] = parent_[parent_[v]];
            v = parent_[v];
        }
        return v;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Smaller root wins so the representative is the earliest provisional label.
        if (a < b)
            parent_[b] = a;
        else
            parent_[a] = b;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::int32_t> parent_;
};

}  // namespace

BinaryMask LabelMap::component_mask(std::int32_t label) const {
    BinaryMask out(width, height);
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) out.bits()[i] = 1;
    return out;
}

LabelMap label_components(const BinaryMask& mask, Connectivity connectivity) {
    const int w = mask.width();
    const int h = mask.height();
    LabelMap lm;
    lm.width = w;
    lm.height = h;
    lm.labels.assign(static_cast<std::size_t>(w) * h, 0);
    if (w == 0 || h == 0) return lm;

    // Provisional labels are 1-based; slot 0 of the set is unused.
    DisjointSet sets;
    sets.make();
    const bool eight = connectivity == Connectivity::Eight;
    const auto& bits = mask.bits();
    auto& labels = lm.labels;

    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            if (!bits[row + x]) continue;
            std::int32_t found = 0;
            auto visit = [&](std::int32_t other) {
                if (other == 0) return;
                if (found == 0)
                    found = other;
                else
                    sets.unite(found, other);
            };
            if (x > 0) visit(labels[row + x - 1]);
            if (y > 0) {
                const std::size_t up = row - w;
                visit(labels[up + x]);
                if (eight) {
                    if (x > 0) visit(labels[up + x - 1]);
                    if (x + 1 < w) visit(labels[up + x + 1]);
                }
            }
            labels[row + x] = found != 0 ? found : sets.make();
        }
    }

    // Final labels follow first encounter of each root in scan order.
    std::vector<std::int32_t> final_label(sets.size(), 0);
    std::int32_t next = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto& l = labels[static_cast<std::size_t>(y) * w + x];
            if (l == 0) continue;
            const std::int32_t root = sets.find(l);
            if (final_label[root] == 0) {
                final_label[root] = ++next;
                lm.stats.push_back({0, {x, y, x, y}, false});
            }
            l = final_label[root];
            auto& s = lm.stats[l - 1];
            ++s.area;
            s.bbox.x0 = std::min(s.bbox.x0, x);
            s.bbox.y0 = std::min(s.bbox.y0, y);
            s.bbox.x1 = std::max(s.bbox.x1, x);
            s.bbox.y1 = std::max(s.bbox.y1, y);
            if (x == 0 || y == 0 || x == w - 1 || y == h - 1) s.border_contact = true;
        }
    }
    return lm;
}

}  // namespace diytab
