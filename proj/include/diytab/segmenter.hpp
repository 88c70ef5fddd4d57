#pragma once

#include <memory>
#include <string>

#include "diytab/raster.hpp"

namespace diytab {

class NoPaperFound : public Error {
public:
    using Error::Error;
};

struct SegmenterConfig {
    int downscale_factor = 4;
    double min_region_fraction = 0.08;
    double brightness_percentile = 90.0;

    void validate() const;
};

struct SegmentationResult {
    BinaryMask mask;          // full frame resolution
    double confidence = 0.0;  // region area / convex hull area
    double threshold = 0.0;   // global intensity threshold that was used
};

enum class Handedness { Right, Left };

/// Left-handed frames are mirrored so the writing hand enters from the
/// same side as for a right-handed user.
Raster apply_handedness(const Raster& frame, Handedness handedness);

/// Pluggable paper-region segmenter.
class PaperSegmenter {
public:
    virtual ~PaperSegmenter() = default;
    /// Throws NoPaperFound when no region passes the area gate.
    virtual SegmentationResult segment(const Raster& gray) const = 0;
};

/// Percentile-seeded iterative global threshold on a box-downscaled frame,
/// largest 4-connected bright region with holes filled, then the boundary
/// is re-thresholded at full resolution.
class ClassicalSegmenter final : public PaperSegmenter {
public:
    explicit ClassicalSegmenter(SegmenterConfig cfg);
    SegmentationResult segment(const Raster& gray) const override;
    const SegmenterConfig& config() const { return cfg_; }

private:
    SegmenterConfig cfg_;
};

SegmentationResult segment_paper(const Raster& gray, const SegmenterConfig& cfg);

/// Backend by config name; only "classical" ships.
std::unique_ptr<PaperSegmenter> make_segmenter(const std::string& backend, const SegmenterConfig& cfg);

}  // namespace diytab
