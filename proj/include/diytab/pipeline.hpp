#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "diytab/config.hpp"
#include "diytab/image_io.hpp"
#include "diytab/quad.hpp"
#include "diytab/segmenter.hpp"
#include "diytab/temporal.hpp"

namespace diytab {

enum class Stage {
    Handedness,
    Grayscale,
    Segment,
    Contour,
    Hull,
    FitQuad,
    Track,
    Unwarp,
    Threshold,
    Morphology,
    Label,
    Filter,
    Canvas,
    Render,
};
inline constexpr std::size_t kStageCount = 14;
const char* stage_name(Stage s);

using StageTimes = std::array<double, kStageCount>;  // milliseconds

/// Per-stage latency statistics over a session.
class TimingSummary {
public:
    void add(const StageTimes& times);
    std::size_t frames() const { return totals_.size(); }
    double mean(Stage s) const;
    double p95(Stage s) const;
    double total_mean() const;
    double total_p95() const;
    /// Human-readable table; the final line reads `total mean=<ms> p95=<ms>`.
    void report(std::ostream& out) const;

private:
    std::array<std::vector<double>, kStageCount> per_stage_;
    std::vector<double> totals_;
};

struct FrameEvent {
    std::int64_t frame = 0;
    std::string event;  // detection-lost | quad-rejected | quad-reacquired | page-break
    std::string detail;
};

/// `{"frame":N,"event":"..."}` plus `detail` when non-empty.
std::string event_to_json(const FrameEvent& e);

/// Output of the stateless per-frame prefix, up to the detected quad.
struct Detection {
    std::int64_t index = 0;
    Raster gray;  // after the handedness flip
    std::optional<SegmentationResult> segmentation;
    std::vector<Point2> hull;
    std::optional<OrderedQuad> quad;
    std::string failure;  // why `quad` is empty
    StageTimes times{};
};

Detection detect_paper(const Raster& frame, std::int64_t index, const PipelineConfig& cfg,
                       const PaperSegmenter& segmenter);

/// Everything the sequential stages computed, kept for diagnostics.
struct Intermediates {
    Raster unwarped;
    BinaryMask thresholded;
    BinaryMask cleaned;
    BinaryMask solid;  // wide sub-paper-level regions merged before labeling
    BinaryMask occlusion;
    BinaryMask rejected;  // palm/border-blob component pixels
};

struct FrameResult {
    std::int64_t index = 0;
    Raster canvas;     // rendered accumulated canvas
    Raster frame_ink;  // rendered ink of this frame alone
    std::vector<FrameEvent> events;
    QuadOutcome outcome = QuadOutcome::None;
    std::optional<OrderedQuad> quad;  // smoothed quad used for unwarping
    std::optional<Intermediates> intermediates;  // present after a successful unwarp
    StageTimes times{};
};

/// Single-writer temporal state: quad track, canvas, page-change detector.
class Session {
public:
    explicit Session(PipelineConfig cfg);
    /// Uses `segmenter` instead of the configured backend.
    Session(PipelineConfig cfg, std::unique_ptr<PaperSegmenter> segmenter);

    const PipelineConfig& config() const { return cfg_; }
    const PaperSegmenter& segmenter() const { return *segmenter_; }
    const InkCanvas& canvas() const { return canvas_; }
    const QuadTrack& track() const { return track_; }
    const TimingSummary& timing() const { return timing_; }

    /// Frames must arrive in strictly increasing index order.
    FrameResult consume(const Detection& detection);
    /// detect_paper + consume. Throws only on malformed input rasters.
    FrameResult process_frame(const Raster& frame);

private:
    PipelineConfig cfg_;
    std::unique_ptr<PaperSegmenter> segmenter_;
    TargetGeometry geometry_;
    StructuringElement se_;
    StructuringElement solid_row_, solid_col_;  // separable box for solid regions
    QuadTrack track_;
    InkCanvas canvas_;
    PageChangeDetector page_change_;
    TimingSummary timing_;
    std::int64_t next_index_ = 0;
};

class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::optional<Raster> next() = 0;
};

/// A directory of PNG frames (ordered by the number in each file name),
/// a single PNG, or a Y4M stream.
std::unique_ptr<FrameSource> open_source(const std::string& path);

class FrameSink {
public:
    virtual ~FrameSink() = default;
    virtual void write(const Raster& gray, std::int64_t index) = 0;
    virtual void close() {}
};

/// `<dir>/<prefix>_NNNNNN.png`; creates the directory.
std::unique_ptr<FrameSink> make_png_sink(const std::string& dir, const std::string& prefix);
std::unique_ptr<FrameSink> make_y4m_sink(const std::string& path, int width, int height);

/// Writes `<dir>/frame_NNNNNN/` with one PNG per stage plus `quad.json`.
void write_diagnostics(const std::string& dir, const Detection& detection, const FrameResult& result,
                       const QuadTrack& track);

struct RunOptions {
    std::string input;
    std::string output;
    std::string events;       // empty = `<output>/events.jsonl` or beside the Y4M
    std::string diagnostics;  // empty = off
    /// Receives each rendered output frame (e.g. the preview server).
    std::function<void(const Raster&)> on_frame;
};

struct RunReport {
    std::int64_t frames = 0;
    std::vector<FrameEvent> events;
    TimingSummary timing;
};

/// Streams the input through a bounded pipeline: a reader, N detection
/// workers, and the in-order temporal consumer. Throws IoError on I/O failure.
RunReport run_pipeline(const PipelineConfig& cfg, const RunOptions& options);

}  // namespace diytab
