#include "diytab/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "diytab/components.hpp"
#include "diytab/ink.hpp"
#include "diytab/perspective.hpp"

namespace fs = std::filesystem;

namespace diytab {

namespace {

constexpr const char* kStageNames[kStageCount] = {
    "handedness", "grayscale", "segment", "contour", "hull",  "fit_quad", "track",
    "unwarp",     "threshold", "morphology", "label", "filter", "canvas", "render"};

/// CPU time of the calling thread, so stages sharing a core with other
/// pipeline threads are not charged for time they spent preempted.
double thread_ms() {
    timespec ts{};
    clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts);
    return static_cast<double>(ts.tv_sec) * 1e3 + static_cast<double>(ts.tv_nsec) * 1e-6;
}

class StageClock {
public:
    explicit StageClock(StageTimes& times) : times_(times), last_(thread_ms()) {}
    void lap(Stage s) {
        const double now = thread_ms();
        times_[static_cast<std::size_t>(s)] += now - last_;
        last_ = now;
    }

private:
    StageTimes& times_;
    double last_;
};

double percentile95(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    // Nearest-rank.
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(v.size())));
    return v[std::max<std::size_t>(rank, 1) - 1];
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

const char* outcome_name(QuadOutcome o) {
    switch (o) {
        case QuadOutcome::None: return "none";
        case QuadOutcome::Initialized: return "initialized";
        case QuadOutcome::Smoothed: return "smoothed";
        case QuadOutcome::Rejected: return "rejected";
        case QuadOutcome::Missing: return "missing";
        case QuadOutcome::Reacquired: return "reacquired";
    }
    return "?";
}

nlohmann::json quad_json(const OrderedQuad& q) {
    auto pt = [](Point2 p) { return nlohmann::json::array({p.x, p.y}); };
    return {{"tl", pt(q.tl)}, {"tr", pt(q.tr)}, {"br", pt(q.br)}, {"bl", pt(q.bl)}};
}

std::string frame_name(const std::string& prefix, std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%06lld.png", static_cast<long long>(index));
    return prefix + buf;
}

}  // namespace

const char* stage_name(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

void TimingSummary::add(const StageTimes& times) {
    double total = 0.0;
    for (std::size_t i = 0; i < kStageCount; ++i) {
        per_stage_[i].push_back(times[i]);
        total += times[i];
    }
    totals_.push_back(total);
}

double TimingSummary::mean(Stage s) const { return mean_of(per_stage_[static_cast<std::size_t>(s)]); }
double TimingSummary::p95(Stage s) const { return percentile95(per_stage_[static_cast<std::size_t>(s)]); }
double TimingSummary::total_mean() const { return mean_of(totals_); }
double TimingSummary::total_p95() const { return percentile95(totals_); }

void TimingSummary::report(std::ostream& out) const {
    const auto flags = out.flags();
    out << "timing over " << frames() << " frames (ms)\n" << std::fixed << std::setprecision(3);
    for (std::size_t i = 0; i < kStageCount; ++i) {
        const auto s = static_cast<Stage>(i);
        out << std::left << std::setw(11) << stage_name(s) << std::right << " mean=" << mean(s)
            << " p95=" << p95(s) << "\n";
    }
    out << "total mean=" << total_mean() << " p95=" << total_p95() << "\n";
    out.flags(flags);
}

std::string event_to_json(const FrameEvent& e) {
    nlohmann::json j = {{"frame", e.frame}, {"event", e.event}};
    if (!e.detail.empty()) j["detail"] = e.detail;
    return j.dump();
}

Detection detect_paper(const Raster& frame, std::int64_t index, const PipelineConfig& cfg,
                       const PaperSegmenter& segmenter) {
    if (frame.channels() != 1 && frame.channels() != 3)
        throw DimensionMismatch("frames must have 1 or 3 channels");
    Detection d;
    d.index = index;
    StageClock clock(d.times);
    Raster oriented = apply_handedness(frame, cfg.handedness);
    clock.lap(Stage::Handedness);
    d.gray = oriented.channels() == 1 ? std::move(oriented) : to_grayscale(oriented);
    clock.lap(Stage::Grayscale);
    try {
        d.segmentation = segmenter.segment(d.gray);
    } catch (const NoPaperFound& e) {
        d.failure = e.what();
        clock.lap(Stage::Segment);
        return d;
    }
    clock.lap(Stage::Segment);
    const auto contours = trace_contours(d.segmentation->mask);
    if (contours.empty()) {
        d.failure = "segmentation mask is empty";
        return d;
    }
    const Contour& contour = largest_contour(contours);
    clock.lap(Stage::Contour);
    std::vector<Point2> points;
    points.reserve(contour.points.size());
    for (const auto& p : contour.points) points.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
    try {
        d.hull = convex_hull(std::move(points));
        clock.lap(Stage::Hull);
        d.quad = refine_quad(contour, fit_quad(d.hull));
    } catch (const Error& e) {
        d.failure = e.what();
        d.quad.reset();
    }
    clock.lap(Stage::FitQuad);
    return d;
}

Session::Session(PipelineConfig cfg) : Session(cfg, make_segmenter(cfg.segmenter_backend, cfg.segmenter)) {}

Session::Session(PipelineConfig cfg, std::unique_ptr<PaperSegmenter> segmenter)
    : cfg_((cfg.validate(), std::move(cfg))),
      segmenter_(std::move(segmenter)),
      geometry_(cfg_.canvas_geometry()),
      se_(StructuringElement::box(cfg_.se_size)),
      solid_row_(std::max(cfg_.solid_width, 1), 1, std::vector<std::uint8_t>(std::max(cfg_.solid_width, 1), 1)),
      solid_col_(1, std::max(cfg_.solid_width, 1), std::vector<std::uint8_t>(std::max(cfg_.solid_width, 1), 1)),
      canvas_(geometry_.out_width, geometry_.out_height),
      page_change_(cfg_.temporal.page_change) {
    track_.ema_alpha = cfg_.temporal.ema_alpha;
    track_.jump_threshold = cfg_.temporal.jump_threshold;
    track_.reacquire_after = cfg_.temporal.reacquire_after;
    page_change_.reset(canvas_);
}

FrameResult Session::consume(const Detection& d) {
    if (d.index < next_index_) throw Error("frames must be consumed in increasing order");
    next_index_ = d.index + 1;

    FrameResult r;
    r.index = d.index;
    r.times = d.times;
    StageClock clock(r.times);

    if (!d.quad) r.events.push_back({d.index, "detection-lost", d.failure});
    track_ = update_quad(std::move(track_), d.quad);
    r.outcome = track_.last_outcome;
    if (r.outcome == QuadOutcome::Rejected) r.events.push_back({d.index, "quad-rejected", ""});
    if (r.outcome == QuadOutcome::Reacquired) r.events.push_back({d.index, "quad-reacquired", ""});
    r.quad = track_.current;
    clock.lap(Stage::Track);

    const int w = geometry_.out_width;
    const int h = geometry_.out_height;
    BinaryMask frame_ink(w, h);
    if (track_.current) {
        Intermediates im;
        im.unwarped = unwarp(d.gray, *track_.current, geometry_);
        clock.lap(Stage::Unwarp);
        im.thresholded = adaptive_threshold(im.unwarped, cfg_.threshold);
        clock.lap(Stage::Threshold);
        im.cleaned = close(open(im.thresholded, se_), se_);
        im.solid = BinaryMask(w, h);
        if (cfg_.solid_width > 0 && d.segmentation) {
            // A uniform hand is hollow after adaptive thresholding; its dark
            // interior, far wider than a pen stroke, survives this opening.
            const double level = d.segmentation->threshold;
            BinaryMask dark(w, h);
            const auto& px = im.unwarped.data();
            for (std::size_t i = 0; i < px.size(); ++i) dark.bits()[i] = px[i] < level;
            dark = dilate(dilate(erode(erode(dark, solid_row_), solid_col_), solid_row_), solid_col_);
            im.solid = dark;
        }
        clock.lap(Stage::Morphology);
        const LabelMap lm = label_components(mask_union(im.cleaned, im.solid), cfg_.ink_connectivity);
        clock.lap(Stage::Label);
        frame_ink = filter_components(lm, cfg_.filter);
        im.occlusion = occlusion_mask(lm, cfg_.filter, cfg_.occlusion_margin);
        im.rejected = BinaryMask(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const int label = lm.at(x, y);
                if (label == 0) continue;
                const auto v = classify_component(lm.stats[label - 1], cfg_.filter, w, h);
                if (v == ComponentVerdict::Palm || v == ComponentVerdict::BorderBlob) im.rejected.set(x, y);
            }
        clock.lap(Stage::Filter);

        if (page_change_.observe(canvas_, frame_ink, im.occlusion)) {
            r.events.push_back({d.index, "page-break", ""});
            const auto last = canvas_.frame_index;
            canvas_ = InkCanvas(w, h);
            canvas_.frame_index = last;
            canvas_ = update_canvas(std::move(canvas_), frame_ink, im.occlusion, d.index);
            page_change_.reset(canvas_);
        } else {
            canvas_ = update_canvas(std::move(canvas_), frame_ink, im.occlusion, d.index);
        }
        clock.lap(Stage::Canvas);
        r.intermediates = std::move(im);
    }

    r.canvas = render_ink(canvas_.ink);
    r.frame_ink = render_ink(frame_ink);
    clock.lap(Stage::Render);
    timing_.add(r.times);
    return r;
}

FrameResult Session::process_frame(const Raster& frame) {
    return consume(detect_paper(frame, next_index_, cfg_, *segmenter_));
}

namespace {

long long numeric_key(const fs::path& p) {
    const std::string stem = p.stem().string();
    std::string digits;
    for (auto it = stem.rbegin(); it != stem.rend() && std::isdigit(static_cast<unsigned char>(*it)); ++it)
        digits.insert(digits.begin(), *it);
    if (digits.empty()) return -1;
    try {
        return std::stoll(digits);
    } catch (const std::exception&) {
        return -1;
    }
}

class PngDirectorySource final : public FrameSource {
public:
    explicit PngDirectorySource(const fs::path& dir) {
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir, ec)) {
            auto ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
            if (entry.is_regular_file() && ext == ".png") files_.push_back(entry.path());
        }
        if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
        if (files_.empty()) throw IoError("no PNG frames in " + dir.string());
        std::sort(files_.begin(), files_.end(), [](const fs::path& a, const fs::path& b) {
            const auto ka = numeric_key(a), kb = numeric_key(b);
            if (ka != kb) return ka < kb;
            return a.filename() < b.filename();
        });
    }
    explicit PngDirectorySource(std::vector<fs::path> files) : files_(std::move(files)) {}

    std::optional<Raster> next() override {
        if (pos_ >= files_.size()) return std::nullopt;
        return read_png(files_[pos_++].string());
    }

private:
    std::vector<fs::path> files_;
    std::size_t pos_ = 0;
};

class Y4mSource final : public FrameSource {
public:
    explicit Y4mSource(const std::string& path) : reader_(path) {}
    std::optional<Raster> next() override { return reader_.next(); }

private:
    Y4mReader reader_;
};

class PngSink final : public FrameSink {
public:
    PngSink(fs::path dir, std::string prefix) : dir_(std::move(dir)), prefix_(std::move(prefix)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    }
    void write(const Raster& gray, std::int64_t index) override {
        write_png((dir_ / frame_name(prefix_, index)).string(), gray);
    }

private:
    fs::path dir_;
    std::string prefix_;
};

class Y4mSink final : public FrameSink {
public:
    Y4mSink(const std::string& path, int w, int h) : writer_(path, w, h) {}
    void write(const Raster& gray, std::int64_t) override { writer_.write(gray); }
    void close() override { writer_.close(); }

private:
    Y4mWriter writer_;
};

bool is_y4m(const std::string& path) {
    auto ext = fs::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".y4m";
}

}  // namespace

std::unique_ptr<FrameSource> open_source(const std::string& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) return std::make_unique<PngDirectorySource>(fs::path(path));
    if (!fs::exists(path, ec)) throw IoError("input not found: " + path);
    if (is_y4m(path)) return std::make_unique<Y4mSource>(path);
    return std::make_unique<PngDirectorySource>(std::vector<fs::path>{path});
}

std::unique_ptr<FrameSink> make_png_sink(const std::string& dir, const std::string& prefix) {
    return std::make_unique<PngSink>(dir, prefix);
}

std::unique_ptr<FrameSink> make_y4m_sink(const std::string& path, int width, int height) {
    return std::make_unique<Y4mSink>(path, width, height);
}

void write_diagnostics(const std::string& dir, const Detection& d, const FrameResult& r, const QuadTrack& track) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06lld", static_cast<long long>(d.index));
    const fs::path out = fs::path(dir) / name;
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());

    write_png((out / "00_gray.png").string(), d.gray);
    if (d.segmentation) write_png((out / "01_paper_mask.png").string(), render_ink(mask_complement(d.segmentation->mask)));
    if (r.intermediates) {
        const auto& im = *r.intermediates;
        write_png((out / "02_unwarped.png").string(), im.unwarped);
        write_png((out / "03_threshold.png").string(), render_ink(im.thresholded));
        write_png((out / "04_morphology.png").string(), render_ink(im.cleaned));
        write_png((out / "04b_solid.png").string(), render_ink(im.solid));
        write_png((out / "05_rejected.png").string(), render_ink(im.rejected));
        write_png((out / "06_occlusion.png").string(), render_ink(im.occlusion));
    }
    write_png((out / "07_frame_ink.png").string(), r.frame_ink);
    write_png((out / "08_canvas.png").string(), r.canvas);

    nlohmann::json j;
    j["frame"] = d.index;
    j["detected"] = d.quad ? quad_json(*d.quad) : nlohmann::json(nullptr);
    if (!d.failure.empty()) j["failure"] = d.failure;
    if (d.segmentation) {
        j["segmentation"] = {{"confidence", d.segmentation->confidence}, {"threshold", d.segmentation->threshold}};
    }
    auto hull = nlohmann::json::array();
    for (const auto& p : d.hull) hull.push_back({p.x, p.y});
    j["hull"] = hull;
    j["smoothed"] = r.quad ? quad_json(*r.quad) : nlohmann::json(nullptr);
    j["outcome"] = outcome_name(r.outcome);
    j["last_good_age"] = track.last_good_age;
    j["canvas"] = {{"width", r.canvas.width()}, {"height", r.canvas.height()}};
    auto events = nlohmann::json::array();
    for (const auto& e : r.events) events.push_back(e.event);
    j["events"] = events;
    std::ofstream f(out / "quad.json");
    f << j.dump(2) << "\n";
    if (!f) throw IoError("cannot write " + (out / "quad.json").string());
}

RunReport run_pipeline(const PipelineConfig& cfg, const RunOptions& options) {
    Session session(cfg);
    const auto geometry = cfg.canvas_geometry();
    auto source = open_source(options.input);

    // Sinks and event file.
    std::unique_ptr<FrameSink> canvas_sink, frame_sink;
    std::string events_path = options.events;
    const bool want_canvas = cfg.output.mode != OutputMode::PerFrame;
    const bool want_frames = cfg.output.mode != OutputMode::Canvas;
    if (cfg.output.format == OutputFormat::ImageSequence) {
        if (want_canvas) canvas_sink = make_png_sink(options.output, "canvas");
        if (want_frames) frame_sink = make_png_sink(options.output, "frame");
        if (events_path.empty()) events_path = (fs::path(options.output) / "events.jsonl").string();
    } else {
        const fs::path out(options.output);
        if (out.has_parent_path()) fs::create_directories(out.parent_path());
        const fs::path stem = out.parent_path() / out.stem();
        if (want_canvas) canvas_sink = make_y4m_sink(out.string(), geometry.out_width, geometry.out_height);
        if (want_frames)
            frame_sink = make_y4m_sink(want_canvas ? stem.string() + "_frames.y4m" : out.string(), geometry.out_width,
                                       geometry.out_height);
        if (events_path.empty()) events_path = stem.string() + "_events.jsonl";
    }
    std::ofstream events(events_path);
    if (!events) throw IoError("cannot open " + events_path + " for writing");

    // Bounded pipeline state.
    // Auto: one core for the consumer, the rest detect; on a single core the
    // consumer detects inline.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : hw - 1;
    const std::size_t capacity = 2 * static_cast<std::size_t>(workers) + 2;
    std::mutex mu;
    std::condition_variable cv;
    std::map<std::int64_t, Raster> pending;      // read, awaiting detection
    std::map<std::int64_t, Detection> detected;  // awaiting the consumer
    std::int64_t read_count = 0;
    std::int64_t consumed = 0;
    bool input_done = false;
    bool abort = false;
    std::exception_ptr failure;

    auto fail = [&](std::exception_ptr e) {
        std::lock_guard lock(mu);
        if (!failure) failure = e;
        abort = true;
        cv.notify_all();
    };

    std::thread reader([&] {
        try {
            for (;;) {
                {
                    std::unique_lock lock(mu);
                    cv.wait(lock, [&] { return abort || read_count - consumed < static_cast<std::int64_t>(capacity); });
                    if (abort) return;
                }
                auto frame = source->next();
                std::lock_guard lock(mu);
                if (!frame) {
                    input_done = true;
                    cv.notify_all();
                    return;
                }
                pending.emplace(read_count++, std::move(*frame));
                cv.notify_all();
            }
        } catch (...) {
            fail(std::current_exception());
        }
    });

    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    std::int64_t index;
                    Raster frame;
                    {
                        std::unique_lock lock(mu);
                        cv.wait(lock, [&] { return abort || !pending.empty() || input_done; });
                        if (abort) return;
                        if (pending.empty()) return;  // input_done
                        auto it = pending.begin();
                        index = it->first;
                        frame = std::move(it->second);
                        pending.erase(it);
                    }
                    Detection d = detect_paper(frame, index, session.config(), session.segmenter());
                    std::lock_guard lock(mu);
                    detected.emplace(index, std::move(d));
                    cv.notify_all();
                }
            } catch (...) {
                fail(std::current_exception());
            }
        });
    }

    RunReport report;
    try {
        for (;;) {
            Detection d;
            {
                std::unique_lock lock(mu);
                if (workers == 0) {
                    cv.wait(lock, [&] { return abort || pending.count(consumed) || (input_done && consumed == read_count); });
                    if (abort) break;
                    auto it = pending.find(consumed);
                    if (it == pending.end()) break;  // all frames done
                    Raster frame = std::move(it->second);
                    pending.erase(it);
                    lock.unlock();
                    d = detect_paper(frame, consumed, session.config(), session.segmenter());
                } else {
                    cv.wait(lock, [&] {
                        return abort || detected.count(consumed) || (input_done && consumed == read_count);
                    });
                    if (abort) break;
                    auto it = detected.find(consumed);
                    if (it == detected.end()) break;  // all frames done
                    d = std::move(it->second);
                    detected.erase(it);
                }
            }
            FrameResult r = session.consume(d);
            if (!options.diagnostics.empty()) write_diagnostics(options.diagnostics, d, r, session.track());
            if (canvas_sink) canvas_sink->write(r.canvas, r.index);
            if (frame_sink) frame_sink->write(r.frame_ink, r.index);
            for (const auto& e : r.events) {
                events << event_to_json(e) << "\n";
                report.events.push_back(e);
            }
            if (options.on_frame) options.on_frame(want_canvas ? r.canvas : r.frame_ink);
            std::lock_guard lock(mu);
            ++consumed;
            cv.notify_all();
        }
    } catch (...) {
        fail(std::current_exception());
    }
    {
        std::lock_guard lock(mu);
        abort = true;
        cv.notify_all();
    }
    reader.join();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    if (canvas_sink) canvas_sink->close();
    if (frame_sink) frame_sink->close();
    events.flush();
    if (!events) throw IoError("cannot write " + events_path);
    report.frames = consumed;
    report.timing = session.timing();
    return report;
}

}  // namespace diytab
