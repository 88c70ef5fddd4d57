#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diytab/components.hpp"
#include "diytab/ink.hpp"
#include "diytab/perspective.hpp"
#include "diytab/segmenter.hpp"
#include "diytab/temporal.hpp"

namespace diytab {

/// Malformed configuration; `key_path()` names the offending key
/// (`section.key`), empty for syntax errors.
class ConfigError : public Error {
public:
    ConfigError(std::string key_path, const std::string& message);
    const std::string& key_path() const { return key_path_; }

private:
    std::string key_path_;
};

/// Flat `section.key -> value` view of an INI-style file. Keys before the
/// first section header have no section prefix.
class KeyValueFile {
public:
    static KeyValueFile parse(std::istream& in, const std::string& source = "<config>");
    static KeyValueFile load(const std::string& path);

    const std::map<std::string, std::string>& entries() const { return entries_; }
    std::optional<std::string> get(const std::string& key) const;
    void set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

private:
    std::map<std::string, std::string> entries_;
};

long long parse_int(const std::string& key, const std::string& text);
double parse_double(const std::string& key, const std::string& text);
bool parse_bool(const std::string& key, const std::string& text);

enum class OutputMode { PerFrame, Canvas, Both };
enum class OutputFormat { ImageSequence, RawVideo };

struct OutputConfig {
    OutputMode mode = OutputMode::Canvas;
    OutputFormat format = OutputFormat::ImageSequence;
    FixedAspect fixed_aspect = FixedAspect::None;
    int width = 640;
    int height = 480;  // ignored when fixed_aspect forces the page shape
};

struct TemporalConfig {
    double ema_alpha = 0.4;
    double jump_threshold = 40.0;
    int reacquire_after = 10;
    PageChangePolicy page_change;
};

struct PipelineConfig {
    Handedness handedness = Handedness::Right;
    std::string segmenter_backend = "classical";
    SegmenterConfig segmenter;
    ThresholdConfig threshold;
    int se_size = 3;
    ComponentFilterConfig filter;
    Connectivity ink_connectivity = Connectivity::Eight;
    int occlusion_margin = 5;
    /// Dark regions at least this wide (below the paper threshold) join the
    /// ink mask before labeling, so a hand is one solid component; 0 = off.
    int solid_width = 15;
    TemporalConfig temporal;
    OutputConfig output;
    std::optional<int> preview_port;
    int workers = 0;  // detection threads; 0 = one per spare core

    /// Canvas size implied by the output section.
    TargetGeometry canvas_geometry() const;
    /// Throws ConfigError naming the first violated key.
    void validate() const;
};

/// Every recognised key, in file order.
const std::vector<std::string>& config_keys();

/// Applies one `section.key = value` setting; throws ConfigError.
void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value);
std::string get_setting(const PipelineConfig& cfg, const std::string& key);

/// Applies all entries; unknown keys are errors.
void apply_file(PipelineConfig& cfg, const KeyValueFile& file);
PipelineConfig load_config(const std::string& path);

/// Config file text with every key at its current value.
std::string dump_config(const PipelineConfig& cfg);

}  // namespace diytab
