#include "diytab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace diytab {

namespace {

std::string trim(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

ConfigError::ConfigError(std::string key_path, const std::string& message)
    : Error(key_path.empty() ? message : key_path + ": " + message), key_path_(std::move(key_path)) {}

KeyValueFile KeyValueFile::parse(std::istream& in, const std::string& source) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("", source + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    KeyValueFile out;
    for (const auto& [name, node] : tree) {
        if (node.empty()) {
            out.entries_[name] = trim(node.data());
            continue;
        }
        for (const auto& [key, leaf] : node) out.entries_[name + "." + key] = trim(leaf.data());
    }
    return out;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    return parse(in, path);
}

std::optional<std::string> KeyValueFile::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const {
    auto v = get(key);
    return v ? parse_int(key, *v) : fallback;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
    auto v = get(key);
    return v ? parse_double(key, *v) : fallback;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
    auto v = get(key);
    return v ? parse_bool(key, *v) : fallback;
}

long long parse_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    std::istringstream is(t);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (t.empty() || is.fail() || !is.eof() || !std::isfinite(v))
        throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = lower(trim(text));
    if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
    if (t == "false" || t == "no" || t == "off" || t == "0") return false;
    throw ConfigError(key, "expected true/false, got '" + text + "'");
}

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(10);
    os << v;
    return os.str();
}

struct KeyBinding {
    std::string key;
    std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

template <typename Field>
KeyBinding int_key(std::string key, Field field) {
    return {key,
            [field](PipelineConfig& c, const std::string& k, const std::string& v) {
                auto& ref = field(c);
                ref = static_cast<std::remove_reference_t<decltype(ref)>>(parse_int(k, v));
            },
            [field](const PipelineConfig& c) {
                return std::to_string(field(c));
            }};
}

template <typename Field>
KeyBinding double_key(std::string key, Field field) {
    return {key, [field](PipelineConfig& c, const std::string& k, const std::string& v) { field(c) = parse_double(k, v); },
            [field](const PipelineConfig& c) { return format_double(field(c)); }};
}

template <typename Field>
KeyBinding bool_key(std::string key, Field field) {
    return {key, [field](PipelineConfig& c, const std::string& k, const std::string& v) { field(c) = parse_bool(k, v); },
            [field](const PipelineConfig& c) { return std::string(field(c) ? "true" : "false"); }};
}

template <typename Enum, typename Field>
KeyBinding enum_key(std::string key, std::vector<std::pair<std::string, Enum>> names, Field field) {
    return {key,
            [names, field](PipelineConfig& c, const std::string& k, const std::string& v) {
                const std::string t = lower(trim(v));
                for (const auto& [n, e] : names)
                    if (n == t) {
                        field(c) = e;
                        return;
                    }
                std::string allowed;
                for (const auto& [n, e] : names) allowed += (allowed.empty() ? "" : "|") + n;
                throw ConfigError(k, "expected one of " + allowed + ", got '" + v + "'");
            },
            [names, field](const PipelineConfig& c) {
                const Enum cur = field(c);
                for (const auto& [n, e] : names)
                    if (e == cur) return n;
                return std::string();
            }};
}

const std::vector<KeyBinding>& bindings() {
    static const std::vector<KeyBinding> table = [] {
        std::vector<KeyBinding> t;
        t.push_back(enum_key<Handedness>("handedness", {{"right", Handedness::Right}, {"left", Handedness::Left}},
                                         [](auto& c) -> auto& { return c.handedness; }));
        t.push_back({"preview_port",
                     [](PipelineConfig& c, const std::string& k, const std::string& v) {
                         const std::string s = lower(trim(v));
                         if (s.empty() || s == "none" || s == "off") {
                             c.preview_port.reset();
                             return;
                         }
                         c.preview_port = static_cast<int>(parse_int(k, v));
                     },
                     [](const PipelineConfig& c) {
                         return c.preview_port ? std::to_string(*c.preview_port) : std::string("none");
                     }});
        t.push_back(int_key("workers", [](auto& c) -> auto& { return c.workers; }));

        t.push_back({"segmenter.backend",
                     [](PipelineConfig& c, const std::string& k, const std::string& v) {
                         const std::string s = lower(trim(v));
                         if (s != "classical") throw ConfigError(k, "unknown segmenter backend '" + v + "'");
                         c.segmenter_backend = s;
                     },
                     [](const PipelineConfig& c) { return c.segmenter_backend; }});
        t.push_back(int_key("segmenter.downscale_factor",
                            [](auto& c) -> auto& { return c.segmenter.downscale_factor; }));
        t.push_back(double_key("segmenter.min_region_fraction",
                               [](auto& c) -> auto& { return c.segmenter.min_region_fraction; }));
        t.push_back(double_key("segmenter.brightness_percentile",
                               [](auto& c) -> auto& { return c.segmenter.brightness_percentile; }));

        t.push_back(int_key("threshold.window", [](auto& c) -> auto& { return c.threshold.window; }));
        t.push_back(int_key("threshold.offset_c", [](auto& c) -> auto& { return c.threshold.offset_c; }));

        t.push_back(int_key("morphology.se_size", [](auto& c) -> auto& { return c.se_size; }));

        t.push_back(int_key("filter.min_area", [](auto& c) -> auto& { return c.filter.min_area; }));
        t.push_back(double_key("filter.max_area_fraction",
                               [](auto& c) -> auto& { return c.filter.max_area_fraction; }));
        t.push_back(bool_key("filter.reject_border_blobs",
                             [](auto& c) -> auto& { return c.filter.reject_border_blobs; }));
        t.push_back(int_key("filter.finger_exemption",
                            [](auto& c) -> auto& { return c.filter.finger_exemption; }));
        t.push_back(enum_key<Connectivity>("filter.connectivity", {{"4", Connectivity::Four}, {"8", Connectivity::Eight}},
                                           [](auto& c) -> auto& { return c.ink_connectivity; }));
        t.push_back(int_key("filter.occlusion_margin", [](auto& c) -> auto& { return c.occlusion_margin; }));
        t.push_back(int_key("filter.solid_width", [](auto& c) -> auto& { return c.solid_width; }));

        t.push_back(double_key("temporal.ema_alpha", [](auto& c) -> auto& { return c.temporal.ema_alpha; }));
        t.push_back(double_key("temporal.jump_threshold",
                               [](auto& c) -> auto& { return c.temporal.jump_threshold; }));
        t.push_back(int_key("temporal.reacquire_after",
                            [](auto& c) -> auto& { return c.temporal.reacquire_after; }));
        t.push_back(double_key("temporal.page_change_fraction",
                               [](auto& c) -> auto& { return c.temporal.page_change.vanish_fraction; }));
        t.push_back(int_key("temporal.page_change_frames",
                            [](auto& c) -> auto& { return c.temporal.page_change.frames; }));
        t.push_back(int_key("temporal.page_change_min_ink",
                            [](auto& c) -> auto& { return c.temporal.page_change.min_ink; }));

        t.push_back(enum_key<OutputMode>(
            "output.mode", {{"canvas", OutputMode::Canvas}, {"per-frame", OutputMode::PerFrame}, {"both", OutputMode::Both}},
            [](auto& c) -> auto& { return c.output.mode; }));
        t.push_back(enum_key<OutputFormat>(
            "output.format", {{"image-sequence", OutputFormat::ImageSequence}, {"raw-video", OutputFormat::RawVideo}},
            [](auto& c) -> auto& { return c.output.format; }));
        t.push_back(enum_key<FixedAspect>(
            "output.fixed_aspect", {{"none", FixedAspect::None}, {"a4", FixedAspect::A4}, {"letter", FixedAspect::Letter}},
            [](auto& c) -> auto& { return c.output.fixed_aspect; }));
        t.push_back(int_key("output.width", [](auto& c) -> auto& { return c.output.width; }));
        t.push_back(int_key("output.height", [](auto& c) -> auto& { return c.output.height; }));
        return t;
    }();
    return table;
}

const KeyBinding& binding(const std::string& key) {
    for (const auto& b : bindings())
        if (b.key == key) return b;
    throw ConfigError(key, "unknown configuration key");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& b : bindings()) k.push_back(b.key);
        return k;
    }();
    return keys;
}

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    binding(key).set(cfg, key, value);
}

std::string get_setting(const PipelineConfig& cfg, const std::string& key) { return binding(key).get(cfg); }

void apply_file(PipelineConfig& cfg, const KeyValueFile& file) {
    for (const auto& [key, value] : file.entries()) apply_setting(cfg, key, value);
}

PipelineConfig load_config(const std::string& path) {
    PipelineConfig cfg;
    apply_file(cfg, KeyValueFile::load(path));
    cfg.validate();
    return cfg;
}

TargetGeometry PipelineConfig::canvas_geometry() const {
    return with_fixed_aspect({output.width, output.height}, output.fixed_aspect);
}

void PipelineConfig::validate() const {
    // Nested validators name the field in their message; report the full key.
    auto wrap = [](const std::string& section, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            const std::string msg = e.what();
            for (const auto& key : config_keys())
                if (key.rfind(section + ".", 0) == 0 && msg.find(key.substr(section.size() + 1)) != std::string::npos)
                    throw ConfigError(key, msg);
            throw ConfigError(section, msg);
        }
    };
    wrap("segmenter", [&] { segmenter.validate(); });
    wrap("threshold", [&] { threshold.validate(); });
    wrap("filter", [&] { filter.validate(); });
    if (se_size < 1 || se_size % 2 == 0) throw ConfigError("morphology.se_size", "must be odd and >= 1");
    if (occlusion_margin < 0) throw ConfigError("filter.occlusion_margin", "must be >= 0");
    if (solid_width < 0 || (solid_width > 0 && solid_width % 2 == 0))
        throw ConfigError("filter.solid_width", "must be 0 or odd");
    if (!(temporal.ema_alpha > 0.0 && temporal.ema_alpha <= 1.0))
        throw ConfigError("temporal.ema_alpha", "must be in (0, 1]");
    if (!(temporal.jump_threshold > 0.0)) throw ConfigError("temporal.jump_threshold", "must be > 0");
    if (temporal.reacquire_after < 0) throw ConfigError("temporal.reacquire_after", "must be >= 0");
    if (!(temporal.page_change.vanish_fraction > 0.0 && temporal.page_change.vanish_fraction <= 1.0))
        throw ConfigError("temporal.page_change_fraction", "must be in (0, 1]");
    if (temporal.page_change.frames < 1) throw ConfigError("temporal.page_change_frames", "must be >= 1");
    if (temporal.page_change.min_ink < 0) throw ConfigError("temporal.page_change_min_ink", "must be >= 0");
    if (output.width < 1) throw ConfigError("output.width", "must be >= 1");
    if (output.height < 1) throw ConfigError("output.height", "must be >= 1");
    const auto g = canvas_geometry();
    if (threshold.window > std::min(g.out_width, g.out_height))
        throw ConfigError("threshold.window", "larger than the output canvas");
    if (preview_port && (*preview_port < 0 || *preview_port > 65535))
        throw ConfigError("preview_port", "must be a TCP port number");
    if (workers < 0) throw ConfigError("workers", "must be >= 0");
}

std::string dump_config(const PipelineConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const auto& b : bindings()) {
        const auto dot = b.key.find('.');
        const std::string sec = dot == std::string::npos ? "" : b.key.substr(0, dot);
        const std::string name = dot == std::string::npos ? b.key : b.key.substr(dot + 1);
        if (sec != section) {
            os << "\n[" << sec << "]\n";
            section = sec;
        }
        os << name << " = " << b.get(cfg) << "\n";
    }
    return os.str();
}

}  // namespace diytab
