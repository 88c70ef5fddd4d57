#include "diytab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "diytab/config.hpp"
#include "diytab/image_io.hpp"

namespace diytab::synth {

namespace {

constexpr int kSuper = 4;

/// Closed-form projective map of the unit square onto a quad
/// ((0,0)->tl, (1,0)->tr, (1,1)->br, (0,1)->bl).
void square_to_quad(const OrderedQuad& q, double out[8]) {
    const double x0 = q.tl.x, y0 = q.tl.y, x1 = q.tr.x, y1 = q.tr.y;
    const double x2 = q.br.x, y2 = q.br.y, x3 = q.bl.x, y3 = q.bl.y;
    const double sx = x0 - x1 + x2 - x3;
    const double sy = y0 - y1 + y2 - y3;
    double a, b, c, d, e, f, g, h;
    if (sx == 0.0 && sy == 0.0) {
        a = x1 - x0;
        b = x2 - x1;
        c = x0;
        d = y1 - y0;
        e = y2 - y1;
        f = y0;
        g = h = 0.0;
    } else {
        const double dx1 = x1 - x2, dx2 = x3 - x2, dy1 = y1 - y2, dy2 = y3 - y2;
        const double den = dx1 * dy2 - dx2 * dy1;
        g = (sx * dy2 - dx2 * sy) / den;
        h = (dx1 * sy - sx * dy1) / den;
        a = x1 - x0 + g * x1;
        b = x3 - x0 + h * x3;
        c = x0;
        d = y1 - y0 + g * y1;
        e = y3 - y0 + h * y3;
        f = y0;
    }
    out[0] = a, out[1] = b, out[2] = c, out[3] = d, out[4] = e, out[5] = f, out[6] = g, out[7] = h;
}

Point2 map_square(const double m[8], double u, double v) {
    const double w = m[6] * u + m[7] * v + 1.0;
    return {(m[0] * u + m[1] * v + m[2]) / w, (m[3] * u + m[4] * v + m[5]) / w};
}

struct EdgeSet {
    std::array<Point2, 4> pts;
    double orient;  // sign of the polygon orientation

    explicit EdgeSet(const OrderedQuad& q) : pts(q.corners()) {
        orient = polygon_area({pts[0], pts[1], pts[2], pts[3]}) > 0 ? 1.0 : -1.0;
    }

    bool inside(Point2 p) const {
        for (int i = 0; i < 4; ++i)
            if (orient * cross(pts[i], pts[(i + 1) % 4], p) < 0.0) return false;
        return true;
    }

    /// Smallest distance from p to any edge line.
    double edge_distance(Point2 p) const {
        double best = 1e300;
        for (int i = 0; i < 4; ++i) {
            const double len = distance(pts[i], pts[(i + 1) % 4]);
            best = std::min(best, std::abs(cross(pts[i], pts[(i + 1) % 4], p)) / len);
        }
        return best;
    }
};

struct HandShape {
    Point2 center;
    HandSprite sprite;
    Point2 dir;  // along the forearm
    double length;

    bool inside(Point2 p) const {
        const double ex = (p.x - center.x) / sprite.palm_rx;
        const double ey = (p.y - center.y) / sprite.palm_ry;
        if (ex * ex + ey * ey <= 1.0) return true;
        const double along = (p.x - center.x) * dir.x + (p.y - center.y) * dir.y;
        const double across = (p.x - center.x) * dir.y - (p.y - center.y) * dir.x;
        return along >= 0.0 && along <= length && std::abs(across) <= 0.5 * sprite.arm_width;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

void SceneSpec::validate() const {
    if (frame_width < 1 || frame_height < 1) throw Error("scene frame size must be positive");
    if (page_ink.empty()) throw Error("scene has no page ink");
    if (paper_intensity <= bg_intensity) throw Error("scene paper must be brighter than the background");
    if (!is_strictly_convex(true_quad)) throw Error("scene quad must be strictly convex");
    for (const auto& p : true_quad.corners())
        if (p.x < -0.5 || p.y < -0.5 || p.x > frame_width - 0.5 || p.y > frame_height - 0.5)
            throw Error("scene quad must lie inside the frame");
    if (noise_sigma < 0.0) throw Error("scene noise_sigma must be >= 0");
}

std::optional<Point2> hand_position(const SceneSpec& spec, int t) {
    const auto& path = spec.hand_path;
    if (path.empty() || t < path.front().frame || t > path.back().frame) return std::nullopt;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& a = path[i];
        const auto& b = path[i + 1];
        if (t >= a.frame && t <= b.frame) {
            if (b.frame == a.frame) return b.position;
            const double s = static_cast<double>(t - a.frame) / (b.frame - a.frame);
            return Point2{a.position.x + s * (b.position.x - a.position.x),
                          a.position.y + s * (b.position.y - a.position.y)};
        }
    }
    return path.back().position;
}

SceneRenderer::SceneRenderer(SceneSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    square_to_quad(spec_.true_quad, proj_);
    const int fw = spec_.frame_width;
    const int fh = spec_.frame_height;
    const int pw = spec_.page_ink.width();
    const int ph = spec_.page_ink.height();

    // Forward splat of supersampled page points onto the nearest camera pixel.
    std::vector<double> sum(static_cast<std::size_t>(fw) * fh, 0.0);
    std::vector<int> count(sum.size(), 0);
    for (int j = 0; j < ph; ++j) {
        for (int i = 0; i < pw; ++i) {
            const double value = spec_.page_ink.get(i, j) ? spec_.ink_intensity : spec_.paper_intensity;
            for (int b = 0; b < kSuper; ++b) {
                const double v = (j + (b + 0.5) / kSuper) / ph;
                for (int a = 0; a < kSuper; ++a) {
                    const double u = (i + (a + 0.5) / kSuper) / pw;
                    const Point2 c = map_square(proj_, u, v);
                    const int cx = static_cast<int>(std::floor(c.x + 0.5));
                    const int cy = static_cast<int>(std::floor(c.y + 0.5));
                    if (cx < 0 || cy < 0 || cx >= fw || cy >= fh) continue;
                    const std::size_t k = static_cast<std::size_t>(cy) * fw + cx;
                    sum[k] += value;
                    ++count[k];
                }
            }
        }
    }

    // Area coverage of each camera pixel by the page quad.
    const EdgeSet edges(spec_.true_quad);
    base_.assign(sum.size(), static_cast<float>(spec_.bg_intensity));
    for (int y = 0; y < fh; ++y) {
        for (int x = 0; x < fw; ++x) {
            const Point2 centre{static_cast<double>(x), static_cast<double>(y)};
            double cov;
            if (edges.edge_distance(centre) > 0.75) {
                cov = edges.inside(centre) ? 1.0 : 0.0;
            } else {
                int hits = 0;
                for (int b = 0; b < kSuper; ++b)
                    for (int a = 0; a < kSuper; ++a)
                        hits += edges.inside({x - 0.5 + (a + 0.5) / kSuper, y - 0.5 + (b + 0.5) / kSuper});
                cov = static_cast<double>(hits) / (kSuper * kSuper);
            }
            if (cov == 0.0) continue;
            const std::size_t k = static_cast<std::size_t>(y) * fw + x;
            const double page = count[k] > 0 ? sum[k] / count[k] : spec_.paper_intensity;
            base_[k] = static_cast<float>(cov * page + (1.0 - cov) * spec_.bg_intensity);
        }
    }
}

Point2 SceneRenderer::page_to_camera(Point2 page) const {
    return map_square(proj_, (page.x + 0.5) / spec_.page_ink.width(), (page.y + 0.5) / spec_.page_ink.height());
}

BinaryMask SceneRenderer::camera_mask_to_page(const BinaryMask& camera) const {
    const int pw = spec_.page_ink.width();
    const int ph = spec_.page_ink.height();
    BinaryMask out(pw, ph);
    for (int j = 0; j < ph; ++j)
        for (int i = 0; i < pw; ++i) {
            const Point2 c = page_to_camera({static_cast<double>(i), static_cast<double>(j)});
            const int cx = static_cast<int>(std::floor(c.x + 0.5));
            const int cy = static_cast<int>(std::floor(c.y + 0.5));
            if (camera.get_or_zero(cx, cy)) out.set(i, j);
        }
    return out;
}

SceneFrame SceneRenderer::render(int t) const {
    const int fw = spec_.frame_width;
    const int fh = spec_.frame_height;
    std::vector<double> px(base_.begin(), base_.end());
    SceneFrame out;
    out.truth.quad = spec_.true_quad;
    out.truth.ink = spec_.page_ink;
    out.truth.occlusion = BinaryMask(fw, fh);

    if (const auto pos = hand_position(spec_, t)) {
        const double ang = spec_.hand.arm_angle_deg * std::numbers::pi / 180.0;
        const HandShape hand{*pos, spec_.hand, {std::sin(ang), std::cos(ang)},
                             2.0 * std::hypot(static_cast<double>(fw), static_cast<double>(fh))};
        for (int y = 0; y < fh; ++y) {
            for (int x = 0; x < fw; ++x) {
                int hits = 0;
                for (int b = 0; b < kSuper; ++b)
                    for (int a = 0; a < kSuper; ++a)
                        hits += hand.inside({x - 0.5 + (a + 0.5) / kSuper, y - 0.5 + (b + 0.5) / kSuper});
                if (hits == 0) continue;
                const double cov = static_cast<double>(hits) / (kSuper * kSuper);
                const std::size_t k = static_cast<std::size_t>(y) * fw + x;
                px[k] = cov * spec_.hand.intensity + (1.0 - cov) * px[k];
                if (hand.inside({static_cast<double>(x), static_cast<double>(y)})) out.truth.occlusion.set(x, y);
            }
        }
    }

    if (spec_.light_gradient != 0.0) {
        const double ang = spec_.gradient_angle_deg * std::numbers::pi / 180.0;
        const double cx = std::cos(ang), sy = std::sin(ang);
        double lo = 1e300, hi = -1e300;
        for (double x : {0.0, fw - 1.0})
            for (double y : {0.0, fh - 1.0}) {
                lo = std::min(lo, x * cx + y * sy);
                hi = std::max(hi, x * cx + y * sy);
            }
        const double span = hi > lo ? hi - lo : 1.0;
        for (int y = 0; y < fh; ++y)
            for (int x = 0; x < fw; ++x)
                px[static_cast<std::size_t>(y) * fw + x] +=
                    spec_.light_gradient * ((x * cx + y * sy - lo) / span - 0.5);
    }

    if (spec_.noise_sigma > 0.0) {
        std::seed_seq seq{static_cast<std::uint32_t>(spec_.seed), static_cast<std::uint32_t>(spec_.seed >> 32),
                          static_cast<std::uint32_t>(t)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> noise(0.0, spec_.noise_sigma);
        for (auto& v : px) v += noise(rng);
    }

    out.frame = Raster(fw, fh, 1);
    for (std::size_t k = 0; k < px.size(); ++k) out.frame.data()[k] = round_intensity(px[k]);
    return out;
}

SceneFrame render_scene(const SceneSpec& spec, int t) { return SceneRenderer(spec).render(t); }

BinaryMask generate_ink(int width, int height, double stroke_width, std::uint64_t seed) {
    BinaryMask ink(width, height);
    std::mt19937_64 rng(seed);
    auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };

    const double r = 0.5 * stroke_width;
    auto stamp = [&](double cx, double cy) {
        for (int y = static_cast<int>(std::floor(cy - r)); y <= static_cast<int>(std::ceil(cy + r)); ++y)
            for (int x = static_cast<int>(std::floor(cx - r)); x <= static_cast<int>(std::ceil(cx + r)); ++x)
                if (ink.contains(x, y) && (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) ink.set(x, y);
    };

    const double margin_x = 0.08 * width;
    const double margin_y = 0.12 * height;
    const double spacing = std::max(4.0 * stroke_width, height / 7.0);
    for (double base = margin_y + 0.5 * spacing; base < height - margin_y; base += spacing) {
        double x = margin_x + uni(0.0, 12.0);
        while (x < width - margin_x - 20.0) {
            const double len = std::min(uni(30.0, 80.0), width - margin_x - x);
            const double amp = uni(0.12, 0.25) * spacing;
            const double period = uni(10.0, 18.0);
            const double phase = uni(0.0, 2.0 * std::numbers::pi);
            for (double s = 0.0; s <= len; s += 0.5)
                stamp(x + s, base + amp * std::sin(2.0 * std::numbers::pi * s / period + phase));
            x += len + uni(12.0, 26.0);
        }
    }
    return ink;
}

OrderedQuad tilted_page_quad(std::uint64_t seed, int frame_width, int frame_height) {
    std::mt19937_64 rng(seed * 2654435761ULL + 17);
    auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    const double sx = frame_width / 640.0;
    const double sy = frame_height / 480.0;
    // Far edge foreshortened relative to the near edge.
    std::array<Point2, 4> c{Point2{170, 100}, Point2{470, 100}, Point2{560, 430}, Point2{80, 430}};
    const Point2 shift{uni(-25.0, 25.0), uni(-15.0, 15.0)};
    const double rot = uni(-4.0, 4.0) * std::numbers::pi / 180.0;
    const Point2 centre{320, 265};
    for (auto& p : c) {
        p = p + Point2{uni(-12.0, 12.0), uni(-12.0, 12.0)};
        const Point2 d = p - centre;
        p = centre + Point2{d.x * std::cos(rot) - d.y * std::sin(rot), d.x * std::sin(rot) + d.y * std::cos(rot)};
        p = p + shift;
        p.x = std::clamp(p.x * sx, 5.0, frame_width - 6.0);
        p.y = std::clamp(p.y * sy, 5.0, frame_height - 6.0);
    }
    return OrderedQuad::from_corners(c);
}

SceneSpec make_static_scene(std::uint64_t seed) {
    std::mt19937_64 rng(seed * 7919ULL + 1);
    auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
    SceneSpec s;
    s.true_quad = tilted_page_quad(seed);
    s.bg_intensity = static_cast<std::uint8_t>(uni(20.0, 60.0));
    s.paper_intensity = static_cast<std::uint8_t>(uni(195.0, 235.0));
    s.ink_intensity = static_cast<std::uint8_t>(uni(20.0, 50.0));
    s.light_gradient = uni(0.0, 60.0);
    s.gradient_angle_deg = uni(0.0, 360.0);
    s.noise_sigma = uni(0.0, 4.0);
    s.seed = seed;
    s.ink_recipe = InkRecipe{400, 300, 4.0, seed, {}};
    s.page_ink = make_ink(*s.ink_recipe);
    return s;
}

SceneSpec make_hand_session(std::uint64_t seed, int frames) {
    SceneSpec s = make_static_scene(seed);
    s.noise_sigma = std::min(s.noise_sigma, 3.0);
    const SceneRenderer probe(s);
    const int pw = s.page_ink.width();
    const int ph = s.page_ink.height();
    const int last = std::max(frames - 1, 1);
    auto at = [&](double u, double v, int frame) {
        return HandKeyframe{frame, probe.page_to_camera({u * pw, v * ph})};
    };
    // Writing along two lines, finishing mid-page.
    s.hand_path = {at(0.30, 0.35, 0), at(0.68, 0.40, last * 4 / 10), at(0.28, 0.62, last * 55 / 100),
                   at(0.62, 0.66, last)};
    return s;
}

BinaryMask resample_mask(const BinaryMask& mask, int width, int height) {
    BinaryMask out(width, height);
    for (int j = 0; j < height; ++j) {
        const int sy = std::min(mask.height() - 1, static_cast<int>((j + 0.5) * mask.height() / height));
        for (int i = 0; i < width; ++i) {
            const int sx = std::min(mask.width() - 1, static_cast<int>((i + 0.5) * mask.width() / width));
            if (mask.get(sx, sy)) out.set(i, j);
        }
    }
    return out;
}

F1Score f1_score(const BinaryMask& predicted, const BinaryMask& truth) {
    if (predicted.width() != truth.width() || predicted.height() != truth.height())
        throw DimensionMismatch("f1_score: mask dimensions differ");
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.bits().size(); ++i) {
        const bool p = predicted.bits()[i], t = truth.bits()[i];
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    F1Score s;
    if (tp + fp + fn == 0) return {1.0, 1.0, 1.0};
    s.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    s.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    s.f1 = tp > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

BinaryMask make_ink(const InkRecipe& recipe, const std::string& base_dir) {
    if (recipe.png.empty()) return generate_ink(recipe.width, recipe.height, recipe.stroke_width, recipe.seed);
    std::filesystem::path p(recipe.png);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    Raster img = read_png(p.string());
    if (img.channels() == 3) img = to_grayscale(img);
    BinaryMask ink(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) ink.bits()[i] = img.data()[i] < 128;
    return ink;
}

namespace {

Point2 parse_point(const std::string& key, const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError(key, "expected x,y but got '" + text + "'");
    return {parse_double(key, text.substr(0, comma)), parse_double(key, text.substr(comma + 1))};
}

std::uint8_t parse_level(const KeyValueFile& f, const std::string& key, int fallback) {
    const long long v = f.get_int(key, fallback);
    if (v < 0 || v > 255) throw ConfigError(key, "intensity must be in [0, 255]");
    return static_cast<std::uint8_t>(v);
}

SceneSpec scene_from_file(const KeyValueFile& f, const std::string& base_dir) {
    static const std::vector<std::string> known = {
        "scene.frame_width", "scene.frame_height", "scene.bg_intensity", "scene.paper_intensity",
        "scene.ink_intensity", "scene.light_gradient", "scene.gradient_angle_deg", "scene.noise_sigma",
        "scene.seed", "scene.quad", "ink.width", "ink.height", "ink.stroke_width", "ink.seed", "ink.png",
        "hand.path", "hand.palm_rx", "hand.palm_ry", "hand.arm_width", "hand.arm_angle_deg", "hand.intensity"};
    for (const auto& [k, v] : f.entries())
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError(k, "unknown scene key");

    SceneSpec s;
    s.frame_width = static_cast<int>(f.get_int("scene.frame_width", s.frame_width));
    s.frame_height = static_cast<int>(f.get_int("scene.frame_height", s.frame_height));
    s.bg_intensity = parse_level(f, "scene.bg_intensity", s.bg_intensity);
    s.paper_intensity = parse_level(f, "scene.paper_intensity", s.paper_intensity);
    s.ink_intensity = parse_level(f, "scene.ink_intensity", s.ink_intensity);
    s.light_gradient = f.get_double("scene.light_gradient", s.light_gradient);
    s.gradient_angle_deg = f.get_double("scene.gradient_angle_deg", s.gradient_angle_deg);
    s.noise_sigma = f.get_double("scene.noise_sigma", s.noise_sigma);
    s.seed = static_cast<std::uint64_t>(f.get_int("scene.seed", 0));

    const auto quad = f.get("scene.quad");
    if (!quad) throw ConfigError("scene.quad", "missing (expected four x,y corners: tl tr br bl)");
    std::istringstream qs(*quad);
    std::array<Point2, 4> corners;
    std::string tok;
    int n = 0;
    while (qs >> tok) {
        if (n == 4) throw ConfigError("scene.quad", "more than four corners");
        corners[n++] = parse_point("scene.quad", tok);
    }
    if (n != 4) throw ConfigError("scene.quad", "expected four corners");
    s.true_quad = OrderedQuad::from_corners(corners);

    InkRecipe r;
    r.width = static_cast<int>(f.get_int("ink.width", r.width));
    r.height = static_cast<int>(f.get_int("ink.height", r.height));
    r.stroke_width = f.get_double("ink.stroke_width", r.stroke_width);
    r.seed = static_cast<std::uint64_t>(f.get_int("ink.seed", static_cast<long long>(s.seed)));
    r.png = f.get_string("ink.png", "");
    if (r.png.empty() && (r.width < 1 || r.height < 1)) throw ConfigError("ink.width", "page size must be positive");
    try {
        s.page_ink = make_ink(r, base_dir);
    } catch (const IoError& e) {
        throw ConfigError("ink.png", e.what());
    }
    s.ink_recipe = r;

    s.hand.palm_rx = f.get_double("hand.palm_rx", s.hand.palm_rx);
    s.hand.palm_ry = f.get_double("hand.palm_ry", s.hand.palm_ry);
    s.hand.arm_width = f.get_double("hand.arm_width", s.hand.arm_width);
    s.hand.arm_angle_deg = f.get_double("hand.arm_angle_deg", s.hand.arm_angle_deg);
    s.hand.intensity = parse_level(f, "hand.intensity", s.hand.intensity);
    if (const auto path = f.get("hand.path")) {
        std::istringstream ps(*path);
        std::string entry;
        while (std::getline(ps, entry, ';')) {
            const auto colon = entry.find(':');
            if (colon == std::string::npos) {
                if (entry.find_first_not_of(" \t") == std::string::npos) continue;
                throw ConfigError("hand.path", "expected frame:x,y entries separated by ';'");
            }
            HandKeyframe k;
            k.frame = static_cast<int>(parse_int("hand.path", entry.substr(0, colon)));
            k.position = parse_point("hand.path", entry.substr(colon + 1));
            if (!s.hand_path.empty() && k.frame <= s.hand_path.back().frame)
                throw ConfigError("hand.path", "keyframes must have increasing frame numbers");
            s.hand_path.push_back(k);
        }
    }
    try {
        s.validate();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("scene", e.what());
    }
    return s;
}

}  // namespace

SceneSpec parse_scene(const std::string& text, const std::string& base_dir) {
    std::istringstream in(text);
    return scene_from_file(KeyValueFile::parse(in, "<scene>"), base_dir);
}

SceneSpec load_scene_file(const std::string& path) {
    const auto dir = std::filesystem::path(path).parent_path();
    return scene_from_file(KeyValueFile::load(path), dir.empty() ? "." : dir.string());
}

std::string scene_to_config(const SceneSpec& s) {
    if (!s.ink_recipe) throw Error("scene_to_config: scene has no ink recipe");
    std::ostringstream os;
    os << "[scene]\n"
       << "frame_width = " << s.frame_width << "\n"
       << "frame_height = " << s.frame_height << "\n"
       << "bg_intensity = " << int{s.bg_intensity} << "\n"
       << "paper_intensity = " << int{s.paper_intensity} << "\n"
       << "ink_intensity = " << int{s.ink_intensity} << "\n"
       << "light_gradient = " << fmt(s.light_gradient) << "\n"
       << "gradient_angle_deg = " << fmt(s.gradient_angle_deg) << "\n"
       << "noise_sigma = " << fmt(s.noise_sigma) << "\n"
       << "seed = " << s.seed << "\n"
       << "quad =";
    for (const auto& p : s.true_quad.corners()) os << " " << fmt(p.x) << "," << fmt(p.y);
    const auto& r = *s.ink_recipe;
    os << "\n\n[ink]\n";
    if (!r.png.empty()) {
        os << "png = " << r.png << "\n";
    } else {
        os << "width = " << r.width << "\n"
           << "height = " << r.height << "\n"
           << "stroke_width = " << fmt(r.stroke_width) << "\n"
           << "seed = " << r.seed << "\n";
    }
    os << "\n[hand]\n"
       << "palm_rx = " << fmt(s.hand.palm_rx) << "\n"
       << "palm_ry = " << fmt(s.hand.palm_ry) << "\n"
       << "arm_width = " << fmt(s.hand.arm_width) << "\n"
       << "arm_angle_deg = " << fmt(s.hand.arm_angle_deg) << "\n"
       << "intensity = " << int{s.hand.intensity} << "\n";
    if (!s.hand_path.empty()) {
        os << "path =";
        for (std::size_t i = 0; i < s.hand_path.size(); ++i) {
            const auto& k = s.hand_path[i];
            os << (i ? "; " : " ") << k.frame << ":" << fmt(k.position.x) << "," << fmt(k.position.y);
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace diytab::synth
