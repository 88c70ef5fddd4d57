#pragma once

// Slow, direct reference implementations used to cross-check the library.
// Nothing here calls into the code under test.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

struct Grid {
    int w = 0, h = 0;
    std::vector<std::uint8_t> v;  // 0/1
    Grid() = default;
    Grid(int w_, int h_) : w(w_), h(h_), v(static_cast<std::size_t>(w_) * h_, 0) {}
    std::uint8_t at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
    std::uint8_t& at(int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; }
    bool in(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h; }
};

inline Grid random_grid(int w, int h, double density, std::mt19937_64& rng) {
    Grid g(w, h);
    std::bernoulli_distribution b(density);
    for (auto& c : g.v) c = b(rng);
    return g;
}

/// Breadth-first flood fill; labels 1..N in scan order of each component's
/// first pixel.
inline std::vector<int> flood_fill_labels(const Grid& g, int connectivity) {
    std::vector<int> label(g.v.size(), 0);
    int next = 0;
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            if (!g.at(x, y) || label[static_cast<std::size_t>(y) * g.w + x]) continue;
            ++next;
            std::deque<std::pair<int, int>> queue{{x, y}};
            label[static_cast<std::size_t>(y) * g.w + x] = next;
            while (!queue.empty()) {
                auto [cx, cy] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        if (connectivity == 4 && dx != 0 && dy != 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (!g.in(nx, ny) || !g.at(nx, ny)) continue;
                        int& l = label[static_cast<std::size_t>(ny) * g.w + nx];
                        if (l) continue;
                        l = next;
                        queue.push_back({nx, ny});
                    }
            }
        }
    return label;
}

/// True when two labelings induce the same partition of the pixels
/// (same background, and a bijection between labels).
inline bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> fwd, bwd;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if ((a[i] == 0) != (b[i] == 0)) return false;
        if (a[i] == 0) continue;
        const auto la = static_cast<std::size_t>(a[i]), lb = static_cast<std::size_t>(b[i]);
        if (fwd.size() <= la) fwd.resize(la + 1, 0);
        if (bwd.size() <= lb) bwd.resize(lb + 1, 0);
        if (fwd[la] == 0 && bwd[lb] == 0) {
            fwd[la] = b[i];
            bwd[lb] = a[i];
        } else if (fwd[la] != b[i] || bwd[lb] != a[i]) {
            return false;
        }
    }
    return true;
}

/// Structuring element as a list of offsets relative to its origin.
using Offsets = std::vector<std::pair<int, int>>;

inline Offsets box_offsets(int size) {
    Offsets o;
    for (int dy = -size / 2; dy <= size / 2; ++dy)
        for (int dx = -size / 2; dx <= size / 2; ++dx) o.push_back({dx, dy});
    return o;
}

/// {p : p + s in mask for every s}, out-of-bounds counting as background.
inline Grid erode_def(const Grid& g, const Offsets& se) {
    Grid out(g.w, g.h);
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            bool all = true;
            for (auto [dx, dy] : se) {
                const int nx = x + dx, ny = y + dy;
                if (!g.in(nx, ny) || !g.at(nx, ny)) {
                    all = false;
                    break;
                }
            }
            out.at(x, y) = all;
        }
    return out;
}

/// Union over foreground q of the translate {q + s}.
inline Grid dilate_def(const Grid& g, const Offsets& se) {
    Grid out(g.w, g.h);
    for (int y = 0; y < g.h; ++y)
        for (int x = 0; x < g.w; ++x) {
            if (!g.at(x, y)) continue;
            for (auto [dx, dy] : se)
                if (out.in(x + dx, y + dy)) out.at(x + dx, y + dy) = 1;
        }
    return out;
}

/// Direct windowed mean per pixel with replicated borders, truncated.
inline Grid threshold_direct(const std::vector<std::uint8_t>& img, int w, int h, int window, int offset_c) {
    Grid out(w, h);
    const int r = window / 2;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            long long sum = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    const int sy = std::clamp(y + dy, 0, h - 1);
                    sum += img[static_cast<std::size_t>(sy) * w + sx];
                }
            const long long mean = sum / (static_cast<long long>(window) * window);
            out.at(x, y) = static_cast<long long>(img[static_cast<std::size_t>(y) * w + x]) < mean - offset_c;
        }
    return out;
}

struct P {
    double x, y;
    friend bool operator==(const P&, const P&) = default;
};

inline double orient(P a, P b, P c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

/// O(n^3) hull: a->b is a hull edge when every other point is strictly on
/// one side of the line or on the closed segment. Returns the vertex set in
/// the winding where all other points have orient < 0 (i.e. negative turns in
/// y-down coordinates), starting from the lexicographically smallest vertex.
inline std::vector<P> hull_bruteforce(std::vector<P> pts) {
    std::sort(pts.begin(), pts.end(), [](P a, P b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const std::size_t n = pts.size();
    std::vector<int> next(n, -1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool edge = true;
            for (std::size_t k = 0; k < n && edge; ++k) {
                if (k == i || k == j) continue;
                const double o = orient(pts[i], pts[j], pts[k]);
                if (o > 0) edge = false;
                if (o == 0) {
                    const bool on_segment = std::min(pts[i].x, pts[j].x) <= pts[k].x &&
                                            pts[k].x <= std::max(pts[i].x, pts[j].x) &&
                                            std::min(pts[i].y, pts[j].y) <= pts[k].y &&
                                            pts[k].y <= std::max(pts[i].y, pts[j].y);
                    if (!on_segment) edge = false;
                }
            }
            if (edge) next[i] = static_cast<int>(j);
        }
    std::vector<P> hull;
    int start = -1;
    for (std::size_t i = 0; i < n; ++i)
        if (next[i] >= 0) {
            start = static_cast<int>(i);
            break;
        }
    if (start < 0) return hull;
    int cur = start;
    do {
        hull.push_back(pts[static_cast<std::size_t>(cur)]);
        cur = next[static_cast<std::size_t>(cur)];
    } while (cur != start && cur >= 0 && hull.size() <= n);
    return hull;
}

inline double shoelace(const std::vector<P>& poly) {
    double s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return std::abs(s) / 2;
}

/// Maximum area over all 4-subsets of the vertices, kept in hull order.
inline double max_quad_area(const std::vector<P>& hull) {
    double best = 0;
    const std::size_t n = hull.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d)
                    best = std::max(best, shoelace({hull[a], hull[b], hull[c], hull[d]}));
    return best;
}

/// Homography through 4 correspondences: Gauss-Jordan with full pivoting in
/// long double on the raw (unnormalized) 8x8 system, h22 = 1.
inline std::array<double, 9> homography_gauss_jordan(const std::array<P, 4>& src, const std::array<P, 4>& dst) {
    long double m[8][9] = {};
    for (int i = 0; i < 4; ++i) {
        const long double x = src[i].x, y = src[i].y, u = dst[i].x, v = dst[i].y;
        long double r0[9] = {x, y, 1, 0, 0, 0, -u * x, -u * y, u};
        long double r1[9] = {0, 0, 0, x, y, 1, -v * x, -v * y, v};
        std::copy(r0, r0 + 9, m[2 * i]);
        std::copy(r1, r1 + 9, m[2 * i + 1]);
    }
    int col_of[8];
    for (int i = 0; i < 8; ++i) col_of[i] = i;
    for (int k = 0; k < 8; ++k) {
        int pr = k, pc = k;
        for (int r = k; r < 8; ++r)
            for (int c = k; c < 8; ++c)
                if (std::fabs(m[r][c]) > std::fabs(m[pr][pc])) pr = r, pc = c;
        for (int c = 0; c < 9; ++c) std::swap(m[k][c], m[pr][c]);
        for (int r = 0; r < 8; ++r) std::swap(m[r][k], m[r][pc]);
        std::swap(col_of[k], col_of[pc]);
        const long double piv = m[k][k];
        for (int c = 0; c < 9; ++c) m[k][c] /= piv;
        for (int r = 0; r < 8; ++r) {
            if (r == k) continue;
            const long double f = m[r][k];
            for (int c = 0; c < 9; ++c) m[r][c] -= f * m[k][c];
        }
    }
    std::array<double, 9> h{};
    for (int k = 0; k < 8; ++k) h[static_cast<std::size_t>(col_of[k])] = static_cast<double>(m[k][8]);
    h[8] = 1.0;
    return h;
}

/// Per-pixel select: occluded pixels keep `old`, others take `fresh`.
inline Grid mux(const Grid& old, const Grid& fresh, const Grid& occluded) {
    Grid out(old.w, old.h);
    for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = occluded.v[i] ? old.v[i] : fresh.v[i];
    return out;
}

}  // namespace oracle
