#include "diytab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "diytab/components.hpp"

namespace diytab {

namespace {

// Clockwise on screen (y down): E, SE, S, SW, W, NW, N, NE.
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int dx, int dy) {
    for (int d = 0; d < 8; ++d)
        if (kDx[d] == dx && kDy[d] == dy) return d;
    return -1;
}

Contour trace_one(const LabelMap& lm, std::int32_t label, PixelPoint start) {
    auto inside = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < lm.width && y < lm.height && lm.at(x, y) == label;
    };

    Contour c;
    c.points.push_back(start);
    // The start is the first pixel in scan order, so its west neighbour is outside.
    PixelPoint cur = start;
    int back = 4;
    bool have_first_step = false;
    PixelPoint first_step{};
    // Bound guards against a malformed label map; a contour never revisits
    // a pixel more than 4 times.
    const std::size_t limit = 4 * static_cast<std::size_t>(lm.width) * lm.height + 8;
    while (c.points.size() <= limit) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int d = (back + k) % 8;
            if (inside(cur.x + kDx[d], cur.y + kDy[d])) {
                found = d;
                break;
            }
        }
        if (found < 0) return c;  // isolated pixel

        const PixelPoint next{cur.x + kDx[found], cur.y + kDy[found]};
        if (have_first_step && cur == start && next == first_step) {
            c.points.pop_back();  // start was appended again on arrival
            return c;
        }
        if (!have_first_step) {
            have_first_step = true;
            first_step = next;
        }
        // Last background cell examined, expressed relative to next.
        const int bd = (found + 7) % 8;
        const int bx = cur.x + kDx[bd] - next.x;
        const int by = cur.y + kDy[bd] - next.y;
        back = direction_of(bx, by);
        cur = next;
        c.points.push_back(cur);
    }
    throw Error("contour tracing did not terminate");
}

double tri_area2(Point2 a, Point2 b, Point2 c) { return std::abs(cross(a, b, c)); }

double perpendicular_distance(Point2 p, Point2 a, Point2 b) {
    const double len = distance(a, b);
    if (len == 0.0) return distance(p, a);
    return std::abs(cross(a, b, p)) / len;
}

void douglas_peucker(const std::vector<Point2>& pts, std::size_t first, std::size_t last, double eps,
                     std::vector<char>& keep) {
    if (last <= first + 1) return;
    double best = -1.0;
    std::size_t idx = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        const double d = perpendicular_distance(pts[i], pts[first], pts[last % pts.size()]);
        if (d > best) {
            best = d;
            idx = i;
        }
    }
    if (best > eps) {
        keep[idx] = 1;
        douglas_peucker(pts, first, idx, eps, keep);
        douglas_peucker(pts, idx, last, eps, keep);
    }
}

std::vector<Point2> simplify_closed(const std::vector<Point2>& hull, double eps) {
    const std::size_t n = hull.size();
    std::size_t far = 0;
    double best = -1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double d = distance(hull[0], hull[i]);
        if (d > best) {
            best = d;
            far = i;
        }
    }
    std::vector<char> keep(n, 0);
    keep[0] = keep[far] = 1;
    douglas_peucker(hull, 0, far, eps, keep);
    douglas_peucker(hull, far, n, eps, keep);  // index n wraps to 0
    std::vector<Point2> out;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) out.push_back(hull[i]);
    return out;
}

struct Line {
    // n.x * x + n.y * y = offset, |n| = 1
    Point2 n;
    double offset;
};

bool intersect(const Line& a, const Line& b, Point2& out) {
    const double det = a.n.x * b.n.y - a.n.y * b.n.x;
    if (std::abs(det) < 1e-9) return false;
    out = {(a.offset * b.n.y - a.n.y * b.offset) / det, (a.n.x * b.offset - a.offset * b.n.x) / det};
    return true;
}

}  // namespace

std::vector<Contour> trace_contours(const BinaryMask& mask) {
    std::vector<Contour> out;
    if (mask.empty()) return out;
    const LabelMap lm = label_components(mask, Connectivity::Four);
    out.reserve(lm.count());
    // Labels are in first-encounter order, and a component's first pixel is
    // the top-left corner of its bounding box row.
    std::vector<char> started(lm.count() + 1, 0);
    for (int y = 0; y < lm.height; ++y) {
        for (int x = 0; x < lm.width; ++x) {
            const auto l = lm.at(x, y);
            if (l == 0 || started[l]) continue;
            started[l] = 1;
            out.push_back(trace_one(lm, l, {x, y}));
        }
    }
    return out;
}

double contour_area(const Contour& contour) {
    const auto& p = contour.points;
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        s += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
    }
    return std::abs(s) / 2.0;
}

const Contour& largest_contour(const std::vector<Contour>& contours) {
    if (contours.empty()) throw Error("largest_contour: no contours");
    std::size_t best = 0;
    double best_area = contour_area(contours[0]);
    for (std::size_t i = 1; i < contours.size(); ++i) {
        const double a = contour_area(contours[i]);
        if (a > best_area) {
            best_area = a;
            best = i;
        }
    }
    return contours[best];
}

std::vector<Point2> convex_hull(std::vector<Point2> points) {
    std::sort(points.begin(), points.end(),
              [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) throw DegenerateHull("convex hull needs at least 3 distinct points");

    // Keeping strictly negative turns (y-down coordinates) walks the hull
    // counter-clockwise as seen on screen.
    std::vector<Point2> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) >= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = points.size() - 1; i-- > 0;) {
        const auto& p = points[i];
        while (k >= lower && cross(hull[k - 2], hull[k - 1], p) >= 0.0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw DegenerateHull("all points are collinear");
    return hull;
}

double polygon_area(const std::vector<Point2>& polygon) {
    double s = 0.0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const auto& a = polygon[i];
        const auto& b = polygon[(i + 1) % polygon.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return s / 2.0;
}

double quad_area(const OrderedQuad& q) {
    return std::abs(polygon_area({q.tl, q.tr, q.br, q.bl}));
}

bool is_strictly_convex(const OrderedQuad& q) {
    const auto c = q.corners();
    int sign = 0;
    for (int i = 0; i < 4; ++i) {
        const double z = cross(c[i], c[(i + 1) % 4], c[(i + 2) % 4]);
        if (!std::isfinite(z) || z == 0.0) return false;
        const int s = z > 0.0 ? 1 : -1;
        if (sign == 0)
            sign = s;
        else if (s != sign)
            return false;
    }
    return true;
}

OrderedQuad fit_quad(const std::vector<Point2>& hull) {
    if (hull.size() < 4) throw NotAQuad("hull has fewer than 4 vertices");

    std::vector<Point2> pts = hull;
    if (pts.size() > kMaxExhaustiveHull) {
        double eps = 0.5;
        while (pts.size() > kMaxExhaustiveHull) {
            pts = simplify_closed(hull, eps);
            eps *= 2.0;
        }
        if (pts.size() < 4) throw NotAQuad("hull simplifies to fewer than 4 vertices");
    }

    // For a convex polygon, area(i,j,k,l) = tri(i,j,k) + tri(i,k,l); the two
    // apexes can be chosen independently for each diagonal (i,k).
    const std::size_t n = pts.size();
    double best = -1.0;
    std::array<std::size_t, 4> pick{0, 1, 2, 3};
    for (std::size_t i = 0; i + 3 < n; ++i) {
        for (std::size_t k = i + 2; k + 1 < n; ++k) {
            double bj_area = -1.0;
            std::size_t bj = i + 1;
            for (std::size_t j = i + 1; j < k; ++j) {
                const double a = tri_area2(pts[i], pts[j], pts[k]);
                if (a > bj_area) {
                    bj_area = a;
                    bj = j;
                }
            }
            double bl_area = -1.0;
            std::size_t bl = k + 1;
            for (std::size_t l = k + 1; l < n; ++l) {
                const double a = tri_area2(pts[i], pts[k], pts[l]);
                if (a > bl_area) {
                    bl_area = a;
                    bl = l;
                }
            }
            const double total = bj_area + bl_area;
            if (total > best) {
                best = total;
                pick = {i, bj, k, bl};
            }
        }
    }
    return order_corners({pts[pick[0]], pts[pick[1]], pts[pick[2]], pts[pick[3]]});
}

OrderedQuad order_corners(const std::array<Point2, 4>& corners) {
    Point2 c{0.0, 0.0};
    for (const auto& p : corners) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw NotAQuad("non-finite corner");
        c = c + 0.25 * p;
    }
    std::array<Point2, 4> s = corners;
    // Ascending angle in y-down coordinates is clockwise on screen.
    std::sort(s.begin(), s.end(), [c](Point2 a, Point2 b) {
        const double aa = std::atan2(a.y - c.y, a.x - c.x);
        const double ab = std::atan2(b.y - c.y, b.x - c.x);
        if (aa != ab) return aa < ab;
        return a.y < b.y || (a.y == b.y && a.x < b.x);
    });
    if (!is_strictly_convex(OrderedQuad::from_corners(s)))
        throw NotAQuad("corners do not form a strictly convex quadrilateral");

    std::size_t tl = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        const double si = s[i].x + s[i].y;
        const double st = s[tl].x + s[tl].y;
        if (si < st || (si == st && (s[i].y < s[tl].y || (s[i].y == s[tl].y && s[i].x < s[tl].x))))
            tl = i;
    }
    return {s[tl], s[(tl + 1) % 4], s[(tl + 2) % 4], s[(tl + 3) % 4]};
}

OrderedQuad refine_quad(const Contour& contour, const OrderedQuad& quad) {
    constexpr double kBand = 2.0;        // px from the hull chord
    constexpr double kEndTrim = 0.1;     // fraction of each edge ignored near corners
    constexpr std::size_t kMinSupport = 6;
    constexpr double kMaxShift = 4.0;    // px a refined corner may move

    const auto corners = quad.corners();
    Point2 centre{0.0, 0.0};
    for (const auto& p : corners) centre = centre + 0.25 * p;

    std::array<Line, 4> lines;
    for (int e = 0; e < 4; ++e) {
        const Point2 a = corners[e];
        const Point2 b = corners[(e + 1) % 4];
        const double len = distance(a, b);
        if (len < 1e-9) return quad;
        const Point2 dir{(b.x - a.x) / len, (b.y - a.y) / len};

        double sx = 0, sy = 0;
        std::size_t n = 0;
        std::vector<Point2> support;
        for (const auto& px : contour.points) {
            const Point2 p{static_cast<double>(px.x), static_cast<double>(px.y)};
            const double along = (p.x - a.x) * dir.x + (p.y - a.y) * dir.y;
            if (along < kEndTrim * len || along > (1.0 - kEndTrim) * len) continue;
            const double off = std::abs((p.x - a.x) * dir.y - (p.y - a.y) * dir.x);
            if (off > kBand) continue;
            support.push_back(p);
            sx += p.x;
            sy += p.y;
            ++n;
        }
        if (n < kMinSupport) return quad;
        const Point2 mean{sx / n, sy / n};
        double sxx = 0, sxy = 0, syy = 0;
        for (const auto& p : support) {
            const double dx = p.x - mean.x, dy = p.y - mean.y;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        }
        // Normal is the eigenvector of the scatter matrix with the smaller eigenvalue.
        const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        Point2 nrm{-std::sin(theta), std::cos(theta)};
        double offset = nrm.x * mean.x + nrm.y * mean.y;
        if (nrm.x * centre.x + nrm.y * centre.y > offset) {
            nrm = {-nrm.x, -nrm.y};
            offset = -offset;
        }
        // Contour pixels sit inside the region; the pixel-area boundary lies
        // half a naive digital line thickness further out on average.
        offset += 0.5 * std::max(std::abs(nrm.x), std::abs(nrm.y));
        lines[e] = {nrm, offset};
    }

    std::array<Point2, 4> refined;
    for (int i = 0; i < 4; ++i) {
        // Corner i joins edge i-1 (ending at it) and edge i (starting at it).
        if (!intersect(lines[(i + 3) % 4], lines[i], refined[i])) return quad;
        if (distance(refined[i], corners[i]) > kMaxShift) return quad;
    }
    const OrderedQuad out = OrderedQuad::from_corners(refined);
    if (!is_strictly_convex(out)) return quad;
    return out;
}

}  // namespace diytab
