#include "diytab/perspective.hpp"

#include <algorithm>
#include <cmath>

namespace diytab {

namespace {

constexpr double kInfinityEps = 1e-12;

using Matrix = Homography::Matrix;

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

double det3(const Matrix& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Matrix adjugate(const Matrix& m) {
    Matrix a;
    a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
    a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
    a[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
    a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
    a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    a[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
    a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return a;
}

/// Similarity taking the points' centroid to the origin and their mean
/// distance from it to sqrt(2).
Matrix normalizer(const std::array<Point2, 4>& pts, Matrix& inverse) {
    Point2 c{0, 0};
    for (const auto& p : pts) c = c + 0.25 * p;
    double mean = 0.0;
    for (const auto& p : pts) mean += 0.25 * distance(p, c);
    if (mean <= 0.0) throw SingularSystem("coincident points");
    const double s = std::sqrt(2.0) / mean;
    inverse = {{{1.0 / s, 0, c.x}, {0, 1.0 / s, c.y}, {0, 0, 1}}};
    return {{{s, 0, -s * c.x}, {0, s, -s * c.y}, {0, 0, 1}}};
}

void require_no_collinear_triple(const std::array<Point2, 4>& pts) {
    double scale = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) scale = std::max(scale, distance(pts[i], pts[j]));
    const double tol = 1e-12 * std::max(scale * scale, 1e-300);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (std::abs(cross(pts[i], pts[j], pts[k])) <= tol)
                    throw SingularSystem("three corners are collinear");
}

/// Gaussian elimination with partial pivoting on an 8x8 system.
std::array<double, 8> solve8(std::array<std::array<double, 9>, 8> a) {
    for (int col = 0; col < 8; ++col) {
        int piv = col;
        for (int r = col + 1; r < 8; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-12) throw SingularSystem("singular correspondence system");
        std::swap(a[piv], a[col]);
        for (int r = col + 1; r < 8; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < 9; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::array<double, 8> x{};
    for (int r = 7; r >= 0; --r) {
        double s = a[r][8];
        for (int c = r + 1; c < 8; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

Point2 transform(const Matrix& m, Point2 p) {
    const double w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
    return {(m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w, (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w};
}

}  // namespace

Homography::Homography(const Matrix& m) {
    if (!std::isfinite(m[2][2]) || std::abs(m[2][2]) < kInfinityEps)
        throw SingularSystem("homography cannot be normalized (h22 = 0)");
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            h_[i][j] = m[i][j] / m[2][2];
            if (!std::isfinite(h_[i][j])) throw SingularSystem("non-finite homography entry");
        }
    h_[2][2] = 1.0;
    if (det3(h_) == 0.0) throw SingularSystem("homography determinant is zero");
}

double Homography::determinant() const { return det3(h_); }

Homography Homography::inverse() const { return Homography(adjugate(h_)); }

Homography Homography::operator*(const Homography& rhs) const { return Homography(multiply(h_, rhs.h_)); }

Homography homography_from_quad(const OrderedQuad& src, const OrderedQuad& dst) {
    const auto s = src.corners();
    const auto d = dst.corners();
    require_no_collinear_triple(s);
    require_no_collinear_triple(d);

    Matrix ts_inv, td_inv;
    const Matrix ts = normalizer(s, ts_inv);
    const Matrix td = normalizer(d, td_inv);

    std::array<std::array<double, 9>, 8> a{};
    for (int i = 0; i < 4; ++i) {
        const Point2 p = transform(ts, s[i]);
        const Point2 q = transform(td, d[i]);
        a[2 * i] = {p.x, p.y, 1, 0, 0, 0, -p.x * q.x, -p.y * q.x, q.x};
        a[2 * i + 1] = {0, 0, 0, p.x, p.y, 1, -p.x * q.y, -p.y * q.y, q.y};
    }
    const auto h = solve8(a);
    const Matrix hn{{{h[0], h[1], h[2]}, {h[3], h[4], h[5]}, {h[6], h[7], 1.0}}};
    return Homography(multiply(td_inv, multiply(hn, ts)));
}

Point2 apply_homography(const Homography& h, Point2 p) {
    const auto& m = h.matrix();
    const double w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
    if (!std::isfinite(w) || std::abs(w) < kInfinityEps) throw PointAtInfinity("point maps to infinity");
    return {(m[0][0] * p.x + m[0][1] * p.y + m[0][2]) / w, (m[1][0] * p.x + m[1][1] * p.y + m[1][2]) / w};
}

TargetGeometry target_geometry(const OrderedQuad& q) {
    const double w = std::max(distance(q.tr, q.tl), distance(q.br, q.bl));
    const double h = std::max(distance(q.bl, q.tl), distance(q.br, q.tr));
    return {std::max(1, static_cast<int>(std::lround(w))), std::max(1, static_cast<int>(std::lround(h)))};
}

TargetGeometry with_fixed_aspect(TargetGeometry g, FixedAspect aspect) {
    double ratio = 0.0;
    switch (aspect) {
        case FixedAspect::None: return g;
        case FixedAspect::A4: ratio = std::sqrt(2.0); break;
        case FixedAspect::Letter: ratio = 11.0 / 8.5; break;
    }
    const bool portrait = g.out_height >= g.out_width;
    const double h = portrait ? g.out_width * ratio : g.out_width / ratio;
    g.out_height = std::max(1, static_cast<int>(std::lround(h)));
    return g;
}

OrderedQuad extent_quad(int width, int height) {
    return {{-0.5, -0.5}, {width - 0.5, -0.5}, {width - 0.5, height - 0.5}, {-0.5, height - 0.5}};
}

Raster unwarp(const Raster& frame, const OrderedQuad& quad, TargetGeometry geometry) {
    if (frame.channels() != 1) throw Error("unwarp expects a single-channel raster");
    const Homography h = homography_from_quad(extent_quad(geometry.out_width, geometry.out_height), quad);
    const auto& m = h.matrix();
    Raster out(geometry.out_width, geometry.out_height, 1, 255);
    const double max_x = frame.width() - 1;
    const double max_y = frame.height() - 1;
    for (int j = 0; j < geometry.out_height; ++j) {
        auto dst = out.row(j);
        for (int i = 0; i < geometry.out_width; ++i) {
            const double w = m[2][0] * i + m[2][1] * j + m[2][2];
            if (std::abs(w) < kInfinityEps) continue;
            const double x = (m[0][0] * i + m[0][1] * j + m[0][2]) / w;
            const double y = (m[1][0] * i + m[1][1] * j + m[1][2]) / w;
            if (!(x >= -0.5 && x <= frame.width() - 0.5 && y >= -0.5 && y <= frame.height() - 0.5)) continue;
            const Point2 p{std::clamp(x, 0.0, max_x), std::clamp(y, 0.0, max_y)};
            dst[i] = round_intensity(sample_bilinear(frame, p));
        }
    }
    return out;
}

Raster unwarp(const Raster& frame, const OrderedQuad& quad) { return unwarp(frame, quad, target_geometry(quad)); }

}  // namespace diytab
