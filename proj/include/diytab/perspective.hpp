#pragma once

#include <array>

#include "diytab/quad.hpp"
#include "diytab/raster.hpp"

namespace diytab {

class SingularSystem : public Error {
public:
    using Error::Error;
};

class PointAtInfinity : public Error {
public:
    using Error::Error;
};

/// 3x3 projective transform, normalized so that h[2][2] == 1.
class Homography {
public:
    using Matrix = std::array<std::array<double, 3>, 3>;

    Homography() : h_{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}} {}
    /// Normalizes by m[2][2]; throws SingularSystem if that entry vanishes,
    /// the determinant is zero, or an entry is non-finite.
    explicit Homography(const Matrix& m);

    const Matrix& matrix() const { return h_; }
    double operator()(int r, int c) const { return h_[r][c]; }

    double determinant() const;
    Homography inverse() const;
    /// this ∘ rhs: applies rhs first.
    Homography operator*(const Homography& rhs) const;

private:
    Matrix h_;
};

struct TargetGeometry {
    int out_width = 1;
    int out_height = 1;

    friend bool operator==(const TargetGeometry&, const TargetGeometry&) = default;
};

enum class FixedAspect { None, A4, Letter };

/// Solves the 8-unknown DLT system from four correspondences by partially
/// pivoted elimination on similarity-normalized coordinates.
Homography homography_from_quad(const OrderedQuad& src, const OrderedQuad& dst);

Point2 apply_homography(const Homography& h, Point2 p);

/// Output size from the longer of each pair of opposite edges.
TargetGeometry target_geometry(const OrderedQuad& quad);

/// Forces the height to a standard page aspect, keeping the width and the
/// quad's orientation (portrait stays portrait).
TargetGeometry with_fixed_aspect(TargetGeometry g, FixedAspect aspect);

/// Pixel-extent rectangle of a width x height raster in pixel-center
/// coordinates: corners at (-0.5, -0.5) ... (w - 0.5, h - 0.5).
OrderedQuad extent_quad(int width, int height);

/// Inverse-mapped bilinear unwarp of the quad region onto a rectangle.
/// Output pixel extents map onto the quad; samples whose source falls
/// outside the frame's pixel extent are filled with 255.
Raster unwarp(const Raster& frame, const OrderedQuad& quad, TargetGeometry geometry);
Raster unwarp(const Raster& frame, const OrderedQuad& quad);

}  // namespace diytab
