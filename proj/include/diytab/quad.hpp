#pragma once

#include <array>
#include <vector>

#include "diytab/raster.hpp"

namespace diytab {

class DegenerateHull : public Error {
public:
    using Error::Error;
};

/// Raised when four corners cannot be formed into a strictly convex quad.
class NotAQuad : public Error {
public:
    using Error::Error;
};

struct PixelPoint {
    int x = 0;
    int y = 0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

/// Closed exterior boundary of one 4-connected component, clockwise on screen.
struct Contour {
    std::vector<PixelPoint> points;
};

/// Corners in fixed TL, TR, BR, BL order (clockwise on screen).
struct OrderedQuad {
    Point2 tl, tr, br, bl;

    std::array<Point2, 4> corners() const { return {tl, tr, br, bl}; }
    static OrderedQuad from_corners(const std::array<Point2, 4>& c) { return {c[0], c[1], c[2], c[3]}; }

    friend bool operator==(const OrderedQuad&, const OrderedQuad&) = default;
};

/// Moore-neighbour border following over each 4-connected component,
/// in scan order of the components' first pixels.
std::vector<Contour> trace_contours(const BinaryMask& mask);

/// Shoelace area of the traced polygon through pixel centers.
double contour_area(const Contour& contour);

/// Largest enclosed area; earliest wins ties.
const Contour& largest_contour(const std::vector<Contour>& contours);

/// Monotone-chain hull, counter-clockwise on screen, collinear points dropped.
std::vector<Point2> convex_hull(std::vector<Point2> points);

double polygon_area(const std::vector<Point2>& polygon);  // signed, y-down shoelace
double quad_area(const OrderedQuad& q);
bool is_strictly_convex(const OrderedQuad& q);

/// Hull sizes above this are reduced by Douglas-Peucker before the
/// exhaustive search.
inline constexpr std::size_t kMaxExhaustiveHull = 32;

/// Maximum-area quadrilateral over 4-subsets of the hull vertices.
OrderedQuad fit_quad(const std::vector<Point2>& hull);

OrderedQuad order_corners(const std::array<Point2, 4>& corners);

/// Sub-pixel refinement: fits a line to the contour pixels along each quad
/// edge, moves it onto the pixel-area boundary and intersects neighbours.
/// Returns the input quad when an edge lacks support.
OrderedQuad refine_quad(const Contour& contour, const OrderedQuad& quad);

}  // namespace diytab
