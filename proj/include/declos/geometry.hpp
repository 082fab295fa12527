#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace declos {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point2& o) const { return !(*this == o); }
};

// max(|dx|, |dy|) -- the separation metric used throughout
double inf_norm_dist(const Point2& a, const Point2& b);

// plain Euclidean length, used for path costs and motion stepping
double euclid_dist(const Point2& a, const Point2& b);

// Closed axis-aligned rectangle [xmin,xmax] x [ymin,ymax]. Degenerate boxes
// (zero or negative extent) are construction errors.
struct AARect {
    double xmin, xmax, ymin, ymax;

    AARect(double x0, double x1, double y0, double y1) : xmin(x0), xmax(x1), ymin(y0), ymax(y1) {
        if (!(xmin < xmax) || !(ymin < ymax))
            throw std::invalid_argument("AARect: degenerate rectangle");
    }

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }

    bool contains_closed(const Point2& p) const {
        return xmin <= p.x && p.x <= xmax && ymin <= p.y && p.y <= ymax;
    }
    bool contains_rect(const AARect& r) const {
        return xmin <= r.xmin && r.xmax <= xmax && ymin <= r.ymin && r.ymax <= ymax;
    }

    bool operator==(const AARect& o) const {
        return xmin == o.xmin && xmax == o.xmax && ymin == o.ymin && ymax == o.ymax;
    }
};

// inf-norm distance from a point to a closed rectangle (0 inside)
double inf_dist_to_rect(const Point2& p, const AARect& r);

enum class InflationMode { Full, Adaptive };

// Parameters for building the planner keep-out set from a physical obstacle.
// `width` is the total inflation width: every inflated bound moves outward by
// width/2. `cap_length` is the side of the corner square an Adaptive cap is
// built from, so caps reach cap_length + width/2 inward along each incident
// edge.
struct InflationSpec {
    double width = 0.0;
    InflationMode mode = InflationMode::Full;
    double cap_length = 0.0;
};

// Minkowski sum of r with the inf-norm ball of side w: every bound moves w/2.
AARect expand_rect(const AARect& r, double w);

// Adaptive inflation: the obstacle itself plus four corner caps. Each cap is
// the corner square of side cap_length expanded by the full width (clipped to
// the full expansion so the union never exceeds it). Mid-face strips stay
// uninflated, which is what lets agents hug long walls.
std::vector<AARect> adaptive_expand(const AARect& r, const InflationSpec& spec);

// True iff the open interior of segment p-q meets the open interior of any
// rectangle. Grazing an edge or corner does not block. Exact double-precision
// slab clipping; no epsilon.
bool segment_blocked(const Point2& p, const Point2& q, const std::vector<AARect>& obstacles);
bool segment_blocked_one(const Point2& p, const Point2& q, const AARect& r);

// The planning workspace: physical obstacles plus the derived keep-out set.
struct Workspace {
    AARect bounds;
    std::vector<AARect> physical;  // what blocks line of sight
    std::vector<AARect> planning;  // what plans must avoid (closed)

    explicit Workspace(const AARect& b) : bounds(b) {}
};

// Builds the planner keep-out from the physical set. `delta` is the keep-out
// distance per side (agents outside the planning set are at inf-dist > delta
// from every physical obstacle face), so the geometry primitives receive a
// total width of 2*delta.
Workspace make_workspace(const AARect& bounds, const std::vector<AARect>& physical, double delta,
                         InflationMode mode, double cap_length);

// Inside bounds (closed) and outside every planning rectangle (rectangles are
// closed, so points on a keep-out boundary are NOT free).
bool point_in_free_space(const Point2& p, const Workspace& w);

}  // namespace declos
