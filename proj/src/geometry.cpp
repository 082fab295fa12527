#include "declos/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace declos {

double inf_norm_dist(const Point2& a, const Point2& b) {
    return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

double euclid_dist(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double inf_dist_to_rect(const Point2& p, const AARect& r) {
    // rectangles are axis-aligned products, so the inf-norm distance splits
    // into independent per-axis excesses
    double dx = std::max({0.0, r.xmin - p.x, p.x - r.xmax});
    double dy = std::max({0.0, r.ymin - p.y, p.y - r.ymax});
    return std::max(dx, dy);
}

AARect expand_rect(const AARect& r, double w) {
    if (w < 0.0) throw std::invalid_argument("expand_rect: negative width");
    double h = w / 2.0;
    return AARect(r.xmin - h, r.xmax + h, r.ymin - h, r.ymax + h);
}

std::vector<AARect> adaptive_expand(const AARect& r, const InflationSpec& spec) {
    double h = spec.width / 2.0;
    double L = spec.cap_length;
    if (h < 0.0 || L <= 0.0) throw std::invalid_argument("adaptive_expand: bad inflation spec");
    AARect full = expand_rect(r, spec.width);
    std::vector<AARect> out;
    out.push_back(r);
    // each cap is the corner square of side cap_length, inflated by the same
    // half-width as the obstacle; clip to the full expansion so an oversized
    // cap_length degrades to full expansion of that side instead of leaking out
    auto cap = [&](double x0, double x1, double y0, double y1) {
        AARect raw(std::max(x0, full.xmin), std::min(x1, full.xmax), std::max(y0, full.ymin),
                   std::min(y1, full.ymax));
        out.push_back(raw);
    };
    cap(r.xmin - h, r.xmin + L + h, r.ymin - h, r.ymin + L + h);  // lower-left
    cap(r.xmax - L - h, r.xmax + h, r.ymin - h, r.ymin + L + h);  // lower-right
    cap(r.xmin - h, r.xmin + L + h, r.ymax - L - h, r.ymax + h);  // upper-left
    cap(r.xmax - L - h, r.xmax + h, r.ymax - L - h, r.ymax + h);  // upper-right
    return out;
}

bool segment_blocked_one(const Point2& p, const Point2& q, const AARect& r) {
    // Clip the segment's parameter interval against the OPEN box. The segment
    // blocks iff the clipped open interval is non-empty, i.e. some interior
    // point of the box lies on the segment. Runs along an edge never enter the
    // open interior, so grazing is visible by construction.
    double lo = 0.0, hi = 1.0;
    {
        double d = q.x - p.x;
        if (d == 0.0) {
            if (!(r.xmin < p.x && p.x < r.xmax)) return false;
        } else {
            double t1 = (r.xmin - p.x) / d;
            double t2 = (r.xmax - p.x) / d;
            if (t1 > t2) std::swap(t1, t2);
            lo = std::max(lo, t1);
            hi = std::min(hi, t2);
        }
    }
    {
        double d = q.y - p.y;
        if (d == 0.0) {
            if (!(r.ymin < p.y && p.y < r.ymax)) return false;
        } else {
            double t1 = (r.ymin - p.y) / d;
            double t2 = (r.ymax - p.y) / d;
            if (t1 > t2) std::swap(t1, t2);
            lo = std::max(lo, t1);
            hi = std::min(hi, t2);
        }
    }
    return lo < hi;
}

bool segment_blocked(const Point2& p, const Point2& q, const std::vector<AARect>& obstacles) {
    for (const AARect& r : obstacles)
        if (segment_blocked_one(p, q, r)) return true;
    return false;
}

Workspace make_workspace(const AARect& bounds, const std::vector<AARect>& physical, double delta,
                         InflationMode mode, double cap_length) {
    Workspace w(bounds);
    w.physical = physical;
    for (const AARect& r : physical) {
        if (!bounds.contains_rect(r))
            throw std::invalid_argument("make_workspace: obstacle outside bounds");
        if (mode == InflationMode::Full) {
            w.planning.push_back(expand_rect(r, 2.0 * delta));
        } else {
            InflationSpec spec{2.0 * delta, InflationMode::Adaptive, cap_length};
            for (const AARect& piece : adaptive_expand(r, spec)) w.planning.push_back(piece);
        }
    }
    return w;
}

bool point_in_free_space(const Point2& p, const Workspace& w) {
    if (!w.bounds.contains_closed(p)) return false;
    for (const AARect& r : w.planning)
        if (r.contains_closed(p)) return false;
    return true;
}

}  // namespace declos
