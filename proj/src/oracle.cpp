#include "declos/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

namespace declos {

namespace {

// The certifiers below deliberately re-implement the few geometric
// primitives they need instead of calling the library under test.

double inf_dist(const Point2& a, const Point2& b) {
    return std::max(std::fabs(a.x - b.x), std::fabs(a.y - b.y));
}

// inf-norm distance from p to the closed rectangle (0 inside)
double rect_excess(const Point2& p, const AARect& r) {
    double ex = std::max({r.xmin - p.x, 0.0, p.x - r.xmax});
    double ey = std::max({r.ymin - p.y, 0.0, p.y - r.ymax});
    return std::max(ex, ey);
}

// Length of the parameter interval along which segment a->b overlaps the
// closed rectangle (standard slab clipping). A positive length means the
// segment crosses the open interior, except for degenerate tangencies of
// zero length; callers pass eps to also discard near-tangent grid artifacts.
double crossing_overlap(const Point2& a, const Point2& b, const AARect& r) {
    double t0 = 0.0, t1 = 1.0;
    double d = b.x - a.x;
    if (d == 0.0) {
        if (a.x <= r.xmin || a.x >= r.xmax) return 0.0;
    } else {
        double lo = (r.xmin - a.x) / d, hi = (r.xmax - a.x) / d;
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
    }
    d = b.y - a.y;
    if (d == 0.0) {
        if (a.y <= r.ymin || a.y >= r.ymax) return 0.0;
    } else {
        double lo = (r.ymin - a.y) / d, hi = (r.ymax - a.y) / d;
        if (lo > hi) std::swap(lo, hi);
        t0 = std::max(t0, lo);
        t1 = std::min(t1, hi);
    }
    return t1 - t0;
}

bool crosses(const Point2& a, const Point2& b, const AARect& r, double eps) {
    // cheap reject: the segment's bounding box must straddle the rectangle
    if (std::max(a.x, b.x) <= r.xmin || std::min(a.x, b.x) >= r.xmax ||
        std::max(a.y, b.y) <= r.ymin || std::min(a.y, b.y) >= r.ymax)
        return false;
    return crossing_overlap(a, b, r) > eps;
}

bool crosses_any(const Point2& a, const Point2& b, const std::vector<AARect>& rects, double eps) {
    for (const AARect& r : rects)
        if (crosses(a, b, r, eps)) return true;
    return false;
}

// grid tangency margin (in segment-parameter units) for the numeric scans;
// keeps exact corner-grazing lattice pairs from counting as occluded
constexpr double kTangentEps = 1e-9;

double golden_min(double lo, double hi, const std::function<double(double)>& f) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return std::min({f(0.5 * (a + b)), fc, fd});
}

long lo_index(double v, double res) { return static_cast<long>(std::ceil(v / res - 1e-9)); }
long hi_index(double v, double res) { return static_cast<long>(std::floor(v / res + 1e-9)); }

struct LatticeBox {
    long ix0, ix1, iy0, iy1;  // inclusive
};

LatticeBox make_box(double x0, double x1, double y0, double y1, double res) {
    return {lo_index(x0, res), hi_index(x1, res), lo_index(y0, res), hi_index(y1, res)};
}

// lattice points of the box that sit outside the keep-out band
std::vector<Point2> band_points(const LatticeBox& b, double res, const AARect& obstacle,
                                double delta) {
    std::vector<Point2> pts;
    for (long iy = b.iy0; iy <= b.iy1; ++iy)
        for (long ix = b.ix0; ix <= b.ix1; ++ix) {
            Point2 p{ix * res, iy * res};
            if (rect_excess(p, obstacle) >= delta - 1e-12) pts.push_back(p);
        }
    return pts;
}

double restricted_scan(const std::vector<Point2>& as, const std::vector<Point2>& bs,
                       const AARect& r, double& global_best, ScanWitness& global_witness,
                       long long& tested, long long& blocked) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& a : as)
        for (const Point2& b : bs) {
            ++tested;
            if (!crosses(a, b, r, kTangentEps)) continue;
            ++blocked;
            double d = inf_dist(a, b);
            if (d < best) best = d;
            if (d < global_best) {
                global_best = d;
                global_witness = {a, b, d};
            }
        }
    return best;
}

}  // namespace

CaseBounds analytic_bounds(double side, double delta) {
    if (side <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("analytic_bounds: side and delta must be positive");
    CaseBounds cb;
    cb.case0 = 2.0 * delta + side;
    cb.case1 = side >= delta ? delta + side : 2.0 * delta;
    cb.case2 = delta <= 0.5 * side ? 2.0 * delta : delta + 2.0 * delta * delta / side;
    return cb;
}

CaseBounds numeric_bounds(double side, double delta) {
    if (side <= 0.0 || delta <= 0.0)
        throw std::invalid_argument("numeric_bounds: side and delta must be positive");
    CaseBounds cb;
    cb.case0 = 2.0 * delta + side;
    cb.case1 = golden_min(0.0, delta, [&](double y) {
        return std::max(delta + delta * delta / (side + y), delta + side + y);
    });
    cb.case2 = golden_min(1e-12, 0.5 * side, [&](double u) {
        return std::max(delta + delta * delta / u, delta + u);
    });
    return cb;
}

Lemma1Report lemma1_scan(const AARect& obstacle, double delta, double resolution) {
    double side = obstacle.xmax - obstacle.xmin;
    if (std::fabs((obstacle.ymax - obstacle.ymin) - side) > 1e-9 * std::max(1.0, side))
        throw std::invalid_argument("lemma1_scan: obstacle must be square");
    if (delta <= 0.0) throw std::invalid_argument("lemma1_scan: delta must be positive");
    if (resolution <= 0.0 || resolution > delta / 10.0 + 1e-15)
        throw std::invalid_argument("lemma1_scan: resolution too coarse (need <= delta/10)");

    Lemma1Report rep;
    rep.obstacle = obstacle;
    rep.delta = delta;
    rep.resolution = resolution;
    rep.analytic = analytic_bounds(side, delta);

    const double res = resolution;
    const double band = 4.0 * res;
    const double x0 = obstacle.xmin, x1 = obstacle.xmax, y0 = obstacle.ymin, y1 = obstacle.ymax;

    double best = std::numeric_limits<double>::infinity();

    // Restricted boundary-band scans for the three configuration classes.
    // Moving a point outward from the keep-out boundary only increases the
    // pair distance within each class, so a few-resolution band around the
    // boundary captures the class minima.
    {
        auto a0 = band_points(make_box(x0 - delta - band, x0 - delta, y0, y1, res), res, obstacle,
                              delta);
        auto b0 = band_points(make_box(x1 + delta, x1 + delta + band, y0, y1, res), res, obstacle,
                              delta);
        rep.scanned_cases.case0 = restricted_scan(a0, b0, obstacle, best, rep.witness,
                                                  rep.pairs_tested, rep.blocked_pairs);

        auto a1 = band_points(make_box(x0 - delta - band, x0 - delta, y1, y1 + delta, res), res,
                              obstacle, delta);
        auto b1 = band_points(make_box(x0, x1, y0 - delta - band, y0 - delta, res), res, obstacle,
                              delta);
        rep.scanned_cases.case1 = restricted_scan(a1, b1, obstacle, best, rep.witness,
                                                  rep.pairs_tested, rep.blocked_pairs);

        auto a2 = band_points(make_box(x1 + delta, x1 + delta + band, y0, y1, res), res, obstacle,
                              delta);
        auto b2 = band_points(make_box(x0, x1, y1 + delta, y1 + delta + band, res), res, obstacle,
                              delta);
        rep.scanned_cases.case2 = restricted_scan(a2, b2, obstacle, best, rep.witness,
                                                  rep.pairs_tested, rep.blocked_pairs);
    }

    // Global annulus scan. Unpruned it is quadratic in the annulus point
    // count; three sound filters keep it fast:
    //   - a blocked pair's inf-distance is at least either endpoint's
    //     distance to the obstacle, so points beyond the current best are out
    //   - only pairs strictly closer than the current best matter
    //   - a crossing segment's bounding box must straddle the obstacle
    const double W = 3.0 * delta + side;  // beyond this even case0 is exceeded
    LatticeBox g = make_box(x0 - W, x1 + W, y0 - W, y1 + W, res);
    const long nx = g.ix1 - g.ix0 + 1, ny = g.iy1 - g.iy0 + 1;
    std::vector<std::uint8_t> valid(static_cast<size_t>(nx) * ny, 0);
    for (long iy = g.iy0; iy <= g.iy1; ++iy)
        for (long ix = g.ix0; ix <= g.ix1; ++ix) {
            Point2 p{ix * res, iy * res};
            if (rect_excess(p, obstacle) >= delta - 1e-12)
                valid[static_cast<size_t>(iy - g.iy0) * nx + (ix - g.ix0)] = 1;
        }

    for (long iy = g.iy0; iy <= g.iy1; ++iy) {
        for (long ix = g.ix0; ix <= g.ix1; ++ix) {
            if (!valid[static_cast<size_t>(iy - g.iy0) * nx + (ix - g.ix0)]) continue;
            Point2 p{ix * res, iy * res};
            double reach = std::min(best, W);
            if (rect_excess(p, obstacle) >= reach) continue;
            long R = static_cast<long>(std::floor(reach / res)) + 1;
            long jy_hi = std::min(iy + R, g.iy1);
            for (long jy = iy; jy <= jy_hi; ++jy) {
                long jx_lo = jy == iy ? ix + 1 : std::max(ix - R, g.ix0);
                long jx_hi = std::min(ix + R, g.ix1);
                for (long jx = jx_lo; jx <= jx_hi; ++jx) {
                    ++rep.pairs_tested;
                    if (!valid[static_cast<size_t>(jy - g.iy0) * nx + (jx - g.ix0)]) continue;
                    Point2 q{jx * res, jy * res};
                    double d = inf_dist(p, q);
                    if (d >= best) continue;
                    if (!crosses(p, q, obstacle, kTangentEps)) continue;
                    ++rep.blocked_pairs;
                    best = d;
                    rep.witness = {p, q, d};
                }
            }
        }
    }

    rep.min_nonlos_distance = best;
    rep.certified_lower_bound = best - 2.0 * res;
    return rep;
}

AdaptiveCheck validate_adaptive(const std::vector<AARect>& obstacles,
                                const std::vector<AARect>& inflated, double delta_min,
                                double resolution) {
    if (delta_min <= 0.0 || resolution <= 0.0)
        throw std::invalid_argument("validate_adaptive: delta_min and resolution must be positive");
    if (obstacles.empty()) throw std::invalid_argument("validate_adaptive: no obstacles");
    for (const AARect& obs : obstacles) {
        bool covered = false;
        for (const AARect& inf : inflated)
            if (inf.contains_rect(obs)) {
                covered = true;
                break;
            }
        if (!covered)
            throw std::invalid_argument(
                "validate_adaptive: inflated set does not cover an obstacle");
    }

    AdaptiveCheck out;
    const double res = resolution;
    out.threshold = delta_min + 2.0 * res;
    // scan window slightly beyond the certification threshold so the report
    // still shows the closest blocked pair when the geometry is safe
    const double W = delta_min + 10.0 * res;

    double bx0 = obstacles[0].xmin, bx1 = obstacles[0].xmax;
    double by0 = obstacles[0].ymin, by1 = obstacles[0].ymax;
    for (const AARect& r : obstacles) {
        bx0 = std::min(bx0, r.xmin);
        bx1 = std::max(bx1, r.xmax);
        by0 = std::min(by0, r.ymin);
        by1 = std::max(by1, r.ymax);
    }
    LatticeBox g = make_box(bx0 - W, bx1 + W, by0 - W, by1 + W, res);
    const long nx = g.ix1 - g.ix0 + 1, ny = g.iy1 - g.iy0 + 1;
    if (static_cast<long long>(nx) * ny > 50'000'000LL)
        throw std::invalid_argument("validate_adaptive: resolution too fine for this domain");

    // 0 = inside the inflated set, 1 = valid, 2 = valid and within the scan
    // window of some obstacle (only those can belong to a violating pair)
    std::vector<std::uint8_t> flag(static_cast<size_t>(nx) * ny, 0);
    for (long iy = g.iy0; iy <= g.iy1; ++iy)
        for (long ix = g.ix0; ix <= g.ix1; ++ix) {
            Point2 p{ix * res, iy * res};
            bool inside = false;
            for (const AARect& r : inflated)
                if (r.contains_closed(p)) {
                    inside = true;
                    break;
                }
            if (inside) continue;
            double dmin = std::numeric_limits<double>::infinity();
            for (const AARect& r : obstacles) dmin = std::min(dmin, rect_excess(p, r));
            flag[static_cast<size_t>(iy - g.iy0) * nx + (ix - g.ix0)] = dmin < W ? 2 : 1;
        }

    const long R = static_cast<long>(std::floor(W / res)) + 1;
    for (long iy = g.iy0; iy <= g.iy1; ++iy) {
        for (long ix = g.ix0; ix <= g.ix1; ++ix) {
            if (flag[static_cast<size_t>(iy - g.iy0) * nx + (ix - g.ix0)] != 2) continue;
            Point2 p{ix * res, iy * res};
            long jy_hi = std::min(iy + R, g.iy1);
            for (long jy = iy; jy <= jy_hi; ++jy) {
                long jx_lo = jy == iy ? ix + 1 : std::max(ix - R, g.ix0);
                long jx_hi = std::min(ix + R, g.ix1);
                for (long jx = jx_lo; jx <= jx_hi; ++jx) {
                    ++out.pairs_tested;
                    if (!flag[static_cast<size_t>(jy - g.iy0) * nx + (jx - g.ix0)]) continue;
                    Point2 q{jx * res, jy * res};
                    double d = inf_dist(p, q);
                    if (d >= W) continue;
                    if (d >= out.observed_min && d >= out.threshold) continue;
                    if (!crosses_any(p, q, obstacles, kTangentEps)) continue;
                    if (d < out.threshold) {
                        out.certified = false;
                        out.witness = {p, q, d};
                        out.observed_min = std::min(out.observed_min, d);
                        return out;
                    }
                    if (d < out.observed_min) {
                        out.observed_min = d;
                        out.witness = {p, q, d};
                    }
                }
            }
        }
    }
    out.certified = true;
    return out;
}

SubgraphPartition brute_force_subgraphs(const PositionMap& positions,
                                        const std::vector<AARect>& obstacles) {
    std::vector<AgentId> ids;
    std::vector<Point2> pts;
    for (const auto& [id, p] : positions) {
        ids.push_back(id);
        pts.push_back(p);
    }
    const size_t n = ids.size();
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (!crosses_any(pts[i], pts[j], obstacles, 0.0)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }

    SubgraphPartition part;
    std::vector<char> seen(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<AgentId> members;
        std::queue<size_t> frontier;
        frontier.push(i);
        seen[i] = 1;
        while (!frontier.empty()) {
            size_t v = frontier.front();
            frontier.pop();
            members.push_back(ids[v]);
            for (size_t w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    frontier.push(w);
                }
        }
        std::sort(members.begin(), members.end());
        part.subgraphs.push_back(std::move(members));
    }
    std::sort(part.subgraphs.begin(), part.subgraphs.end(),
              [](const std::vector<AgentId>& a, const std::vector<AgentId>& b) {
                  return a.front() < b.front();
              });
    return part;
}

}  // namespace declos
