#pragma once

#include "declos/geometry.hpp"
#include "declos/visibility.hpp"

#include <limits>
#include <vector>

namespace declos {

// Worst-case separations for the three blocked-pair configuration classes
// around a square obstacle of side s whose keep-out band is delta wide on
// every side:
//   case0 - agents beyond opposite faces of the obstacle
//   case1 - one agent on the side band past a corner, the other beyond the
//           far perpendicular face (tangent through the near corner)
//   case2 - corner-tangent pair across one corner
// Each bound is >= 2*delta; that floor is what makes mutually occluded
// agents safe regardless of what the other one plans.
struct CaseBounds {
    double case0 = 0.0;
    double case1 = 0.0;
    double case2 = 0.0;

    double overall() const {
        double m = case0 < case1 ? case0 : case1;
        return m < case2 ? m : case2;
    }
};

// Closed forms:  case0 = 2d+s
//                case1 = d+s          (s >= d), else 2d
//                case2 = 2d           (d <= s/2), else d + 2d^2/s
CaseBounds analytic_bounds(double side, double delta);

// Same two minimizations solved by golden-section search over the raw
// max(.,.) expressions instead of the branch analysis above. Used to
// cross-check analytic_bounds; agreement is expected to ~1e-10.
CaseBounds numeric_bounds(double side, double delta);

struct ScanWitness {
    Point2 a;
    Point2 b;
    double distance = std::numeric_limits<double>::infinity();
};

struct Lemma1Report {
    AARect obstacle{0.0, 1.0, 0.0, 1.0};
    double delta = 0.0;
    double resolution = 0.0;
    // minimum inf-norm distance over all scanned grid pairs that are outside
    // the keep-out band yet have no line of sight across the obstacle
    double min_nonlos_distance = std::numeric_limits<double>::infinity();
    // min_nonlos_distance - 2*resolution; self-describing grid tolerance
    double certified_lower_bound = 0.0;
    ScanWitness witness;
    CaseBounds analytic;       // closed forms for this (side, delta)
    CaseBounds scanned_cases;  // grid minima of the three restricted scans
    long long pairs_tested = 0;
    long long blocked_pairs = 0;
};

// Grid-enumerates agent pairs in an annulus around a square obstacle
// (outside the keep-out band of width delta, within 3*delta + side of the
// obstacle) and reports the smallest inf-norm distance among pairs whose
// connecting segment crosses the obstacle interior. Pure brute force on an
// independent geometry implementation; certifies the >= 2*delta separation
// property down to grid resolution.
// Throws std::invalid_argument unless the obstacle is square, delta > 0 and
// resolution <= delta/10.
Lemma1Report lemma1_scan(const AARect& obstacle, double delta, double resolution);

struct AdaptiveCheck {
    bool certified = false;
    double threshold = 0.0;  // delta_min + 2*resolution
    // smallest blocked-pair distance observed inside the scan window
    double observed_min = std::numeric_limits<double>::infinity();
    ScanWitness witness;  // counterexample when !certified, else closest pair
    long long pairs_tested = 0;
};

// Certifies a partially inflated obstacle set: scans grid point pairs that
// are outside every inflated rectangle but have no line of sight across a
// physical obstacle, and checks that all of them are at least
// delta_min + 2*resolution apart (grid margin). Returns the first
// counterexample pair otherwise.
// Throws std::invalid_argument if some obstacle is not covered by the
// inflated set.
AdaptiveCheck validate_adaptive(const std::vector<AARect>& obstacles,
                                const std::vector<AARect>& inflated, double delta_min,
                                double resolution);

// O(N^2) pairwise line-of-sight plus naive transitive closure, written
// against this file's own segment test. Reference result for
// compute_subgraphs.
SubgraphPartition brute_force_subgraphs(const PositionMap& positions,
                                        const std::vector<AARect>& obstacles);

}  // namespace declos
