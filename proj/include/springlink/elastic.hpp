// Spring placement and sizing on a coupler curve.
//
// The spring runs from a fixed grounding point to a point on the extended
// coupler. Its anchor is the midpoint of the two curve points that lie
// farthest apart (the transition points). When the curve passes through that
// midpoint, the anchor moves along the perpendicular bisector until it clears
// the curve. The relaxed length equals the shortest anchor-to-attachment
// distance over the cycle, so the spring never carries pretension.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "springlink/common.hpp"
#include "springlink/linkage.hpp"

namespace springlink {

inline constexpr double kDefaultClearanceFraction = 0.05;

struct TransitionPoints {
    Vec2 s1;
    Vec2 s2;
    std::size_t i = 0;  ///< sample index of s1 (i < j)
    std::size_t j = 0;
    double distance = 0.0;
};

/// Farthest pair of samples. Ties go to the lowest (i, j) in row-major order.
TransitionPoints transition_points(const CouplerCurve& curve);

/// Smallest distance from `p` to any sample of `curve`.
/// Moves an exhaustive-scan pair onto the continuous curve: the farthest pair
/// within one grid cell of each sample. Sample indices are kept.
TransitionPoints refine_transition_points(const FourBarGeometry& geom,
                                         const CouplerAttachment& attach, Branch branch,
                                         const TransitionPoints& coarse, std::size_t n);

double distance_to_curve(const CouplerCurve& curve, Vec2 p);

/// Spring anchor per the midpoint / perpendicular-bisector rule. `clearance`
/// is a length.
Vec2 grounding_point(const CouplerCurve& curve, const TransitionPoints& transition,
                     double clearance);

enum class ExtremumKind { Max, Min };

struct Extremum {
    double theta = 0.0;
    ExtremumKind kind = ExtremumKind::Max;
    double length = 0.0;
};

struct SpringLengthProfile {
    std::vector<double> theta;
    std::vector<double> length;  ///< anchor-to-attachment distance l(θ)
    std::vector<double> rate;    ///< dl/dθ
    double l_min = 0.0;
    double l_max = 0.0;
    std::vector<Extremum> extrema;  ///< sorted by θ
    double scale = 1.0;

    /// Number of length maxima, where the spring turns from storing to
    /// releasing energy.
    std::size_t transition_count() const;
};

SpringLengthProfile spring_length_profile(const FourBarGeometry& geom,
                                          const CouplerAttachment& attach, Branch branch,
                                          Vec2 grounding, std::size_t n);

struct SpringDesign {
    Vec2 grounding;
    double stiffness = 0.0;       ///< K_s
    double relaxed_length = 0.0;  ///< l0
};

struct SizingInput {
    double load_torque = 0.0;         ///< T_load
    double unfavorable_width = 0.0;   ///< θ_s [rad]
};

double relaxed_length(const SpringLengthProfile& profile);

/// K_s = 2·T_load·θ_s / (l_max - l_min)².
double size_spring(const SizingInput& sizing, const SpringLengthProfile& profile);

/// Arc [start, end] traversed with increasing θ. `start` lies in [0, 2π) and
/// `end` may exceed 2π when the arc wraps.
struct AngleInterval {
    double start = 0.0;
    double end = 0.0;

    double width() const { return end - start; }
    /// True when θ lies inside the arc at least `margin` away from both ends.
    bool contains(double theta, double margin = 0.0) const;
};

struct FeasibilityReport {
    bool ok = false;
    bool condition1 = false;  ///< exactly two transition points
    bool condition2 = false;  ///< every singular angle inside a release arc
    std::size_t transition_count = 0;
    std::vector<AngleInterval> release_intervals;
    std::vector<AngleInterval> storage_intervals;
};

/// Angular margin by which a singular angle must sit inside a release arc.
inline constexpr double kReleaseMargin = 1e-8;

FeasibilityReport feasibility_conditions(const SpringLengthProfile& profile,
                                         std::span<const double> singular_thetas,
                                         Direction direction);

}  // namespace springlink
