// Batch parameter sweeps over attachment and link-ratio grids.
//
// Every grid cell is an independent run of the design procedure. The
// Parallel path distributes cells with OpenMP; the Serial path is a plain
// loop kept as the reference. Both write results by row-major index, so the
// grids they return are bit-identical.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "springlink/torque.hpp"

namespace springlink {

enum class Execution { Serial, Parallel };

/// Uniform axis of `count` points from `min` to `max` inclusive.
struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 2;

    double value(std::size_t k) const;
    double step() const;
};

inline constexpr double kDefaultThreshold = 0.40;

struct AttachmentSweep {
    FourBarGeometry geometry;
    Branch branch = Branch::Open;
    InputLoad load;
    double load_fraction = 0.4;
    Direction direction = Direction::CW;
    Axis l_over_a{"l_over_a", 0.0, 8.0, 81};
    Axis beta{"beta_rad", 0.0, kPi, 81};
    std::size_t samples = 3600;
    double threshold = kDefaultThreshold;
    std::optional<double> clearance;
    RatioBaseline baseline = RatioBaseline::KinematicMax;
};

/// Min-net-torque ratio over an (l_ext/a, β) grid. Cells where the design
/// procedure fails hold -inf and are infeasible.
struct SweepGrid {
    Axis x;
    Axis y;
    std::vector<double> ratio;          ///< row-major, x outer
    std::vector<std::uint8_t> feasible;  ///< ratio >= threshold and both conditions hold
    double threshold = kDefaultThreshold;

    std::size_t index(std::size_t i, std::size_t j) const { return i * y.count + j; }
};

struct CellResult {
    double ratio = 0.0;
    bool feasible = false;
};

/// One cell of an attachment sweep, evaluated standalone.
CellResult evaluate_attachment(const AttachmentSweep& spec, double l_over_a, double beta);

SweepGrid sweep_attachment(const AttachmentSweep& spec, Execution exec = Execution::Parallel);

struct FamilyMember {
    double b_over_a = 0.0;
    SweepGrid grid;
    std::size_t feasible_cells = 0;
    double feasible_area = 0.0;  ///< cells × cell area in (l/a, β)
    double beta_extent = 0.0;    ///< β columns holding a feasible cell × Δβ
    double best_ratio = 0.0;
    double best_l_over_a = 0.0;
    double best_beta = 0.0;
};

/// Slider-crank attachment sweeps for several coupler ratios. `base` supplies
/// every setting except the coupler length.
std::vector<FamilyMember> sweep_family(std::span<const double> b_over_a,
                                       const AttachmentSweep& base,
                                       Execution exec = Execution::Parallel);

/// Attachment sub-sweep used to score a crank-rocker cell.
struct AttachmentStrategy {
    std::size_t l_count = 17;
    std::size_t beta_count = 17;  ///< β = 2πk/count, k < count
    double l_max = 8.0;
    std::vector<Direction> directions{Direction::CW, Direction::CCW};
};

struct SolutionSpaceSpec {
    double c_over_a = 2.0;
    Axis b_over_a{"b_over_a", 1.0, 10.0, 19};
    Axis d_over_a{"d_over_a", 1.0, 10.0, 19};
    AttachmentStrategy strategy;
    Branch branch = Branch::Open;
    double load_fraction = 0.4;
    std::size_t samples = 720;
    double threshold = kDefaultThreshold;
    RatioBaseline baseline = RatioBaseline::KinematicMax;
};

/// One Grashof inequality boundary, d/a as a function of b/a.
struct GrashofLine {
    std::string label;  ///< which link is the longest
    std::vector<Vec2> points;  ///< (b/a, d/a) polyline clipped to the grid box
};

struct SolutionSpace {
    double c_over_a = 0.0;
    Axis b_over_a;
    Axis d_over_a;
    std::vector<std::uint8_t> grashof_ok;  ///< row-major, b outer
    std::vector<double> best_ratio;        ///< -inf where not evaluated or failed
    std::vector<std::uint8_t> feasible;
    std::vector<GrashofLine> boundaries;

    std::size_t index(std::size_t i, std::size_t j) const { return i * d_over_a.count + j; }
};

struct CellScore {
    double best_ratio = 0.0;  ///< max ratio over the sub-sweep
    bool feasible = false;    ///< some attachment reaches the threshold with both conditions met
};

/// Scores a crank-rocker (a = 1) by its attachment sub-sweep.
CellScore best_attachment(const SolutionSpaceSpec& spec, double b_over_a, double d_over_a);

std::vector<GrashofLine> grashof_boundaries(double c_over_a, const Axis& b_over_a,
                                            const Axis& d_over_a);

SolutionSpace rocker_solution_space(const SolutionSpaceSpec& spec,
                                    Execution exec = Execution::Parallel);

}  // namespace springlink
