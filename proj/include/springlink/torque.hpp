// Quasi-static crank torque of a spring-augmented four-bar.
//
// Torques are signed positive when they drive the crank in the requested
// travel direction. The reciprocating input always pushes along the input
// link's current direction of travel, so its contribution is P·|du/dθ| ≥ 0.
// The spring contributes -K_s·(l - l0)·dl/ds, with s the arc parameter along
// the travel direction.
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "springlink/common.hpp"
#include "springlink/elastic.hpp"
#include "springlink/linkage.hpp"

namespace springlink {

enum class LoadMode { ConstantMagnitude, SpringActuated };

struct InputLoad {
    LoadMode mode = LoadMode::ConstantMagnitude;
    double magnitude = 1.0;            ///< P (force or torque)
    double actuation_stiffness = 0.0;  ///< k_a
    double pretension = 0.0;           ///< actuation spring preload stroke

    static InputLoad constant(double magnitude);
    /// Two alternating actuation springs acting on the slider.
    static InputLoad spring_actuated(double stiffness, double pretension);
};

/// Which maximum the min-net-torque ratio is normalized by.
enum class RatioBaseline { KinematicMax, TotalMax };

/// Input magnitude P(θ). Constant loads return P. Spring-actuated loads use
/// one preloaded spring per half revolution that relaxes with slider travel
/// since the half started and goes slack instead of pushing.
double input_magnitude(const FourBarGeometry& geom, const InputLoad& load, double theta,
                       Direction direction, Branch branch = Branch::Open);

double kinematic_torque(const FourBarGeometry& geom, const InputLoad& load, double theta,
                        Direction direction, Branch branch = Branch::Open);

/// `dl_ds` is the spring-length rate along the travel direction.
double spring_torque(const SpringDesign& design, double length, double dl_ds);

/// T_kin + T_spring at an arbitrary crank angle.
double total_torque(const FourBarGeometry& geom, const CouplerAttachment& attach, Branch branch,
                    const InputLoad& load, const SpringDesign& design, double theta,
                    Direction direction);

struct EnergyExchange {
    AngleInterval interval;
    double energy = 0.0;  ///< magnitude of the potential-energy change over the arc
};

struct TorqueProfile {
    Direction direction = Direction::CW;
    std::vector<double> theta;
    std::vector<double> input;      ///< P(θ)
    std::vector<double> kinematic;  ///< T_kin
    std::vector<double> spring;     ///< T_spring
    std::vector<double> total;      ///< T_kin + T_spring
    std::vector<double> length;     ///< spring length
    double min_total = 0.0;     ///< refined between grid nodes
    double theta_at_min = 0.0;
    double kinematic_max = 0.0;  ///< refined between grid nodes
    double total_max = 0.0;
    double ratio = 0.0;
    std::vector<EnergyExchange> released;
    std::vector<EnergyExchange> stored;
};

TorqueProfile total_torque_profile(const FourBarGeometry& geom, const CouplerAttachment& attach,
                                   Branch branch, const InputLoad& load,
                                   const SpringDesign& design, Direction direction, std::size_t n,
                                   RatioBaseline baseline = RatioBaseline::KinematicMax);

/// Same, reusing a spring-length profile sampled for `design.grounding`.
TorqueProfile total_torque_profile(const FourBarGeometry& geom, const CouplerAttachment& attach,
                                   Branch branch, const InputLoad& load, const SpringDesign& design,
                                   const SpringLengthProfile& lengths, Direction direction,
                                   RatioBaseline baseline = RatioBaseline::KinematicMax);

struct UnfavorableRegions {
    std::vector<AngleInterval> intervals;  ///< arcs where T_kin < T_load
    double largest_width = 0.0;            ///< θ_s
    double load_torque = 0.0;
    double kinematic_max = 0.0;
};

/// Throws TotalInfeasible when T_kin < T_load over the whole cycle.
UnfavorableRegions unfavorable_regions(const FourBarGeometry& geom, Branch branch,
                                       const InputLoad& load, double load_torque,
                                       Direction direction, std::size_t n);

/// Optional replacements for the values the design procedure derives.
struct SpringOverrides {
    std::optional<Vec2> grounding;
    std::optional<double> stiffness;
    std::optional<double> relaxed_length;
};

struct PipelineInput {
    FourBarGeometry geometry;
    CouplerAttachment attachment;
    Branch branch = Branch::Open;
    InputLoad load;
    double load_fraction = 0.4;  ///< T_load as a fraction of the kinematic maximum
    Direction direction = Direction::CW;
    std::size_t samples = 3600;
    std::optional<double> clearance;  ///< length; defaults to 0.05·a
    SpringOverrides overrides;
    RatioBaseline baseline = RatioBaseline::KinematicMax;
};

struct PipelineResult {
    std::vector<double> singular_thetas;
    UnfavorableRegions unfavorable;
    CouplerCurve curve;
    TransitionPoints transition;
    SpringLengthProfile lengths;
    SpringDesign spring;
    FeasibilityReport feasibility;
    TorqueProfile torque;
    std::vector<std::string> failures;  ///< unmet conditions, human readable

    bool feasible(double threshold) const { return feasibility.ok && torque.ratio >= threshold; }
};

/// Full design procedure: load torque from the unfavorable regions, spring
/// placement on the coupler curve, sizing, feasibility and the resulting
/// torque profile. Infeasible designs are reported, not thrown.
PipelineResult design_pipeline(const PipelineInput& input);

}  // namespace springlink
