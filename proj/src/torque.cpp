#include "springlink/torque.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include <boost/math/tools/minima.hpp>

#include "springlink/numeric.hpp"

namespace springlink {

InputLoad InputLoad::constant(double magnitude) {
    if (!(magnitude > 0.0)) throw ConfigError("input load magnitude must be positive");
    return {LoadMode::ConstantMagnitude, magnitude, 0.0, 0.0};
}

InputLoad InputLoad::spring_actuated(double stiffness, double pretension) {
    if (!(stiffness > 0.0)) throw ConfigError("actuation spring stiffness must be positive");
    if (!(pretension >= 0.0)) throw ConfigError("actuation pretension must be non-negative");
    return {LoadMode::SpringActuated, 0.0, stiffness, pretension};
}

double input_magnitude(const FourBarGeometry& geom, const InputLoad& load, double theta,
                       Direction direction, Branch /*branch*/) {
    if (load.mode == LoadMode::ConstantMagnitude) return load.magnitude;
    if (geom.kind != MechanismKind::SliderCrank) {
        throw ConfigError("spring-actuated input requires a slider-crank");
    }
    // Each half-cycle owns the dead centre it starts from.
    const double t = wrap_two_pi(theta);
    const bool first_half = direction == Direction::CCW ? t < kPi : (t > kPi || t == 0.0);
    const double start_u = slider_position(geom, first_half ? 0.0 : kPi);
    const double travel = std::abs(slider_position(geom, t) - start_u);
    return load.actuation_stiffness * std::max(0.0, load.pretension - travel);
}

double kinematic_torque(const FourBarGeometry& geom, const InputLoad& load, double theta,
                        Direction direction, Branch branch) {
    return input_magnitude(geom, load, theta, direction, branch) *
           std::abs(input_velocity_ratio(geom, theta, branch));
}

double spring_torque(const SpringDesign& design, double length, double dl_ds) {
    return -design.stiffness * (length - design.relaxed_length) * dl_ds;
}

double total_torque(const FourBarGeometry& geom, const CouplerAttachment& attach, Branch branch,
                    const InputLoad& load, const SpringDesign& design, double theta,
                    Direction direction) {
    const auto st = mechanism_state(geom, attach, theta, branch);
    const Vec2 arm = st.attachment_point - design.grounding;
    const double l = arm.norm();
    const double dl = l > 0.0 ? arm.dot(st.attachment_velocity) / l : 0.0;
    const double p = input_magnitude(geom, load, theta, direction, branch);
    return p * std::abs(st.du_dtheta) + spring_torque(design, l, travel_sign(direction) * dl);
}

namespace {

// Minimum of f near grid node k, searched over the two neighbouring cells.
std::pair<double, double> refine_minimum(const std::vector<double>& theta, std::size_t k,
                                         double grid_value, auto&& f) {
    const double h = kTwoPi / static_cast<double>(theta.size());
    const auto [x, fx] = boost::math::tools::brent_find_minima(f, theta[k] - h, theta[k] + h, 40);
    if (fx < grid_value) return {wrap_two_pi(x), fx};
    return {theta[k], grid_value};
}

}  // namespace

TorqueProfile total_torque_profile(const FourBarGeometry& geom, const CouplerAttachment& attach,
                                   Branch branch, const InputLoad& load, const SpringDesign& design,
                                   const SpringLengthProfile& lengths, Direction direction,
                                   RatioBaseline baseline) {
    const std::size_t n = lengths.theta.size();
    const double ds_sign = travel_sign(direction);
    TorqueProfile p;
    p.direction = direction;
    p.theta = lengths.theta;
    p.length = lengths.length;
    p.input.resize(n);
    p.kinematic.resize(n);
    p.spring.resize(n);
    p.total.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = p.theta[i];
        p.input[i] = input_magnitude(geom, load, theta, direction, branch);
        p.kinematic[i] = p.input[i] * std::abs(input_velocity_ratio(geom, theta, branch));
        p.spring[i] = spring_torque(design, lengths.length[i], ds_sign * lengths.rate[i]);
        p.total[i] = p.kinematic[i] + p.spring[i];
    }
    const auto min_it = std::min_element(p.total.begin(), p.total.end());
    const auto min_k = static_cast<std::size_t>(min_it - p.total.begin());
    std::tie(p.theta_at_min, p.min_total) =
        refine_minimum(p.theta, min_k, *min_it, [&](double t) {
            return total_torque(geom, attach, branch, load, design, t, direction);
        });
    const auto kin_it = std::max_element(p.kinematic.begin(), p.kinematic.end());
    const auto kin_k = static_cast<std::size_t>(kin_it - p.kinematic.begin());
    p.kinematic_max = -refine_minimum(p.theta, kin_k, -*kin_it, [&](double t) {
                           return -kinematic_torque(geom, load, t, direction, branch);
                       }).second;
    p.total_max = *std::max_element(p.total.begin(), p.total.end());
    const double denom = baseline == RatioBaseline::KinematicMax ? p.kinematic_max : p.total_max;
    p.ratio = denom > 0.0 ? p.min_total / denom : 0.0;

    // Potential-energy bookkeeping between consecutive length extrema.
    const auto potential = [&](double l) {
        const double stretch = l - design.relaxed_length;
        return 0.5 * design.stiffness * stretch * stretch;
    };
    const std::vector<double> none;
    const auto feas = feasibility_conditions(lengths, none, direction);
    const auto& ext = lengths.extrema;
    for (std::size_t k = 0; k < ext.size() && ext.size() >= 2; ++k) {
        const Extremum& from = ext[k];
        const Extremum& to = ext[(k + 1) % ext.size()];
        const double energy = std::abs(potential(from.length) - potential(to.length));
        const double end = to.theta > from.theta ? to.theta : to.theta + kTwoPi;
        const EnergyExchange exchange{{from.theta, end}, energy};
        const bool is_release = std::any_of(
            feas.release_intervals.begin(), feas.release_intervals.end(),
            [&](const AngleInterval& arc) { return arc.start == from.theta; });
        (is_release ? p.released : p.stored).push_back(exchange);
    }
    return p;
}

TorqueProfile total_torque_profile(const FourBarGeometry& geom, const CouplerAttachment& attach,
                                   Branch branch, const InputLoad& load,
                                   const SpringDesign& design, Direction direction, std::size_t n,
                                   RatioBaseline baseline) {
    const auto lengths = spring_length_profile(geom, attach, branch, design.grounding, n);
    return total_torque_profile(geom, attach, branch, load, design, lengths, direction, baseline);
}

UnfavorableRegions unfavorable_regions(const FourBarGeometry& geom, Branch branch,
                                       const InputLoad& load, double load_torque,
                                       Direction direction, std::size_t n) {
    if (!(load_torque > 0.0)) throw ConfigError("load torque must be positive");
    auto excess = [&](double theta) {
        return kinematic_torque(geom, load, theta, direction, branch) - load_torque;
    };
    const auto grid = uniform_theta_grid(n);
    std::vector<double> values(n);
    UnfavorableRegions out;
    out.load_torque = load_torque;
    out.kinematic_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = excess(grid[i]);
        out.kinematic_max = std::max(out.kinematic_max, values[i] + load_torque);
    }
    const auto changes = numeric::periodic_sign_changes(values, 0.0);
    if (changes.empty()) {
        if (values.front() < 0.0) {
            std::ostringstream msg;
            msg << "required torque " << load_torque << " exceeds the kinematic maximum "
                << out.kinematic_max;
            throw TotalInfeasible(msg.str());
        }
        return out;
    }
    // Changes alternate; an interval opens where the excess drops below zero.
    std::vector<double> boundaries;
    std::vector<bool> opens;
    for (const auto& change : changes) {
        double theta = wrap_two_pi(numeric::bisect(excess, change.from, change.to, 1e-10));
        if (kTwoPi - theta < 1e-10) theta = 0.0;
        boundaries.push_back(theta);
        opens.push_back(change.sign_before > 0);
    }
    const std::size_t m = boundaries.size();
    for (std::size_t k = 0; k < m; ++k) {
        if (!opens[k]) continue;
        AngleInterval arc{boundaries[k], boundaries[(k + 1) % m]};
        if (arc.end <= arc.start) arc.end += kTwoPi;
        out.intervals.push_back(arc);
        out.largest_width = std::max(out.largest_width, arc.width());
    }
    return out;
}

PipelineResult design_pipeline(const PipelineInput& in) {
    const auto& geom = in.geometry;
    require_valid(geom);
    if (!(in.load_fraction > 0.0 && in.load_fraction < 1.0)) {
        throw ConfigError("load fraction must lie in (0, 1)");
    }
    PipelineResult r;
    r.singular_thetas = singular_angles(geom, in.branch);

    const auto kin = [&](double theta) {
        return kinematic_torque(geom, in.load, theta, in.direction, in.branch);
    };
    const auto grid = uniform_theta_grid(in.samples);
    std::size_t kin_k = 0;
    double kin_max = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double v = kin(grid[i]);
        if (v > kin_max) {
            kin_max = v;
            kin_k = i;
        }
    }
    if (kin_max > 0.0) {
        kin_max = -refine_minimum(grid, kin_k, -kin_max, [&](double t) { return -kin(t); }).second;
    }
    if (kin_max > 0.0) {
        r.unfavorable = unfavorable_regions(geom, in.branch, in.load, in.load_fraction * kin_max,
                                            in.direction, in.samples);
    } else if (!in.overrides.stiffness) {
        throw TotalInfeasible("input transmits no torque anywhere in the cycle");
    }

    r.curve = coupler_curve(geom, in.attachment, in.branch, in.samples);
    r.transition = transition_points(r.curve);
    const double clearance = in.clearance.value_or(kDefaultClearanceFraction * geom.a);
    r.spring.grounding = in.overrides.grounding
                             ? *in.overrides.grounding
                             : grounding_point(r.curve,
                                               refine_transition_points(geom, in.attachment,
                                                                        in.branch, r.transition,
                                                                        in.samples),
                                               clearance);
    r.lengths = spring_length_profile(geom, in.attachment, in.branch, r.spring.grounding,
                                      in.samples);
    r.spring.relaxed_length = in.overrides.relaxed_length.value_or(relaxed_length(r.lengths));
    r.spring.stiffness = in.overrides.stiffness
                             ? *in.overrides.stiffness
                             : size_spring({r.unfavorable.load_torque, r.unfavorable.largest_width},
                                           r.lengths);

    r.feasibility = feasibility_conditions(r.lengths, r.singular_thetas, in.direction);
    r.torque = total_torque_profile(geom, in.attachment, in.branch, in.load, r.spring, r.lengths,
                                    in.direction, in.baseline);

    if (!r.feasibility.condition1) {
        std::ostringstream msg;
        msg << "spring length cycle has " << r.feasibility.transition_count
            << " transition points instead of 2";
        r.failures.push_back(msg.str());
    }
    if (!r.feasibility.condition2) {
        r.failures.push_back("a singular configuration lies outside the energy-release arcs");
    }
    if (r.torque.min_total <= 0.0) {
        r.failures.push_back("net crank torque is not positive over the whole cycle");
    }
    return r;
}

}  // namespace springlink
