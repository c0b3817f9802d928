#include "springlink/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef SPRINGLINK_USE_OPENMP
#include <omp.h>
#endif

namespace springlink {

namespace {

constexpr double kFailed = -std::numeric_limits<double>::infinity();

// Runs body(k) for k in [0, count). Each k owns its output slot.
template <class Body>
void for_each_cell(std::size_t count, Execution exec, Body&& body) {
#ifdef SPRINGLINK_USE_OPENMP
    if (exec == Execution::Parallel) {
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t k = 0; k < n; ++k) body(static_cast<std::size_t>(k));
        return;
    }
#endif
    (void)exec;
    for (std::size_t k = 0; k < count; ++k) body(k);
}

// Returns {ratio, conditions ok}; failed cells give {-inf, false}.
std::pair<double, bool> run_cell(const PipelineInput& input) {
    try {
        const auto result = design_pipeline(input);
        const double ratio = result.torque.ratio;
        if (!std::isfinite(ratio)) return {kFailed, false};
        return {ratio, result.feasibility.ok};
    } catch (const Error&) {
        return {kFailed, false};
    }
}

}  // namespace

double Axis::value(std::size_t k) const {
    if (count < 2) return min;
    if (k + 1 == count) return max;
    return min + (max - min) * static_cast<double>(k) / static_cast<double>(count - 1);
}

double Axis::step() const {
    return count < 2 ? 0.0 : (max - min) / static_cast<double>(count - 1);
}

CellResult evaluate_attachment(const AttachmentSweep& spec, double l_over_a, double beta) {
    PipelineInput input;
    input.geometry = spec.geometry;
    input.branch = spec.branch;
    input.load = spec.load;
    input.load_fraction = spec.load_fraction;
    input.direction = spec.direction;
    input.samples = spec.samples;
    input.clearance = spec.clearance;
    input.baseline = spec.baseline;
    try {
        input.attachment = CouplerAttachment::make(l_over_a * spec.geometry.a, beta);
    } catch (const Error&) {
        return {kFailed, false};
    }
    const auto [ratio, ok] = run_cell(input);
    return {ratio, ok && ratio >= spec.threshold};
}

SweepGrid sweep_attachment(const AttachmentSweep& spec, Execution exec) {
    if (spec.l_over_a.count < 2 || spec.beta.count < 2) {
        throw ConfigError("sweep axes need at least two points");
    }
    SweepGrid grid;
    grid.x = spec.l_over_a;
    grid.y = spec.beta;
    grid.threshold = spec.threshold;
    const std::size_t cells = grid.x.count * grid.y.count;
    grid.ratio.assign(cells, kFailed);
    grid.feasible.assign(cells, 0);
    for_each_cell(cells, exec, [&](std::size_t k) {
        const std::size_t i = k / grid.y.count;
        const std::size_t j = k % grid.y.count;
        const auto cell = evaluate_attachment(spec, grid.x.value(i), grid.y.value(j));
        grid.ratio[k] = cell.ratio;
        grid.feasible[k] = cell.feasible ? 1 : 0;
    });
    return grid;
}

std::vector<FamilyMember> sweep_family(std::span<const double> b_over_a,
                                       const AttachmentSweep& base, Execution exec) {
    std::vector<FamilyMember> family;
    for (double ratio : b_over_a) {
        AttachmentSweep spec = base;
        spec.geometry = FourBarGeometry::slider_crank(base.geometry.a, ratio * base.geometry.a);
        FamilyMember member;
        member.b_over_a = ratio;
        member.grid = sweep_attachment(spec, exec);
        const auto& g = member.grid;
        member.best_ratio = kFailed;
        std::size_t beta_columns = 0;
        for (std::size_t j = 0; j < g.y.count; ++j) {
            bool column_hit = false;
            for (std::size_t i = 0; i < g.x.count; ++i) {
                const std::size_t k = g.index(i, j);
                column_hit = column_hit || g.feasible[k];
                member.feasible_cells += g.feasible[k];
            }
            beta_columns += column_hit ? 1 : 0;
        }
        for (std::size_t i = 0; i < g.x.count; ++i) {
            for (std::size_t j = 0; j < g.y.count; ++j) {
                const double r = g.ratio[g.index(i, j)];
                if (r > member.best_ratio) {
                    member.best_ratio = r;
                    member.best_l_over_a = g.x.value(i);
                    member.best_beta = g.y.value(j);
                }
            }
        }
        member.feasible_area =
            static_cast<double>(member.feasible_cells) * g.x.step() * g.y.step();
        member.beta_extent = static_cast<double>(beta_columns) * g.y.step();
        family.push_back(std::move(member));
    }
    return family;
}

CellScore best_attachment(const SolutionSpaceSpec& spec, double b_over_a, double d_over_a) {
    double best = kFailed;
    bool any_feasible = false;
    const auto geom = FourBarGeometry::rocker_crank(1.0, b_over_a, spec.c_over_a, d_over_a);
    const auto& s = spec.strategy;
    for (Direction direction : s.directions) {
        for (std::size_t i = 0; i < s.l_count; ++i) {
            const double l = s.l_count < 2 ? 0.0
                                           : s.l_max * static_cast<double>(i) /
                                                 static_cast<double>(s.l_count - 1);
            for (std::size_t j = 0; j < s.beta_count; ++j) {
                const double beta =
                    kTwoPi * static_cast<double>(j) / static_cast<double>(s.beta_count);
                PipelineInput input;
                input.geometry = geom;
                input.attachment = CouplerAttachment::make(l, beta);
                input.branch = spec.branch;
                input.load = InputLoad::constant(1.0);
                input.load_fraction = spec.load_fraction;
                input.direction = direction;
                input.samples = spec.samples;
                input.baseline = spec.baseline;
                const auto [ratio, ok] = run_cell(input);
                best = std::max(best, ratio);
                any_feasible = any_feasible || (ok && ratio >= spec.threshold);
            }
        }
    }
    return {best, any_feasible};
}

std::vector<GrashofLine> grashof_boundaries(double c_over_a, const Axis& b_axis,
                                            const Axis& d_axis) {
    const double c = c_over_a;
    struct Line {
        const char* label;
        double slope;
        double offset;
        double b_lo;
        double b_hi;
    };
    const double inf = std::numeric_limits<double>::infinity();
    // With a = 1 shortest: 1 + longest < sum of the other two.
    const Line lines[] = {
        {"b_longest", 1.0, 1.0 - c, c, inf},
        {"c_longest", -1.0, c + 1.0, 1.0, c},
        {"d_longest", 1.0, c - 1.0, 1.0, inf},
    };
    std::vector<GrashofLine> out;
    for (const auto& line : lines) {
        double lo = std::max(line.b_lo, b_axis.min);
        double hi = std::min(line.b_hi, b_axis.max);
        // Keep d = slope·b + offset inside [d_min, d_max].
        const double b_at_dmin = (d_axis.min - line.offset) / line.slope;
        const double b_at_dmax = (d_axis.max - line.offset) / line.slope;
        lo = std::max(lo, std::min(b_at_dmin, b_at_dmax));
        hi = std::min(hi, std::max(b_at_dmin, b_at_dmax));
        GrashofLine g{line.label, {}};
        if (lo <= hi) {
            g.points.push_back({lo, line.slope * lo + line.offset});
            g.points.push_back({hi, line.slope * hi + line.offset});
        }
        out.push_back(std::move(g));
    }
    return out;
}

SolutionSpace rocker_solution_space(const SolutionSpaceSpec& spec, Execution exec) {
    if (!(spec.c_over_a > 1.0)) {
        throw ConfigError("c/a must exceed 1 so the crank is the shortest link");
    }
    if (spec.b_over_a.count < 2 || spec.d_over_a.count < 2) {
        throw ConfigError("solution-space axes need at least two points");
    }
    SolutionSpace space;
    space.c_over_a = spec.c_over_a;
    space.b_over_a = spec.b_over_a;
    space.d_over_a = spec.d_over_a;
    const std::size_t cells = spec.b_over_a.count * spec.d_over_a.count;
    space.grashof_ok.assign(cells, 0);
    space.best_ratio.assign(cells, kFailed);
    space.feasible.assign(cells, 0);
    for_each_cell(cells, exec, [&](std::size_t k) {
        const double b = space.b_over_a.value(k / space.d_over_a.count);
        const double d = space.d_over_a.value(k % space.d_over_a.count);
        const auto geom = FourBarGeometry::rocker_crank(1.0, b, spec.c_over_a, d);
        if (!grashof_check(geom)) return;
        space.grashof_ok[k] = 1;
        const auto score = best_attachment(spec, b, d);
        space.best_ratio[k] = score.best_ratio;
        space.feasible[k] = score.feasible ? 1 : 0;
    });
    space.boundaries = grashof_boundaries(spec.c_over_a, spec.b_over_a, spec.d_over_a);
    return space;
}

}  // namespace springlink
