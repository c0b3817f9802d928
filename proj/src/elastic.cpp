#include "springlink/elastic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "springlink/numeric.hpp"

namespace springlink {

namespace {

std::size_t farthest_from(const std::vector<CouplerSample>& samples, Vec2 p) {
    std::size_t best = 0;
    double best_d2 = -1.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double d2 = (samples[k].point - p).norm2();
        if (d2 > best_d2) {
            best_d2 = d2;
            best = k;
        }
    }
    return best;
}

}  // namespace

TransitionPoints transition_points(const CouplerCurve& curve) {
    const auto& s = curve.samples;
    const std::size_t n = s.size();
    if (n < 2) throw DegenerateCurveError("coupler curve has fewer than two samples");

    // Two farthest-point sweeps give a lower bound on the diameter. Samples are
    // grouped into runs of consecutive points with a bounding circle each, and
    // run pairs whose triangle-inequality bound falls below the best distance
    // are skipped. Among pairs at the maximum the lexicographically smallest
    // (i, j) is kept, which is what a row-major scan with a strict comparison
    // returns.
    const std::size_t q = farthest_from(s, s[0].point);
    const std::size_t r = farthest_from(s, s[q].point);
    const double lower_d2 = (s[r].point - s[q].point).norm2();

    struct Block {
        std::size_t begin;
        std::size_t end;
        Vec2 center;
        double radius;
    };
    constexpr std::size_t kBlock = 32;
    std::vector<Block> blocks;
    for (std::size_t b = 0; b < n; b += kBlock) {
        const std::size_t e = std::min(n, b + kBlock);
        Vec2 lo = s[b].point;
        Vec2 hi = s[b].point;
        for (std::size_t k = b; k < e; ++k) {
            lo = {std::min(lo.x, s[k].point.x), std::min(lo.y, s[k].point.y)};
            hi = {std::max(hi.x, s[k].point.x), std::max(hi.y, s[k].point.y)};
        }
        const Vec2 center = (lo + hi) * 0.5;
        double radius = 0.0;
        for (std::size_t k = b; k < e; ++k) radius = std::max(radius, (s[k].point - center).norm());
        blocks.push_back({b, e, center, radius});
    }

    TransitionPoints out;
    double best_d2 = -1.0;
    for (std::size_t a = 0; a < blocks.size(); ++a) {
        for (std::size_t b = a; b < blocks.size(); ++b) {
            const Block& A = blocks[a];
            const Block& B = blocks[b];
            const double reach = (A.center - B.center).norm() + A.radius + B.radius;
            // Inflated so rounding in the bound never hides a candidate.
            if (reach * reach * (1.0 + 1e-12) < std::max(best_d2, lower_d2)) continue;
            for (std::size_t i = A.begin; i < A.end; ++i) {
                for (std::size_t j = std::max(i + 1, B.begin); j < B.end; ++j) {
                    const double d2 = (s[j].point - s[i].point).norm2();
                    if (d2 > best_d2 || (d2 == best_d2 && (i < out.i || (i == out.i && j < out.j)))) {
                        best_d2 = d2;
                        out.i = i;
                        out.j = j;
                    }
                }
            }
        }
    }
    out.s1 = s[out.i].point;
    out.s2 = s[out.j].point;
    out.distance = std::sqrt(best_d2);
    if (out.distance < 1e-9 * curve.scale) {
        throw DegenerateCurveError("coupler curve collapses to a point");
    }
    return out;
}

TransitionPoints refine_transition_points(const FourBarGeometry& geom,
                                         const CouplerAttachment& attach, Branch branch,
                                         const TransitionPoints& coarse, std::size_t n) {
    const double h = kTwoPi / static_cast<double>(n);
    double t1 = h * static_cast<double>(coarse.i);
    double t2 = h * static_cast<double>(coarse.j);
    Vec2 p1 = coupler_point(geom, attach, t1, branch);
    Vec2 p2 = coupler_point(geom, attach, t2, branch);
    double best = (p2 - p1).norm2();
    // Coordinate ascent on |P(t1) - P(t2)|², each step confined to the
    // neighbouring grid cells of the exhaustive-scan pair.
    const double lo1 = t1 - h, hi1 = t1 + h, lo2 = t2 - h, hi2 = t2 + h;
    for (int iter = 0; iter < 200; ++iter) {
        const auto [x1, f1] = boost::math::tools::brent_find_minima(
            [&](double t) { return -(coupler_point(geom, attach, t, branch) - p2).norm2(); }, lo1, hi1,
            52);
        if (-f1 > best) {
            t1 = x1;
            p1 = coupler_point(geom, attach, t1, branch);
        }
        const auto [x2, f2] = boost::math::tools::brent_find_minima(
            [&](double t) { return -(coupler_point(geom, attach, t, branch) - p1).norm2(); }, lo2, hi2,
            52);
        if (-f2 > best) {
            t2 = x2;
            p2 = coupler_point(geom, attach, t2, branch);
        }
        const double next = (p2 - p1).norm2();
        const bool settled = next - best <= 1e-15 * next;
        best = std::max(best, next);
        if (settled) break;
    }
    // Newton polish on the gradient of ½|P(t1) - P(t2)|²; Brent leaves ~1e-8 in θ.
    const auto gradient = [&](double a, double b) {
        const auto sa = mechanism_state(geom, attach, a, branch);
        const auto sb = mechanism_state(geom, attach, b, branch);
        const Vec2 chord = sa.attachment_point - sb.attachment_point;
        return std::array<double, 2>{chord.dot(sa.attachment_velocity),
                                     -chord.dot(sb.attachment_velocity)};
    };
    for (int iter = 0; iter < 8; ++iter) {
        const double e = 1e-6;
        const auto g = gradient(t1, t2);
        const auto g1p = gradient(t1 + e, t2), g1m = gradient(t1 - e, t2);
        const auto g2p = gradient(t1, t2 + e), g2m = gradient(t1, t2 - e);
        const double j11 = (g1p[0] - g1m[0]) / (2.0 * e), j21 = (g1p[1] - g1m[1]) / (2.0 * e);
        const double j12 = (g2p[0] - g2m[0]) / (2.0 * e), j22 = (g2p[1] - g2m[1]) / (2.0 * e);
        const double det = j11 * j22 - j12 * j21;
        if (!(std::abs(det) > 0.0)) break;
        const double d1 = -(j22 * g[0] - j12 * g[1]) / det;
        const double d2 = -(j11 * g[1] - j21 * g[0]) / det;
        const double n1 = t1 + d1, n2 = t2 + d2;
        if (n1 < lo1 || n1 > hi1 || n2 < lo2 || n2 > hi2) break;
        const Vec2 q1 = coupler_point(geom, attach, n1, branch);
        const Vec2 q2 = coupler_point(geom, attach, n2, branch);
        const double next = (q2 - q1).norm2();
        if (next < best * (1.0 - 1e-14)) break;
        t1 = n1;
        t2 = n2;
        p1 = q1;
        p2 = q2;
        best = next;
        if (std::abs(d1) + std::abs(d2) < 1e-15) break;
    }
    TransitionPoints out = coarse;
    out.s1 = p1;
    out.s2 = p2;
    out.distance = std::sqrt(best);
    return out;
}

double distance_to_curve(const CouplerCurve& curve, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& sample : curve.samples) best = std::min(best, (sample.point - p).norm2());
    return std::sqrt(best);
}

Vec2 grounding_point(const CouplerCurve& curve, const TransitionPoints& transition,
                     double clearance) {
    const Vec2 chord = transition.s2 - transition.s1;
    if (chord.norm() == 0.0) throw PlacementError("transition points coincide");
    const Vec2 midpoint = (transition.s1 + transition.s2) * 0.5;
    if (distance_to_curve(curve, midpoint) >= clearance) return midpoint;

    const Vec2 normal = chord.perp() / chord.norm();
    const double limit = 100.0 * curve.scale;
    const double min_step = 1e-9 * curve.scale;

    // The clearance margin is 1-Lipschitz along the bisector, so stepping by
    // its deficit never jumps over an admissible offset.
    auto search = [&](double sign) -> std::optional<double> {
        double t = 0.0;
        for (;;) {
            const double margin = distance_to_curve(curve, midpoint + normal * (sign * t)) - clearance;
            if (margin >= 0.0) return t;
            t += std::max(-margin, min_step);
            if (t > limit) return std::nullopt;
        }
    };
    const auto up = search(1.0);
    const auto down = search(-1.0);
    if (!up && !down) {
        throw PlacementError("no grounding point on the perpendicular bisector clears the curve");
    }
    if (up && (!down || *up <= *down)) return midpoint + normal * *up;
    return midpoint - normal * *down;
}

std::size_t SpringLengthProfile::transition_count() const {
    return static_cast<std::size_t>(std::count_if(extrema.begin(), extrema.end(), [](const Extremum& e) {
        return e.kind == ExtremumKind::Max;
    }));
}

SpringLengthProfile spring_length_profile(const FourBarGeometry& geom,
                                          const CouplerAttachment& attach, Branch branch,
                                          Vec2 grounding, std::size_t n) {
    if (n < 16) throw NumericalError("spring length profile needs at least 16 samples");
    SpringLengthProfile profile;
    profile.scale = geom.a;
    profile.theta = uniform_theta_grid(n);
    profile.length.resize(n);
    profile.rate.resize(n);

    const double floor = 1e-12 * geom.a;
    auto evaluate = [&](double theta, double& length, double& rate) {
        const auto state = mechanism_state(geom, attach, theta, branch);
        const Vec2 offset = state.attachment_point - grounding;
        length = offset.norm();
        if (length < floor) {
            std::ostringstream msg;
            msg << "grounding point coincides with the attachment path at theta=" << theta;
            throw NumericalError(msg.str());
        }
        rate = offset.dot(state.attachment_velocity) / length;
    };

    for (std::size_t i = 0; i < n; ++i) evaluate(profile.theta[i], profile.length[i], profile.rate[i]);
    profile.l_min = *std::min_element(profile.length.begin(), profile.length.end());
    profile.l_max = *std::max_element(profile.length.begin(), profile.length.end());

    auto rate_at = [&](double theta) {
        double length = 0.0;
        double rate = 0.0;
        evaluate(theta, length, rate);
        return rate;
    };
    for (const auto& change : numeric::periodic_sign_changes(profile.rate, 1e-12 * geom.a)) {
        double theta = wrap_two_pi(numeric::bisect(rate_at, change.from, change.to, 1e-10));
        if (kTwoPi - theta < 1e-10) theta = 0.0;
        double length = 0.0;
        double rate = 0.0;
        evaluate(theta, length, rate);
        profile.extrema.push_back(
            {theta, change.sign_before > 0 ? ExtremumKind::Max : ExtremumKind::Min, length});
    }
    std::sort(profile.extrema.begin(), profile.extrema.end(),
              [](const Extremum& l, const Extremum& r) { return l.theta < r.theta; });
    for (const auto& e : profile.extrema) {
        profile.l_min = std::min(profile.l_min, e.length);
        profile.l_max = std::max(profile.l_max, e.length);
    }
    return profile;
}

double relaxed_length(const SpringLengthProfile& profile) { return profile.l_min; }

double size_spring(const SizingInput& sizing, const SpringLengthProfile& profile) {
    if (!(sizing.load_torque > 0.0)) throw SizingError("load torque must be positive");
    if (!(sizing.unfavorable_width >= 0.0) || sizing.unfavorable_width >= kTwoPi) {
        throw SizingError("unfavorable width must lie in [0, 2π)");
    }
    if (sizing.unfavorable_width == 0.0) return 0.0;
    const double stroke = profile.l_max - profile.l_min;
    if (stroke < 1e-9 * profile.scale) {
        throw SizingError("spring length barely changes over the cycle; it cannot store energy");
    }
    const double energy = sizing.load_torque * sizing.unfavorable_width;
    return 2.0 * energy / (stroke * stroke);
}

bool AngleInterval::contains(double theta, double margin) const {
    const double offset = wrap_two_pi(theta - start);
    return offset > margin && offset < width() - margin;
}

FeasibilityReport feasibility_conditions(const SpringLengthProfile& profile,
                                         std::span<const double> singular_thetas,
                                         Direction direction) {
    FeasibilityReport report;
    report.transition_count = profile.transition_count();
    report.condition1 = report.transition_count == 2;

    const auto& ext = profile.extrema;
    for (std::size_t k = 0; k < ext.size() && ext.size() >= 2; ++k) {
        const Extremum& from = ext[k];
        const Extremum& to = ext[(k + 1) % ext.size()];
        AngleInterval arc{from.theta, to.theta};
        if (arc.end <= arc.start) arc.end += kTwoPi;
        // A max-to-min arc shortens the spring as θ grows.
        const bool shortens_ccw = from.kind == ExtremumKind::Max;
        const bool releases = direction == Direction::CCW ? shortens_ccw : !shortens_ccw;
        (releases ? report.release_intervals : report.storage_intervals).push_back(arc);
    }

    report.condition2 = !singular_thetas.empty();
    for (double theta : singular_thetas) {
        const bool inside = std::any_of(
            report.release_intervals.begin(), report.release_intervals.end(),
            [&](const AngleInterval& arc) { return arc.contains(theta, kReleaseMargin); });
        report.condition2 = report.condition2 && inside;
    }
    report.ok = report.condition1 && report.condition2;
    return report;
}

}  // namespace springlink
