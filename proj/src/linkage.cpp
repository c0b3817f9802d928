#include "springlink/linkage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "springlink/numeric.hpp"

namespace springlink {

namespace {

// Everything needed to place and differentiate a coupler point at one angle.
struct CouplerKinematics {
    double u = 0.0;
    double du = 0.0;
    Vec2 joint_a;
    Vec2 joint_a_rate;
    double gamma = 0.0;       // coupler axis angle, A toward B
    double gamma_rate = 0.0;  // dγ/dθ
};

CouplerKinematics slider_kinematics(const FourBarGeometry& g, double theta) {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double root = std::sqrt(g.b * g.b - g.a * g.a * s * s);
    CouplerKinematics k;
    k.u = g.a * c + root;
    k.du = -g.a * s - g.a * g.a * s * c / root;
    k.joint_a = {g.a * c, g.a * s};
    k.joint_a_rate = {-g.a * s, g.a * c};
    k.gamma = std::atan2(-g.a * s, root);
    k.gamma_rate = -g.a * c / root;
    return k;
}

CouplerKinematics rocker_kinematics(const FourBarGeometry& g, double theta, Branch branch) {
    const Vec2 a_joint{g.a * std::cos(theta), g.a * std::sin(theta)};
    const Vec2 pivot{g.d, 0.0};
    const Vec2 diag = a_joint - pivot;
    const double diag_len = diag.norm();
    const double cos_psi = (g.c * g.c + diag_len * diag_len - g.b * g.b) / (2.0 * g.c * diag_len);
    if (!(std::abs(cos_psi) <= 1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "coupler/rocker triangle cannot close at theta=" << theta << " (diagonal "
            << diag_len << ")";
        throw AssemblyError(msg.str());
    }
    const double psi = std::acos(std::clamp(cos_psi, -1.0, 1.0));
    const double alpha = std::atan2(diag.y, diag.x);
    const double phi = branch == Branch::Open ? alpha - psi : alpha + psi;
    const Vec2 b_joint = pivot + unit_from_angle(phi) * g.c;
    const double gamma = std::atan2(b_joint.y - a_joint.y, b_joint.x - a_joint.x);

    const double transmission = std::sin(phi - gamma);
    if (std::abs(transmission) < 1e-14) {
        throw AssemblyError("coupler and rocker are collinear; velocity ratio undefined");
    }
    CouplerKinematics k;
    k.u = wrap_pi(phi);
    k.du = g.a * std::sin(theta - gamma) / (g.c * transmission);
    k.joint_a = a_joint;
    k.joint_a_rate = {-a_joint.y, a_joint.x};
    k.gamma = gamma;
    k.gamma_rate = g.a * std::sin(theta - phi) / (g.b * transmission);
    return k;
}

void require_positive(const FourBarGeometry& g) {
    const bool rocker = g.kind == MechanismKind::RockerCrank;
    if (!(g.a > 0.0) || !(g.b > 0.0) || (rocker && (!(g.c > 0.0) || !(g.d > 0.0)))) {
        throw GeometryError("link lengths must be strictly positive");
    }
}

CouplerKinematics kinematics(const FourBarGeometry& g, double theta, Branch branch) {
    if (g.kind == MechanismKind::SliderCrank) {
        require_positive(g);
        if (!(g.b > g.a)) throw GeometryError("slider-crank requires b > a");
        return slider_kinematics(g, theta);
    }
    require_positive(g);
    return rocker_kinematics(g, theta, branch);
}

}  // namespace

FourBarGeometry FourBarGeometry::slider_crank(double a, double b) {
    return {MechanismKind::SliderCrank, a, b, 0.0, 0.0};
}

FourBarGeometry FourBarGeometry::rocker_crank(double a, double b, double c, double d) {
    return {MechanismKind::RockerCrank, a, b, c, d};
}

FourBarGeometry FourBarGeometry::scaled(double factor) const {
    return {kind, a * factor, b * factor, c * factor, d * factor};
}

CouplerAttachment CouplerAttachment::make(double l_ext, double beta) {
    if (!(l_ext >= 0.0) || !std::isfinite(l_ext)) {
        throw GeometryError("attachment extension must be finite and non-negative");
    }
    if (!std::isfinite(beta)) throw GeometryError("attachment angle must be finite");
    return {l_ext, wrap_two_pi(beta)};
}

std::vector<double> uniform_theta_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    }
    return grid;
}

GrashofResult grashof_check(const FourBarGeometry& g) {
    if (g.kind == MechanismKind::SliderCrank) {
        if (!(g.a > 0.0) || !(g.b > 0.0)) return {false, "link lengths must be positive"};
        if (!(g.b > g.a)) return {false, "coupler must be longer than crank (b > a)"};
        return {true, ""};
    }
    if (!(g.a > 0.0) || !(g.b > 0.0) || !(g.c > 0.0) || !(g.d > 0.0)) {
        return {false, "link lengths must be positive"};
    }
    if (!(g.a < g.b && g.a < g.c && g.a < g.d)) {
        return {false, "crank is not strictly the shortest link"};
    }
    const double longest = std::max({g.b, g.c, g.d});
    const double others = g.b + g.c + g.d - longest;
    if (!(g.a + longest < others)) {
        std::ostringstream msg;
        msg << "shortest + longest (" << g.a + longest << ") is not less than the sum of the "
            << "remaining links (" << others << ")";
        return {false, msg.str()};
    }
    return {true, ""};
}

void require_valid(const FourBarGeometry& geom) {
    if (auto check = grashof_check(geom); !check) throw GeometryError(check.reason);
}

double slider_position(const FourBarGeometry& geom, double theta) {
    if (geom.kind != MechanismKind::SliderCrank) throw GeometryError("not a slider-crank");
    return kinematics(geom, theta, Branch::Open).u;
}

double slider_velocity_ratio(const FourBarGeometry& geom, double theta) {
    if (geom.kind != MechanismKind::SliderCrank) throw GeometryError("not a slider-crank");
    return kinematics(geom, theta, Branch::Open).du;
}

RockerAngles rocker_state(const FourBarGeometry& geom, double theta, Branch branch) {
    if (geom.kind != MechanismKind::RockerCrank) throw GeometryError("not a crank-rocker");
    const auto k = kinematics(geom, theta, branch);
    return {k.u, k.gamma};
}

double rocker_velocity_ratio(const FourBarGeometry& geom, double theta, Branch branch) {
    if (geom.kind != MechanismKind::RockerCrank) throw GeometryError("not a crank-rocker");
    return kinematics(geom, theta, branch).du;
}

double input_position(const FourBarGeometry& geom, double theta, Branch branch) {
    return kinematics(geom, theta, branch).u;
}

double input_velocity_ratio(const FourBarGeometry& geom, double theta, Branch branch) {
    return kinematics(geom, theta, branch).du;
}

Vec2 crank_joint(const FourBarGeometry& geom, double theta) {
    return {geom.a * std::cos(theta), geom.a * std::sin(theta)};
}

Vec2 output_joint(const FourBarGeometry& geom, double theta, Branch branch) {
    const auto k = kinematics(geom, theta, branch);
    if (geom.kind == MechanismKind::SliderCrank) return {k.u, 0.0};
    return Vec2{geom.d, 0.0} + unit_from_angle(k.u) * geom.c;
}

Vec2 coupler_point(const FourBarGeometry& geom, const CouplerAttachment& attach, double theta,
                   Branch branch) {
    return mechanism_state(geom, attach, theta, branch).attachment_point;
}

MechanismState mechanism_state(const FourBarGeometry& geom, const CouplerAttachment& attach,
                               double theta, Branch branch) {
    const auto k = kinematics(geom, theta, branch);
    const Vec2 arm = unit_from_angle(k.gamma + attach.beta);
    MechanismState s;
    s.theta = theta;
    s.u = k.u;
    s.du_dtheta = k.du;
    s.coupler_angle = k.gamma;
    s.attachment_point = k.joint_a + arm * attach.l_ext;
    s.attachment_velocity = k.joint_a_rate + arm.perp() * (attach.l_ext * k.gamma_rate);
    return s;
}

double loop_closure_residual(const FourBarGeometry& geom, double theta, Branch branch) {
    const Vec2 a_joint = crank_joint(geom, theta);
    const Vec2 b_joint = output_joint(geom, theta, branch);
    double residual = std::abs((b_joint - a_joint).norm() - geom.b);
    if (geom.kind == MechanismKind::SliderCrank) {
        residual = std::max(residual, std::abs(b_joint.y));
    } else {
        residual = std::max(residual, std::abs((b_joint - Vec2{geom.d, 0.0}).norm() - geom.c));
    }
    return residual;
}

CouplerCurve coupler_curve(const FourBarGeometry& geom, const CouplerAttachment& attach,
                           Branch branch, std::size_t n) {
    if (n < 16) throw GeometryError("coupler curve needs at least 16 samples");
    CouplerCurve curve;
    curve.scale = geom.a;
    curve.samples.reserve(n);
    for (double theta : uniform_theta_grid(n)) {
        curve.samples.push_back({theta, coupler_point(geom, attach, theta, branch)});
    }
    const Vec2 end = coupler_point(geom, attach, kTwoPi, branch);
    curve.closed = (end - curve.samples.front().point).norm() <= 1e-9 * geom.a;
    return curve;
}

std::vector<double> singular_angles(const FourBarGeometry& geom, Branch branch, std::size_t grid) {
    require_valid(geom);
    auto ratio = [&](double theta) { return input_velocity_ratio(geom, theta, branch); };
    auto roots = numeric::periodic_roots(ratio, grid, 1e-10, 0.0);
    if (roots.size() != 2) {
        std::ostringstream msg;
        msg << "expected 2 singular configurations, found " << roots.size();
        throw RootError(msg.str());
    }
    return roots;
}

}  // namespace springlink
