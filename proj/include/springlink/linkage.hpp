// Position and velocity analysis of in-line slider-crank and crank-rocker
// four-bars. The crank pivot sits at the origin. A slider-crank's slider runs
// along +x; a crank-rocker's rocker pivot sits at (d, 0).
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "springlink/common.hpp"

namespace springlink {

enum class MechanismKind { SliderCrank, RockerCrank };

/// Assembly circuit of a crank-rocker. Fixed for a whole run.
enum class Branch { Open, Crossed };

struct FourBarGeometry {
    MechanismKind kind = MechanismKind::SliderCrank;
    double a = 1.0;  ///< crank
    double b = 6.0;  ///< coupler
    double c = 0.0;  ///< rocker (crank-rocker only)
    double d = 0.0;  ///< ground (crank-rocker only)

    static FourBarGeometry slider_crank(double a, double b);
    static FourBarGeometry rocker_crank(double a, double b, double c, double d);

    /// Multiplies every link length by `factor`.
    FourBarGeometry scaled(double factor) const;
};

/// Spring attachment on the extended coupler: an arm of length `l_ext` from
/// the crank-side joint A, rotated by `beta` counterclockwise from the A->B
/// axis.
struct CouplerAttachment {
    double l_ext = 0.0;
    double beta = 0.0;

    /// Validates l_ext >= 0 and wraps beta into [0, 2π).
    static CouplerAttachment make(double l_ext, double beta);
};

struct MechanismState {
    double theta = 0.0;
    double u = 0.0;          ///< slider position, or rocker angle φ
    double du_dtheta = 0.0;  ///< velocity ratio
    double coupler_angle = 0.0;
    Vec2 attachment_point;
    Vec2 attachment_velocity;  ///< d(point)/dθ
};

struct RockerAngles {
    double phi = 0.0;  ///< rocker angle in (-π, π]
    double coupler_angle = 0.0;
};

struct CouplerSample {
    double theta = 0.0;
    Vec2 point;
};

/// Path of a coupler point over one revolution on θ_i = 2π·i/N, i < N.
struct CouplerCurve {
    std::vector<CouplerSample> samples;
    bool closed = false;  ///< P(2π) matches P(0) within 1e-9·a
    double scale = 1.0;   ///< crank length a
};

struct GrashofResult {
    bool valid = false;
    std::string reason;
    explicit operator bool() const { return valid; }
};

/// θ_i = 2π·i/N for i in [0, N).
std::vector<double> uniform_theta_grid(std::size_t n);

GrashofResult grashof_check(const FourBarGeometry& geom);

/// Throws GeometryError unless lengths are positive and the mechanism admits a
/// fully revolving crank.
void require_valid(const FourBarGeometry& geom);

double slider_position(const FourBarGeometry& geom, double theta);
double slider_velocity_ratio(const FourBarGeometry& geom, double theta);

RockerAngles rocker_state(const FourBarGeometry& geom, double theta, Branch branch);
double rocker_velocity_ratio(const FourBarGeometry& geom, double theta, Branch branch);

/// Input coordinate u(θ): slider position or rocker angle.
double input_position(const FourBarGeometry& geom, double theta, Branch branch = Branch::Open);
/// du/dθ for either family.
double input_velocity_ratio(const FourBarGeometry& geom, double theta,
                            Branch branch = Branch::Open);

Vec2 crank_joint(const FourBarGeometry& geom, double theta);
/// Joint B between coupler and slider/rocker.
Vec2 output_joint(const FourBarGeometry& geom, double theta, Branch branch = Branch::Open);

Vec2 coupler_point(const FourBarGeometry& geom, const CouplerAttachment& attach, double theta,
                   Branch branch = Branch::Open);

MechanismState mechanism_state(const FourBarGeometry& geom, const CouplerAttachment& attach,
                               double theta, Branch branch = Branch::Open);

/// Largest violation of the loop-closure constraints at θ.
double loop_closure_residual(const FourBarGeometry& geom, double theta,
                             Branch branch = Branch::Open);

CouplerCurve coupler_curve(const FourBarGeometry& geom, const CouplerAttachment& attach,
                           Branch branch, std::size_t n);

/// Crank angles in [0, 2π) where du/dθ = 0. Brackets sign changes on a grid of
/// `grid` points and bisects to 1e-10 rad. Throws RootError unless exactly two
/// roots exist.
std::vector<double> singular_angles(const FourBarGeometry& geom, Branch branch = Branch::Open,
                                    std::size_t grid = 3600);

}  // namespace springlink
