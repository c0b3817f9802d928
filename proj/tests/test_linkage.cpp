#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "springlink/linkage.hpp"

using namespace springlink;

namespace {

const FourBarGeometry kSlider = FourBarGeometry::slider_crank(1.0, 6.0);
const FourBarGeometry kRocker = FourBarGeometry::rocker_crank(1.0, 6.0, 2.0, 6.2);

bool near_singular(double theta, const std::vector<double>& singular, double window) {
    for (double s : singular) {
        const double d = std::abs(wrap_pi(theta - s));
        if (d < window) return true;
    }
    return false;
}

double central(auto f, double x, double h = 1e-5) { return (f(x + h) - f(x - h)) / (2.0 * h); }

void expect_rel(double analytic, double numeric, double rel, double floor = 1e-9) {
    EXPECT_LE(std::abs(analytic - numeric), rel * std::max(std::abs(numeric), floor))
        << analytic << " vs " << numeric;
}

}  // namespace

TEST(Slider, DeadCentresAtZeroAndPi) {
    const auto roots = singular_angles(kSlider);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_NEAR(roots[0], 0.0, 1e-10);
    EXPECT_NEAR(roots[1], kPi, 1e-10);
}

TEST(Slider, StrokeIsTwiceCrank) {
    for (double b : {1.5, 3.0, 6.0, 10.0}) {
        const auto g = FourBarGeometry::slider_crank(2.0, 2.0 * b);
        EXPECT_NEAR(slider_position(g, 0.0) - slider_position(g, kPi), 4.0, 1e-10 * 2.0);
    }
}

TEST(Slider, EvenPositionOddVelocity) {
    for (double t : uniform_theta_grid(720)) {
        EXPECT_NEAR(slider_position(kSlider, t), slider_position(kSlider, -t), 1e-12);
        EXPECT_NEAR(slider_velocity_ratio(kSlider, -t), -slider_velocity_ratio(kSlider, t), 1e-12);
    }
}

TEST(Slider, VelocityMatchesFiniteDifference) {
    const auto singular = singular_angles(kSlider);
    for (double t : uniform_theta_grid(720)) {
        if (near_singular(t, singular, 1e-3)) continue;
        expect_rel(slider_velocity_ratio(kSlider, t),
                   central([](double x) { return slider_position(kSlider, x); }, t), 1e-6);
    }
}

TEST(Rocker, VelocityMatchesFiniteDifference) {
    const auto singular = singular_angles(kRocker);
    for (double t : uniform_theta_grid(720)) {
        if (near_singular(t, singular, 1e-3)) continue;
        expect_rel(rocker_velocity_ratio(kRocker, t, Branch::Open),
                   central([](double x) { return rocker_state(kRocker, x, Branch::Open).phi; }, t),
                   1e-6);
    }
}

TEST(Rocker, SingularAnglesZeroVelocityAndGridStable) {
    const auto coarse = singular_angles(kRocker, Branch::Open, 3600);
    const auto fine = singular_angles(kRocker, Branch::Open, 7200);
    ASSERT_EQ(coarse.size(), 2u);
    ASSERT_EQ(fine.size(), 2u);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LT(std::abs(rocker_velocity_ratio(kRocker, coarse[k], Branch::Open)), 1e-9);
        EXPECT_NEAR(coarse[k], fine[k], 1e-8);
    }
}

TEST(LoopClosure, BothFamilies) {
    for (const auto& g : {kSlider, kRocker}) {
        double worst = 0.0;
        for (double t : uniform_theta_grid(3600)) worst = std::max(worst, loop_closure_residual(g, t));
        EXPECT_LT(worst, 1e-10 * g.a);
    }
}

TEST(Coupler, AttachmentVelocityMatchesFiniteDifference) {
    const auto attach = CouplerAttachment::make(4.4, kPi / 3.0);
    for (const auto& g : {kSlider, kRocker}) {
        const auto singular = singular_angles(g);
        for (double t : uniform_theta_grid(720)) {
            if (near_singular(t, singular, 1e-3)) continue;
            const auto st = mechanism_state(g, attach, t);
            const auto fx = [&](double x) { return coupler_point(g, attach, x).x; };
            const auto fy = [&](double x) { return coupler_point(g, attach, x).y; };
            EXPECT_NEAR(st.attachment_velocity.x, central(fx, t), 1e-6 * std::max(1.0, std::abs(central(fx, t))));
            EXPECT_NEAR(st.attachment_velocity.y, central(fy, t), 1e-6 * std::max(1.0, std::abs(central(fy, t))));
        }
    }
}

TEST(Coupler, AttachmentAtZeroExtensionIsCrankPin) {
    const auto attach = CouplerAttachment::make(0.0, 1.0);
    for (double t : {0.0, 0.7, 2.0, 4.5}) {
        const Vec2 p = coupler_point(kSlider, attach, t);
        EXPECT_NEAR(p.x, std::cos(t), 1e-14);
        EXPECT_NEAR(p.y, std::sin(t), 1e-14);
    }
}

TEST(Coupler, SliderPinAttachmentIsOnAxis) {
    const auto attach = CouplerAttachment::make(6.0, 0.0);
    for (double t : uniform_theta_grid(64)) {
        const Vec2 p = coupler_point(kSlider, attach, t);
        EXPECT_NEAR(p.y, 0.0, 1e-12);
        EXPECT_NEAR(p.x, slider_position(kSlider, t), 1e-12);
    }
}

TEST(Coupler, CurveClosesOverRevolution) {
    const auto attach = CouplerAttachment::make(6.0, kPi / 2.0);
    for (const auto& g : {kSlider, kRocker}) {
        const auto curve = coupler_curve(g, attach, Branch::Open, 720);
        EXPECT_TRUE(curve.closed);
        const Vec2 p0 = coupler_point(g, attach, 0.0);
        const Vec2 p1 = coupler_point(g, attach, kTwoPi);
        EXPECT_LT((p1 - p0).norm(), 1e-9);
    }
}

TEST(Grashof, MatchesPermutationBruteForce) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> len(0.2, 10.0);
    int agree = 0;
    for (int k = 0; k < 2000; ++k) {
        const double a = len(rng), b = len(rng), c = len(rng), d = len(rng);
        std::array<double, 4> links{a, b, c, d};
        std::sort(links.begin(), links.end());
        const bool brute = links[0] + links[3] < links[1] + links[2] && a == links[0];
        const bool got = static_cast<bool>(grashof_check(FourBarGeometry::rocker_crank(a, b, c, d)));
        EXPECT_EQ(got, brute) << a << " " << b << " " << c << " " << d;
        agree += got == brute;
    }
    EXPECT_EQ(agree, 2000);
}

TEST(Grashof, PaperExampleAndCrankNotShortest) {
    EXPECT_TRUE(grashof_check(kRocker));
    EXPECT_FALSE(grashof_check(FourBarGeometry::rocker_crank(1.0, 6.0, 1.0, 6.0)));
    EXPECT_FALSE(grashof_check(FourBarGeometry::rocker_crank(1.0, 2.0, 2.0, 6.2)));
}

TEST(Geometry, InvalidInputsThrow) {
    EXPECT_THROW(require_valid(FourBarGeometry::slider_crank(1.0, 1.0)), GeometryError);
    EXPECT_THROW(require_valid(FourBarGeometry::slider_crank(1.0, 0.5)), GeometryError);
    EXPECT_THROW(CouplerAttachment::make(-1.0, 0.0), GeometryError);
    EXPECT_THROW(require_valid(FourBarGeometry::rocker_crank(1.0, 2.0, 2.0, 6.2)), GeometryError);
}

TEST(Geometry, CoarseGridRejected) {
    EXPECT_ANY_THROW(coupler_curve(kSlider, CouplerAttachment::make(1.0, 0.0), Branch::Open, 8));
}
