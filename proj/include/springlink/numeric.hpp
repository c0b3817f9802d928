// Bracketing root search on periodic functions of the crank angle.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "springlink/common.hpp"

namespace springlink::numeric {

inline int sign_of(double v, double zero_tol) {
    if (v > zero_tol) return 1;
    if (v < -zero_tol) return -1;
    return 0;
}

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
    double f_lo = f(lo);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// A sign change of a periodic function between two grid angles. `to` may
/// exceed 2π when the bracket wraps.
struct SignChange {
    double from = 0.0;
    double to = 0.0;
    int sign_before = 0;  ///< sign on the `from` side
};

/// Sign changes of pre-sampled periodic values on θ_i = 2π·i/N. Samples with
/// |v| <= zero_tol carry no sign and are skipped, so a change is reported
/// between the nearest signed neighbours.
inline std::vector<SignChange> periodic_sign_changes(const std::vector<double>& values,
                                                     double zero_tol) {
    std::vector<SignChange> out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    const double step = kTwoPi / static_cast<double>(n);

    std::size_t first = n;
    for (std::size_t i = 0; i < n; ++i) {
        if (sign_of(values[i], zero_tol) != 0) {
            first = i;
            break;
        }
    }
    if (first == n) return out;

    std::size_t prev = first;
    int prev_sign = sign_of(values[first], zero_tol);
    for (std::size_t k = 1; k <= n; ++k) {
        const std::size_t idx = first + k;
        const int s = sign_of(values[idx % n], zero_tol);
        if (s == 0) continue;
        if (s != prev_sign) {
            out.push_back({step * static_cast<double>(prev), step * static_cast<double>(idx),
                           prev_sign});
        }
        prev = idx;
        prev_sign = s;
    }
    std::sort(out.begin(), out.end(), [](const SignChange& l, const SignChange& r) {
        return wrap_two_pi(l.from) < wrap_two_pi(r.from);
    });
    return out;
}

/// Refines every sign change of `f` (sampled on an N-point periodic grid) by
/// bisection. Roots are returned wrapped into [0, 2π) and sorted.
template <class F>
std::vector<double> periodic_roots(F&& f, std::size_t n, double tol, double zero_tol) {
    std::vector<double> values(n);
    const double step = kTwoPi / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = f(step * static_cast<double>(i));
    std::vector<double> roots;
    for (const auto& change : periodic_sign_changes(values, zero_tol)) {
        double root = wrap_two_pi(bisect(f, change.from, change.to, tol));
        if (kTwoPi - root < tol) root = 0.0;
        roots.push_back(root);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

/// Trapezoidal rule on a uniform periodic grid spanning one revolution.
inline double periodic_trapezoid(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * kTwoPi / static_cast<double>(values.size());
}

}  // namespace springlink::numeric
