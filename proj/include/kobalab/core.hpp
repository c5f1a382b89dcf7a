#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace kobalab {

using Complex = std::complex<double>;

// Point of C^2. Coordinate names follow the unit-ball picture (z, w);
// when a point lives in a product domain, z is the disc factor and w the
// strip/half-plane factor.
struct Point2 {
    Complex z;
    Complex w;
};

// Inputs closer to a domain boundary than this are rejected outright:
// distances past that scale are not representable to useful accuracy.
inline constexpr double boundary_margin = 1e-14;

// A point fed to a metric/distance/membership routine lies outside the
// domain (or touches a branch cut of one of the explicit maps).
struct domain_violation : std::domain_error {
    using std::domain_error::domain_error;
};

// Adaptive quadrature ran out of subdivision budget; carries the best
// estimate assembled so far.
struct tolerance_not_met : std::runtime_error {
    double best_estimate;
    tolerance_not_met(const std::string& msg, double best)
        : std::runtime_error(msg), best_estimate(best) {}
};

// A constructive precondition failed; the message names the violated
// inequality.
struct construction_refused : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline bool is_finite(Complex v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline bool is_finite(const Point2& p) { return is_finite(p.z) && is_finite(p.w); }

inline double norm_sq(const Point2& p) { return std::norm(p.z) + std::norm(p.w); }

inline double norm2(const Point2& p) { return std::sqrt(norm_sq(p)); }

// Hermitian inner product <p,q> on C^2.
inline Complex inner(const Point2& p, const Point2& q) {
    return p.z * std::conj(q.z) + p.w * std::conj(q.w);
}

inline Point2 operator-(const Point2& a, const Point2& b) {
    return {a.z - b.z, a.w - b.w};
}

inline double dist_euclid(const Point2& a, const Point2& b) { return norm2(a - b); }

// atanh computed through log1p; keeps full relative accuracy for
// arguments up to 1 - 1e-12 and beyond.
inline double atanh_stable(double rho) {
    if (!(rho >= 0.0) || rho >= 1.0)
        throw domain_violation("atanh_stable: argument must lie in [0, 1)");
    return 0.5 * std::log1p(2.0 * rho / (1.0 - rho));
}

// atanh(rho) where one_minus_rho2 = 1 - rho^2 is supplied exactly by the
// caller (computed without cancellation).
inline double atanh_from_complement(double rho, double one_minus_rho2) {
    if (!(rho >= 0.0) || !(one_minus_rho2 > 0.0))
        throw domain_violation("atanh_from_complement: argument reaches the boundary");
    return 0.5 * std::log1p(2.0 * rho * (1.0 + rho) / one_minus_rho2);
}

// Principal square root, restricted to arguments with positive real part
// so the cut along the negative axis is never touched. Every explicit map
// in this library keeps its radicand in the right half-plane; reaching
// the cut means the input left the map's source domain.
inline Complex sqrt_right(Complex a, const char* who) {
    if (!(a.real() > 0.0))
        throw domain_violation(std::string(who) +
                               ": square-root argument left the right half-plane (branch-cut contact)");
    return std::sqrt(a);
}

inline constexpr double pi = 3.14159265358979323846;

}  // namespace kobalab
