#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <variant>
#include <vector>

#include "kobalab/core.hpp"
#include "kobalab/hfamily.hpp"
#include "kobalab/maps.hpp"

namespace kobalab {

// ---------------------------------------------------------------------------
// Hyperbolic (Kobayashi/Poincare) metrics and distances on the model domains.
//
// Normalization: the disc density is |v|/(1-|z|^2), so k_D(0,t) = atanh(t)
// and the half-plane distance between reals 0 < a < b is (1/2)log(b/a).
// Distances are computed through cancellation-free complements of the
// pseudo-distance, so they stay accurate within 1e-12 of the boundary.
// ---------------------------------------------------------------------------

// --- infinitesimal metrics -------------------------------------------------

inline double metric_disc(double r, Complex z, Complex v) {
    if (!(r > 0.0) || r > 1.0)
        throw std::invalid_argument("metric_disc: radius must lie in (0, 1]");
    double az = std::abs(z);
    if (r - az < boundary_margin)
        throw domain_violation("metric_disc: point outside the disc (or too close to its edge)");
    return r * std::abs(v) / ((r - az) * (r + az));
}

inline double metric_halfplane(Complex z, Complex v) {
    if (z.real() < boundary_margin)
        throw domain_violation("metric_halfplane: point outside the right half-plane");
    return std::abs(v) / (2.0 * z.real());
}

// strip { |Im| < R }: density (pi/(4R)) / cos(pi*Im z/(2R))
inline double metric_strip(double R, Complex z, Complex v) {
    if (!(R > 0.0)) throw std::invalid_argument("metric_strip: half-width must be positive");
    if (R - std::abs(z.imag()) < boundary_margin)
        throw domain_violation("metric_strip: point outside the strip");
    return pi / (4.0 * R) * std::abs(v) / std::cos(pi * z.imag() / (2.0 * R));
}

// half-strip { |Im| < R, Re > M }, via its conformal model
// w -> sinh(pi*(w-M)/(2R)) onto the right half-plane
inline double metric_halfstrip(double R, double M, Complex z, Complex v) {
    if (!(R > 0.0) || M < 0.0)
        throw std::invalid_argument("metric_halfstrip: need half-width > 0 and offset >= 0");
    if (R - std::abs(z.imag()) < boundary_margin || z.real() - M < boundary_margin)
        throw domain_violation("metric_halfstrip: point outside the half-strip");
    Complex u = pi * (z - M) / (2.0 * R);
    Complex m = std::sinh(u);
    Complex dm = pi / (2.0 * R) * std::cosh(u);
    return std::abs(dm * v) / (2.0 * m.real());
}

// unit ball of C^2: kappa(p;v)^2 = ((1-|p|^2)|v|^2 + |<v,p>|^2)/(1-|p|^2)^2
inline double metric_ball(const Point2& p, const Point2& v) {
    double g = 1.0 - norm_sq(p);
    if (g < boundary_margin) throw domain_violation("metric_ball: point outside the unit ball");
    double num = g * norm_sq(v) + std::norm(inner(v, p));
    return std::sqrt(num) / g;
}

// --- distances -------------------------------------------------------------

inline double dist_disc(double r, Complex a, Complex b) {
    if (!(r > 0.0) || r > 1.0)
        throw std::invalid_argument("dist_disc: radius must lie in (0, 1]");
    double aa = std::abs(a), ab = std::abs(b);
    if (r - aa < boundary_margin || r - ab < boundary_margin)
        throw domain_violation("dist_disc: point outside the disc (or too close to its edge)");
    if (a == b) return 0.0;
    double den2 = std::norm(r * r - std::conj(a) * b);
    double num = r * std::abs(a - b);
    double rho = num / std::sqrt(den2);
    // 1 - rho^2 = (r^2-|a|^2)(r^2-|b|^2)/|r^2 - conj(a) b|^2, no cancellation
    double comp = (r - aa) * (r + aa) * (r - ab) * (r + ab) / den2;
    return atanh_from_complement(rho, comp);
}

inline double dist_halfplane(Complex a, Complex b) {
    if (a.real() < boundary_margin || b.real() < boundary_margin)
        throw domain_violation("dist_halfplane: point outside the right half-plane");
    if (a == b) return 0.0;
    double den2 = std::norm(a + std::conj(b));
    double rho = std::abs(a - b) / std::sqrt(den2);
    // |a+conj(b)|^2 - |a-b|^2 = 4 Re(a) Re(b)
    double comp = 4.0 * a.real() * b.real() / den2;
    return atanh_from_complement(rho, comp);
}

inline double dist_strip(double R, Complex a, Complex b) {
    if (!(R > 0.0)) throw std::invalid_argument("dist_strip: half-width must be positive");
    if (R - std::abs(a.imag()) < boundary_margin || R - std::abs(b.imag()) < boundary_margin)
        throw domain_violation("dist_strip: point outside the strip");
    // translation invariance: center the real parts before exponentiating
    double x0 = 0.5 * (a.real() + b.real());
    double spread = pi * std::abs(a.real() - b.real()) / (4.0 * R);
    if (spread > 300.0) return spread;  // asymptotic regime, relative error < 1e-260
    Complex ea = std::exp(pi * (a - x0) / (2.0 * R));
    Complex eb = std::exp(pi * (b - x0) / (2.0 * R));
    return dist_halfplane(ea, eb);
}

inline double dist_halfstrip(double R, double M, Complex a, Complex b) {
    if (!(R > 0.0) || M < 0.0)
        throw std::invalid_argument("dist_halfstrip: need half-width > 0 and offset >= 0");
    auto inside = [&](Complex z) {
        return R - std::abs(z.imag()) >= boundary_margin && z.real() - M >= boundary_margin;
    };
    if (!inside(a) || !inside(b))
        throw domain_violation("dist_halfstrip: point outside the half-strip");
    double ra = pi * (a.real() - M) / (2.0 * R), rb = pi * (b.real() - M) / (2.0 * R);
    if (std::min(ra, rb) > 20.0) {
        // deep inside, the half-strip is indistinguishable from the full strip
        return dist_strip(R, a - M, b - M);
    }
    Complex ma = std::sinh(pi * (a - M) / (2.0 * R));
    Complex mb = std::sinh(pi * (b - M) / (2.0 * R));
    return dist_halfplane(ma, mb);
}

inline double dist_ball(const Point2& p, const Point2& q) {
    double gp = 1.0 - norm_sq(p), gq = 1.0 - norm_sq(q);
    if (gp < boundary_margin || gq < boundary_margin)
        throw domain_violation("dist_ball: point outside the unit ball");
    double c2 = std::norm(1.0 - inner(p, q));
    double ratio = gp * gq / c2;
    double s = std::sqrt(std::max(0.0, 1.0 - ratio));
    if (s >= 1.0) throw domain_violation("dist_ball: pseudo-distance reached 1");
    return atanh_stable(s);
}

// Ball distance parametrized by the boundary gaps gz = 1 - z of the first
// coordinates. Orbits that crawl toward (1,0) are iterated in these
// coordinates, which keep 1-|z|^2 to full relative precision.
inline double dist_ball_gaps(Complex gz1, Complex w1, Complex gz2, Complex w2) {
    double gp = 2.0 * gz1.real() - std::norm(gz1) - std::norm(w1);
    double gq = 2.0 * gz2.real() - std::norm(gz2) - std::norm(w2);
    if (gp < 0.0 || gq < 0.0) throw domain_violation("dist_ball_gaps: point outside the unit ball");
    Complex c = gz1 + std::conj(gz2) - gz1 * std::conj(gz2) - w1 * std::conj(w2);
    double ratio = gp * gq / std::norm(c);
    double s = std::sqrt(std::max(0.0, 1.0 - ratio));
    if (s >= 1.0) throw domain_violation("dist_ball_gaps: pseudo-distance reached 1");
    return atanh_stable(s);
}

// product distance/metric: the max of the factors
inline double dist_product(double dL, double dR) {
    if (!(dL >= 0.0) || !(dR >= 0.0))
        throw std::invalid_argument("dist_product: factor distances must be nonnegative");
    return std::max(dL, dR);
}

// --- domain descriptors ----------------------------------------------------

struct DomainDescriptor;

struct Disc {
    double radius = 1.0;
};
struct HalfPlane {};
struct Strip {
    double half_width = 1.0;
};
struct HalfStrip {
    double half_width = 1.0;
    double offset = 0.0;
};
struct Ball2 {};
// image of the unit ball under the embedding phi_h, carrying the
// pulled-back ball distance
struct Pullback {
    HFamily h;
};
struct Product {
    std::shared_ptr<const DomainDescriptor> left;
    std::shared_ptr<const DomainDescriptor> right;
};

struct DomainDescriptor {
    std::variant<Disc, HalfPlane, Strip, HalfStrip, Ball2, Pullback, Product> v;
};

inline DomainDescriptor make_disc(double r) { return {Disc{r}}; }
inline DomainDescriptor make_halfplane() { return {HalfPlane{}}; }
inline DomainDescriptor make_strip(double R) { return {Strip{R}}; }
inline DomainDescriptor make_halfstrip(double R, double M) { return {HalfStrip{R, M}}; }
inline DomainDescriptor make_ball2() { return {Ball2{}}; }
inline DomainDescriptor make_pullback(const HFamily& h) { return {Pullback{h}}; }

inline DomainDescriptor make_product(DomainDescriptor left, DomainDescriptor right) {
    if (std::holds_alternative<Ball2>(left.v) || std::holds_alternative<Pullback>(left.v) ||
        std::holds_alternative<Product>(left.v) || std::holds_alternative<Ball2>(right.v) ||
        std::holds_alternative<Pullback>(right.v) || std::holds_alternative<Product>(right.v))
        throw std::invalid_argument("make_product: factors must be planar domains");
    return {Product{std::make_shared<DomainDescriptor>(std::move(left)),
                    std::make_shared<DomainDescriptor>(std::move(right))}};
}

// the D x H bidisc, the ambient of every embedded picture
inline DomainDescriptor make_bidisc() { return make_product(make_disc(1.0), make_halfplane()); }

namespace detail {

inline bool planar_contains(const DomainDescriptor& d, Complex z) {
    return std::visit(
        [&](const auto& dom) -> bool {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return dom.radius - std::abs(z) >= boundary_margin;
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return z.real() >= boundary_margin;
            } else if constexpr (std::is_same_v<T, Strip>) {
                return dom.half_width - std::abs(z.imag()) >= boundary_margin;
            } else if constexpr (std::is_same_v<T, HalfStrip>) {
                return dom.half_width - std::abs(z.imag()) >= boundary_margin &&
                       z.real() - dom.offset >= boundary_margin;
            } else {
                throw std::invalid_argument("planar_contains: descriptor is not planar");
            }
        },
        d.v);
}

inline double planar_metric(const DomainDescriptor& d, Complex z, Complex v) {
    return std::visit(
        [&](const auto& dom) -> double {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return metric_disc(dom.radius, z, v);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return metric_halfplane(z, v);
            } else if constexpr (std::is_same_v<T, Strip>) {
                return metric_strip(dom.half_width, z, v);
            } else if constexpr (std::is_same_v<T, HalfStrip>) {
                return metric_halfstrip(dom.half_width, dom.offset, z, v);
            } else {
                throw std::invalid_argument("planar_metric: descriptor is not planar");
            }
        },
        d.v);
}

inline double planar_distance(const DomainDescriptor& d, Complex a, Complex b) {
    return std::visit(
        [&](const auto& dom) -> double {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Disc>) {
                return dist_disc(dom.radius, a, b);
            } else if constexpr (std::is_same_v<T, HalfPlane>) {
                return dist_halfplane(a, b);
            } else if constexpr (std::is_same_v<T, Strip>) {
                return dist_strip(dom.half_width, a, b);
            } else if constexpr (std::is_same_v<T, HalfStrip>) {
                return dist_halfstrip(dom.half_width, dom.offset, a, b);
            } else {
                throw std::invalid_argument("planar_distance: descriptor is not planar");
            }
        },
        d.v);
}

}  // namespace detail

inline double dist_pullback(const HFamily& h, const Point2& p, const Point2& q);

// membership with the standard boundary margin; planar descriptors read
// the first coordinate only
inline bool contains(const DomainDescriptor& d, const Point2& p) {
    if (!is_finite(p)) return false;
    return std::visit(
        [&](const auto& dom) -> bool {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Ball2>) {
                return 1.0 - norm_sq(p) >= boundary_margin;
            } else if constexpr (std::is_same_v<T, Pullback>) {
                if (!dom.h.in_image(p.w)) return false;
                Complex z = dom.h.inverse(p.w);
                return 1.0 - (std::norm(z) + 2.0 * std::norm(p.z) * std::abs(1.0 - z)) >=
                       boundary_margin;
            } else if constexpr (std::is_same_v<T, Product>) {
                return detail::planar_contains(*dom.left, p.z) &&
                       detail::planar_contains(*dom.right, p.w);
            } else {
                return detail::planar_contains(d, p.z);
            }
        },
        d.v);
}

inline double metric(const DomainDescriptor& d, const Point2& p, const Point2& v) {
    return std::visit(
        [&](const auto& dom) -> double {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Ball2>) {
                return metric_ball(p, v);
            } else if constexpr (std::is_same_v<T, Pullback>) {
                return metric_ball(psi_apply(dom.h, p), psi_differential(dom.h, p, v));
            } else if constexpr (std::is_same_v<T, Product>) {
                return dist_product(detail::planar_metric(*dom.left, p.z, v.z),
                                    detail::planar_metric(*dom.right, p.w, v.w));
            } else {
                return detail::planar_metric(d, p.z, v.z);
            }
        },
        d.v);
}

inline double distance(const DomainDescriptor& d, const Point2& p, const Point2& q) {
    return std::visit(
        [&](const auto& dom) -> double {
            using T = std::decay_t<decltype(dom)>;
            if constexpr (std::is_same_v<T, Ball2>) {
                return dist_ball(p, q);
            } else if constexpr (std::is_same_v<T, Pullback>) {
                return dist_pullback(dom.h, p, q);
            } else if constexpr (std::is_same_v<T, Product>) {
                return dist_product(detail::planar_distance(*dom.left, p.z, q.z),
                                    detail::planar_distance(*dom.right, p.w, q.w));
            } else {
                return detail::planar_distance(d, p.z, q.z);
            }
        },
        d.v);
}

// distance on the embedded ball: pull both points back and measure there
inline double dist_pullback(const HFamily& h, const Point2& p, const Point2& q) {
    DomainDescriptor omega = make_pullback(h);
    if (!contains(omega, p) || !contains(omega, q))
        throw domain_violation("dist_pullback: point outside the embedded ball");
    return dist_ball(psi_apply(h, p), psi_apply(h, q));
}

// --- curves and hyperbolic length -------------------------------------------

// Parametrized curve with an analytic derivative supplied alongside the
// evaluator; the two must agree with centered differences to 1e-6
// relative on interior points.
struct Curve {
    double t_begin = 0.0;
    double t_end = 1.0;
    std::function<Point2(double)> position;
    std::function<Point2(double)> velocity;
};

// worst relative disagreement between velocity() and a centered
// difference of position(), over interior sample points
inline double curve_derivative_max_relerr(const Curve& c, int samples = 64) {
    double worst = 0.0;
    double span = c.t_end - c.t_begin;
    double h = span * 1e-6;
    for (int i = 1; i < samples; ++i) {
        double t = c.t_begin + span * i / samples;
        Point2 fd{(c.position(t + h).z - c.position(t - h).z) / (2.0 * h),
                  (c.position(t + h).w - c.position(t - h).w) / (2.0 * h)};
        Point2 an = c.velocity(t);
        double scale = std::max(norm2(an), 1e-12);
        worst = std::max(worst, dist_euclid(fd, an) / scale);
    }
    return worst;
}

namespace detail {

struct SimpsonPanel {
    double a, b;
    double fa, fm, fb;
    double estimate;
};

inline double simpson_estimate(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace detail

inline constexpr int quadrature_panel_cap = 1 << 20;

// Adaptive-Simpson value of the integral of kappa(gamma(u); gamma'(u))
// over [s,t], with estimated absolute error <= tol. Throws
// domain_violation if the curve leaves the domain at a sample node and
// tolerance_not_met (carrying the best estimate) if the panel budget runs
// out.
inline double hyperbolic_length(const Curve& curve, const DomainDescriptor& dom, double s, double t,
                                double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("hyperbolic_length: tolerance must be positive");
    if (!(s >= curve.t_begin - 1e-12) || !(t <= curve.t_end + 1e-12) || !(s <= t))
        throw std::invalid_argument("hyperbolic_length: bad sub-interval");
    if (s == t) return 0.0;
    auto f = [&](double u) -> double {
        Point2 p = curve.position(u);
        if (!contains(dom, p)) throw domain_violation("hyperbolic_length: curve exits the domain");
        return metric(dom, p, curve.velocity(u));
    };

    std::vector<detail::SimpsonPanel> stack;
    std::vector<std::pair<detail::SimpsonPanel, double>> pending;  // panel + its tol
    double fa = f(s), fm = f(0.5 * (s + t)), fb = f(t);
    detail::SimpsonPanel root{s, t, fa, fm, fb, detail::simpson_estimate(s, t, fa, fm, fb)};
    pending.push_back({root, tol});

    double total = 0.0;
    int panels = 0;
    while (!pending.empty()) {
        auto [p, ptol] = pending.back();
        pending.pop_back();
        if (++panels > quadrature_panel_cap) {
            double best = total + p.estimate;
            for (const auto& q : pending) best += q.first.estimate;
            throw tolerance_not_met("hyperbolic_length: panel budget exhausted", best);
        }
        double m = 0.5 * (p.a + p.b);
        double flm = f(0.5 * (p.a + m)), frm = f(0.5 * (m + p.b));
        double left = detail::simpson_estimate(p.a, m, p.fa, flm, p.fm);
        double right = detail::simpson_estimate(m, p.b, p.fm, frm, p.fb);
        double err = left + right - p.estimate;
        if (std::abs(err) <= 15.0 * ptol) {
            total += left + right + err / 15.0;
        } else {
            pending.push_back({{p.a, m, p.fa, flm, p.fm, left}, 0.5 * ptol});
            pending.push_back({{m, p.b, p.fm, frm, p.fb, right}, 0.5 * ptol});
        }
    }
    return total;
}

inline double hyperbolic_length(const Curve& curve, const DomainDescriptor& dom, double tol) {
    return hyperbolic_length(curve, dom, curve.t_begin, curve.t_end, tol);
}

}  // namespace kobalab
