#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kobalab/core.hpp"
#include "kobalab/domains.hpp"
#include "kobalab/metrics.hpp"

namespace kobalab {

// ---------------------------------------------------------------------------
// Quasi-geodesic construction and certification, the triangle family whose
// slimness blows up inside any domain inscribing fat products D_r x S_{R,M},
// and the four-point hyperbolicity diagnostic.
// ---------------------------------------------------------------------------

// half-strip-vs-strip comparison on the real axis: for Re s >= M + D*R the
// half-strip density is at most c times the strip density
struct ComparisonConstant {
    double c = 2.0;
    double D = 0.0;
};

// The sinh model gives the sharp real-axis constant: coth(pi(s-M)/(2R)) <= c
// exactly when s >= M + (2R/pi) arccoth(c), so D(c) = (1/pi) log((c+1)/(c-1)).
inline ComparisonConstant comparison_constant(double c) {
    if (!(c > 1.0)) throw std::invalid_argument("comparison_constant: need c > 1");
    return {c, std::log((c + 1.0) / (c - 1.0)) / pi};
}

// A curve together with the quasi-geodesic constants claimed for it and
// the ambient in which the claim is made.
struct QuasiGeodesic {
    Curve curve;
    double A = 2.0;
    double B = 0.0;
    DomainDescriptor ambient;  // where the curve provably lives (a product)
    // construction parameters (kept for reporting)
    double r = 0.0, R = 0.0, M = 0.0, c = 2.0;
    double t0 = 0.0, t1 = 0.0, a = 0.0, b = 0.0;
};

namespace detail {

inline QuasiGeodesic make_gamma(double r, double R, double M, double t0, double t1, double a,
                                double b, double c) {
    QuasiGeodesic qg;
    qg.r = r;
    qg.R = R;
    qg.M = M;
    qg.c = c;
    qg.t0 = t0;
    qg.t1 = t1;
    qg.a = a;
    qg.b = b;
    qg.ambient = make_product(make_disc(r), make_halfstrip(R, M));
    double total = dist_disc(r, t0, t1);
    qg.curve.t_begin = 0.0;
    qg.curve.t_end = 1.0;
    qg.curve.position = [=](double t) -> Point2 {
        double x = (t1 - t0) * t + t0;
        double height = (b == a) ? a : (b - a) * dist_disc(r, t0, x) / total + a;
        return {Complex(x, 0.0), Complex(height, 0.0)};
    };
    qg.curve.velocity = [=](double t) -> Point2 {
        double x = (t1 - t0) * t + t0;
        // d/dt k_{D_r}(t0, x(t)) = |t1-t0| * kappa_{D_r}(x; 1)
        double dh = (b == a) ? 0.0
                             : (b - a) / total * std::abs(t1 - t0) *
                                   metric_disc(r, Complex(x, 0.0), Complex(1.0, 0.0));
        return {Complex(t1 - t0, 0.0), Complex(dh, 0.0)};
    };
    return qg;
}

}  // namespace detail

// The product curve that climbs from (t0, a) to (t1, b) while its height
// follows the normalized disc distance from t0. Preconditions:
//   * 1/2 < r < 1 and -r'(r) <= t0 != t1 <= r'(r)
//   * b >= a >= M + D(c) R
//   * height budget: b - a <= (2R/(c pi)) k_{D_r}(t0, t1)
// Under these the curve is a (2,0)-quasi-geodesic in every domain
// sandwiched between D_r x S_{R,M} and D x H.
inline QuasiGeodesic build_gamma(double r, double R, double M, double t0, double t1, double a,
                                 double b, double c = 2.0) {
    if (!(r > 0.5) || !(r < 1.0))
        throw construction_refused("build_gamma: radius must lie in (1/2, 1)");
    if (!(R > 0.0) || M < 0.0)
        throw construction_refused("build_gamma: need half-width R > 0 and offset M >= 0");
    double rp = r_prime(r);
    if (t0 == t1 || std::abs(t0) > rp || std::abs(t1) > rp)
        throw construction_refused(
            "build_gamma: endpoints must satisfy -r'(r) <= t0 != t1 <= r'(r)");
    double D = comparison_constant(c).D;
    if (!(b >= a) || !(a >= M + D * R))
        throw construction_refused("build_gamma: heights must satisfy b >= a >= M + D(c) R");
    double budget = 2.0 * R / (c * pi) * dist_disc(r, t0, t1);
    if (b - a > budget * (1.0 + 1e-12))
        throw construction_refused(
            "build_gamma: height budget violated: b - a > (2R/(c pi)) k_{D_r}(t0, t1)");
    return detail::make_gamma(r, R, M, t0, t1, a, b, c);
}

// Same curve without the height-budget and offset checks; exists so the
// diagnostics can exhibit how the certification fails on bad parameters.
inline QuasiGeodesic build_gamma_unchecked(double r, double R, double M, double t0, double t1,
                                           double a, double b, double c = 2.0) {
    if (!(r > 0.5) || !(r < 1.0) || !(R > 0.0) || M < 0.0 || t0 == t1)
        throw construction_refused("build_gamma_unchecked: malformed parameters");
    return detail::make_gamma(r, R, M, t0, t1, a, b, c);
}

// Worst margin of the pointwise max condition along the curve: the disc
// term of the product metric minus the half-strip term, minimized over a
// parameter grid. Nonnegative exactly when the disc factor pays for the
// whole hyperbolic length.
inline double max_condition_margin(const QuasiGeodesic& qg, int u_grid = 1000) {
    if (u_grid < 2) throw std::invalid_argument("max_condition_margin: grid too small");
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= u_grid; ++i) {
        double u = double(i) / u_grid;
        Point2 p = qg.curve.position(u);
        Point2 v = qg.curve.velocity(u);
        double disc_term = metric_disc(qg.r, p.z, v.z);
        double strip_term = metric_halfstrip(qg.R, qg.M, p.w, v.w);
        worst = std::min(worst, disc_term - strip_term);
    }
    return worst;
}

struct QgSlack {
    double lower = 0.0;  // min over pairs of k(sigma(s),sigma(t)) - (|t-s|/A - B)
    double upper = 0.0;  // min over pairs of (A|t-s| + B) - k(sigma(s),sigma(t))
    bool certified() const { return lower >= 0.0 && upper >= 0.0; }
};

// Certifies the two-sided quasi-geodesic bounds after reparametrizing by
// hyperbolic arc length in the given ambient: cumulative lengths are
// computed by adaptive quadrature at the grid nodes and every node pair
// is checked against the ambient distance.
inline QgSlack verify_quasi_geodesic(const QuasiGeodesic& qg, const DomainDescriptor& ambient,
                                     int pair_grid = 50, double quad_tol = 1e-9) {
    if (pair_grid < 2) throw std::invalid_argument("verify_quasi_geodesic: grid too small");
    std::vector<double> params(pair_grid + 1), arclen(pair_grid + 1, 0.0);
    std::vector<Point2> pts(pair_grid + 1);
    double span = qg.curve.t_end - qg.curve.t_begin;
    for (int i = 0; i <= pair_grid; ++i) {
        params[i] = qg.curve.t_begin + span * i / pair_grid;
        pts[i] = qg.curve.position(params[i]);
    }
    for (int i = 1; i <= pair_grid; ++i)
        arclen[i] =
            arclen[i - 1] + hyperbolic_length(qg.curve, ambient, params[i - 1], params[i], quad_tol);

    QgSlack slack{std::numeric_limits<double>::infinity(),
                  std::numeric_limits<double>::infinity()};
    for (int i = 0; i <= pair_grid; ++i) {
        for (int j = i + 1; j <= pair_grid; ++j) {
            double k = distance(ambient, pts[i], pts[j]);
            double ds = arclen[j] - arclen[i];
            slack.lower = std::min(slack.lower, k - (ds / qg.A - qg.B));
            slack.upper = std::min(slack.upper, (qg.A * ds + qg.B) - k);
        }
    }
    return slack;
}

// --- the slim-triangle family ------------------------------------------------

struct TriangleReport {
    double r = 0.0, R = 0.0, M = 0.0, c = 2.0, s0 = 0.0;
    double r_prime = 0.0;
    double a = 0.0, b = 0.0;      // base height and apex height
    QuasiGeodesic side_minus;     // (-r', a) -> (0, b)
    QuasiGeodesic side_plus;      // ( r', a) -> (0, b)
    QuasiGeodesic base;           // (-r', a) -> (r', a)
    Point2 q;                     // witness point on side_minus at first coordinate -s0
    double lower_bound = 0.0;     // certified lower bound for k(q, base)
};

// the (1/2) log expression bounding the distance from the witness point
// to the base through the half-plane projection
inline double slimness_lower_bound(double r, double a, double b, double s0) {
    double rp = r_prime(r);
    double x = (b - a) / a * dist_disc(r, rp, s0) / dist_disc(r, rp, 0.0);
    return 0.5 * std::log1p(x);
}

inline double slimness_lower_bound(const TriangleReport& tr) {
    return slimness_lower_bound(tr.r, tr.a, tr.b, tr.s0);
}

// The triangle with apex (0, b) and base corners (+-r', a), all three
// sides built from the product curve with the proof-of-concept heights
//   a = M + D(c) R,   b = a + (2R/(c pi)) k_{D_r}(0, r').
inline TriangleReport build_triangle(double r, double R, double M, double c, double s0) {
    TriangleReport tr;
    tr.r = r;
    tr.R = R;
    tr.M = M;
    tr.c = c;
    tr.s0 = s0;
    tr.r_prime = r_prime(r);
    if (!(s0 >= 0.0) || s0 >= tr.r_prime)
        throw construction_refused("build_triangle: need 0 <= s0 < r'(r)");
    double D = comparison_constant(c).D;
    tr.a = M + D * R;
    tr.b = tr.a + 2.0 * R / (c * pi) * dist_disc(r, 0.0, tr.r_prime);
    tr.side_minus = build_gamma(r, R, M, -tr.r_prime, 0.0, tr.a, tr.b, c);
    tr.side_plus = build_gamma(r, R, M, tr.r_prime, 0.0, tr.a, tr.b, c);
    tr.base = build_gamma(r, R, M, -tr.r_prime, tr.r_prime, tr.a, tr.a, c);
    tr.q = tr.side_minus.curve.position(1.0 - s0 / tr.r_prime);
    tr.lower_bound = slimness_lower_bound(tr);
    return tr;
}

namespace detail {

inline std::vector<Point2> sample_side(const QuasiGeodesic& qg, int n) {
    std::vector<Point2> pts;
    pts.reserve(n + 1);
    double span = qg.curve.t_end - qg.curve.t_begin;
    for (int i = 0; i <= n; ++i) pts.push_back(qg.curve.position(qg.curve.t_begin + span * i / n));
    return pts;
}

}  // namespace detail

// Grid estimate of the triangle's slimness in the given ambient: the
// largest distance from a sampled side point to the union of the two
// other (sampled) sides. Discretization makes this a lower estimate of
// the true slimness constant, up to the sampled segment diameters.
inline double slimness_estimate(const TriangleReport& tr, const DomainDescriptor& ambient,
                                int side_grid = 200) {
    auto s1 = detail::sample_side(tr.side_minus, side_grid);
    auto s2 = detail::sample_side(tr.side_plus, side_grid);
    auto s3 = detail::sample_side(tr.base, side_grid);
    const std::vector<Point2>* sides[3] = {&s1, &s2, &s3};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto& own = *sides[i];
        const auto& other1 = *sides[(i + 1) % 3];
        const auto& other2 = *sides[(i + 2) % 3];
        for (const Point2& p : own) {
            double best = std::numeric_limits<double>::infinity();
            for (const Point2& q : other1) best = std::min(best, distance(ambient, p, q));
            for (const Point2& q : other2) best = std::min(best, distance(ambient, p, q));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

// --- four-point diagnostic ----------------------------------------------------

// Max over 4-tuples of the four-point defect: of the three pairings of
// the points into two pairs, take the two largest distance sums; half
// their difference. Uniformly bounded on hyperbolic spaces; grows on
// products.
inline double four_point_delta(std::span<const Point2> pts,
                               const std::function<double(const Point2&, const Point2&)>& dist) {
    std::size_t n = pts.size();
    if (n < 4) throw std::invalid_argument("four_point_delta: need at least 4 points");
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = dist(pts[i], pts[j]);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    double s1 = d[i * n + j] + d[k * n + l];
                    double s2 = d[i * n + k] + d[j * n + l];
                    double s3 = d[i * n + l] + d[j * n + k];
                    double hi = std::max({s1, s2, s3});
                    double mid = s1 + s2 + s3 - hi - std::min({s1, s2, s3});
                    delta = std::max(delta, 0.5 * (hi - mid));
                }
    return delta;
}

inline double four_point_delta(std::span<const Point2> pts, const DomainDescriptor& ambient) {
    return four_point_delta(
        pts, [&](const Point2& p, const Point2& q) { return distance(ambient, p, q); });
}

}  // namespace kobalab
