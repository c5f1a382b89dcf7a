#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "kobalab/core.hpp"
#include "kobalab/hfamily.hpp"
#include "kobalab/metrics.hpp"

namespace kobalab {

// ---------------------------------------------------------------------------
// The explicit embedded-ball domains and the quantities controlling which
// product sets D_r x S_{R,M} (and sectors D_r x V_{C,M}) they absorb.
//
//   Omega        = { (zeta,y) in C x H : |zeta|^2 < Re y / |1+y| }
//                  -- the image of the unit ball under the Cayley embedding
//   TildeOmega   = { |y|^2 + 2|zeta|^2 |1-y| < 1 }  -- its D x D picture
//   Omega_h      = { y in h(D), |h^{-1}(y)|^2 + 2|zeta|^2 |1-h^{-1}(y)| < 1 }
//   V_{C,M}      = { Re w > M, |Im w| < C Re w }
// ---------------------------------------------------------------------------

inline bool contains_omega(Complex zeta, Complex y) {
    if (!is_finite(zeta) || !is_finite(y)) return false;
    if (!(y.real() > 0.0)) return false;
    return std::norm(zeta) < y.real() / std::abs(1.0 + y);
}

inline bool contains_tilde_omega(Complex zeta, Complex y) {
    if (!is_finite(zeta) || !is_finite(y)) return false;
    return std::norm(y) + 2.0 * std::norm(zeta) * std::abs(1.0 - y) < 1.0;
}

inline bool contains_omega_h(const HFamily& h, Complex zeta, Complex y) {
    if (!is_finite(zeta) || !is_finite(y)) return false;
    if (!h.in_image(y)) return false;
    Complex z = h.inverse(y);
    return std::norm(z) + 2.0 * std::norm(zeta) * std::abs(1.0 - z) < 1.0;
}

// open sector V_{C,M} in the right half-plane
inline bool contains_sector(double C, double M, Complex w) {
    if (!(C > 0.0) || M < 0.0)
        throw std::invalid_argument("contains_sector: need slope > 0 and offset >= 0");
    return w.real() > M && std::abs(w.imag()) < C * w.real();
}

// disc picture of the sector: u in Cayley(V_{C,M}) iff (1+u)/(1-u) in V_{C,M}
inline bool contains_sector_disc(double C, double M, Complex u) {
    if (std::abs(u) >= 1.0 || u == Complex(1.0, 0.0)) return false;
    return contains_sector(C, M, (1.0 + u) / (1.0 - u));
}

// least offset M for which the corner condition
// Q(M) = M / sqrt((1+M)^2 + R^2) >= r^2 holds, i.e. for which
// D_r x S_{R,M} fits inside Omega. Bisection to 1e-12 absolute.
inline double minimal_M(double r, double R) {
    if (!(r > 0.0) || !(r < 1.0) || !(R > 0.0))
        throw std::invalid_argument("minimal_M: need 0 < r < 1 and R > 0");
    double r2 = r * r;
    auto Q = [&](double M) { return M / std::sqrt((1.0 + M) * (1.0 + M) + R * R); };
    double hi = 1.0;
    while (Q(hi) < r2) hi *= 2.0;
    double lo = 0.0;
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        (Q(mid) >= r2 ? hi : lo) = mid;
    }
    return hi;
}

// sup{ R/M : D_r x S_{R,M} subset Omega } in closed form
inline double sigma_closed_form(double r) {
    if (!(r > 0.0) || !(r < 1.0))
        throw std::invalid_argument("sigma_closed_form: need 0 < r < 1");
    double r4 = r * r * r * r;
    return std::sqrt((1.0 - r4) / r4);
}

struct SigmaBrute {
    double value = 0.0;
    bool certified = false;  // false: the grid was too coarse to certify any rectangle
};

// True when D_r x {y} stays in Omega with |zeta| pushed to the sampling
// radius; the second argument is that radius squared.
using RectMembership = std::function<bool(double zeta_sq, Complex y)>;

inline RectMembership omega_rect_membership() {
    return [](double zeta_sq, Complex y) {
        return y.real() > 0.0 && zeta_sq < y.real() / std::abs(1.0 + y);
    };
}

inline RectMembership omega_h_rect_membership(const HFamily& h) {
    return [h](double zeta_sq, Complex y) {
        if (!h.in_image(y)) return false;
        Complex z = h.inverse(y);
        return std::norm(z) + 2.0 * zeta_sq * std::abs(1.0 - z) < 1.0;
    };
}

namespace detail {

// sampled certificate that D_r x S_{R,M} fits in the domain: the left
// edge and the two boundary rays are scanned at n+1 points each, at
// |zeta| = r*(1 - 1e-9)
inline bool rectangle_certified(double r, double M, double R, int n, const RectMembership& member) {
    double zeta_sq = r * (1.0 - 1e-9) * r * (1.0 - 1e-9);
    // corners first: they fail earliest on every domain in this family
    if (!member(zeta_sq, {M, R}) || !member(zeta_sq, {M, -R})) return false;
    for (int j = 0; j <= n; ++j) {
        double u = -R + 2.0 * R * j / n;
        if (!member(zeta_sq, {M, u})) return false;
    }
    double reach = 100.0 * M + 100.0;  // rays sampled densely near the corner
    for (int j = 0; j <= n; ++j) {
        double frac = double(j) / n;
        double t = M + reach * frac * frac;
        if (!member(zeta_sq, {t, R}) || !member(zeta_sq, {t, -R})) return false;
    }
    return true;
}

}  // namespace detail

// Grid search for sup R/M over sampled-certified rectangles. Offsets run
// over the log-spaced grid M_j = exp(10 j / grid); for each offset the
// half-width is found by bisection against a cheap certificate and the
// winner is re-certified at full density. Doubling the grid refines it in
// place (the grids are nested), so the result never decreases.
inline SigmaBrute sigma_bruteforce(double r, int grid, const RectMembership& member) {
    if (!(r > 0.0) || !(r < 1.0))
        throw std::invalid_argument("sigma_bruteforce: need 0 < r < 1");
    if (grid < 4) throw std::invalid_argument("sigma_bruteforce: grid too small");
    SigmaBrute out;
    for (int j = 0; j <= grid; ++j) {
        double M = std::exp(10.0 * j / grid);
        double lo = 0.0, hi = M / (r * r) + 1.0;
        if (!detail::rectangle_certified(r, M, 1e-9, 8, member)) continue;
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (lo + hi);
            (detail::rectangle_certified(r, M, mid, 8, member) ? lo : hi) = mid;
        }
        if (lo > 0.0 && detail::rectangle_certified(r, M, lo, grid, member)) {
            out.certified = true;
            out.value = std::max(out.value, lo / M);
        }
    }
    return out;
}

inline SigmaBrute sigma_bruteforce(double r, int grid) {
    return sigma_bruteforce(r, grid, omega_rect_membership());
}

// Smallest offset M with D_r x V_{C,M} inside Omega, or empty when the
// slope is at or above sigma(r). The scalar criterion is
// 1/r^4 - 1 - C^2 >= 2/M + 1/M^2, sharp at the corner directions, so the
// returned M is the exact threshold root.
inline std::optional<double> sector_fits(double r, double C) {
    if (!(r > 0.0) || !(r < 1.0) || !(C > 0.0))
        throw std::invalid_argument("sector_fits: need 0 < r < 1 and C > 0");
    double nu = 1.0 / (r * r * r * r) - 1.0;
    double slack = nu - C * C;
    if (slack <= 0.0) return std::nullopt;  // strict inequality: the threshold slope fails
    double u = std::sqrt(1.0 + slack) - 1.0;
    return 1.0 / u;
}

// For C >= sigma(r): a point of (D_r x V_{C,M}) \ Omega with Re y = t.
// Valid for every t > max(M, 1/C^2); larger t gives witnesses deeper in
// the sector.
inline std::pair<Complex, Complex> sector_violation_witness(double r, double C, double M,
                                                            double t) {
    if (!(t > M) || !(t * C * C > 1.0))
        throw std::invalid_argument("sector_violation_witness: t too small");
    double zeta = std::pow(1.0 + C * C + 0.5 / t, -0.25);
    if (!(zeta < r))
        throw std::invalid_argument("sector_violation_witness: slope below the threshold");
    double a = std::sqrt(C * C - 1.0 / t);
    return {Complex(zeta, 0.0), Complex(t, a * t)};
}

// comparison radius: inside |z| <= r'(r) the D_r density is at most twice
// the unit-disc density
inline double r_prime(double r) {
    if (!(r >= 0.5) || r > 1.0)
        throw std::invalid_argument("r_prime: defined for radii in [1/2, 1]");
    return std::sqrt((2.0 * r * r - r) / (2.0 - r));
}

// --- inscribed-ratio diagnostics --------------------------------------------

enum class ModelDomain { omega, omega_h, bidisc };

struct SuffCondRow {
    double r = 0.0;
    double sigma = 0.0;       // sup R/M for the chosen domain
    double sigma_log = 0.0;   // sigma(r) * |log(1-r)|
    double sigma_kdisc = 0.0; // sigma(r) * k_{D_r}(s0, r'(r))
    bool unbounded = false;   // sigma is +infinity (whole product inscribed)
};

// Tabulates the inscribed ratio sigma(r) against the two blow-up gauges
// |log(1-r)| and k_{D_r}(s0, r'(r)). Rows with the unbounded flag carry
// infinities in the product columns.
inline std::vector<SuffCondRow> suff_cond_diagnostics(ModelDomain dom, const HFamily& h,
                                                      std::span<const double> r_grid, double s0,
                                                      int sigma_grid = 300) {
    if (!(s0 >= 0.0) || !(s0 < 1.0))
        throw std::invalid_argument("suff_cond_diagnostics: s0 must lie in [0, 1)");
    std::vector<SuffCondRow> rows;
    rows.reserve(r_grid.size());
    for (double r : r_grid) {
        if (!(r > 0.5) || !(r < 1.0))
            throw std::invalid_argument("suff_cond_diagnostics: grid must lie in (1/2, 1)");
        SuffCondRow row;
        row.r = r;
        switch (dom) {
            case ModelDomain::omega: row.sigma = sigma_closed_form(r); break;
            case ModelDomain::omega_h:
                row.sigma = sigma_bruteforce(r, sigma_grid, omega_h_rect_membership(h)).value;
                break;
            case ModelDomain::bidisc:
                // S_{R,0} sits inside H for every R: the ratio is unbounded
                row.unbounded = true;
                row.sigma = std::numeric_limits<double>::infinity();
                break;
        }
        row.sigma_log = row.sigma * std::abs(std::log1p(-r));
        row.sigma_kdisc = row.sigma * dist_disc(r, s0, r_prime(r));
        rows.push_back(row);
    }
    return rows;
}

// Euclidean gap between t > 0 and the boundary of the image sector h(D)
inline double delta_sector(const HFamily& h, double t) { return h.boundary_gap(t); }

struct RadialRow {
    double t = 0.0;
    Complex preimage;       // h^{-1}(t)
    double gap = 0.0;       // |h^{-1}(t) - 1|
    Complex direction;      // (h^{-1}(t) - 1)/|h^{-1}(t) - 1|
    double dist_to_axis = 0.0;  // k_D(h^{-1}(t), [0,1))
};

// Tracks how h^{-1}(t) approaches 1 along an increasing grid: the
// approach is radial exactly when the direction tends to -1 and the
// hyperbolic gap to [0,1) tends to 0. For this family h^{-1}(t) is real,
// so the direction is -1 on the nose once h^{-1}(t) < 1.
inline std::vector<RadialRow> radial_convergence_check(const HFamily& h,
                                                       std::span<const double> t_grid) {
    std::vector<RadialRow> rows;
    rows.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t > 0.0))
            throw std::invalid_argument("radial_convergence_check: grid must be positive");
        RadialRow row;
        row.t = t;
        row.preimage = h.inverse(Complex(t, 0.0));
        Complex d = row.preimage - 1.0;
        row.gap = std::abs(d);
        row.direction = d / row.gap;
        Complex proj(std::clamp(row.preimage.real(), 0.0, 1.0 - 1e-12), 0.0);
        row.dist_to_axis = dist_disc(1.0, row.preimage, proj);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace kobalab
