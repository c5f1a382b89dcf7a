#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "kobalab/core.hpp"
#include "kobalab/maps.hpp"
#include "kobalab/metrics.hpp"
#include "kobalab/rng.hpp"

namespace kobalab {

// ---------------------------------------------------------------------------
// Orbits, hyperbolic step, dilation, and the semigroup/semi-conjugacy
// defect sweeps for the explicit ball self-maps.
// ---------------------------------------------------------------------------

struct OrbitResult {
    std::vector<Point2> points;  // p, f(p), ..., f^n(p) (truncated if escaped)
    bool escaped = false;        // an iterate reached the boundary margin
};

// forward orbit by repeated evaluation; every iterate is kept only while
// it stays inside the map's source domain
inline OrbitResult orbit(const HolomorphicMap& map, Point2 p, int n) {
    if (n < 0) throw std::invalid_argument("orbit: negative iterate count");
    OrbitResult out;
    out.points.reserve(n + 1);
    out.points.push_back(p);
    for (int i = 0; i < n; ++i) {
        Point2 next;
        try {
            next = evaluate(map, out.points.back());
        } catch (const domain_violation&) {
            out.escaped = true;
            break;
        }
        if (is_ball_self_map(map) && 1.0 - norm_sq(next) < boundary_margin) {
            out.escaped = true;
            break;
        }
        out.points.push_back(next);
    }
    return out;
}

struct StepEstimate {
    std::vector<double> gaps;  // d_n = k(f^n p, f^{n+1} p), non-increasing
    double limit = 0.0;        // extrapolated limit of the sequence
    double last = 0.0;         // final computed gap
    int iterations = 0;
    bool converged = false;    // successive-difference stop reached before max_n
};

namespace detail {

// Orbit state for the ball self-maps in gap coordinates (1-z, w). The
// recursions below are algebraic rewrites of the map formulas; they keep
// the shrinking boundary gap of the first coordinate to full relative
// precision, which repeated evaluation of z itself cannot do.
struct GapOrbit {
    Complex gz;  // 1 - z
    Complex w;
};

inline GapOrbit gap_advance(const HolomorphicMap& map, const GapOrbit& s) {
    if (const auto* m = std::get_if<BallMap>(&map)) {
        // z' = (1+z)/(3-z)  =>  1-z' = 2(1-z)/(2+(1-z))
        Complex den = 2.0 + s.gz;
        Complex rot(std::cos(m->theta), std::sin(m->theta));
        return {2.0 * s.gz / den, sqrt2 * rot * s.w / sqrt_right(den, "step")};
    }
    if (const auto* m = std::get_if<BallFlow>(&map)) {
        // 1-z' = 2(1-z)/(2+t(1-z))
        Complex den = 2.0 + m->t * s.gz;
        Complex rot(std::cos(m->t * m->theta), std::sin(m->t * m->theta));
        return {2.0 * s.gz / den, sqrt2 * rot * s.w / sqrt_right(den, "step")};
    }
    const auto& m = std::get<BallFlowH>(map);
    // through the conformal family: 1-z' = 2/(Y+1), Y = (h(z)+t)^{1/beta}
    Complex y = m.h.is_cayley() ? (2.0 - s.gz) / s.gz
                                : std::pow((2.0 - s.gz) / s.gz, m.h.beta());
    Complex Y = m.h.halfplane_preimage(y + m.t);
    Complex gz_next = 2.0 / (Y + 1.0);
    Complex rot(std::cos(m.t * m.theta), std::sin(m.t * m.theta));
    Complex ratio = sqrt_right(gz_next, "step") / sqrt_right(s.gz, "step");
    return {gz_next, rot * s.w * ratio};
}

// Richardson/Neville extrapolation of a sequence with an asymptotic
// expansion in 1/n, read at the checkpoints N, N/2, ..., N/2^levels.
inline double extrapolate_limit(const std::vector<double>& d, int levels = 2) {
    int N = int(d.size());
    if (N < (1 << levels) || N < 4) return d.empty() ? 0.0 : d.back();
    std::vector<double> vals, hs;
    for (int j = levels; j >= 0; --j) {
        int k = N >> j;
        vals.push_back(d[k - 1]);
        hs.push_back(1.0 / k);
    }
    for (std::size_t lev = 1; lev < vals.size(); ++lev)
        for (std::size_t i = vals.size() - 1; i >= lev; --i)
            vals[i] = vals[i] + (vals[i] - vals[i - 1]) * hs[i] / (hs[i - lev] - hs[i]);
    return vals.back();
}

}  // namespace detail

// Hyperbolic step of a ball self-map at p: the (monotone) limit of the
// distances between consecutive iterates. Stops once successive gaps
// differ by less than tol; the reported limit is a Richardson
// extrapolation of the tail, clamped to be nonnegative.
inline StepEstimate step(const HolomorphicMap& map, Point2 p, double tol = 1e-9,
                         int max_n = 100000) {
    if (!is_ball_self_map(map))
        throw std::invalid_argument("step: map is not a self-map of the ball");
    if (!(norm_sq(p) < 1.0)) throw domain_violation("step: point outside the unit ball");
    if (!(tol > 0.0) || max_n < 2) throw std::invalid_argument("step: bad tolerance or budget");

    StepEstimate out;
    out.gaps.reserve(std::min(max_n, 1 << 20));
    detail::GapOrbit cur{1.0 - p.z, p.w};
    detail::GapOrbit nxt = detail::gap_advance(map, cur);
    while (int(out.gaps.size()) < max_n) {
        out.gaps.push_back(dist_ball_gaps(cur.gz, cur.w, nxt.gz, nxt.w));
        std::size_t n = out.gaps.size();
        if (n >= 2 && std::abs(out.gaps[n - 1] - out.gaps[n - 2]) < tol) {
            out.converged = true;
            break;
        }
        cur = nxt;
        nxt = detail::gap_advance(map, cur);
    }
    out.iterations = int(out.gaps.size());
    out.last = out.gaps.back();
    out.limit = std::max(0.0, detail::extrapolate_limit(out.gaps));
    return out;
}

struct DilationEstimate {
    std::vector<double> ratios;       // (1-|f(z)|)/(1-|z|) along the approach
    double liminf_estimate = 0.0;     // min over the tail (last quarter)
    double final_ratio = 0.0;
    bool along_sequence_only = true;  // bounds, does not compute, the full liminf
};

// boundary-dilation ratios along a chosen approach sequence
inline DilationEstimate dilation(const std::function<Point2(Point2)>& map,
                                 std::span<const Point2> approach) {
    if (approach.empty()) throw std::invalid_argument("dilation: empty approach sequence");
    DilationEstimate out;
    out.ratios.reserve(approach.size());
    for (const Point2& p : approach) {
        double g = 1.0 - norm2(p);
        if (!(g > 0.0)) throw domain_violation("dilation: approach point outside the ball");
        double gf = 1.0 - norm2(map(p));
        out.ratios.push_back(gf / g);
    }
    std::size_t take = std::max<std::size_t>(1, out.ratios.size() / 4);
    out.liminf_estimate = *std::min_element(out.ratios.end() - take, out.ratios.end());
    out.final_ratio = out.ratios.back();
    return out;
}

inline DilationEstimate dilation(const HolomorphicMap& map, std::span<const Point2> approach) {
    return dilation([&map](Point2 p) { return evaluate(map, p); }, approach);
}

// the default approach to the Denjoy-Wolff point (1,0): radial along the slice
inline std::vector<Point2> radial_approach(int n) {
    std::vector<Point2> seq;
    seq.reserve(n);
    for (int j = 1; j <= n; ++j)
        seq.push_back({Complex(1.0 - std::pow(2.0, -j), 0.0), Complex(0.0, 0.0)});
    return seq;
}

enum class ConvergenceType { radial, tangential, indeterminate };

struct ConvergenceReport {
    ConvergenceType type = ConvergenceType::indeterminate;
    double final_arg = 0.0;    // arg(1 - z_n) at the end of the orbit
    double final_ratio = 0.0;  // |w_n|^2 / |1 - z_n| at the end
    double tail_min_ratio = 0.0;
    std::vector<double> args;
    std::vector<double> ratios;
};

// Classifies how an orbit approaches (1,0): radial when the approach
// direction flattens and |w|^2/|1-z| dies out, tangential when that ratio
// stays bounded away from zero on the last quarter of the orbit.
inline ConvergenceReport classify_convergence(std::span<const Point2> orb) {
    ConvergenceReport rep;
    if (orb.size() < 8) return rep;
    rep.args.reserve(orb.size());
    rep.ratios.reserve(orb.size());
    for (const Point2& p : orb) {
        Complex gap = 1.0 - p.z;
        rep.args.push_back(std::abs(std::arg(gap)));
        rep.ratios.push_back(std::norm(p.w) / std::abs(gap));
    }
    rep.final_arg = rep.args.back();
    rep.final_ratio = rep.ratios.back();
    std::size_t tail = rep.ratios.size() - rep.ratios.size() / 4;
    rep.tail_min_ratio = *std::min_element(rep.ratios.begin() + tail, rep.ratios.end());
    if (rep.tail_min_ratio > 0.1)
        rep.type = ConvergenceType::tangential;
    else if (rep.final_arg < 0.01 && rep.final_ratio < 0.01)
        rep.type = ConvergenceType::radial;
    return rep;
}

// --- defect sweeps ----------------------------------------------------------

// max over samples of |f_{t+s}(p) - f_t(f_s(p))|
inline double semigroup_defect(const HFamily& h, double theta, double t, double s, int samples,
                               std::uint64_t seed) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("semigroup_defect: times must be >= 0");
    Rng rng(seed);
    HolomorphicMap ft = BallFlowH{h, theta, t};
    HolomorphicMap fs = BallFlowH{h, theta, s};
    HolomorphicMap fts = BallFlowH{h, theta, t + s};
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point2 p = rng.in_ball2();
        worst = std::max(worst, dist_euclid(evaluate(fts, p), evaluate(ft, evaluate(fs, p))));
    }
    return worst;
}

inline double semigroup_defect(double theta, double t, double s, int samples, std::uint64_t seed) {
    if (t < 0.0 || s < 0.0) throw std::invalid_argument("semigroup_defect: times must be >= 0");
    Rng rng(seed);
    HolomorphicMap ft = BallFlow{theta, t};
    HolomorphicMap fs = BallFlow{theta, s};
    HolomorphicMap fts = BallFlow{theta, t + s};
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point2 p = rng.in_ball2();
        worst = std::max(worst, dist_euclid(evaluate(fts, p), evaluate(ft, evaluate(fs, p))));
    }
    return worst;
}

// max over samples of |l(f_t(p)) - e^{it theta} l(p)|: how far the flow
// is from being semi-conjugate to the rotation group of the disc.
// theta_defect shifts the angle inside the flow only; it exists to prove
// the sweep can fail.
inline double semimodel_defect(const HFamily& h, double theta, double t, int samples,
                               std::uint64_t seed, double theta_defect = 0.0) {
    if (t < 0.0) throw std::invalid_argument("semimodel_defect: time must be >= 0");
    Rng rng(seed);
    HolomorphicMap ft = BallFlowH{h, theta + theta_defect, t};
    Complex rot(std::cos(t * theta), std::sin(t * theta));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point2 p = rng.in_ball2();
        worst = std::max(worst, std::abs(model_ell(evaluate(ft, p)) - rot * model_ell(p)));
    }
    return worst;
}

inline double semimodel_defect(double theta, double t, int samples, std::uint64_t seed,
                               double theta_defect = 0.0) {
    return semimodel_defect(HFamily(1.0), theta, t, samples, seed, theta_defect);
}

// max over samples of |psi(g_t(phi(p))) - f_t(p)|
inline double conjugacy_defect(const HFamily& h, double theta, double t, int samples,
                               std::uint64_t seed) {
    Rng rng(seed);
    HolomorphicMap phi = Embedding{h};
    HolomorphicMap psi = EmbeddingInverse{h};
    HolomorphicMap g = ProductFlow{theta, t};
    HolomorphicMap ft = BallFlowH{h, theta, t};
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Point2 p = rng.in_ball2();
        Point2 lhs = evaluate(psi, evaluate(g, evaluate(phi, p)));
        worst = std::max(worst, dist_euclid(lhs, evaluate(ft, p)));
    }
    return worst;
}

// --- the monotone translation gauge ------------------------------------------

struct LMonotonicityReport {
    std::vector<double> t;
    std::vector<double> L;          // |1 + hhat^{-1}(y+t)| / Re hhat^{-1}(y+t)
    std::vector<double> re_preimage;
    double worst_L_increase = 0.0;   // max of L(t_{i+1}) - L(t_i), <= 0 when monotone
    double worst_re_decrease = 0.0;  // max of Re(i) - Re(i+1), <= 0 when monotone
    bool monotone = false;
};

// Along y + t the half-plane preimage drifts to +infinity; the gauge
// L(t) = |1 + hhat^{-1}(y+t)| / Re hhat^{-1}(y+t) must never increase
// (that is exactly what makes the embedded ball flow-invariant).
inline LMonotonicityReport L_monotonicity_check(const HFamily& h, Complex y,
                                                std::span<const double> t_grid) {
    if (!h.in_image(y))
        throw domain_violation("L_monotonicity_check: base point outside the image sector");
    LMonotonicityReport rep;
    for (double t : t_grid) {
        if (t < 0.0) throw std::invalid_argument("L_monotonicity_check: grid must be >= 0");
        Complex pre = h.halfplane_preimage(y + t);
        rep.t.push_back(t);
        rep.L.push_back(std::abs(1.0 + pre) / pre.real());
        rep.re_preimage.push_back(pre.real());
    }
    for (std::size_t i = 0; i + 1 < rep.L.size(); ++i) {
        rep.worst_L_increase = std::max(rep.worst_L_increase, rep.L[i + 1] - rep.L[i]);
        rep.worst_re_decrease =
            std::max(rep.worst_re_decrease, rep.re_preimage[i] - rep.re_preimage[i + 1]);
    }
    rep.monotone = rep.worst_L_increase <= 1e-10;
    return rep;
}

}  // namespace kobalab
