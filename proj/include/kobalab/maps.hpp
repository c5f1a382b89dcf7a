#pragma once

#include <cmath>
#include <variant>

#include "kobalab/core.hpp"
#include "kobalab/hfamily.hpp"

namespace kobalab {

inline constexpr double sqrt2 = 1.41421356237309504880;

// ---------------------------------------------------------------------------
// The explicit maps of the construction.
//
//   Embedding   phi_h(z,w) = ( w/(sqrt2*sqrt(1-z)), h(z) )   : B^2 -> Omega_h
//   Inverse     psi_h(zeta,y) = ( h^{-1}(y), sqrt2*zeta*sqrt(1-h^{-1}(y)) )
//   BallMap     f(z,w) = ( (1+z)/(3-z), sqrt2*e^{i theta} w/sqrt(3-z) )
//   BallFlow    f_t(z,w) = ( (t+z(2-t))/(2+t-zt), sqrt2*e^{it theta} w/sqrt(2+t-zt) )
//   BallFlowH   f_t(z,w) = ( h^{-1}(h(z)+t), e^{it theta} w sqrt(1-h^{-1}(h(z)+t))/sqrt(1-z) )
//   ProductFlow g_t(zeta,y) = ( e^{it theta} zeta, y+t )      on the embedded picture
//   CayleyPair  Phi(z,w) = ( z, (w-1)/(w+1) )                 : D x H -> D x D
//
// The ball self-maps are conjugate to ProductFlow through phi/psi; the
// conjugacy is a tested invariant, not an implementation shortcut.
// ---------------------------------------------------------------------------

struct Embedding {
    HFamily h;
};
struct EmbeddingInverse {
    HFamily h;
};
struct BallMap {
    double theta = 0.0;
};
struct BallFlow {
    double theta = 0.0;
    double t = 0.0;
};
struct BallFlowH {
    HFamily h;
    double theta = 0.0;
    double t = 0.0;
};
struct ProductFlow {
    double theta = 0.0;
    double t = 0.0;
};
struct CayleyPair {};

using HolomorphicMap =
    std::variant<Embedding, EmbeddingInverse, BallMap, BallFlow, BallFlowH, ProductFlow, CayleyPair>;

// l(z,w) = w/(sqrt2*sqrt(1-z)): the semi-conjugacy onto the disc.
inline Complex model_ell(const Point2& p) {
    return p.w / (sqrt2 * sqrt_right(1.0 - p.z, "model_ell"));
}

// restriction of the ball map to the invariant slice w = 0
inline Complex slice_map(Complex z) { return (1.0 + z) / (3.0 - z); }

inline Point2 phi_apply(const HFamily& h, const Point2& p) {
    if (!(norm_sq(p) < 1.0))
        throw domain_violation("phi: point outside the unit ball");
    return {p.w / (sqrt2 * sqrt_right(1.0 - p.z, "phi")), h.map(p.z)};
}

inline Point2 psi_apply(const HFamily& h, const Point2& p) {
    Complex z = h.inverse(p.w);  // throws if p.w leaves the image sector
    return {z, sqrt2 * p.z * sqrt_right(1.0 - z, "psi")};
}

// differential of psi_h at p applied to the tangent vector v
inline Point2 psi_differential(const HFamily& h, const Point2& p, const Point2& v) {
    Complex Y = h.halfplane_preimage(p.w);
    Complex z = (Y - 1.0) / (Y + 1.0);
    // d/dy h^{-1}(y) = 2/(Y+1)^2 * (1/beta) y^{1/beta - 1}
    Complex dY = h.is_cayley() ? Complex(1.0, 0.0)
                               : (1.0 / h.beta()) * std::pow(p.w, 1.0 / h.beta() - 1.0);
    Complex dz = 2.0 / ((Y + 1.0) * (Y + 1.0)) * dY;
    Complex root = sqrt_right(1.0 - z, "psi_differential");
    Complex first = dz * v.w;
    Complex second = sqrt2 * root * v.z - sqrt2 * p.z * dz * v.w / (2.0 * root);
    return {first, second};
}

inline Point2 evaluate(const HolomorphicMap& map, const Point2& p) {
    if (!is_finite(p)) throw domain_violation("evaluate: non-finite input point");
    return std::visit(
        [&](const auto& m) -> Point2 {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Embedding>) {
                return phi_apply(m.h, p);
            } else if constexpr (std::is_same_v<T, EmbeddingInverse>) {
                return psi_apply(m.h, p);
            } else if constexpr (std::is_same_v<T, BallMap>) {
                if (!(norm_sq(p) < 1.0))
                    throw domain_violation("ball map: point outside the unit ball");
                Complex den = 3.0 - p.z;
                Complex rot(std::cos(m.theta), std::sin(m.theta));
                return {(1.0 + p.z) / den, sqrt2 * rot * p.w / sqrt_right(den, "ball map")};
            } else if constexpr (std::is_same_v<T, BallFlow>) {
                if (!(norm_sq(p) < 1.0))
                    throw domain_violation("ball flow: point outside the unit ball");
                Complex den = 2.0 + m.t - p.z * m.t;
                Complex rot(std::cos(m.t * m.theta), std::sin(m.t * m.theta));
                return {(m.t + p.z * (2.0 - m.t)) / den,
                        sqrt2 * rot * p.w / sqrt_right(den, "ball flow")};
            } else if constexpr (std::is_same_v<T, BallFlowH>) {
                if (!(norm_sq(p) < 1.0))
                    throw domain_violation("ball flow: point outside the unit ball");
                Complex zt = m.h.inverse(m.h.map(p.z) + m.t);
                Complex rot(std::cos(m.t * m.theta), std::sin(m.t * m.theta));
                Complex ratio = sqrt_right(1.0 - zt, "ball flow (h)") /
                                sqrt_right(1.0 - p.z, "ball flow (h)");
                return {zt, rot * p.w * ratio};
            } else if constexpr (std::is_same_v<T, ProductFlow>) {
                Complex rot(std::cos(m.t * m.theta), std::sin(m.t * m.theta));
                return {rot * p.z, p.w + m.t};
            } else {  // CayleyPair
                if (p.w == Complex(-1.0, 0.0))
                    throw domain_violation("Cayley pair: second coordinate at the pole");
                return {p.z, (p.w - 1.0) / (p.w + 1.0)};
            }
        },
        map);
}

// true when the variant is a holomorphic self-map of the unit ball
inline bool is_ball_self_map(const HolomorphicMap& map) {
    return std::holds_alternative<BallMap>(map) || std::holds_alternative<BallFlow>(map) ||
           std::holds_alternative<BallFlowH>(map);
}

}  // namespace kobalab
