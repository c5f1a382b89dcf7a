#pragma once

#include <stdexcept>

#include "kobalab/core.hpp"

namespace kobalab {

// One-parameter family of Riemann maps h_beta(z) = ((1+z)/(1-z))^beta,
// beta in (0,1], sending the unit disc onto the open sector
// { |arg y| < beta*pi/2 }. The image is starlike at infinity, symmetric
// about the real axis, and h_beta maps (-1,1) onto (0,inf); beta = 1 is
// the Cayley transform onto the right half-plane. All powers use the
// principal branch (the base always stays in the right half-plane).
class HFamily {
  public:
    HFamily() = default;

    explicit HFamily(double beta) : beta_(beta) {
        if (!(beta > 0.0) || beta > 1.0)
            throw std::invalid_argument("HFamily: exponent must lie in (0, 1]");
    }

    double beta() const { return beta_; }

    // sector half-angle of the image h(D)
    double half_angle() const { return beta_ * pi / 2.0; }

    bool is_cayley() const { return beta_ == 1.0; }

    // h(z), z in the unit disc
    Complex map(Complex z) const {
        if (!(std::abs(z) < 1.0))
            throw domain_violation("HFamily::map: point outside the unit disc");
        Complex cayley = (1.0 + z) / (1.0 - z);  // Re > 0 on the disc
        return is_cayley() ? cayley : std::pow(cayley, beta_);
    }

    // h^{-1}(y) = (y^{1/beta} - 1)/(y^{1/beta} + 1), y in the sector
    Complex inverse(Complex y) const {
        if (!in_image(y))
            throw domain_violation("HFamily::inverse: point outside the image sector");
        Complex Y = halfplane_preimage(y);
        return (Y - 1.0) / (Y + 1.0);
    }

    // \hat h^{-1}(y) = y^{1/beta}: the composition of h^{-1} with the
    // Cayley transform back to the right half-plane.
    Complex halfplane_preimage(Complex y) const {
        return is_cayley() ? y : std::pow(y, 1.0 / beta_);
    }

    // membership in the open image sector h(D)
    bool in_image(Complex y) const {
        if (y == Complex(0.0, 0.0)) return false;
        return std::abs(std::arg(y)) < half_angle();
    }

    // Euclidean distance from t > 0 to the sector boundary; the foot of
    // the perpendicular lies on the bounding ray for every half-angle
    // <= pi/2, so this is exactly t*sin(beta*pi/2).
    double boundary_gap(double t) const {
        if (!(t > 0.0))
            throw std::invalid_argument("HFamily::boundary_gap: t must be positive");
        return t * std::sin(half_angle());
    }

  private:
    double beta_ = 1.0;
};

}  // namespace kobalab
