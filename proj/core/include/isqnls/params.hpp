#pragma once

namespace isqnls {

/// Model parameters of the focusing NLS with inverse-square potential
///   i u_t + Δu + c|x|^{-2} u = -|u|^α u   on R^d.
struct Params {
    int d = 3;
    double c = 0.1;
    double alpha = 2.0;
    double omega = 1.0;

    /// Sharp Hardy constant ((d-2)/2)^2.
    double hardy_constant() const noexcept;

    /// ν = sqrt(λ(d) - c); positive for admissible c.
    double nu() const;

    /// Frobenius exponent σ = (d-2)/2 - ν: ground states behave like r^{-σ} at the origin.
    double indicial_exponent() const;

    /// dα/(2(α+2)), the coefficient of the L^{α+2} term in Q.
    double virial_coefficient() const noexcept;

    /// Throws ParameterError quoting the violated bound.
    void validate() const;

    friend bool operator==(Params const&, Params const&) = default;
};

double surface_area(int d);

} // namespace isqnls
