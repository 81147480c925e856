// model.hpp - Two-spin dipolar Hamiltonian with DM, KSEA and Zeeman terms
//
// Basis ordering is |00>, |01>, |10>, |11> with sigma_z|0> = +|0>.

#pragma once

#include <array>

#include "dqb/linalg.hpp"

namespace dqb {

struct ModelParams {
    double delta{0.0};       // axial anisotropy
    double epsilon{0.0};     // rhombic anisotropy
    double dm{0.0};          // Dzyaloshinsky-Moriya strength
    double ksea{0.0};        // KSEA strength
    double field{0.0};       // Zeeman field along z
    double temperature{1.0}; // k_B = 1
    double omega{1.0};       // charging field along x
    double gamma{0.0};       // sigma_x collapse rate

    /// Throws ParameterError for non-finite values, T <= 0 or gamma < 0.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Closed-form eigenpairs. nu[s] pairs with eigvecs[s]; the ordering is the
/// fixed labelling nu1..nu4, not sorted.
struct ClosedFormSpectrum {
    std::array<double, 4> nu{};
    double kappa1{0.0};
    double kappa2{0.0};
    std::array<ComplexVector, 4> eigvecs;
};

/// D(XY - YX) + G(XY + YX) - (1/3) sigma^T P sigma + B(ZI + IZ),
/// P = diag(delta - 3 eps, delta + 3 eps, -2 delta).
ComplexMatrix build_hamiltonian(const ModelParams& p);

/// kappa1 = sqrt(9D^2 + delta^2), kappa2 = sqrt(B^2 + G^2 + eps^2).
double kappa1(const ModelParams& p);
double kappa2(const ModelParams& p);

ClosedFormSpectrum closed_form_spectrum(const ModelParams& p);

/// Omega (X I + I X).
ComplexMatrix charging_hamiltonian(const ModelParams& p);

/// exp(-i H_ch t) from its trigonometric entries.
ComplexMatrix charging_unitary(const ModelParams& p, double t);

} // namespace dqb
