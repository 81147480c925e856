// thermal.hpp - Gibbs state of the battery Hamiltonian, numeric and closed form

#pragma once

#include <array>

#include "dqb/density_matrix.hpp"
#include "dqb/model.hpp"

namespace dqb {

/// exp(-H/T)/Z through the eigendecomposition of H, with Boltzmann weights
/// shifted by the ground energy. Throws ParameterError for T <= 0.
DensityMatrix gibbs_numeric(const ModelParams& p);

/// Normalized Boltzmann weights exp(-(E - E_min)/T) for the given energies.
std::vector<double> boltzmann_weights(std::span<const double> energies, double temperature);

/// X-shaped closed-form entries of the Gibbs state in the computational basis.
struct GibbsClosedForm {
    cplx z11, z14, z22, z23, z44;
    double j_arg{0.0}; // 2 kappa2 / T
    double s_arg{0.0}; // 2 kappa1 / (3T)

    /// Assembled 4x4 matrix with z32 = conj(z23), z41 = conj(z14).
    ComplexMatrix to_matrix() const;
};

GibbsClosedForm gibbs_closed_form(const ModelParams& p);

struct GibbsSpectrum {
    SpectralDecomposition decomposition; // descending populations of the numeric state
    std::array<double, 4> closed_form_phi{}; // phi1..phi4 in closed form
    double eigenvalue_deviation{0.0};        // multiset distance numeric vs closed form
    /// max ||zeta v - <v|zeta|v> v|| over the closed-form eigenvectors phi1..phi4.
    double closed_form_vector_residual{0.0};
};

GibbsSpectrum gibbs_spectrum(const ModelParams& p);

} // namespace dqb
