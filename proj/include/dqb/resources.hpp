// resources.hpp - l1-norm coherence, concurrence and quantum discord

#pragma once

#include <cstddef>

#include "dqb/density_matrix.hpp"

namespace dqb {

/// Bloch angles of a projective measurement axis n = (sin t cos p, sin t sin p, cos t).
struct MeasurementDirection {
    double theta{0.0}; // [0, pi]
    double phi{0.0};   // [0, 2 pi)

    /// (I + s n.sigma)/2 for outcome s = +1 or -1.
    ComplexMatrix projector(int sign) const;
};

struct DiscordResult {
    double discord{0.0};
    double classical_correlation{0.0};
    double mutual_information{0.0};
    MeasurementDirection optimal_direction;
    std::size_t optimizer_evals{0};
};

/// Grid-then-polish maximization of the classical correlation.
struct DiscordOptions {
    std::size_t grid_theta{64};
    std::size_t grid_phi{64};
    std::size_t keep_best{5};
    double objective_tol{1e-8};
    std::size_t max_iterations{400};
    Subsystem measured{Subsystem::A};
};

/// Sum of |rho_ij| over i != j in the computational basis.
double l1_coherence(const DensityMatrix& rho);
double l1_coherence(const ComplexMatrix& rho);

/// Wootters concurrence from the spin-flipped spectrum.
double concurrence(const DensityMatrix& rho);

/// S(rho_B) - sum_i p_i S(rho_B|i) for one measurement axis on A.
double measured_information(const DensityMatrix& rho, const MeasurementDirection& direction);

DiscordResult quantum_discord(const DensityMatrix& rho, const DiscordOptions& options = {});

} // namespace dqb
