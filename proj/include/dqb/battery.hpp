// battery.hpp - Ergotropy, work, power, efficiency and capacity of the charged battery

#pragma once

#include <complex>

#include "dqb/density_matrix.hpp"
#include "dqb/dynamics.hpp"
#include "dqb/model.hpp"

namespace dqb {

struct BatteryMetrics {
    double ergotropy{0.0};
    double work{0.0};
    double power_instant{0.0};
    double power_avg{0.0};
    double efficiency{1.0};
    double coherence{0.0};
    double time{0.0};
};

struct CapacityReport {
    double capacity_basis{0.0};   // Tr[H |11><11|] - Tr[H |00><00|]
    double capacity_unitary{0.0}; // anti-passive minus passive energy of the Gibbs state
    double closed_form{0.0};      // closed-form capacity expression, evaluated literally
};

/// Descending populations of rho on ascending energy eigenvectors of H.
DensityMatrix passive_state(const DensityMatrix& rho, const ComplexMatrix& h);
/// Descending populations of rho on descending energy eigenvectors of H.
DensityMatrix anti_passive_state(const DensityMatrix& rho, const ComplexMatrix& h);

/// Sum_k p_k^down E_k^up, the energy of the passive state (degeneracy-safe).
double passive_energy(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum);

/// Tr[rho H] - Tr[passive(rho) H].
double ergotropy(const DensityMatrix& rho, const ComplexMatrix& h);
double ergotropy(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum);

/// Sum_{m,n} p_m E_n (|<psi_n|phi_m>|^2 - delta_mn) with p descending and E ascending.
double ergotropy_double_sum(const DensityMatrix& rho, const ComplexMatrix& h);

/// Below this ergotropy W/xi is the 0/0 limit and efficiency is reported as 1.
inline constexpr double kEfficiencyFloor = 1e-6;

/// Columns: ergotropy, work, power_avg, power_instant, power_fd, efficiency.
/// `initial` is the pre-charge state the work is measured against; the
/// trajectory must come from charge_trajectory with the same ordering.
/// Throws ValidationError for a non-increasing time grid.
TimeSeries work_and_power(const Trajectory& traj, const ModelParams& p, const DensityMatrix& initial,
                          ChargeOrdering ordering = ChargeOrdering::forward, double fd_step = 1e-4);

/// Tr[-i[H_ch, rho] H] for forward ordering, sign flipped for adjoint ordering.
double instantaneous_power(const ComplexMatrix& rho, const ModelParams& p, const ComplexMatrix& h,
                           ChargeOrdering ordering = ChargeOrdering::forward);

CapacityReport capacity(const ModelParams& p);

/// Anti-passive minus passive energy of rho; depends only on the spectrum of rho.
double unitary_capacity(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum);

/// Closed-form capacity and ergotropy expressions, evaluated verbatim with Z
/// the partition function Tr exp(-H/T).
double closed_form_capacity(const ModelParams& p);
std::complex<double> closed_form_ergotropy(const ModelParams& p, double omega_t);

/// l1 coherence column "coherence".
TimeSeries charged_coherence(const Trajectory& traj);

struct PeakMetrics {
    double ergotropy_max{0.0};
    double power_max{0.0};
    double coherence_max{0.0};
    double ergotropy_argmax{0.0}; // in units of Omega t
};

/// Maxima over Omega t in [0, pi] of the Gibbs-state charging metrics: a
/// 2000-point scan followed by golden-section refinement to 1e-8 in Omega t.
PeakMetrics peak_metrics(const ModelParams& p, std::size_t scan_points = 2000);

} // namespace dqb
