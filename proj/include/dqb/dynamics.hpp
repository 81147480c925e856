// dynamics.hpp - Lindblad dephasing and unitary charging trajectories

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dqb/density_matrix.hpp"
#include "dqb/model.hpp"

namespace dqb {

/// Uniform time grid [t0, t1] with nominal step dt. The step actually used is
/// (t1 - t0) / steps(), the largest step not exceeding dt that divides the span.
struct TimeGrid {
    double t0{0.0};
    double t1{10.0};
    double dt{1e-3};

    /// Throws ValidationError unless t1 > t0, dt > 0 and the span needs <= 1e7 steps.
    void validate() const;
    std::size_t steps() const;
    double step() const;
    double time_at(std::size_t k) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;
};

/// Ordered (time, named column) samples.
class TimeSeries {
public:
    void add_column(const std::string& name, std::vector<double> values);
    void set_times(std::vector<double> times);

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const { return columns_.count(name) != 0; }
    std::vector<std::string> column_names() const;
    std::size_t size() const { return times_.size(); }

private:
    std::vector<double> times_;
    std::vector<std::string> order_;
    std::map<std::string, std::vector<double>> columns_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    double max_trace_drift{0.0}; // max |Tr rho - 1| of stored samples before renormalization
};

/// Precomputed -i[H, .] + sum_k D[C_k] with C1 = sqrt(gamma) X I, C2 = sqrt(gamma) I X.
class LindbladGenerator {
public:
    explicit LindbladGenerator(const ModelParams& p);
    ComplexMatrix apply(const ComplexMatrix& rho) const;
    const ComplexMatrix& hamiltonian() const { return h_; }

private:
    ComplexMatrix h_;
    ComplexMatrix c1_;
    ComplexMatrix c2_;
    ComplexMatrix half_cdc_; // (C1^dag C1 + C2^dag C2) / 2
};

ComplexMatrix lindblad_rhs(const ModelParams& p, const DensityMatrix& rho);

inline constexpr std::size_t kDefaultSamples = 1000;
inline constexpr double kTraceDriftLimit = 1e-6;
inline constexpr double kEigenFloor = -1e-6;

/// Storage stride ceil(steps / samples); samples == 0 keeps every step. The
/// final grid point is always stored.
std::size_t sample_stride(std::size_t steps, std::size_t samples);

/// Fixed-step RK4. Stored samples are re-Hermitized and trace-renormalized;
/// trace drift above kTraceDriftLimit or an eigenvalue below kEigenFloor throws
/// IntegrationError.
Trajectory evolve_lindblad(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                           std::size_t samples = kDefaultSamples);

/// forward: U rho U^dag (Schrodinger picture); adjoint: U^dag rho U as printed
/// alongside the charged-state coherence.
enum class ChargeOrdering { forward, adjoint };

DensityMatrix charged_state(const ModelParams& p, const DensityMatrix& rho0, double t,
                            ChargeOrdering ordering = ChargeOrdering::forward);

Trajectory charge_trajectory(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                             std::size_t samples = kDefaultSamples,
                             ChargeOrdering ordering = ChargeOrdering::forward);

} // namespace dqb
