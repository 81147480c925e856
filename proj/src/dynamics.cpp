// dynamics.cpp - RK4 Lindblad integration and unitary charging

#include "dqb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dqb/errors.hpp"

namespace dqb {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

DensityMatrix checked_sample(const ComplexMatrix& raw, double t, double& drift) {
    ComplexMatrix m = 0.5 * (raw + raw.adjoint());
    const double tr = m.trace().real();
    drift = std::max(drift, std::abs(tr - 1.0));
    if (!(std::abs(tr - 1.0) <= kTraceDriftLimit)) {
        throw IntegrationError("evolve_lindblad: trace drifted to " + sci(tr) + " at t = " + sci(t) +
                               "; use a smaller dt");
    }
    m *= cplx{1.0 / tr, 0.0};
    const double lowest = hermitian_eigenvalues(m).front();
    if (lowest < kEigenFloor) {
        throw IntegrationError("evolve_lindblad: eigenvalue " + sci(lowest) + " at t = " + sci(t) +
                               "; use a smaller dt");
    }
    return DensityMatrix(m, StateTolerances{1e-10, 1e-8, -kEigenFloor});
}

} // namespace

// ---------------------------------------------------------------------------

void TimeGrid::validate() const {
    if (!std::isfinite(t0) || !std::isfinite(t1) || !std::isfinite(dt)) {
        throw ValidationError("TimeGrid: bounds and step must be finite");
    }
    if (!(t1 > t0)) throw ValidationError("TimeGrid: t1 must exceed t0");
    if (!(dt > 0.0)) throw ValidationError("TimeGrid: dt must be > 0");
    if ((t1 - t0) / dt > 1e7) throw ValidationError("TimeGrid: more than 1e7 steps requested");
}

std::size_t TimeGrid::steps() const {
    validate();
    const double ratio = (t1 - t0) / dt;
    return static_cast<std::size_t>(std::max(1.0, std::ceil(ratio - 1e-9)));
}

double TimeGrid::step() const { return (t1 - t0) / static_cast<double>(steps()); }

double TimeGrid::time_at(std::size_t k) const {
    const std::size_t n = steps();
    if (k == n) return t1;
    return t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n);
}

void TimeSeries::set_times(std::vector<double> times) {
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) throw ValidationError("TimeSeries: times must be strictly increasing");
    }
    for (const auto& [name, values] : columns_) {
        if (values.size() != times.size()) throw ValidationError("TimeSeries: column '" + name + "' length mismatch");
    }
    times_ = std::move(times);
}

void TimeSeries::add_column(const std::string& name, std::vector<double> values) {
    if (values.size() != times_.size()) {
        throw ValidationError("TimeSeries: column '" + name + "' has " + std::to_string(values.size()) +
                              " values for " + std::to_string(times_.size()) + " times");
    }
    if (columns_.count(name) == 0) order_.push_back(name);
    columns_[name] = std::move(values);
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
    const auto it = columns_.find(name);
    if (it == columns_.end()) throw ValidationError("TimeSeries: no column '" + name + "'");
    return it->second;
}

std::vector<std::string> TimeSeries::column_names() const { return order_; }

// ---------------------------------------------------------------------------

LindbladGenerator::LindbladGenerator(const ModelParams& p)
    : h_(build_hamiltonian(p)),
      c1_(std::sqrt(p.gamma) * kron(pauli::x(), pauli::identity())),
      c2_(std::sqrt(p.gamma) * kron(pauli::identity(), pauli::x())),
      half_cdc_(0.5 * (c1_.adjoint() * c1_ + c2_.adjoint() * c2_)) {
    p.validate();
}

ComplexMatrix LindbladGenerator::apply(const ComplexMatrix& rho) const {
    ComplexMatrix out = cplx{0.0, -1.0} * commutator(h_, rho);
    out += c1_ * rho * c1_.adjoint();
    out += c2_ * rho * c2_.adjoint();
    out -= anticommutator(half_cdc_, rho);
    return out;
}

ComplexMatrix lindblad_rhs(const ModelParams& p, const DensityMatrix& rho) {
    return LindbladGenerator(p).apply(rho.matrix());
}

std::size_t sample_stride(std::size_t steps, std::size_t samples) {
    if (samples == 0 || samples >= steps) return 1;
    return (steps + samples - 1) / samples;
}

Trajectory evolve_lindblad(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                           std::size_t samples) {
    const LindbladGenerator gen(p);
    const std::size_t n = grid.steps();
    const double h = grid.step();
    const std::size_t stride = sample_stride(n, samples);

    Trajectory traj;
    ComplexMatrix rho = rho0.matrix();
    traj.times.push_back(grid.t0);
    traj.states.push_back(rho0);

    for (std::size_t k = 1; k <= n; ++k) {
        const ComplexMatrix k1 = gen.apply(rho);
        const ComplexMatrix k2 = gen.apply(rho + (0.5 * h) * k1);
        const ComplexMatrix k3 = gen.apply(rho + (0.5 * h) * k2);
        const ComplexMatrix k4 = gen.apply(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (k % stride == 0 || k == n) {
            const double t = grid.time_at(k);
            traj.times.push_back(t);
            traj.states.push_back(checked_sample(rho, t, traj.max_trace_drift));
        }
    }
    return traj;
}

DensityMatrix charged_state(const ModelParams& p, const DensityMatrix& rho0, double t, ChargeOrdering ordering) {
    const ComplexMatrix u = charging_unitary(p, t);
    ComplexMatrix rho = ordering == ChargeOrdering::forward ? u * rho0.matrix() * u.adjoint()
                                                            : u.adjoint() * rho0.matrix() * u;
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho, rho0.tolerances());
}

Trajectory charge_trajectory(const ModelParams& p, const DensityMatrix& rho0, const TimeGrid& grid,
                             std::size_t samples, ChargeOrdering ordering) {
    p.validate();
    const std::size_t n = grid.steps();
    const std::size_t stride = sample_stride(n, samples);
    Trajectory traj;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k % stride != 0 && k != n) continue;
        const double t = grid.time_at(k);
        traj.times.push_back(t);
        traj.states.push_back(charged_state(p, rho0, t, ordering));
    }
    return traj;
}

} // namespace dqb
