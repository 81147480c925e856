// battery.cpp - Ergotropy, power, capacity and peak extraction

#include "dqb/battery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "dqb/errors.hpp"
#include "dqb/resources.hpp"
#include "dqb/thermal.hpp"

namespace dqb {

namespace {

std::vector<double> descending_populations(const ComplexMatrix& rho) {
    auto p = hermitian_eigenvalues(rho);
    std::sort(p.begin(), p.end(), std::greater<>());
    return p;
}

// Populations of rho (descending) placed on the eigenvectors of H, taken in the
// given energy order.
DensityMatrix populate(const DensityMatrix& rho, const ComplexMatrix& h, SortOrder energy_order) {
    SpectralDecomposition s = hermitian_eigen(h, energy_order);
    s.values = descending_populations(rho.matrix());
    ComplexMatrix m = s.reconstruct();
    m = 0.5 * (m + m.adjoint());
    return DensityMatrix(m, rho.tolerances());
}

ComplexMatrix conjugate(const ComplexMatrix& u, const ComplexMatrix& rho, ChargeOrdering ordering) {
    return ordering == ChargeOrdering::forward ? u * rho * u.adjoint() : u.adjoint() * rho * u;
}

// Golden-section maximization of f on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol, double& arg) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    arg = 0.5 * (a + b);
    return f(arg);
}

// Golden refinement of a sampled maximum at index best of an n-point grid on [lo, hi].
double refine_peak(const std::function<double(double)>& f, const std::vector<double>& samples, double lo, double hi,
                   double& arg) {
    const std::size_t n = samples.size();
    const double h = (hi - lo) / static_cast<double>(n - 1);
    const auto best = static_cast<std::size_t>(std::max_element(samples.begin(), samples.end()) - samples.begin());
    const double a = lo + h * static_cast<double>(best == 0 ? 0 : best - 1);
    const double b = lo + h * static_cast<double>(std::min(best + 1, n - 1));
    double refined_arg = 0.0;
    const double refined = golden_max(f, a, b, 1e-8, refined_arg);
    if (refined >= samples[best]) {
        arg = refined_arg;
        return refined;
    }
    arg = lo + h * static_cast<double>(best);
    return samples[best];
}

} // namespace

DensityMatrix passive_state(const DensityMatrix& rho, const ComplexMatrix& h) {
    return populate(rho, h, SortOrder::ascending);
}

DensityMatrix anti_passive_state(const DensityMatrix& rho, const ComplexMatrix& h) {
    return populate(rho, h, SortOrder::descending);
}

double passive_energy(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum) {
    const auto p = descending_populations(rho);
    auto e = h_spectrum.values;
    std::sort(e.begin(), e.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] * e[k];
    return sum;
}

double ergotropy(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum) {
    return trace_product_real(rho, h_spectrum.reconstruct()) - passive_energy(rho, h_spectrum);
}

double ergotropy(const DensityMatrix& rho, const ComplexMatrix& h) {
    return trace_product_real(rho.matrix(), h) - passive_energy(rho.matrix(), hermitian_eigen(h));
}

double ergotropy_double_sum(const DensityMatrix& rho, const ComplexMatrix& h) {
    const auto state = hermitian_eigen(rho.matrix(), SortOrder::descending);
    const auto energy = hermitian_eigen(h, SortOrder::ascending);
    double sum = 0.0;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t n = 0; n < 4; ++n) {
            const double overlap = std::norm(inner(energy.vectors[n], state.vectors[m]));
            sum += state.values[m] * energy.values[n] * (overlap - (m == n ? 1.0 : 0.0));
        }
    return sum;
}

double instantaneous_power(const ComplexMatrix& rho, const ModelParams& p, const ComplexMatrix& h,
                           ChargeOrdering ordering) {
    const ComplexMatrix drho = cplx{0.0, -1.0} * commutator(charging_hamiltonian(p), rho);
    const double sign = ordering == ChargeOrdering::forward ? 1.0 : -1.0;
    return sign * trace_product_real(drho, h);
}

TimeSeries work_and_power(const Trajectory& traj, const ModelParams& p, const DensityMatrix& initial,
                          ChargeOrdering ordering, double fd_step) {
    if (traj.times.size() != traj.states.size()) {
        throw ValidationError("work_and_power: times and states differ in length");
    }
    TimeSeries out;
    out.set_times(traj.times);

    const ComplexMatrix h = build_hamiltonian(p);
    const SpectralDecomposition hs = hermitian_eigen(h);
    const double initial_energy = trace_product_real(initial.matrix(), h);
    const ComplexMatrix u_plus = charging_unitary(p, fd_step);
    const ComplexMatrix u_minus = charging_unitary(p, -fd_step);

    const std::size_t n = traj.times.size();
    std::vector<double> erg(n), work(n), avg(n), inst(n), fd(n), eff(n);
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix& rho = traj.states[k].matrix();
        const double t = traj.times[k];
        const double energy = trace_product_real(rho, h);
        erg[k] = energy - passive_energy(rho, hs);
        work[k] = energy - initial_energy;
        avg[k] = t != 0.0 ? work[k] / t : 0.0;
        inst[k] = instantaneous_power(rho, p, h, ordering);
        const double e_plus = ergotropy(conjugate(u_plus, rho, ordering), hs);
        const double e_minus = ergotropy(conjugate(u_minus, rho, ordering), hs);
        fd[k] = (e_plus - e_minus) / (2.0 * fd_step);
        eff[k] = erg[k] > kEfficiencyFloor ? work[k] / erg[k] : 1.0;
    }
    out.add_column("ergotropy", std::move(erg));
    out.add_column("work", std::move(work));
    out.add_column("power_avg", std::move(avg));
    out.add_column("power_instant", std::move(inst));
    out.add_column("power_fd", std::move(fd));
    out.add_column("efficiency", std::move(eff));
    return out;
}

double unitary_capacity(const ComplexMatrix& rho, const SpectralDecomposition& h_spectrum) {
    const auto pops = descending_populations(rho);
    auto e = h_spectrum.values;
    std::sort(e.begin(), e.end());
    double gap = 0.0;
    for (std::size_t k = 0; k < pops.size(); ++k) gap += pops[k] * (e[e.size() - 1 - k] - e[k]);
    return gap;
}

CapacityReport capacity(const ModelParams& p) {
    p.validate();
    const ComplexMatrix h = build_hamiltonian(p);
    CapacityReport r;
    r.capacity_basis = h(3, 3).real() - h(0, 0).real();
    r.capacity_unitary = unitary_capacity(gibbs_numeric(p).matrix(), hermitian_eigen(h));
    r.closed_form = closed_form_capacity(p);
    return r;
}

double closed_form_capacity(const ModelParams& p) {
    const double T = p.temperature;
    const double q1 = std::sqrt(p.delta * p.delta + 9.0 * p.dm * p.dm);
    const double q2 = std::sqrt(p.field * p.field + p.ksea * p.ksea + p.epsilon * p.epsilon);
    const double u1 = std::cosh(2.0 * q1 / (3.0 * T));
    const double u2 = std::sinh(2.0 * q1 / (3.0 * T));
    const double v1 = std::sinh(2.0 * q2 / T);
    const double v2 = std::cosh(2.0 * q2 / T);
    const double e = std::exp(4.0 * p.delta / (3.0 * T));
    const double b = p.field;
    return (2.0 * u1 * (3.0 * b + 2.0 * p.delta) * e + 6.0 * b * v2 + 2.0 * q1 * u2 * e + 6.0 * q2 * v1) /
           (3.0 * (u1 * e + v2));
}

std::complex<double> closed_form_ergotropy(const ModelParams& p, double omega_t) {
    const double T = p.temperature;
    const double q2 = std::sqrt(p.field * p.field + p.ksea * p.ksea + p.epsilon * p.epsilon);
    const double v1 = std::sinh(2.0 * q2 / T);
    const double v2 = std::cosh(2.0 * q2 / T);

    double z = 0.0;
    for (double nu : closed_form_spectrum(p).nu) z += std::exp(-nu / T);

    const double s2 = std::pow(std::sin(2.0 * omega_t), 2);
    const double s1 = std::pow(std::sin(omega_t), 2);
    const double c2 = std::cos(2.0 * omega_t);
    const cplx a{-p.delta + p.epsilon, p.dm}; // -delta + iD + eps
    const cplx bracket = a * s2 * v2 - a * std::exp(cplx{2.0 * p.delta / T, -2.0 * p.dm / T}) * s2 +
                         2.0 * s1 * v1 *
                             (2.0 * p.field * p.field + p.epsilon * a + p.epsilon * a * c2 +
                              2.0 * p.ksea * p.ksea) /
                             q2;
    return 2.0 * std::exp(-2.0 * p.delta / (3.0 * T)) / z * bracket;
}

TimeSeries charged_coherence(const Trajectory& traj) {
    TimeSeries out;
    out.set_times(traj.times);
    std::vector<double> c;
    c.reserve(traj.states.size());
    for (const auto& s : traj.states) c.push_back(l1_coherence(s));
    out.add_column("coherence", std::move(c));
    return out;
}

PeakMetrics peak_metrics(const ModelParams& p, std::size_t scan_points) {
    p.validate();
    const ComplexMatrix h = build_hamiltonian(p);
    const SpectralDecomposition hs = hermitian_eigen(h);
    const DensityMatrix zeta = gibbs_numeric(p);
    const double floor_energy = passive_energy(zeta.matrix(), hs);

    PeakMetrics out;
    if (p.omega == 0.0) {
        out.coherence_max = l1_coherence(zeta);
        return out;
    }
    auto state_at = [&](double wt) {
        const ComplexMatrix u = charging_unitary(p, wt / p.omega);
        return ComplexMatrix(u * zeta.matrix() * u.adjoint());
    };
    const std::function<double(double)> erg = [&](double wt) {
        return trace_product_real(state_at(wt), h) - floor_energy;
    };
    const std::function<double(double)> pow = [&](double wt) {
        return instantaneous_power(state_at(wt), p, h);
    };
    const std::function<double(double)> coh = [&](double wt) { return l1_coherence(state_at(wt)); };

    const double hi = std::numbers::pi;
    const std::size_t n = std::max<std::size_t>(scan_points, 3);
    std::vector<double> erg_s(n), pow_s(n), coh_s(n);
    for (std::size_t k = 0; k < n; ++k) {
        const ComplexMatrix rho = state_at(hi * static_cast<double>(k) / static_cast<double>(n - 1));
        erg_s[k] = trace_product_real(rho, h) - floor_energy;
        pow_s[k] = instantaneous_power(rho, p, h);
        coh_s[k] = l1_coherence(rho);
    }
    double arg = 0.0;
    out.ergotropy_max = refine_peak(erg, erg_s, 0.0, hi, arg);
    out.ergotropy_argmax = arg;
    out.power_max = refine_peak(pow, pow_s, 0.0, hi, arg);
    out.coherence_max = refine_peak(coh, coh_s, 0.0, hi, arg);
    return out;
}

} // namespace dqb
