// thermal.cpp - Gibbs state, closed-form entries and spectrum diagnostics

#include "dqb/thermal.hpp"

#include <algorithm>
#include <cmath>

#include "dqb/errors.hpp"

namespace dqb {

namespace {

void require_positive_temperature(const ModelParams& p) {
    if (!(p.temperature > 0.0) || !std::isfinite(p.temperature)) {
        throw ParameterError("temperature must be finite and > 0");
    }
}

// log(sinh x) for x > 0 without overflow.
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); }

// sinh(x)/x * exp(-shift), with the series branch near zero.
double scaled_sinhc(double x, double shift) {
    if (std::abs(x) < 1e-6) return std::exp(-shift) * (1.0 + x * x / 6.0);
    return 0.5 * (std::exp(x - shift) - std::exp(-x - shift)) / x;
}

// Hyperbolic building blocks shared by the closed forms, all multiplied by
// exp(-m) with m the largest exponent so nothing overflows at small T.
struct ScaledTerms {
    double a{0.0};      // 4 delta / (3T)
    double s{0.0};      // 2 kappa1 / (3T)
    double j{0.0};      // 2 kappa2 / T
    double shift{0.0};  // m
    double e_cosh_s{0.0};
    double e_sinh_s{0.0};
    double cosh_j{0.0};
    double sinh_j{0.0};
    double denom{0.0};  // e^a cosh S + cosh J
};

ScaledTerms scaled_terms(const ModelParams& p) {
    ScaledTerms t;
    const double T = p.temperature;
    t.a = 4.0 * p.delta / (3.0 * T);
    t.s = 2.0 * kappa1(p) / (3.0 * T);
    t.j = 2.0 * kappa2(p) / T;
    t.shift = std::max(t.a + t.s, t.j);
    const double ep = std::exp(t.a + t.s - t.shift);
    const double em = std::exp(t.a - t.s - t.shift);
    t.e_cosh_s = 0.5 * (ep + em);
    t.e_sinh_s = 0.5 * (ep - em);
    t.cosh_j = 0.5 * (std::exp(t.j - t.shift) + std::exp(-t.j - t.shift));
    t.sinh_j = 0.5 * (std::exp(t.j - t.shift) - std::exp(-t.j - t.shift));
    t.denom = t.e_cosh_s + t.cosh_j;
    return t;
}

ComplexVector normalized_pair(cplx x00, cplx x11) {
    const double n = std::hypot(std::abs(x00), std::abs(x11));
    if (n == 0.0) return basis_ket(4, 3);
    return {x00 / n, 0.0, 0.0, x11 / n};
}

} // namespace

std::vector<double> boltzmann_weights(std::span<const double> energies, double temperature) {
    const double e_min = *std::min_element(energies.begin(), energies.end());
    std::vector<double> w(energies.size());
    double z = 0.0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        w[k] = std::exp(-(energies[k] - e_min) / temperature);
        z += w[k];
    }
    for (double& x : w) x /= z;
    return w;
}

DensityMatrix gibbs_numeric(const ModelParams& p) {
    require_positive_temperature(p);
    const auto spec = hermitian_eigen(build_hamiltonian(p));
    const auto w = boltzmann_weights(spec.values, p.temperature);
    SpectralDecomposition weighted = spec;
    weighted.values = w;
    ComplexMatrix rho = weighted.reconstruct();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(rho);
}

ComplexMatrix GibbsClosedForm::to_matrix() const {
    ComplexMatrix m(4);
    m(0, 0) = z11;
    m(0, 3) = z14;
    m(3, 0) = std::conj(z14);
    m(1, 1) = z22;
    m(2, 2) = z22;
    m(1, 2) = z23;
    m(2, 1) = std::conj(z23);
    m(3, 3) = z44;
    return m;
}

GibbsClosedForm gibbs_closed_form(const ModelParams& p) {
    require_positive_temperature(p);
    const double T = p.temperature;
    const ScaledTerms t = scaled_terms(p);

    // sinh(J)/(J T) and e^a sinh(S)/(3 T S), scaled like the rest.
    const double sinh_j_over_jt = scaled_sinhc(t.j, t.shift) / T;
    const double e_sinh_s_over_3ts = scaled_sinhc(t.s, t.shift - t.a) / (3.0 * T);

    GibbsClosedForm g;
    g.j_arg = t.j;
    g.s_arg = t.s;
    g.z11 = (t.cosh_j - 2.0 * p.field * sinh_j_over_jt) / (2.0 * t.denom);
    g.z44 = (t.cosh_j + 2.0 * p.field * sinh_j_over_jt) / (2.0 * t.denom);
    g.z14 = kI * cplx{p.ksea, p.epsilon} * sinh_j_over_jt / t.denom;
    // 1/2 + 1/(-2 - 2 e^a cosh S sech J) rewritten over the common denominator.
    g.z22 = t.e_cosh_s / (2.0 * t.denom);
    g.z23 = cplx{p.delta, -3.0 * p.dm} * e_sinh_s_over_3ts / t.denom;
    return g;
}

GibbsSpectrum gibbs_spectrum(const ModelParams& p) {
    require_positive_temperature(p);
    const DensityMatrix zeta = gibbs_numeric(p);
    GibbsSpectrum out;
    out.decomposition = hermitian_eigen(zeta.matrix(), SortOrder::descending);

    const ScaledTerms t = scaled_terms(p);
    const double two_den = 2.0 * t.denom;
    out.closed_form_phi = {(t.e_cosh_s - std::abs(t.e_sinh_s)) / two_den, (t.e_cosh_s + std::abs(t.e_sinh_s)) / two_den,
                           (t.cosh_j - std::abs(t.sinh_j)) / two_den, (t.cosh_j + std::abs(t.sinh_j)) / two_den};

    auto closed = out.closed_form_phi;
    std::sort(closed.begin(), closed.end(), std::greater<>());
    for (std::size_t k = 0; k < 4; ++k) {
        out.eigenvalue_deviation =
            std::max(out.eigenvalue_deviation, std::abs(closed[k] - out.decomposition.values[k]));
    }

    // Closed-form eigenvectors phi1..phi4. alpha reduces to eta; L keeps the
    // printed form T csch(J)/kappa1 = kappa2 e^a |sinh S| / sinh J.
    const double k1 = kappa1(p);
    const double k2 = kappa2(p);
    const cplx alpha = k1 > 0.0 ? cplx{-p.delta, 3.0 * p.dm} / k1 : cplx{1.0, 0.0};
    double ell = 0.0;
    if (t.s > 0.0) {
        const double log_num = t.a + log_sinh(t.s);
        ell = t.j > 0.0 ? k2 * std::exp(log_num - log_sinh(t.j)) : 0.5 * p.temperature * std::exp(log_num);
    }
    const double xi = 1.0 / std::sqrt(1.0 + std::norm(alpha));
    const cplx g_minus{p.ksea, -p.epsilon};
    const std::array<ComplexVector, 4> vecs{
        ComplexVector{0.0, alpha * xi, xi, 0.0},
        ComplexVector{0.0, -alpha * xi, xi, 0.0},
        normalized_pair(-kI * (p.field + ell), g_minus),
        normalized_pair(-kI * (p.field - ell), g_minus),
    };
    for (const auto& v : vecs) {
        const auto w = zeta.matrix() * std::span<const cplx>(v);
        const cplx lambda = inner(v, w);
        ComplexVector r(4);
        for (std::size_t i = 0; i < 4; ++i) r[i] = w[i] - lambda * v[i];
        out.closed_form_vector_residual = std::max(out.closed_form_vector_residual, norm(r));
    }
    return out;
}

} // namespace dqb
