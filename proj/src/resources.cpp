// resources.cpp - Coherence, concurrence and discord of two-qubit states

#include "dqb/resources.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace dqb {

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix swap_gate() {
    ComplexMatrix s(4);
    s(0, 0) = 1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 3) = 1.0;
    return s;
}

double binary_entropy_of_2x2(const ComplexMatrix& sigma, double p) {
    // Eigenvalues of sigma / p in closed form.
    const double a = sigma(0, 0).real() / p;
    const double d = sigma(1, 1).real() / p;
    const double b = std::abs(sigma(0, 1)) / p;
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    const std::array<double, 2> values{std::clamp(mean - radius, 0.0, 1.0), std::clamp(mean + radius, 0.0, 1.0)};
    return shannon_entropy_bits(values);
}

// Conditional entropy sum_i p_i S(rho_B|i) for a measurement on A, evaluated
// on the 2x2 blocks R_{aa'} = <a|rho|a'> (operators on B).
class ConditionalEntropy {
public:
    explicit ConditionalEntropy(const ComplexMatrix& rho) : rho_b_(partial_trace(rho, Subsystem::B)) {
        for (std::size_t a = 0; a < 2; ++a)
            for (std::size_t ap = 0; ap < 2; ++ap) {
                ComplexMatrix block(2);
                for (std::size_t b = 0; b < 2; ++b)
                    for (std::size_t bp = 0; bp < 2; ++bp) block(b, bp) = rho(2 * a + b, 2 * ap + bp);
                blocks_[2 * a + ap] = block;
            }
    }

    double operator()(double theta, double phi) {
        ++evals_;
        const double ct = std::cos(theta);
        const double st = std::sin(theta);
        const cplx off = st * std::exp(cplx{0.0, -phi}); // (n.sigma)_{01}
        // E+ = (I + n.sigma)/2; sigma+ = sum_{a,a'} E+_{a a'} R_{a' a}
        const cplx e00 = 0.5 * (1.0 + ct);
        const cplx e01 = 0.5 * off;
        const cplx e10 = 0.5 * std::conj(off);
        const cplx e11 = 0.5 * (1.0 - ct);
        ComplexMatrix plus = e00 * blocks_[0] + e01 * blocks_[2] + e10 * blocks_[1] + e11 * blocks_[3];
        ComplexMatrix minus = rho_b_ - plus;

        double total = 0.0;
        for (const ComplexMatrix* sigma : {&plus, &minus}) {
            const double p = sigma->trace().real();
            if (p > 1e-15) total += p * binary_entropy_of_2x2(*sigma, p);
        }
        return total;
    }

    std::size_t evals() const { return evals_; }
    const ComplexMatrix& rho_b() const { return rho_b_; }

private:
    ComplexMatrix rho_b_;
    std::array<ComplexMatrix, 4> blocks_{ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2)};
    std::size_t evals_{0};
};

struct Vertex {
    double theta;
    double phi;
    double value;
};

// Nelder-Mead minimization in (theta, phi) from a simplex of size (h_theta, h_phi).
template <typename F>
Vertex nelder_mead(F& f, double theta, double phi, double h_theta, double h_phi, const DiscordOptions& opt) {
    std::array<Vertex, 3> s{Vertex{theta, phi, f(theta, phi)}, Vertex{theta + h_theta, phi, f(theta + h_theta, phi)},
                            Vertex{theta, phi + h_phi, f(theta, phi + h_phi)}};
    const double size_tol = 1e-2 * std::sqrt(opt.objective_tol);
    for (std::size_t it = 0; it < opt.max_iterations; ++it) {
        std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
        const double spread = s[2].value - s[0].value;
        double size = 0.0;
        for (std::size_t k = 1; k < 3; ++k) {
            size = std::max(size, std::hypot(s[k].theta - s[0].theta, s[k].phi - s[0].phi));
        }
        if (spread <= opt.objective_tol && size <= size_tol) break;

        const double ct = 0.5 * (s[0].theta + s[1].theta);
        const double cp = 0.5 * (s[0].phi + s[1].phi);
        auto at = [&](double t) {
            const double th = ct + t * (s[2].theta - ct);
            const double ph = cp + t * (s[2].phi - cp);
            return Vertex{th, ph, f(th, ph)};
        };
        const Vertex reflected = at(-1.0);
        if (reflected.value < s[0].value) {
            const Vertex expanded = at(-2.0);
            s[2] = expanded.value < reflected.value ? expanded : reflected;
        } else if (reflected.value < s[1].value) {
            s[2] = reflected;
        } else {
            const Vertex contracted = reflected.value < s[2].value ? at(-0.5) : at(0.5);
            if (contracted.value < std::min(reflected.value, s[2].value)) {
                s[2] = contracted;
            } else {
                for (std::size_t k = 1; k < 3; ++k) {
                    s[k].theta = 0.5 * (s[k].theta + s[0].theta);
                    s[k].phi = 0.5 * (s[k].phi + s[0].phi);
                    s[k].value = f(s[k].theta, s[k].phi);
                }
            }
        }
    }
    return *std::min_element(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.value < b.value; });
}

MeasurementDirection canonical_direction(double theta, double phi) {
    // Fold onto theta in [0, pi], phi in [0, 2 pi) without changing n.
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    if (theta > kPi) {
        theta = 2.0 * kPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    return {theta, phi};
}

} // namespace

ComplexMatrix MeasurementDirection::projector(int sign) const {
    const double s = sign >= 0 ? 1.0 : -1.0;
    const double ct = std::cos(theta);
    const cplx off = std::sin(theta) * std::exp(cplx{0.0, -phi});
    return ComplexMatrix(2, {0.5 * (1.0 + s * ct), 0.5 * s * off, 0.5 * s * std::conj(off), 0.5 * (1.0 - s * ct)});
}

double l1_coherence(const ComplexMatrix& rho) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j)
            if (i != j) sum += std::abs(rho(i, j));
    return sum;
}

double l1_coherence(const DensityMatrix& rho) { return l1_coherence(rho.matrix()); }

double concurrence(const DensityMatrix& rho) {
    const ComplexMatrix yy = kron(pauli::y(), pauli::y());
    const ComplexMatrix flipped = yy * rho.matrix().conj() * yy;
    // The spectrum of rho * flipped equals that of sqrt(rho) flipped sqrt(rho), which is Hermitian.
    const ComplexMatrix root =
        apply_spectral(hermitian_eigen(rho.matrix()), [](double x) { return cplx{std::sqrt(std::max(x, 0.0)), 0.0}; });
    ComplexMatrix m = root * flipped * root;
    m = 0.5 * (m + m.adjoint());
    auto values = hermitian_eigenvalues(m);
    std::array<double, 4> lambda{};
    for (std::size_t k = 0; k < 4; ++k) lambda[k] = std::sqrt(std::max(values[k], 0.0));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return std::clamp(lambda[0] - lambda[1] - lambda[2] - lambda[3], 0.0, 1.0);
}

double measured_information(const DensityMatrix& rho, const MeasurementDirection& direction) {
    ConditionalEntropy f(rho.matrix());
    return von_neumann_entropy(f.rho_b()) - f(direction.theta, direction.phi);
}

DiscordResult quantum_discord(const DensityMatrix& rho_in, const DiscordOptions& options) {
    ComplexMatrix rho = rho_in.matrix();
    if (options.measured == Subsystem::B) {
        const ComplexMatrix sw = swap_gate();
        rho = sw * rho * sw;
    }

    const double s_a = von_neumann_entropy(partial_trace(rho, Subsystem::A));
    const double s_b = von_neumann_entropy(partial_trace(rho, Subsystem::B));
    const double s_ab = von_neumann_entropy(rho);

    ConditionalEntropy f(rho);
    const std::size_t nt = std::max<std::size_t>(options.grid_theta, 2);
    const std::size_t np = std::max<std::size_t>(options.grid_phi, 1);
    const double dtheta = kPi / static_cast<double>(nt - 1);
    const double dphi = 2.0 * kPi / static_cast<double>(np);

    std::vector<Vertex> cells;
    cells.reserve(nt * np);
    for (std::size_t i = 0; i < nt; ++i) {
        const double theta = dtheta * static_cast<double>(i);
        // The poles are single points; one phi sample is enough there.
        const std::size_t n_phi = (i == 0 || i + 1 == nt) ? 1 : np;
        for (std::size_t j = 0; j < n_phi; ++j) {
            const double phi = dphi * static_cast<double>(j);
            cells.push_back({theta, phi, f(theta, phi)});
        }
    }
    const std::size_t keep = std::min(std::max<std::size_t>(options.keep_best, 1), cells.size());
    std::partial_sort(cells.begin(), cells.begin() + static_cast<std::ptrdiff_t>(keep), cells.end(),
                      [](const Vertex& a, const Vertex& b) {
                          if (a.value != b.value) return a.value < b.value;
                          return std::pair(a.theta, a.phi) < std::pair(b.theta, b.phi);
                      });

    Vertex best = cells.front();
    for (std::size_t k = 0; k < keep; ++k) {
        const Vertex polished = nelder_mead(f, cells[k].theta, cells[k].phi, 0.5 * dtheta, 0.5 * dphi, options);
        if (polished.value < best.value) best = polished;
    }

    DiscordResult r;
    r.mutual_information = s_a + s_b - s_ab;
    r.classical_correlation = s_b - best.value;
    r.discord = r.mutual_information - r.classical_correlation;
    if (r.discord < 0.0 && r.discord >= -1e-9) r.discord = 0.0;
    r.optimal_direction = canonical_direction(best.theta, best.phi);
    r.optimizer_evals = f.evals();
    return r;
}

} // namespace dqb
