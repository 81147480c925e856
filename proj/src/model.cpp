// model.cpp - Hamiltonian, closed-form spectrum and charging operators

#include "dqb/model.hpp"

#include <cmath>
#include <string>

#include "dqb/errors.hpp"

namespace dqb {

namespace {

// Normalizes the amplitude pair (x00, x11) and fixes the phase so the |11>
// amplitude is real and non-negative (the form c (delta |00> + |11>)).
ComplexVector zeeman_block_vector(cplx x00, cplx x11) {
    const double n = std::hypot(std::abs(x00), std::abs(x11));
    cplx phase = 1.0;
    if (std::abs(x11) > 0.0) phase = std::conj(x11) / std::abs(x11);
    return {x00 * phase / n, 0.0, 0.0, x11 * phase / n};
}

} // namespace

void ModelParams::validate() const {
    const std::array<std::pair<const char*, double>, 8> fields{{{"delta", delta},
                                                                  {"epsilon", epsilon},
                                                                  {"dm", dm},
                                                                  {"ksea", ksea},
                                                                  {"field", field},
                                                                  {"temperature", temperature},
                                                                  {"omega", omega},
                                                                  {"gamma", gamma}}};
    for (const auto& [name, value] : fields) {
        if (!std::isfinite(value)) throw ParameterError(std::string("parameter '") + name + "' is not finite");
    }
    if (!(temperature > 0.0)) throw ParameterError("temperature must be > 0");
    if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
}

ComplexMatrix build_hamiltonian(const ModelParams& p) {
    const auto x = pauli::x();
    const auto y = pauli::y();
    const auto z = pauli::z();
    const auto id = pauli::identity();

    const auto xy = kron(x, y);
    const auto yx = kron(y, x);

    ComplexMatrix h = p.dm * (xy - yx) + p.ksea * (xy + yx);
    h -= (1.0 / 3.0) * ((p.delta - 3.0 * p.epsilon) * kron(x, x) + (p.delta + 3.0 * p.epsilon) * kron(y, y) -
                        2.0 * p.delta * kron(z, z));
    h += p.field * (kron(z, id) + kron(id, z));
    return h;
}

double kappa1(const ModelParams& p) { return std::hypot(3.0 * p.dm, p.delta); }

double kappa2(const ModelParams& p) { return std::hypot(p.field, std::hypot(p.ksea, p.epsilon)); }

ClosedFormSpectrum closed_form_spectrum(const ModelParams& p) {
    ClosedFormSpectrum s;
    const double k1 = kappa1(p);
    const double k2 = kappa2(p);
    s.kappa1 = k1;
    s.kappa2 = k2;
    s.nu = {-2.0 * (p.delta + k1) / 3.0, 2.0 * (-p.delta + k1) / 3.0, 2.0 * (p.delta - 3.0 * k2) / 3.0,
            2.0 * (p.delta + 3.0 * k2) / 3.0};

    // {|01>, |10>} block: <01|H|10> = -2 delta/3 + 2iD, so eta has unit modulus.
    const cplx eta = k1 > 0.0 ? cplx{-p.delta, 3.0 * p.dm} / k1 : cplx{1.0, 0.0};
    const double q = 1.0 / std::sqrt(1.0 + std::norm(eta));
    s.eigvecs[0] = {0.0, -eta * q, q, 0.0};
    s.eigvecs[1] = {0.0, eta * q, q, 0.0};

    // {|00>, |11>} block. delta1 = i(k2 - B)/(G - i eps) = i(G + i eps)/(k2 + B)
    // and delta2 = -i(k2 + B)/(G - i eps) = -i(G + i eps)/(k2 - B); the form with
    // the larger denominator is used, and G = eps = 0 then needs no special case.
    if (k2 > 0.0) {
        const cplx g_minus = {p.ksea, -p.epsilon};
        const cplx g_plus = {p.ksea, p.epsilon};
        if (p.field >= 0.0) {
            s.eigvecs[2] = zeeman_block_vector(kI * g_plus, k2 + p.field);
            s.eigvecs[3] = zeeman_block_vector(-kI * (k2 + p.field), g_minus);
        } else {
            s.eigvecs[2] = zeeman_block_vector(kI * (k2 - p.field), g_minus);
            s.eigvecs[3] = zeeman_block_vector(-kI * g_plus, k2 - p.field);
        }
    } else {
        s.eigvecs[2] = basis_ket(4, 3);
        s.eigvecs[3] = basis_ket(4, 0);
    }
    return s;
}

ComplexMatrix charging_hamiltonian(const ModelParams& p) {
    const auto x = pauli::x();
    const auto id = pauli::identity();
    return p.omega * (kron(x, id) + kron(id, x));
}

ComplexMatrix charging_unitary(const ModelParams& p, double t) {
    const double wt = p.omega * t;
    const double cw = std::cos(wt);
    const double sw = std::sin(wt);
    const cplx a = cw * cw;
    const cplx b = -sw * sw;
    const cplx c = cplx{0.0, -0.5 * std::sin(2.0 * wt)};
    return ComplexMatrix(4, {a, c, c, b, //
                             c, a, b, c, //
                             c, b, a, c, //
                             b, c, c, a});
}

} // namespace dqb
