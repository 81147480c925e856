// oracles.hpp - Independent reference computations and random generators for tests
//
// Nothing here calls the library's eigensolver or exponential: the Hamiltonian
// is rebuilt from Kronecker products and everything spectral goes through Eigen.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "dqb/density_matrix.hpp"
#include "dqb/linalg.hpp"
#include "dqb/model.hpp"

namespace oracle {

using cd = std::complex<double>;
using M2 = Eigen::Matrix2cd;
using M4 = Eigen::Matrix4cd;
using M16 = Eigen::Matrix<cd, 16, 16>;
using V16 = Eigen::Matrix<cd, 16, 1>;

inline M4 to_eigen(const dqb::ComplexMatrix& m) {
    M4 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m(i, j);
    return out;
}

inline dqb::ComplexMatrix from_eigen(const M4& m) {
    dqb::ComplexMatrix out(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = m(i, j);
    return out;
}

inline M2 sx() { return (M2() << 0, 1, 1, 0).finished(); }
inline M2 sy() { return (M2() << 0, cd(0, -1), cd(0, 1), 0).finished(); }
inline M2 sz() { return (M2() << 1, 0, 0, -1).finished(); }
inline M2 id2() { return M2::Identity(); }

inline M4 kron(const M2& a, const M2& b) {
    M4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// The model Hamiltonian written term by term from its operator definition.
inline M4 hamiltonian(const dqb::ModelParams& p) {
    const M4 xy = kron(sx(), sy());
    const M4 yx = kron(sy(), sx());
    M4 h = p.dm * (xy - yx) + p.ksea * (xy + yx);
    h -= (1.0 / 3.0) * ((p.delta - 3 * p.epsilon) * kron(sx(), sx()) + (p.delta + 3 * p.epsilon) * kron(sy(), sy()) -
                        2 * p.delta * kron(sz(), sz()));
    h += p.field * (kron(sz(), id2()) + kron(id2(), sz()));
    return h;
}

inline M4 charging_hamiltonian(double omega) { return omega * (kron(sx(), id2()) + kron(id2(), sx())); }

/// Ascending eigenvalues.
inline std::array<double, 4> eigenvalues(const M4& h) {
    Eigen::SelfAdjointEigenSolver<M4> es(h);
    std::array<double, 4> out{};
    for (int k = 0; k < 4; ++k) out[k] = es.eigenvalues()(k);
    return out;
}

/// exp(-H/T)/Z via the Eigen matrix exponential of the shifted generator.
inline M4 gibbs(const M4& h, double temperature) {
    const double lowest = eigenvalues(h)[0];
    const M4 shifted = -(h - lowest * M4::Identity()) / temperature;
    const M4 e = shifted.exp();
    return e / e.trace();
}

inline M4 unitary(const M4& h, double t) { return (cd(0, -t) * h).exp(); }

/// Row-major vectorization: vec(A rho B) = (A kron B^T) vec(rho).
inline M16 kron4(const M4& a, const M4& b) {
    M16 out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    return out;
}

inline M16 lindblad_superoperator(const M4& h, double gamma) {
    const M4 id = M4::Identity();
    M16 l = cd(0, -1) * (kron4(h, id) - kron4(id, h.transpose()));
    const std::array<M4, 2> cs{std::sqrt(gamma) * kron(sx(), id2()), std::sqrt(gamma) * kron(id2(), sx())};
    for (const M4& c : cs) {
        const M4 cdc = c.adjoint() * c;
        l += kron4(c, c.conjugate()) - 0.5 * kron4(cdc, id) - 0.5 * kron4(id, cdc.transpose());
    }
    return l;
}

inline M4 evolve_superoperator(const M4& h, double gamma, const M4& rho0, double t) {
    V16 v;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v(4 * i + j) = rho0(i, j);
    const V16 out = (lindblad_superoperator(h, gamma) * t).exp() * v;
    M4 rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho(i, j) = out(4 * i + j);
    return rho;
}

inline double max_abs_diff(const M4& a, const M4& b) { return (a - b).cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Hand-rolled generators.

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    dqb::ModelParams params(double range, double t_lo = 0.05, double t_hi = 10.0) {
        dqb::ModelParams p;
        p.delta = uniform(-range, range);
        p.epsilon = uniform(-range, range);
        p.dm = uniform(-range, range);
        p.ksea = uniform(-range, range);
        p.field = uniform(-range, range);
        p.temperature = uniform(t_lo, t_hi);
        return p;
    }

    M4 hermitian(double scale = 1.0) {
        M4 a;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) a(i, j) = cd(normal(), normal());
        return scale * 0.5 * (a + a.adjoint());
    }

    /// Random mixed state A A^dag / Tr with Ginibre A of the given rank.
    M4 state(int rank = 4) {
        Eigen::Matrix<cd, 4, Eigen::Dynamic> a(4, rank);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < rank; ++j) a(i, j) = cd(normal(), normal());
        M4 rho = a * a.adjoint();
        return rho / rho.trace();
    }

    M2 unitary2() {
        M2 a;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = cd(normal(), normal());
        const M2 h = 0.5 * (a + a.adjoint());
        return (cd(0, 1) * h).exp();
    }

private:
    std::mt19937_64 rng_;
};

inline dqb::DensityMatrix density(const M4& rho) {
    M4 h = 0.5 * (rho + rho.adjoint());
    return dqb::DensityMatrix(from_eigen(h));
}

inline dqb::DensityMatrix bell() {
    const double s = 1.0 / std::sqrt(2.0);
    const std::array<cd, 4> ket{s, 0, 0, s};
    return dqb::DensityMatrix::from_ket(ket);
}

} // namespace oracle
