// density_matrix.cpp - Validation of two-qubit states

#include "dqb/density_matrix.hpp"

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

} // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, StateTolerances tol) : m_(std::move(m)), tol_(tol) {
    if (m_.dim() != 4) throw ValidationError("DensityMatrix: expected a 4x4 matrix");
    const double herm = m_.hermiticity_error();
    if (!(herm <= tol_.hermitian)) {
        throw ValidationError("DensityMatrix: not Hermitian (max asymmetry " + sci(herm) + ")");
    }
    const double tr = m_.trace().real();
    if (!(std::abs(tr - 1.0) <= tol_.trace)) {
        throw ValidationError("DensityMatrix: trace " + sci(tr) + " differs from 1");
    }
    const auto values = hermitian_eigenvalues(m_);
    if (values.front() < -tol_.psd) {
        throw ValidationError("DensityMatrix: negative eigenvalue " + sci(values.front()));
    }
}

DensityMatrix DensityMatrix::from_ket(std::span<const cplx> ket) {
    const double n = norm(ket);
    ComplexVector v(ket.begin(), ket.end());
    for (auto& x : v) x /= n;
    return DensityMatrix(ComplexMatrix::outer(v));
}

DensityMatrix DensityMatrix::basis_state(std::size_t index) { return from_ket(basis_ket(4, index)); }

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(0.25 * ComplexMatrix::identity(4)); }

} // namespace dqb
