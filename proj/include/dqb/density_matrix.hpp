// density_matrix.hpp - Validated two-qubit density matrix

#pragma once

#include <cstddef>
#include <span>

#include "dqb/linalg.hpp"

namespace dqb {

struct StateTolerances {
    double hermitian{1e-10};
    double trace{1e-8};
    double psd{1e-8};
};

/// 4x4 Hermitian, unit-trace, positive semidefinite matrix. Construction
/// validates against the tolerances and throws ValidationError on failure.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix m, StateTolerances tol = {});

    static DensityMatrix from_ket(std::span<const cplx> ket);
    static DensityMatrix basis_state(std::size_t index);
    static DensityMatrix maximally_mixed();

    const ComplexMatrix& matrix() const { return m_; }
    const StateTolerances& tolerances() const { return tol_; }

    double trace_tol() const { return tol_.trace; }
    double psd_tol() const { return tol_.psd; }

private:
    ComplexMatrix m_;
    StateTolerances tol_;
};

} // namespace dqb
