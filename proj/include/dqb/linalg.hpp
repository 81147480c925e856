// linalg.hpp - Dense complex matrices for one- and two-qubit operators
//
// Everything here is sized for the 2x2 and 4x4 problems of a two-spin model:
// Hermitian eigendecomposition (cyclic Jacobi), matrix exponential, partial
// trace and von Neumann entropy.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace dqb {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

inline constexpr cplx kI{0.0, 1.0};

/// Dense row-major complex matrix of dimension 2 or 4.
class ComplexMatrix {
public:
    static constexpr std::size_t kMaxDim = 4;

    /// Zero matrix; throws ValidationError unless dim is 2 or 4.
    explicit ComplexMatrix(std::size_t dim = 4);
    /// Row-major entries; the list must hold exactly dim*dim values.
    ComplexMatrix(std::size_t dim, std::initializer_list<cplx> entries);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);
    /// |v><v| for a vector of length 2 or 4.
    static ComplexMatrix outer(std::span<const cplx> ket);
    static ComplexMatrix outer(std::span<const cplx> ket, std::span<const cplx> bra);

    std::size_t dim() const { return dim_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

    std::span<const cplx> entries() const { return {data_.data(), dim_ * dim_}; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conj() const;
    ComplexMatrix transpose() const;
    cplx trace() const;

    /// max |M_ij - conj(M_ji)|.
    double hermiticity_error() const;
    /// max |M_ij|.
    double max_abs() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
    friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
    friend ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
    friend ComplexMatrix operator*(double s, ComplexMatrix m) { return m *= cplx{s, 0.0}; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexVector operator*(const ComplexMatrix& m, std::span<const cplx> v);

    ComplexMatrix operator-() const { return *this * cplx{-1.0, 0.0}; }

private:
    std::size_t dim_;
    std::array<cplx, kMaxDim * kMaxDim> data_{};
};

/// max |A_ij - B_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product of two 2x2 matrices.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re Tr[A B] without forming the product.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

cplx inner(std::span<const cplx> a, std::span<const cplx> b); // <a|b>
double norm(std::span<const cplx> v);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
} // namespace pauli

/// Computational basis ket |index> in dimension dim.
ComplexVector basis_ket(std::size_t dim, std::size_t index);

enum class SortOrder { ascending, descending };

/// Eigenvalues with orthonormal eigenvectors; vectors[k] belongs to values[k].
struct SpectralDecomposition {
    std::vector<double> values;
    std::vector<ComplexVector> vectors;
    SortOrder order = SortOrder::ascending;

    /// Sum_k values[k] |v_k><v_k|.
    ComplexMatrix reconstruct() const;
    /// max |<v_i|v_j> - delta_ij|.
    double orthonormality_error() const;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Throws ValidationError naming the asymmetry when M is not Hermitian within
/// kHermitianTol * max(1, max|M_ij|). Eigenvalues closer than kDegeneracyTol
/// are grouped and their vectors re-orthonormalized in index order.
SpectralDecomposition hermitian_eigen(const ComplexMatrix& m, SortOrder order = SortOrder::ascending);

/// Eigenvalues only, ascending. The 2x2 case is closed form.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// exp(M). Hermitian and anti-Hermitian inputs go through the eigendecomposition,
/// anything else through Taylor scaling-and-squaring.
ComplexMatrix matrix_exp(const ComplexMatrix& m);

/// V f(diag) V^dagger for a Hermitian matrix.
template <typename F>
ComplexMatrix apply_spectral(const SpectralDecomposition& s, F&& f);

enum class Subsystem { A, B };

/// Reduced 2x2 state of a 4x4 two-qubit operator; `keep` names the surviving factor.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep);

inline constexpr double kEntropyTraceTol = 1e-8;
inline constexpr double kEigenClipTol = 1e-10;

/// -Tr[rho log2 rho] in bits. Eigenvalues in [-kEigenClipTol, 0) are clipped to
/// zero; larger negatives or a trace off by more than kEntropyTraceTol throw.
double von_neumann_entropy(const ComplexMatrix& rho);

/// -Sum p log2 p over already validated probabilities, 0 log 0 = 0.
double shannon_entropy_bits(std::span<const double> probabilities);

// ---------------------------------------------------------------------------

template <typename F>
ComplexMatrix apply_spectral(const SpectralDecomposition& s, F&& f) {
    const std::size_t n = s.values.size();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto fk = f(s.values[k]);
        const auto& v = s.vectors[k];
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vi = v[i] * fk;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += vi * std::conj(v[j]);
        }
    }
    return out;
}

} // namespace dqb
