// linalg.cpp - Dense complex matrices, Jacobi eigensolver, exponential, entropy

#include "dqb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "dqb/errors.hpp"

namespace dqb {

namespace {

void require_dim(std::size_t dim) {
    if (dim != 2 && dim != 4) {
        throw ValidationError("ComplexMatrix: dimension must be 2 or 4, got " + std::to_string(dim));
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw ValidationError(std::string(what) + ": dimension mismatch " + std::to_string(a.dim()) + " vs " +
                              std::to_string(b.dim()));
    }
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

void require_hermitian(const ComplexMatrix& m, const char* what) {
    const double err = m.hermiticity_error();
    const double scale = std::max(1.0, m.max_abs());
    if (!(err <= kHermitianTol * scale)) {
        throw ValidationError(std::string(what) + ": matrix is not Hermitian (max asymmetry " + format_double(err) +
                              ")");
    }
}

double one_norm(const ComplexMatrix& m) {
    double best = 0.0;
    for (std::size_t j = 0; j < m.dim(); ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < m.dim(); ++i) col += std::abs(m(i, j));
        best = std::max(best, col);
    }
    return best;
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is the phase
// change that makes a(p,q) real followed by the real symmetric rotation.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cplx phase = std::conj(apq) / mag; // e^{-i arg a_pq}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = 0.5 * std::atan2(2.0 * mag, aqq - app);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    const cplx jpp = c;
    const cplx jpq = s;
    const cplx jqp = -s * phase;
    const cplx jqq = c * phase;

    const std::size_t n = a.dim();
    // A <- A J (columns p, q)
    for (std::size_t i = 0; i < n; ++i) {
        const cplx aip = a(i, p);
        const cplx aiq = a(i, q);
        a(i, p) = aip * jpp + aiq * jqp;
        a(i, q) = aip * jpq + aiq * jqq;
    }
    // A <- J^dagger A (rows p, q)
    for (std::size_t j = 0; j < n; ++j) {
        const cplx apj = a(p, j);
        const cplx aqj = a(q, j);
        a(p, j) = std::conj(jpp) * apj + std::conj(jqp) * aqj;
        a(q, j) = std::conj(jpq) * apj + std::conj(jqq) * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();
    // V <- V J
    for (std::size_t i = 0; i < n; ++i) {
        const cplx vip = v(i, p);
        const cplx viq = v(i, q);
        v(i, p) = vip * jpp + viq * jqp;
        v(i, q) = vip * jpq + viq * jqq;
    }
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
}

void gram_schmidt(std::vector<ComplexVector>& vs, std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
        for (std::size_t j = begin; j < k; ++j) {
            const cplx proj = inner(vs[j], vs[k]);
            for (std::size_t i = 0; i < vs[k].size(); ++i) vs[k][i] -= proj * vs[j][i];
        }
        const double nk = norm(vs[k]);
        for (auto& x : vs[k]) x /= nk;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { require_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<cplx> entries) : ComplexMatrix(dim) {
    if (entries.size() != dim * dim) {
        throw ValidationError("ComplexMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                              std::to_string(entries.size()));
    }
    std::copy(entries.begin(), entries.end(), data_.begin());
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> ket) { return outer(ket, ket); }

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> ket, std::span<const cplx> bra) {
    if (ket.size() != bra.size()) throw ValidationError("outer: ket and bra lengths differ");
    ComplexMatrix m(ket.size());
    for (std::size_t i = 0; i < ket.size(); ++i)
        for (std::size_t j = 0; j < bra.size(); ++j) m(i, j) = ket[i] * std::conj(bra[j]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out(dim_);
    for (std::size_t k = 0; k < dim_ * dim_; ++k) out.data_[k] = std::conj(data_[k]);
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) out(i, j) = (*this)(j, i);
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::hermiticity_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            err = std::max(err, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return err;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (std::size_t k = 0; k < dim_ * dim_; ++k) m = std::max(m, std::abs(data_[k]));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < dim_ * dim_; ++k) s += std::norm(data_[k]);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] += rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] -= rhs.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (std::size_t k = 0; k < dim_ * dim_; ++k) data_[k] *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "operator*");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const cplx> v) {
    if (v.size() != m.dim()) throw ValidationError("matrix-vector product: dimension mismatch");
    ComplexVector out(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
    return out;
}

// ---------------------------------------------------------------------------
// Free helpers

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2) throw ValidationError("kron: only 2x2 factors are supported");
    ComplexMatrix out(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
    return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b, "trace_product_real");
    double t = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t k = 0; k < a.dim(); ++k) t += (a(i, k) * b(k, i)).real();
    return t;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix y() { return ComplexMatrix(2, {0.0, -kI, kI, 0.0}); }
ComplexMatrix z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
} // namespace pauli

ComplexVector basis_ket(std::size_t dim, std::size_t index) {
    require_dim(dim);
    ComplexVector v(dim, 0.0);
    v.at(index) = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Spectral decomposition

ComplexMatrix SpectralDecomposition::reconstruct() const {
    return apply_spectral(*this, [](double x) { return x; });
}

double SpectralDecomposition::orthonormality_error() const {
    double err = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            const cplx target = (i == j) ? 1.0 : 0.0;
            err = std::max(err, std::abs(inner(vectors[i], vectors[j]) - target));
        }
    return err;
}

SpectralDecomposition hermitian_eigen(const ComplexMatrix& m, SortOrder order) {
    require_hermitian(m, "hermitian_eigen");
    const std::size_t n = m.dim();

    // Work on the exactly Hermitian part so round-off asymmetry cannot leak in.
    ComplexMatrix a = 0.5 * (m + m.adjoint());
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double target = 1e-14 * scale;
    constexpr int kMaxSweeps = 64;
    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }
    if (sweep == kMaxSweeps && off_diagonal_norm(a) > 1e-12 * scale) {
        throw ValidationError("hermitian_eigen: Jacobi iteration did not converge");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        return order == SortOrder::ascending ? a(i, i).real() < a(j, j).real() : a(i, i).real() > a(j, j).real();
    });

    SpectralDecomposition out;
    out.order = order;
    out.values.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t k : idx) {
        out.values.push_back(a(k, k).real());
        ComplexVector col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = v(i, k);
        out.vectors.push_back(std::move(col));
    }

    std::size_t begin = 0;
    while (begin < n) {
        std::size_t end = begin + 1;
        while (end < n && std::abs(out.values[end] - out.values[begin]) <= kDegeneracyTol) ++end;
        gram_schmidt(out.vectors, begin, end);
        begin = end;
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (m.dim() == 2) {
        require_hermitian(m, "hermitian_eigenvalues");
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double mean = 0.5 * (a + d);
        const double radius = std::hypot(0.5 * (a - d), std::abs(0.5 * (m(0, 1) + std::conj(m(1, 0)))));
        return {mean - radius, mean + radius};
    }
    return hermitian_eigen(m, SortOrder::ascending).values;
}

ComplexMatrix matrix_exp(const ComplexMatrix& m) {
    const double scale = std::max(1.0, m.max_abs());
    if (m.hermiticity_error() <= 1e-12 * scale) {
        return apply_spectral(hermitian_eigen(m), [](double x) { return cplx{std::exp(x), 0.0}; });
    }
    const ComplexMatrix k = cplx{0.0, -1.0} * m; // m = i k
    if (k.hermiticity_error() <= 1e-12 * scale) {
        return apply_spectral(hermitian_eigen(k), [](double x) { return std::exp(cplx{0.0, x}); });
    }

    // Taylor series on M / 2^s with ||M / 2^s||_1 <= 1/2, then square back.
    const double n1 = one_norm(m);
    const int s = n1 > 0.5 ? static_cast<int>(std::ceil(std::log2(n1 / 0.5))) : 0;
    const ComplexMatrix a = std::ldexp(1.0, -s) * m;
    ComplexMatrix sum = ComplexMatrix::identity(m.dim());
    ComplexMatrix term = ComplexMatrix::identity(m.dim());
    for (int k = 1; k <= 40; ++k) {
        term = (1.0 / k) * (term * a);
        sum += term;
        if (term.max_abs() <= 1e-18 * sum.max_abs()) break;
    }
    for (int i = 0; i < s; ++i) sum = sum * sum;
    return sum;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem keep) {
    if (rho.dim() != 4) throw ValidationError("partial_trace: expected a 4x4 two-qubit operator");
    ComplexMatrix out(2);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t traced = 0; traced < 2; ++traced) {
                if (keep == Subsystem::A) {
                    out(x, y) += rho(2 * x + traced, 2 * y + traced);
                } else {
                    out(x, y) += rho(2 * traced + x, 2 * traced + y);
                }
            }
    return out;
}

double shannon_entropy_bits(std::span<const double> probabilities) {
    double s = 0.0;
    for (double p : probabilities)
        if (p > 0.0) s -= p * std::log2(p);
    return s;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    require_hermitian(rho, "von_neumann_entropy");
    const double tr = rho.trace().real();
    if (!(std::abs(tr - 1.0) <= kEntropyTraceTol)) {
        throw ValidationError("von_neumann_entropy: trace " + format_double(tr) + " is not 1");
    }
    auto values = hermitian_eigenvalues(rho);
    for (double& v : values) {
        if (v < -kEigenClipTol) {
            throw ValidationError("von_neumann_entropy: negative eigenvalue " + format_double(v));
        }
        v = std::max(v, 0.0);
    }
    return shannon_entropy_bits(values);
}

} // namespace dqb
