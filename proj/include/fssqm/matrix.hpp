#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fssqm {

using Complex = std::complex<double>;

/// Thrown when a constructed object would violate one of its declared
/// invariants (structure-function positivity, phi positivity, radicands, ...).
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when two independently computed routes to the same quantity
/// disagree beyond tolerance.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense complex matrix, row-major.  All operations are pure functions;
/// a CMatrix is safe to share across threads once built.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), e_(rows * cols) {}

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(const std::vector<Complex>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    Complex* data() { return e_.data(); }
    const Complex* data() const { return e_.data(); }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(Complex s);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> e_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);

/// Copy an nr x nc sub-block starting at (r0, c0).
CMatrix block(const CMatrix& a, std::size_t r0, std::size_t c0,
              std::size_t nr, std::size_t nc);
/// Overwrite the sub-block of `dst` starting at (r0, c0) with `src`.
void set_block(CMatrix& dst, std::size_t r0, std::size_t c0, const CMatrix& src);

/// Matrix product.  Parallelised over rows with OpenMP; bitwise identical
/// to serial::matmul because each output row is an independent serial sum.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

namespace serial {
/// Reference kernel, kept for tests and the kernel benchmark.
CMatrix matmul(const CMatrix& a, const CMatrix& b);
}

/// Conjugate transpose.
CMatrix adjoint(const CMatrix& a);

/// a b - q b a.  q = 1 gives the ordinary commutator.
CMatrix q_commutator(const CMatrix& a, const CMatrix& b, Complex q);

/// k-fold product, k = 0 gives the identity.
CMatrix mat_power(const CMatrix& a, unsigned k);

/// Max row sum of absolute values.
double inf_norm(const CMatrix& a);

/// ||lhs - rhs||_inf / (1 + max(||lhs||_inf, ||rhs||_inf)).
double scaled_residual(const CMatrix& lhs, const CMatrix& rhs);

/// Number of singular directions, by Gaussian elimination with partial
/// pivoting per column; a pivot below tol*(1 + inf_norm(a)) counts as zero.
/// Works for rectangular input (returns cols - rank).
std::size_t nullspace_dim(CMatrix a, double tol);

/// Ascending eigenvalues of a Hermitian matrix (cyclic complex Jacobi
/// sweeps), each accurate to tol*(1 + inf_norm(a)).
/// Throws validation_error unless ||a - a'||_inf <= tol*(1 + inf_norm(a)).
std::vector<double> hermitian_eigenvalues(CMatrix a, double tol);

}  // namespace fssqm
