#include "fssqm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace fssqm {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

void require_finite(const CMatrix& a, const char* who) {
    const Complex* p = a.data();
    const std::size_t n = a.rows() * a.cols();
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(p[i].real()) || !std::isfinite(p[i].imag()))
            throw validation_error(std::string(who) + ": non-finite entry");
    }
}

}  // namespace

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix sum: dimension mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix difference: dimension mismatch");
    for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
    for (auto& v : e_) v *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix block(const CMatrix& a, std::size_t r0, std::size_t c0,
              std::size_t nr, std::size_t nc) {
    require(r0 + nr <= a.rows() && c0 + nc <= a.cols(), "block: out of range");
    CMatrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) out(i, j) = a(r0 + i, c0 + j);
    return out;
}

void set_block(CMatrix& dst, std::size_t r0, std::size_t c0, const CMatrix& src) {
    require(r0 + src.rows() <= dst.rows() && c0 + src.cols() <= dst.cols(),
            "set_block: out of range");
    for (std::size_t i = 0; i < src.rows(); ++i)
        for (std::size_t j = 0; j < src.cols(); ++j) dst(r0 + i, c0 + j) = src(i, j);
}

namespace {

// Shared row kernel: out(i,:) += a(i,k) * b(k,:) in fixed k order, so the
// parallel and serial products are bitwise identical.
inline void product_row(std::size_t i, const CMatrix& a, const CMatrix& b, CMatrix& out) {
    const std::size_t kk = a.cols(), nn = b.cols();
    Complex* o = out.data() + i * nn;
    for (std::size_t k = 0; k < kk; ++k) {
        const Complex c = a(i, k);
        if (c == Complex{}) continue;
        const Complex* br = b.data() + k * nn;
        for (std::size_t j = 0; j < nn; ++j) o[j] += c * br[j];
    }
}

}  // namespace

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    require(a.cols() == b.rows(), "matmul: dimension mismatch");
    CMatrix out(a.rows(), b.cols());
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(a.rows());
#pragma omp parallel for schedule(static) if (m >= 64)
    for (std::ptrdiff_t i = 0; i < m; ++i)
        product_row(static_cast<std::size_t>(i), a, b, out);
    require_finite(out, "matmul");
    return out;
}

namespace serial {

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    require(a.cols() == b.rows(), "matmul: dimension mismatch");
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) product_row(i, a, b, out);
    require_finite(out, "matmul");
    return out;
}

}  // namespace serial

CMatrix adjoint(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

CMatrix q_commutator(const CMatrix& a, const CMatrix& b, Complex q) {
    require(a.is_square() && b.is_square() && a.rows() == b.rows(),
            "q_commutator: operands must be square and of equal dimension");
    return matmul(a, b) - q * matmul(b, a);
}

CMatrix mat_power(const CMatrix& a, unsigned k) {
    require(a.is_square(), "mat_power: matrix must be square");
    CMatrix out = CMatrix::identity(a.rows());
    for (unsigned i = 0; i < k; ++i) out = matmul(out, a);
    return out;
}

double inf_norm(const CMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double scaled_residual(const CMatrix& lhs, const CMatrix& rhs) {
    return inf_norm(lhs - rhs) / (1.0 + std::max(inf_norm(lhs), inf_norm(rhs)));
}

std::size_t nullspace_dim(CMatrix a, double tol) {
    require(tol > 0.0, "nullspace_dim: tol must be positive");
    const double threshold = tol * (1.0 + inf_norm(a));
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t piv = rank;
        double best = std::abs(a(rank, col));
        for (std::size_t i = rank + 1; i < m; ++i) {
            const double v = std::abs(a(i, col));
            if (v > best) { best = v; piv = i; }
        }
        if (best < threshold) continue;  // singular direction
        if (piv != rank)
            for (std::size_t j = col; j < n; ++j) std::swap(a(rank, j), a(piv, j));
        const Complex inv = 1.0 / a(rank, col);
        for (std::size_t i = rank + 1; i < m; ++i) {
            const Complex factor = a(i, col) * inv;
            if (factor == Complex{}) continue;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(rank, j);
        }
        ++rank;
    }
    return n - rank;
}

std::vector<double> hermitian_eigenvalues(CMatrix a, double tol) {
    require(a.is_square(), "hermitian_eigenvalues: matrix must be square");
    require(tol > 0.0, "hermitian_eigenvalues: tol must be positive");
    const std::size_t n = a.rows();
    if (n == 0) return {};
    const double scale = 1.0 + inf_norm(a);
    if (inf_norm(a - adjoint(a)) > tol * scale)
        throw validation_error("hermitian_eigenvalues: input is not Hermitian");
    // Fold tiny asymmetry away so the rotations act on exact Hermitian data.
    a = 0.5 * (a + adjoint(a));

    const double conv = std::min(tol, 1e-13) * scale / static_cast<double>(4 * n);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                off = std::max(off, mag);
                if (mag <= conv) continue;
                const Complex u = apq / mag;  // phase of the pivot
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double zeta = (aqq - app) / (2.0 * mag);
                double t;
                if (zeta >= 0.0)
                    t = 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta));
                else
                    t = -1.0 / (-zeta + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // A <- J' A J with J = [[c, s u], [-s conj(u), c]] on (p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(u) * akq;
                    a(k, q) = s * u * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * u * aqk;
                    a(q, k) = s * std::conj(u) * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
            }
        }
        if (off <= conv) break;
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace fssqm
