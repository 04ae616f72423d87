#include "obstrukt/hermitian.hpp"

#include "obstrukt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace obstrukt {

Matrix::Matrix(int m) : m_(m), a_(static_cast<std::size_t>(m * m)) {}

Matrix::Matrix(int m, std::vector<cd> entries) : m_(m), a_(std::move(entries))
{
    if (a_.size() != static_cast<std::size_t>(m * m))
        throw InvalidParameter("matrix entry count does not match dimension");
}

Matrix Matrix::identity(int m)
{
    Matrix r(m);
    for (int i = 0; i < m; ++i) r(i, i) = 1.0;
    return r;
}

Matrix Matrix::adjoint() const
{
    Matrix r(m_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
}

cd Matrix::trace() const
{
    cd t = 0.0;
    for (int i = 0; i < m_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::frobenius_norm() const
{
    double s = 0.0;
    for (const cd& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

Matrix& Matrix::operator+=(const Matrix& o)
{
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o)
{
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(cd s)
{
    for (cd& z : a_) z *= s;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b)
{
    const int m = a.dim();
    Matrix r(m);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            const cd aik = a(i, k);
            for (int j = 0; j < m; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& a)
{
    Matrix r(a.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) r(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return HermitianMatrix(std::move(r));
}

HermitianMatrix HermitianMatrix::unchecked(Matrix a) { return HermitianMatrix(std::move(a)); }

double HermitianMatrix::hermitian_defect() const
{
    double d = 0.0;
    for (int i = 0; i < dim(); ++i)
        for (int j = i; j < dim(); ++j) d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
}

HermitianMatrix rank_one_projection(std::span<const cd> v)
{
    const int m = static_cast<int>(v.size());
    Matrix p(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) p(i, j) = v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
    return HermitianMatrix::unchecked(std::move(p));
}

std::vector<cd> EigenDecomposition::vector(int j) const
{
    std::vector<cd> v(static_cast<std::size_t>(vectors.dim()));
    for (int i = 0; i < vectors.dim(); ++i) v[static_cast<std::size_t>(i)] = vectors(i, j);
    return v;
}

namespace {

double off_norm(const Matrix& a)
{
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The unitary G acts in the
// (p,q) plane as diag(1, e^{-i phi}) times a real Givens rotation.
void rotate(Matrix& a, Matrix& v, int p, int q)
{
    const cd apq = a(p, q);
    const double r = std::abs(apq);
    const cd phase = apq / r; // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const cd gpp = c;
    const cd gpq = s;
    const cd gqp = -s * std::conj(phase);
    const cd gqq = c * std::conj(phase);

    const int m = a.dim();
    for (int k = 0; k < m; ++k) {
        const cd akp = a(k, p), akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    for (int k = 0; k < m; ++k) {
        const cd apk = a(p, k), aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * r;
    a(q, q) = aqq + t * r;

    for (int k = 0; k < m; ++k) {
        const cd vkp = v(k, p), vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
}

} // namespace

EigenDecomposition eigh(const HermitianMatrix& h, double tol)
{
    const int m = h.dim();
    if (m < 1 || m > kMaxMatrixDim) throw InvalidParameter("eigh: matrix dimension out of range");
    if (!(tol > 0.0 && tol <= 1e-6)) throw InvalidParameter("eigh: tolerance must lie in (0, 1e-6]");

    Matrix a = HermitianMatrix::symmetrized(h);
    Matrix v = Matrix::identity(m);
    const double scale = a.frobenius_norm();
    const double target = 1e-16 * scale;

    int sweep = 0;
    double off = off_norm(a);
    while (off > target && sweep < kJacobiSweepBudget) {
        ++sweep;
        for (int p = 0; p < m - 1; ++p)
            for (int q = p + 1; q < m; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0) continue;
                // Negligible against both diagonal entries: drop it outright.
                const double app = std::abs(a(p, p).real()), aqq = std::abs(a(q, q).real());
                if (sweep > 4 && app + 1e3 * r == app && aqq + 1e3 * r == aqq) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
            }
        off = off_norm(a);
    }
    if (off > tol * (1.0 + scale))
        throw NumericalFailure("eigh: no convergence after " + std::to_string(kJacobiSweepBudget) +
                                   " sweeps, off-diagonal norm " + std::to_string(off),
                               off);

    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });

    EigenDecomposition out;
    out.values.resize(static_cast<std::size_t>(m));
    out.vectors = Matrix(m);
    for (int j = 0; j < m; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.values[static_cast<std::size_t>(j)] = a(src, src).real();
        // Fix the free phase: largest component real and positive.
        int big = 0;
        for (int i = 1; i < m; ++i)
            if (std::abs(v(i, src)) > std::abs(v(big, src)) + 1e-14) big = i;
        const cd ph = std::conj(v(big, src)) / std::abs(v(big, src));
        for (int i = 0; i < m; ++i) out.vectors(i, j) = v(i, src) * ph;
    }
    return out;
}

cd inner(std::span<const cd> a, std::span<const cd> b)
{
    cd s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm(std::span<const cd> a) { return std::sqrt(std::abs(inner(a, a))); }

std::vector<cd> apply(const Matrix& a, std::span<const cd> v)
{
    std::vector<cd> r(v.size());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) r[static_cast<std::size_t>(i)] += a(i, j) * v[static_cast<std::size_t>(j)];
    return r;
}

} // namespace obstrukt
