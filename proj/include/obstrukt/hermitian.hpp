#pragma once

#include <complex>
#include <span>
#include <vector>

namespace obstrukt {

using cd = std::complex<double>;

inline constexpr int kMaxMatrixDim = 8;

// Dense square complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int m);
    Matrix(int m, std::vector<cd> entries);

    static Matrix identity(int m);

    int dim() const noexcept { return m_; }
    cd operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * m_ + j)]; }
    cd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * m_ + j)]; }
    std::span<const cd> entries() const noexcept { return a_; }

    Matrix adjoint() const;
    cd trace() const;
    double frobenius_norm() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cd s);

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(cd s, Matrix a) { return a *= s; }
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int m_ = 0;
    std::vector<cd> a_;
};

// Matrix intended to be Hermitian. symmetrized() enforces the property;
// unchecked() keeps the entries as given so validators can measure defects.
class HermitianMatrix : public Matrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(int m) : Matrix(m) {}

    static HermitianMatrix symmetrized(const Matrix& a);
    static HermitianMatrix unchecked(Matrix a);
    static HermitianMatrix identity(int m) { return unchecked(Matrix::identity(m)); }

    // max_ij |a_ij - conj(a_ji)|
    double hermitian_defect() const;

private:
    explicit HermitianMatrix(Matrix a) : Matrix(std::move(a)) {}
};

// Orthogonal projection v v* onto the line of a (normalized) vector.
HermitianMatrix rank_one_projection(std::span<const cd> v);

// Eigen-decomposition of a Hermitian matrix. vectors(:, j) belongs to values[j];
// values ascending.
struct EigenDecomposition {
    std::vector<double> values;
    Matrix vectors;

    std::vector<cd> vector(int j) const;
};

inline constexpr int kJacobiSweepBudget = 50;

// Cyclic complex Jacobi. Only the Hermitian part (A + A*)/2 is diagonalized.
// Throws NumericalFailure (carrying the off-diagonal norm) if the sweep budget
// runs out before ||off(A)|| <= tol * (1 + ||A||).
EigenDecomposition eigh(const HermitianMatrix& h, double tol = 1e-12);

// Euclidean helpers on C^m.
cd inner(std::span<const cd> a, std::span<const cd> b); // <a|b> = sum conj(a_i) b_i
double norm(std::span<const cd> a);
std::vector<cd> apply(const Matrix& a, std::span<const cd> v);

} // namespace obstrukt
