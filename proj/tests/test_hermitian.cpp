#include "obstrukt/errors.hpp"
#include "obstrukt/hermitian.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace obstrukt;

namespace {

HermitianMatrix random_hermitian(int m, std::mt19937_64& rng, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    Matrix a(m);
    for (int i = 0; i < m; ++i) {
        a(i, i) = g(rng);
        for (int j = i + 1; j < m; ++j) {
            a(i, j) = cd(g(rng), g(rng));
            a(j, i) = std::conj(a(i, j));
        }
    }
    return HermitianMatrix::unchecked(a);
}

double eigen_residual(const HermitianMatrix& h, const EigenDecomposition& e)
{
    double worst = 0.0;
    for (int j = 0; j < h.dim(); ++j) {
        const auto v = e.vector(j);
        auto hv = apply(h, v);
        double r = 0.0;
        for (int i = 0; i < h.dim(); ++i) r += std::norm(hv[static_cast<std::size_t>(i)] - e.values[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)]);
        worst = std::max(worst, std::sqrt(r));
    }
    return worst;
}

} // namespace

TEST_CASE("2x2 eigenvalues agree with the closed form")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const auto h = random_hermitian(2, rng);
        const double a = h(0, 0).real(), d = h(1, 1).real();
        const double r = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(h(0, 1)));
        const auto e = eigh(h);
        CHECK(e.values[0] == doctest::Approx((a + d) / 2.0 - r).epsilon(1e-13));
        CHECK(e.values[1] == doctest::Approx((a + d) / 2.0 + r).epsilon(1e-13));
        CHECK(eigen_residual(h, e) < 1e-12);
    }
}

TEST_CASE("eigh diagonalizes random Hermitian matrices up to dimension 8")
{
    std::mt19937_64 rng(11);
    for (int m = 1; m <= kMaxMatrixDim; ++m) {
        for (int k = 0; k < 50; ++k) {
            const auto h = random_hermitian(m, rng, 3.0);
            const auto e = eigh(h);
            CHECK(std::is_sorted(e.values.begin(), e.values.end()));
            CHECK(eigen_residual(h, e) < 1e-11 * (1.0 + h.frobenius_norm()));
            // Orthonormal columns.
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const cd z = inner(e.vector(i), e.vector(j));
                    CHECK(std::abs(z - (i == j ? 1.0 : 0.0)) < 1e-12);
                }
        }
    }
}

TEST_CASE("eigenvector phase convention: largest component real and positive")
{
    std::mt19937_64 rng(3);
    const auto h = random_hermitian(4, rng);
    const auto e = eigh(h);
    for (int j = 0; j < 4; ++j) {
        const auto v = e.vector(j);
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[best])) best = i;
        CHECK(v[best].imag() == doctest::Approx(0.0));
        CHECK(v[best].real() > 0.0);
    }
}

TEST_CASE("eigh uses only the Hermitian part and is deterministic")
{
    std::mt19937_64 rng(5);
    const auto h = random_hermitian(3, rng);
    Matrix skewed = h;
    skewed(0, 1) += cd(0.25, -0.5);
    skewed(1, 0) -= cd(0.25, 0.5); // adds an anti-Hermitian part only
    const auto e1 = eigh(HermitianMatrix::unchecked(skewed));
    const auto e2 = eigh(h);
    for (int j = 0; j < 3; ++j) CHECK(e1.values[static_cast<std::size_t>(j)] == doctest::Approx(e2.values[static_cast<std::size_t>(j)]).epsilon(1e-13));
    const auto e3 = eigh(h);
    CHECK(e3.values == e2.values);
    CHECK(e3.vectors == e2.vectors);
}

TEST_CASE("eigh rejects tolerances outside (0, 1e-6]")
{
    const auto h = HermitianMatrix::identity(2);
    CHECK_THROWS_AS(eigh(h, 0.0), InvalidParameter);
    CHECK_THROWS_AS(eigh(h, 1e-3), InvalidParameter);
}

TEST_CASE("rank-one projection is idempotent with unit trace")
{
    const std::vector<cd> v = {cd(0.6, 0.0), cd(0.0, 0.8)};
    const auto p = rank_one_projection(v);
    CHECK(std::abs(p.trace() - 1.0) < 1e-15);
    CHECK((p * p - p).frobenius_norm() < 1e-15);
    CHECK(p.hermitian_defect() == 0.0);
}
