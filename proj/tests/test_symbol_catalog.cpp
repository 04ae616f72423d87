#include "obstrukt/catalog.hpp"
#include "obstrukt/errors.hpp"
#include "obstrukt/symbol.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace obstrukt;

namespace {

constexpr double kPi = 3.14159265358979323846;

CovectorPoint scaled_random(Geometry g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.3, 3.0);
    return random_point(g, rng).scaled(u(rng));
}

// v^T M v without conjugation.
cd bilinear(const Matrix& m, const std::vector<cd>& v)
{
    cd s = 0.0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += v[static_cast<std::size_t>(i)] * m(i, j) * v[static_cast<std::size_t>(j)];
    return s;
}

// u^a = v^T eps s^a v for a spinor v.
std::array<cd, 3> dirac_u(const std::vector<cd>& v)
{
    const auto& pb = PauliBasis::get();
    std::array<cd, 3> u;
    for (std::size_t a = 0; a < 3; ++a) u[a] = bilinear(pb.eps * pb.s[a], v);
    return u;
}

void check_dirac_isotropy(const std::array<cd, 3>& u, const std::array<double, 3>& eta)
{
    cd uu = 0.0, ueta = 0.0;
    double nn = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        uu += u[a] * u[a];
        nn += std::norm(u[a]);
        ueta += u[a] * eta[a];
    }
    CHECK(std::abs(uu) < 1e-10);
    CHECK(std::abs(std::sqrt(nn) - std::sqrt(2.0)) < 1e-10);
    CHECK(std::abs(ueta) < 1e-10);
}

cd trace_sp(const Matrix& s, const HermitianMatrix& p) { return (s * p).trace(); }

} // namespace

TEST_CASE("catalog registers seven entries in order")
{
    const auto cat = default_catalog();
    REQUIRE(cat.size() == 7);
    for (std::size_t i = 0; i < cat.size(); ++i) CHECK(cat[i].symbol.id() == catalog_ids()[i]);
    CHECK(make_entry("curl3").symbol.m() == 3);
    CHECK(make_entry("curl3").symbol.d() == 3);
    CHECK(make_entry("curl3").symbol.s() == 1.0);
    CHECK(make_entry("np-sphere").symbol.m() == 3);
    CHECK(make_entry("np-sphere").symbol.d() == 2);
    CHECK(make_entry("np-sphere").symbol.s() == 0.0);
}

TEST_CASE("numerical eigenvalues match the analytic ones")
{
    std::vector<CatalogEntry> entries = default_catalog();
    entries.push_back(elasticity_t2({2.5, 0.7}, 0.3, 1));
    entries.push_back(np_sphere({3.0, 0.5}, 2.0));
    entries.push_back(artificial_s2(-1.5, 4.0, 1.5));
    std::mt19937_64 rng(42);
    for (const auto& e : entries) {
        double worst = 0.0;
        for (int k = 0; k < 500; ++k) {
            const auto p = scaled_random(e.symbol.geometry(), rng);
            const auto sp = spectral_decompose(e.symbol, p);
            const auto ref = analytic_eigenvalues(e, p);
            REQUIRE(ref.size() == sp.eigenvalues.size());
            const double scale = std::max(1.0, std::abs(ref.back()));
            for (std::size_t j = 0; j < ref.size(); ++j)
                worst = std::max(worst, std::abs(ref[j] - sp.eigenvalues[j]) / scale);
        }
        INFO(e.symbol.id());
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("NP eigenvalues are 0 and +-mu / (2 (lambda + 2 mu))")
{
    const auto e = np_sphere({1.0, 1.0});
    std::mt19937_64 rng(3);
    const auto p = scaled_random(Geometry::S2, rng);
    const auto sp = spectral_decompose(e.symbol, p);
    CHECK(sp.eigenvalues[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
    CHECK(std::abs(sp.eigenvalues[1]) < 1e-12);
    CHECK(sp.eigenvalues[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("Dirac eigenvectors on the flat torus are isotropic and transversal")
{
    const auto e = dirac3_flat();
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_point(Geometry::T3, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        const std::array<double, 3> eta = {p.xi[0], p.xi[1], p.xi[2]};
        for (const auto& v : sp.vectors) check_dirac_isotropy(dirac_u(v), eta);
    }
}

TEST_CASE("Dirac eigenvectors on S3 are isotropic in frame components")
{
    const auto e = dirac3_s3();
    std::mt19937_64 rng(12);
    for (int k = 0; k < 200; ++k) {
        const auto p = random_point(Geometry::S3, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        const auto fr = s3_frame(p.x);
        const std::array<double, 3> eta = {dot4(fr[0], p.xi), dot4(fr[1], p.xi), dot4(fr[2], p.xi)};
        for (const auto& v : sp.vectors) check_dirac_isotropy(dirac_u(v), eta);
    }
}

TEST_CASE("curl eigenvectors: nonzero bands isotropic and transversal, zero band along xi")
{
    const auto e = curl3_flat();
    std::mt19937_64 rng(13);
    for (int k = 0; k < 200; ++k) {
        const auto p = scaled_random(Geometry::T3, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        const double r = p.xi_norm();
        for (int b : {0, 2}) {
            const auto& v = sp.vectors[static_cast<std::size_t>(b)];
            cd vv = 0.0, xv = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                vv += v[a] * v[a];
                xv += p.xi[a] * v[a];
            }
            double re2 = 0.0;
            for (std::size_t a = 0; a < 3; ++a) re2 += v[a].real() * v[a].real();
            CHECK(std::abs(vv) < 1e-10);
            CHECK(std::abs(xv) < 1e-10 * r);
            CHECK(std::abs(re2 - 0.5) < 1e-10);
        }
        const auto& v0 = sp.vectors[1];
        cd ov = 0.0;
        for (std::size_t a = 0; a < 3; ++a) ov += v0[a] * p.xi[a] / r;
        CHECK(std::abs(std::abs(ov) - 1.0) < 1e-10);
    }
}

TEST_CASE("dirac-s2 projections map to +-xi / |xi|")
{
    const auto e = dirac_s2();
    const auto& pb = PauliBasis::get();
    std::mt19937_64 rng(14);
    for (int k = 0; k < 200; ++k) {
        const auto p = scaled_random(Geometry::S2, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        const double r = p.xi_norm();
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(std::abs(trace_sp(pb.s[a], sp.projections[0]) + p.xi[a] / r) < 1e-10);
            CHECK(std::abs(trace_sp(pb.s[a], sp.projections[1]) - p.xi[a] / r) < 1e-10);
        }
    }
}

TEST_CASE("artificial-s2 projections map to +-x")
{
    const auto e = artificial_s2();
    const auto& pb = PauliBasis::get();
    std::mt19937_64 rng(15);
    for (int k = 0; k < 200; ++k) {
        const auto p = scaled_random(Geometry::S2, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        // band 0 carries c- = -1, band 1 carries c+ = 2
        for (std::size_t a = 0; a < 3; ++a) {
            CHECK(std::abs(trace_sp(pb.s[a], sp.projections[0]) + p.x[a]) < 1e-10);
            CHECK(std::abs(trace_sp(pb.s[a], sp.projections[1]) - p.x[a]) < 1e-10);
        }
    }
}

TEST_CASE("elasticity eigenlines are eps q and q")
{
    for (int twist : {0, 2}) {
        const auto e = elasticity_t2({1.0, 1.0}, 0.3, twist);
        std::mt19937_64 rng(16);
        for (int k = 0; k < 200; ++k) {
            const auto p = scaled_random(Geometry::T2, rng);
            const auto sp = spectral_decompose(e.symbol, p);
            const double psi = twist * p.x[0];
            const double f1 = std::cos(psi) * p.xi[0] + std::sin(psi) * p.xi[1];
            const double f2 = -std::sin(psi) * p.xi[0] + std::cos(psi) * p.xi[1];
            const double h = std::hypot(f1, f2);
            const std::array<double, 2> q = {f1 / h, f2 / h}, eq = {q[1], -q[0]};
            auto overlap = [](const std::vector<cd>& v, const std::array<double, 2>& w) {
                return std::abs(v[0] * w[0] + v[1] * w[1]);
            };
            CHECK(overlap(sp.vectors[0], eq) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(overlap(sp.vectors[1], q) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("NP ambient symbol equals the block form in adapted spherical coordinates")
{
    // Basis (d_theta, d_phi, n) of R^3 at a point of the sphere of radius R;
    // in it the ambient matrix must read -i c / |xi|_g [[0, -g^{-1} xi], [xi^T, 0]].
    for (double radius : {1.0, 2.5}) {
        const double lambda = 1.7, mu = 0.8;
        const auto e = np_sphere({lambda, mu}, radius);
        const double c = mu / (2.0 * (lambda + 2.0 * mu));
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> ut(0.2, kPi - 0.2), up(0.0, 2.0 * kPi), uxi(-2.0, 2.0);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double th = ut(rng), ph = up(rng);
            const double xi1 = uxi(rng), xi2 = uxi(rng);
            const Vec3 n = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
            const Vec3 d1 = {radius * std::cos(th) * std::cos(ph), radius * std::cos(th) * std::sin(ph), -radius * std::sin(th)};
            const Vec3 d2 = {-radius * std::sin(th) * std::sin(ph), radius * std::sin(th) * std::cos(ph), 0.0};
            const double g11 = radius * radius, g22 = radius * radius * std::sin(th) * std::sin(th);
            // Ambient covector restricted to the tangent plane: xi_amb . d_a = xi_a.
            Vec3 xa{};
            for (std::size_t i = 0; i < 3; ++i) xa[i] = xi1 / g11 * d1[i] + xi2 / g22 * d2[i];
            const auto p = CovectorPoint::make(Geometry::S2, std::vector<double>{n[0], n[1], n[2]},
                                               std::vector<double>{xa[0], xa[1], xa[2]});
            const Matrix a = e.symbol(p);

            Matrix j(3), jinv(3);
            for (int i = 0; i < 3; ++i) {
                j(i, 0) = d1[static_cast<std::size_t>(i)];
                j(i, 1) = d2[static_cast<std::size_t>(i)];
                j(i, 2) = n[static_cast<std::size_t>(i)];
                // Rows of the inverse are the dual basis.
                jinv(0, i) = d1[static_cast<std::size_t>(i)] / g11;
                jinv(1, i) = d2[static_cast<std::size_t>(i)] / g22;
                jinv(2, i) = n[static_cast<std::size_t>(i)];
            }
            const Matrix chart = jinv * a * j;

            const double hg = std::sqrt(xi1 * xi1 / g11 + xi2 * xi2 / g22);
            const cd pre = cd(0.0, -c) / hg;
            Matrix ref(3);
            ref(0, 2) = -pre * (xi1 / g11);
            ref(1, 2) = -pre * (xi2 / g22);
            ref(2, 0) = pre * xi1;
            ref(2, 1) = pre * xi2;
            worst = std::max(worst, (chart - ref).frobenius_norm());
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("validation accepts every catalog entry")
{
    for (const auto& e : default_catalog()) {
        const auto r = validate_assumptions(e.symbol, validation_samples(e.symbol.geometry(), 42));
        INFO(e.symbol.id());
        CHECK(r.passed);
        CHECK(r.samples >= 100);
    }
}

TEST_CASE("validation rejects a non-Hermitian symbol")
{
    SymbolField bad("bad", Geometry::T3, 2, 1.0, [](const CovectorPoint& p) {
        return HermitianMatrix::unchecked(Matrix(2, {cd(p.xi[2]), cd(p.xi[0], 0.1), cd(p.xi[0]), cd(-p.xi[2])}));
    });
    const auto r = validate_assumptions(bad, validation_samples(Geometry::T3, 42));
    CHECK_FALSE(r.passed);
    CHECK(r.max_hermitian_defect > 1e-3);
}

TEST_CASE("identity symbol is rejected as degenerate")
{
    SymbolField id("identity", Geometry::T3, 2, 0.0, [](const CovectorPoint&) { return HermitianMatrix::identity(2); });
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(spectral_decompose(id, random_point(Geometry::T3, rng)), DegenerateSpectrum);
    const auto r = validate_assumptions(id, validation_samples(Geometry::T3, 42));
    CHECK_FALSE(r.passed);
    CHECK(r.min_rel_gap < 1e-8);
}

TEST_CASE("parameter constraints are enforced at construction")
{
    CHECK_THROWS_AS(elasticity_t2({-2.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(elasticity_t2({-1.0, 1.0}), InvalidParameter); // lambda + mu = 0
    CHECK_THROWS_AS(elasticity_t2({1.0, 0.0}), InvalidParameter);
    CHECK_THROWS_AS(np_sphere({-1.0, 1.0}), InvalidParameter);
    CHECK_THROWS_AS(artificial_s2(1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(make_entry("nope"), InvalidParameter);
    CHECK_THROWS_AS(make_entry("curl3", {{"lambda", 1.0}}), InvalidParameter);
    CHECK_THROWS_AS(make_entry("elasticity-t2", {{"framing_twist", 0.5}}), InvalidParameter);
}

TEST_CASE("homogeneity of the declared degree")
{
    std::mt19937_64 rng(5);
    for (const auto& e : default_catalog()) {
        const auto p = random_point(e.symbol.geometry(), rng);
        const Matrix a = e.symbol(p);
        const Matrix b = e.symbol(p.scaled(3.0));
        CHECK((b - std::pow(3.0, e.symbol.s()) * a).frobenius_norm() < 1e-12 * std::max(1.0, b.frobenius_norm()));
    }
}

TEST_CASE("points off the sphere are rejected")
{
    const auto e = dirac_s2();
    const auto p = CovectorPoint::make(Geometry::S2, std::vector<double>{0.0, 0.0, 1.0}, std::vector<double>{1.0, 0.0, 0.0});
    CHECK_NOTHROW(e.symbol(p));
    CovectorPoint q = p;
    q.xi[2] = 0.5;
    CHECK_THROWS_AS(e.symbol(q), ConstraintViolation);
}
