#pragma once
// Closed-form reference computations shared by the acceptance runner. Each
// returns the worst deviation it saw so callers can pin their own tolerance.

#include "obstrukt/catalog.hpp"
#include "obstrukt/probes.hpp"
#include "obstrukt/symbol.hpp"
#include "obstrukt/trivialize.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

using namespace obstrukt;

inline constexpr double kPi = 3.14159265358979323846;

inline double eigenvalue_deviation(const CatalogEntry& e, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> scale(0.3, 3.0);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto p = random_point(e.symbol.geometry(), rng).scaled(scale(rng));
        const auto sp = spectral_decompose(e.symbol, p);
        const auto ref = analytic_eigenvalues(e, p);
        const double s = std::max(1.0, std::abs(ref.back()));
        for (std::size_t j = 0; j < ref.size(); ++j) worst = std::max(worst, std::abs(ref[j] - sp.eigenvalues[j]) / s);
    }
    return worst;
}

// Dirac: u^a = v^T eps s^a v satisfies u.u = 0, |u| = sqrt 2, u.eta = 0, where
// eta are the frame components of xi.
inline double dirac_isotropy_defect(const CatalogEntry& e, int count, std::uint64_t seed)
{
    const auto& pb = PauliBasis::get();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto p = random_point(e.symbol.geometry(), rng);
        std::array<double, 3> eta{p.xi[0], p.xi[1], p.xi[2]};
        if (e.symbol.geometry() == Geometry::S3) {
            const auto fr = s3_frame(p.x);
            for (std::size_t a = 0; a < 3; ++a) eta[a] = dot4(fr[a], p.xi);
        }
        for (const auto& v : spectral_decompose(e.symbol, p).vectors) {
            cd uu = 0.0, ue = 0.0;
            double nn = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                const Matrix m = pb.eps * pb.s[a];
                cd u = 0.0;
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j) u += v[static_cast<std::size_t>(i)] * m(i, j) * v[static_cast<std::size_t>(j)];
                uu += u * u;
                ue += u * eta[a];
                nn += std::norm(u);
            }
            worst = std::max({worst, std::abs(uu), std::abs(std::sqrt(nn) - std::sqrt(2.0)), std::abs(ue)});
        }
    }
    return worst;
}

// Curl: nonzero bands satisfy v.v = 0, |Re v|^2 = 1/2 (for any phase, given
// v.v = 0 and |v| = 1), xi.v = 0; the zero band is along xi.
inline double curl_identity_defect(int count, std::uint64_t seed)
{
    const auto e = curl3_flat();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto p = random_point(Geometry::T3, rng);
        const auto sp = spectral_decompose(e.symbol, p);
        for (std::size_t b : {std::size_t{0}, std::size_t{2}}) {
            const auto& v = sp.vectors[b];
            cd vv = 0.0, xv = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                vv += v[a] * v[a];
                xv += p.xi[a] * v[a];
            }
            double re2 = 0.0;
            for (std::size_t a = 0; a < 3; ++a) re2 += v[a].real() * v[a].real();
            worst = std::max({worst, std::abs(vv), std::abs(xv), std::abs(re2 - 0.5)});
        }
        cd ov = 0.0;
        for (std::size_t a = 0; a < 3; ++a) ov += sp.vectors[1][a] * p.xi[a];
        worst = std::max(worst, std::abs(std::abs(ov) - 1.0));
    }
    return worst;
}

// tr(s^a P) for the two bands of a 2x2 sphere symbol against -w, +w with
// w = xi / |xi| (dirac-s2) or w = x (artificial-s2).
inline double projection_map_defect(const CatalogEntry& e, bool use_position, int count, std::uint64_t seed)
{
    const auto& pb = PauliBasis::get();
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const auto p = random_point(Geometry::S2, rng).scaled(1.7);
        const auto sp = spectral_decompose(e.symbol, p);
        const double r = p.xi_norm();
        for (std::size_t a = 0; a < 3; ++a) {
            const double w = use_position ? p.x[a] : p.xi[a] / r;
            worst = std::max(worst, std::abs((pb.s[a] * sp.projections[0]).trace() + w));
            worst = std::max(worst, std::abs((pb.s[a] * sp.projections[1]).trace() - w));
        }
    }
    return worst;
}

// NP ambient matrix conjugated into the (d_theta, d_phi, n) basis of a sphere
// of radius R versus the block form -i c / |xi|_g [[0, -g^{-1} xi], [xi^T, 0]].
inline double np_chart_defect(int count, std::uint64_t seed, double radius = 1.0, double lambda = 1.7, double mu = 0.8)
{
    const auto e = np_sphere({lambda, mu}, radius);
    const double c = mu / (2.0 * (lambda + 2.0 * mu));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.2, kPi - 0.2), up(0.0, 2.0 * kPi), uxi(-2.0, 2.0);
    double worst = 0.0;
    for (int k = 0; k < count; ++k) {
        const double th = ut(rng), ph = up(rng), xi1 = uxi(rng), xi2 = uxi(rng);
        const Vec3 n = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        const Vec3 d1 = {radius * std::cos(th) * std::cos(ph), radius * std::cos(th) * std::sin(ph), -radius * std::sin(th)};
        const Vec3 d2 = {-radius * std::sin(th) * std::sin(ph), radius * std::sin(th) * std::cos(ph), 0.0};
        const double g11 = radius * radius, g22 = radius * radius * std::sin(th) * std::sin(th);
        Vec3 xa{};
        for (std::size_t i = 0; i < 3; ++i) xa[i] = xi1 / g11 * d1[i] + xi2 / g22 * d2[i];
        const auto p = CovectorPoint::make(Geometry::S2, std::vector<double>{n[0], n[1], n[2]},
                                           std::vector<double>{xa[0], xa[1], xa[2]});
        Matrix j(3), jinv(3);
        for (int i = 0; i < 3; ++i) {
            const auto u = static_cast<std::size_t>(i);
            j(i, 0) = d1[u], j(i, 1) = d2[u], j(i, 2) = n[u];
            jinv(0, i) = d1[u] / g11, jinv(1, i) = d2[u] / g22, jinv(2, i) = n[u];
        }
        const Matrix chart = jinv * e.symbol(p) * j;
        const cd pre = cd(0.0, -c) / std::sqrt(xi1 * xi1 / g11 + xi2 * xi2 / g22);
        Matrix ref(3);
        ref(0, 2) = -pre * (xi1 / g11);
        ref(1, 2) = -pre * (xi2 / g22);
        ref(2, 0) = pre * xi1;
        ref(2, 1) = pre * xi2;
        worst = std::max(worst, (chart - ref).frobenius_norm());
    }
    return worst;
}

inline Matrix random_unitary(int m, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    std::vector<std::vector<cd>> cols;
    for (int j = 0; j < m; ++j) {
        std::vector<cd> v(static_cast<std::size_t>(m));
        for (auto& c : v) c = cd(g(rng), g(rng));
        for (const auto& u : cols) {
            const cd o = inner(u, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o * u[i];
        }
        const double r = norm(v);
        for (auto& c : v) c /= r;
        cols.push_back(v);
    }
    Matrix u(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) u(i, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    return u;
}

// Image in S*S2 of a Clifford torus of unit quaternions: a closed surface
// where every band's Chern number must vanish (H2(RP3) is torsion).
inline QuadCycleMesh clifford_torus(int n, double a = 0.7)
{
    QuadCycleMesh m;
    m.label = "clifford-torus";
    m.resolution = n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double s = 2.0 * kPi * i / n, t = 2.0 * kPi * j / n;
            m.vertices.push_back(frame_point(
                {std::cos(a) * std::cos(s), std::cos(a) * std::sin(s), std::sin(a) * std::cos(t), std::sin(a) * std::sin(t)}));
        }
    auto id = [n](int i, int j) { return static_cast<std::uint32_t>((i % n) + n * (j % n)); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) m.quads.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return m;
}

// min over vertices of |<v, ref>| for the closed-form eigenlines: elasticity
// band 0 = eps q, band 1 = q (identity framing, flat metric); curl band 1 = xi.
inline double eigenline_overlap(const GaugeField& g, const std::string& id)
{
    double worst = 1.0;
    for (std::uint32_t v = 0; v < g.graph->vertices.size(); ++v) {
        const auto& p = g.graph->vertices[v];
        const auto vec = g.vector(v);
        cd o = 0.0;
        if (id == "elasticity-t2") {
            const double r = std::hypot(p.xi[0], p.xi[1]);
            o = g.band == 0 ? vec[0] * (p.xi[1] / r) - vec[1] * (p.xi[0] / r) : vec[0] * (p.xi[0] / r) + vec[1] * (p.xi[1] / r);
        } else {
            const double r = p.xi_norm();
            for (std::size_t a = 0; a < 3; ++a) o += vec[a] * (p.xi[a] / r);
        }
        worst = std::min(worst, std::abs(o));
    }
    return worst;
}

} // namespace oracle
