#include "obstrukt/catalog.hpp"
#include "obstrukt/invariants.hpp"
#include "obstrukt/probes.hpp"
#include "obstrukt/trivialize.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace obstrukt;

namespace {

constexpr double kPi = 3.14159265358979323846;

// max over vertices of ||A v - h v|| / (1 + |h|)
double eigen_defect(const SymbolField& f, const GaugeField& g)
{
    double worst = 0.0;
    for (std::uint32_t v = 0; v < g.graph->vertices.size(); ++v) {
        const auto& p = g.graph->vertices[v];
        const auto sp = spectral_decompose(f, p);
        const double h = sp.eigenvalues[static_cast<std::size_t>(g.band)];
        const auto vec = g.vector(v);
        const auto av = obstrukt::apply(f(p), vec);
        double r = 0.0;
        for (std::size_t i = 0; i < av.size(); ++i) r += std::norm(av[i] - h * vec[i]);
        worst = std::max(worst, std::sqrt(r) / (1.0 + std::abs(h)));
    }
    return worst;
}

} // namespace

TEST_CASE("defect tolerance")
{
    CHECK(defect_tol(8) == doctest::Approx(10.0 * 2.0 * kPi / 8.0));
}

TEST_CASE("elasticity gauge reproduces the closed-form eigenlines")
{
    const auto e = elasticity_t2();
    const auto graph = cosphere_graph(Geometry::T2, 8);
    for (int b = 0; b < 2; ++b) {
        const auto g = spanning_tree_gauge(e.symbol, b, graph);
        REQUIRE(g.success());
        CHECK(g.vortex_faces == 0);
        CHECK(g.max_edge_defect <= defect_tol(8));
        CHECK(eigen_defect(e.symbol, g) < 1e-8);
        double worst = 1.0;
        for (std::uint32_t v = 0; v < graph.vertices.size(); ++v) {
            const auto& p = graph.vertices[v];
            const double r = std::hypot(p.xi[0], p.xi[1]);
            // band 0 is eps q, band 1 is q
            const std::array<double, 2> ref = b == 0 ? std::array<double, 2>{p.xi[1] / r, -p.xi[0] / r}
                                                     : std::array<double, 2>{p.xi[0] / r, p.xi[1] / r};
            const auto vec = g.vector(v);
            worst = std::min(worst, std::abs(vec[0] * ref[0] + vec[1] * ref[1]));
        }
        CHECK(worst > 1.0 - 1e-6);
    }
}

TEST_CASE("curl zero band gauge is parallel to xi")
{
    const auto e = curl3_flat();
    const auto graph = cosphere_graph(Geometry::T3, 8);
    const auto g = spanning_tree_gauge(e.symbol, 1, graph);
    REQUIRE(g.success());
    CHECK(eigen_defect(e.symbol, g) < 1e-8);
    double worst = 1.0;
    for (std::uint32_t v = 0; v < graph.vertices.size(); ++v) {
        const auto& p = graph.vertices[v];
        const double r = p.xi_norm();
        const auto vec = g.vector(v);
        worst = std::min(worst, std::abs(vec[0] * p.xi[0] + vec[1] * p.xi[1] + vec[2] * p.xi[2]) / r);
    }
    CHECK(worst > 1.0 - 1e-6);
}

TEST_CASE("dirac-s2 gauge fails with a 2 pi certificate at n and 2n")
{
    const auto e = dirac_s2();
    for (int n : {8, 16}) {
        const auto graph = cosphere_graph(Geometry::S2, n);
        for (int b = 0; b < 2; ++b) {
            const auto g = spanning_tree_gauge(e.symbol, b, graph);
            CHECK_FALSE(g.success());
            REQUIRE(g.certificate.has_value());
            CHECK(std::abs(std::abs(g.certificate->holonomy_residual) - 2.0 * kPi) < 1e-6);
            CHECK(g.certificate->cycle.size() >= 3);
            CHECK(g.vortex_faces > 0);
            CHECK(eigen_defect(e.symbol, g) < 1e-8);
        }
    }
}

TEST_CASE("success bit does not depend on the root")
{
    std::mt19937_64 rng(99);
    for (const auto& id : {"np-sphere", "dirac-s2", "artificial-s2"}) {
        const auto e = make_entry(id);
        const auto graph = cosphere_graph(e.symbol.geometry(), 8);
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(graph.vertices.size() - 1));
        for (int b = 0; b < e.symbol.m(); ++b) {
            const bool ref = spanning_tree_gauge(e.symbol, b, graph).success();
            CHECK(ref == !e.expected[static_cast<std::size_t>(b)].global_obstructed);
            for (int k = 0; k < 3; ++k) {
                INFO(id, " band ", b, " try ", k);
                CHECK(spanning_tree_gauge(e.symbol, b, graph, pick(rng)).success() == ref);
            }
        }
    }
}

TEST_CASE("edge defect shrinks with resolution")
{
    for (const auto& id : {"np-sphere", "elasticity-t2"}) {
        const auto e = make_entry(id);
        const auto g8 = cosphere_graph(e.symbol.geometry(), 8);
        const auto g16 = cosphere_graph(e.symbol.geometry(), 16);
        for (int b = 0; b < e.symbol.m(); ++b) {
            const auto a = spanning_tree_gauge(e.symbol, b, g8);
            const auto c = spanning_tree_gauge(e.symbol, b, g16);
            REQUIRE(a.success());
            REQUIRE(c.success());
            INFO(id, " band ", b);
            CHECK(c.max_edge_defect / a.max_edge_defect < 0.8);
        }
    }
}

TEST_CASE("cross-check agrees for every catalog entry at n = 8")
{
    for (const auto& e : default_catalog()) {
        for (int b = 0; b < e.symbol.m(); ++b) {
            const auto r = cross_check_report(e.symbol, b, 8);
            INFO(e.symbol.id(), " band ", b);
            CHECK(r.agree);
            CHECK(r.globally_obstructed == e.expected[static_cast<std::size_t>(b)].global_obstructed);
        }
    }
}

TEST_CASE("cross-check on a constant symbol and on non-default parameters")
{
    SymbolField constant("constant", Geometry::T3, 2, 0.0,
                         [](const CovectorPoint&) { return HermitianMatrix::unchecked(PauliBasis::get().s[2]); });
    CHECK(cross_check(constant, 0, 8));
    CHECK(cross_check(constant, 1, 8));
    const auto art = artificial_s2(2.0, -1.0, 0.0);
    CHECK(cross_check(art.symbol, 0, 8));
    CHECK(cross_check(art.symbol, 1, 8));
    const auto el = elasticity_t2({1.0, 1.0}, 0.3, 1);
    CHECK(cross_check(el.symbol, 0, 8));
}

TEST_CASE("gauge CSV has one row per vertex")
{
    const auto e = elasticity_t2();
    const auto graph = cosphere_graph(Geometry::T2, 8);
    const auto g = spanning_tree_gauge(e.symbol, 0, graph);
    std::ostringstream os;
    write_gauge_csv(os, g);
    const auto s = os.str();
    CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == graph.vertices.size() + 1);
}
