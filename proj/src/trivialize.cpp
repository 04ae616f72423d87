#include "obstrukt/trivialize.hpp"

#include "obstrukt/errors.hpp"
#include "obstrukt/format.hpp"
#include "obstrukt/invariants.hpp"
#include "obstrukt/parallel.hpp"

#include <cmath>
#include <numbers>

namespace obstrukt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCgTolerance = 1e-10;
// Smoothest-section restart: 2 steps sufficed in every tested case, 6 leave margin.
constexpr int kInverseIterations = 6;
constexpr double kInverseSolveTolerance = 1e-3;

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> prod(a.size());
    parallel_for(a.size(), [&](std::size_t i) { prod[i] = a[i] * b[i]; });
    return pairwise_sum(prod);
}

struct CgResult {
    std::vector<double> x;
    double relative_residual = 0.0;
    int iterations = 0;
};

// Solves L x = b for the graph Laplacian with Jacobi preconditioning. b must
// sum to zero; the constant null vector is projected out.
CgResult laplacian_cg(const CosphereGraph& g, const std::vector<double>& b)
{
    const std::size_t n = g.vertices.size();
    auto degree = [&](std::size_t v) { return static_cast<double>(g.offsets[v + 1] - g.offsets[v]); };
    auto apply_l = [&](const std::vector<double>& x, std::vector<double>& y) {
        parallel_for(n, [&](std::size_t v) {
            double s = degree(v) * x[v];
            for (auto k = g.offsets[v]; k < g.offsets[v + 1]; ++k) s -= x[g.adj[k]];
            y[v] = s;
        });
    };
    auto project = [&](std::vector<double>& x) {
        const double mean = pairwise_sum(x) / static_cast<double>(n);
        parallel_for(n, [&](std::size_t i) { x[i] -= mean; });
    };

    CgResult out;
    out.x.assign(n, 0.0);
    std::vector<double> r = b, z(n), p(n), q(n);
    project(r);
    const double bnorm = std::sqrt(dot(r, r));
    if (bnorm == 0.0) return out;

    auto precondition = [&] {
        parallel_for(n, [&](std::size_t i) { z[i] = degree(i) > 0 ? r[i] / degree(i) : r[i]; });
        project(z);
    };
    precondition();
    p = z;
    double rz = dot(r, z);
    const int max_iter = 20000;
    for (int it = 1; it <= max_iter; ++it) {
        apply_l(p, q);
        const double alpha = rz / dot(p, q);
        parallel_for(n, [&](std::size_t i) {
            out.x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        });
        out.iterations = it;
        out.relative_residual = std::sqrt(dot(r, r)) / bnorm;
        if (out.relative_residual <= kCgTolerance) break;
        precondition();
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        parallel_for(n, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    }
    if (out.relative_residual > kCgTolerance)
        throw NumericalFailure("phase least-squares solve did not converge", out.relative_residual);
    project(out.x);
    return out;
}

cd overlap_at(const std::vector<cd>& vecs, std::size_t m, std::uint32_t a, std::uint32_t b)
{
    return inner(std::span<const cd>(vecs.data() + a * m, m), std::span<const cd>(vecs.data() + b * m, m));
}

// Smoothest section of the eigenline bundle in the current frame: a few steps
// of shifted inverse iteration on the connection Laplacian
// sum_e |psi_b - T_e psi_a|^2, T_e the unit overlap phase <v_b|v_a>. The
// tree gauge wraps accumulated curvature into branch cuts; the smoothest
// section does not, so spurious vortex pairs disappear while genuine ones
// (nonzero Chern class on some face cycle) survive.
std::vector<cd> smoothest_phases(const CosphereGraph& g, const std::vector<cd>& v, std::size_t m)
{
    const std::size_t n = g.vertices.size();
    const std::size_t ne = g.edges.size();
    std::vector<cd> t(ne);
    parallel_for(ne, [&](std::size_t e) {
        const cd z = overlap_at(v, m, g.edges[e][1], g.edges[e][0]);
        t[e] = z / std::abs(z);
    });
    const double shift = 1e-3;
    auto apply_l = [&](const std::vector<cd>& x, std::vector<cd>& y) {
        parallel_for(n, [&](std::size_t c) {
            cd s = (static_cast<double>(g.offsets[c + 1] - g.offsets[c]) + shift) * x[c];
            for (auto k = g.offsets[c]; k < g.offsets[c + 1]; ++k) {
                const auto e = g.adj_edge[k];
                const auto nb = g.adj[k];
                s -= g.edges[e][1] == c ? t[e] * x[nb] : std::conj(t[e]) * x[nb];
            }
            y[c] = s;
        });
    };
    auto cdot = [&](const std::vector<cd>& a, const std::vector<cd>& b) {
        std::vector<cd> prod(n);
        parallel_for(n, [&](std::size_t i) { prod[i] = std::conj(a[i]) * b[i]; });
        return pairwise_sum(prod);
    };

    std::vector<cd> psi(n, cd{1.0, 0.0}), x(n), r(n), p(n), q(n);
    for (int outer = 0; outer < kInverseIterations; ++outer) {
        // Solve (L + shift) x = psi by conjugate gradients, warm-started at psi.
        x = psi;
        apply_l(x, q);
        parallel_for(n, [&](std::size_t i) { r[i] = psi[i] - q[i]; });
        const double bnorm = std::sqrt(cdot(psi, psi).real());
        p = r;
        double rr = cdot(r, r).real();
        for (int it = 0; it < 5000 && std::sqrt(rr) > kInverseSolveTolerance * bnorm; ++it) {
            apply_l(p, q);
            const double alpha = rr / cdot(p, q).real();
            parallel_for(n, [&](std::size_t i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            });
            const double rr_next = cdot(r, r).real();
            const double beta = rr_next / rr;
            rr = rr_next;
            parallel_for(n, [&](std::size_t i) { p[i] = r[i] + beta * p[i]; });
        }
        const double xn = std::sqrt(cdot(x, x).real() / static_cast<double>(n));
        parallel_for(n, [&](std::size_t i) { psi[i] = x[i] / xn; });
    }
    return psi;
}

// Minimizes sum_e (theta_e + alpha_b - alpha_a)^2, theta_e = Arg <v_a|v_b>,
// and rotates v_c by e^{i alpha_c}.
void least_squares_phases(const CosphereGraph& graph, std::vector<cd>& v, std::size_t m, GaugeField& out)
{
    const std::size_t nv = graph.vertices.size();
    const std::size_t ne = graph.edges.size();
    std::vector<double> theta(ne);
    parallel_for(ne, [&](std::size_t e) {
        theta[e] = std::arg(overlap_at(v, m, graph.edges[e][0], graph.edges[e][1]));
    });
    std::vector<double> rhs(nv);
    parallel_for(nv, [&](std::size_t c) {
        double s = 0.0;
        for (auto k = graph.offsets[c]; k < graph.offsets[c + 1]; ++k) {
            const auto e = graph.adj_edge[k];
            s += graph.edges[e][0] == c ? theta[e] : -theta[e];
        }
        rhs[c] = s;
    });
    const CgResult cg = laplacian_cg(graph, rhs);
    out.cg_iterations = cg.iterations;
    out.cg_relative_residual = cg.relative_residual;
    parallel_for(nv, [&](std::size_t c) {
        const cd ph = std::polar(1.0, cg.x[c]);
        for (std::size_t j = 0; j < m; ++j) v[c * m + j] *= ph;
    });
}

// Edge defects |v_b - v_a| and face residuals rho_f = sum_e Arg <v_a|v_b> - Arg tr(face),
// which are multiples of 2 pi.
void evaluate(const CosphereGraph& graph, const std::vector<cd>& v, std::size_t m, GaugeField& out)
{
    const std::size_t ne = graph.edges.size();
    std::vector<double> defect(ne);
    parallel_for(ne, [&](std::size_t e) {
        const auto [a, b] = graph.edges[e];
        double s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += std::norm(v[b * m + j] - v[a * m + j]);
        defect[e] = std::sqrt(s);
    });
    out.max_edge_defect = 0.0;
    for (double d : defect) out.max_edge_defect = std::max(out.max_edge_defect, d);

    std::vector<double> rho(graph.faces.size());
    parallel_for(graph.faces.size(), [&](std::size_t k) {
        const Face& q = graph.faces[k];
        cd prod = 1.0;
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            const auto a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a == b) continue;
            const cd z = overlap_at(v, m, a, b);
            sum += std::arg(z);
            prod *= z;
        }
        rho[k] = sum - std::arg(prod);
    });
    out.vortex_faces = 0;
    out.worst_face = 0;
    for (std::size_t k = 0; k < rho.size(); ++k) {
        if (std::abs(rho[k]) > kVortexThreshold) ++out.vortex_faces;
        if (std::abs(rho[k]) > std::abs(rho[out.worst_face])) out.worst_face = k;
    }
    out.worst_face_residual = rho.empty() ? 0.0 : rho[out.worst_face];
    out.max_face_residual = std::abs(out.worst_face_residual);
}
} // namespace

double defect_tol(int n) { return 10.0 * kTwoPi / static_cast<double>(n); }

GaugeField spanning_tree_gauge(const SymbolField& f, int band, const CosphereGraph& graph, std::uint32_t root)
{
    const std::size_t nv = graph.vertices.size();
    if (nv == 0 || graph.offsets.size() != nv + 1) throw InvalidParameter("graph has no adjacency");
    if (root >= nv) throw InvalidParameter("root vertex out of range");
    const auto m = static_cast<std::size_t>(f.m());

    GaugeField out;
    out.graph = &graph;
    out.band = band;
    out.m = f.m();
    out.root = root;

    // Eigenvectors with arbitrary phases; the root gets the dominant column of P.
    const std::vector<cd> w = band_vectors(f, band, graph.vertices);
    std::vector<cd>& v = out.vectors;
    v.assign(nv * m, cd{});
    {
        std::size_t best = 0;
        for (std::size_t j = 1; j < m; ++j)
            if (std::norm(w[root * m + j]) > std::norm(w[root * m + best])) best = j;
        const cd c = std::conj(w[root * m + best]) / std::abs(w[root * m + best]);
        for (std::size_t j = 0; j < m; ++j) v[root * m + j] = w[root * m + j] * c;
    }

    // Breadth-first propagation v_b = P_b v_a / |P_b v_a|.
    std::vector<char> seen(nv, 0);
    std::vector<std::uint32_t> queue{root};
    seen[root] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const std::uint32_t a = queue[h];
        for (auto k = graph.offsets[a]; k < graph.offsets[a + 1]; ++k) {
            const std::uint32_t b = graph.adj[k];
            if (seen[b]) continue;
            const cd z = inner(std::span<const cd>(w.data() + b * m, m), std::span<const cd>(v.data() + a * m, m));
            if (std::abs(z) < kMinOverlap)
                throw InadmissiblePlaquette("eigenline transport breaks down on a graph edge", std::abs(z));
            const cd c = z / std::abs(z);
            for (std::size_t j = 0; j < m; ++j) v[b * m + j] = w[b * m + j] * c;
            seen[b] = 1;
            queue.push_back(b);
        }
    }
    if (queue.size() != nv) throw InvalidParameter("graph is not connected");

    least_squares_phases(graph, v, m, out);
    evaluate(graph, v, m, out);
    if (out.vortex_faces > 0) {
        // Branch cuts of the tree gauge can leave vortex pairs that no phase
        // least-squares step removes; restart from the smoothest section.
        out.refined = true;
        const std::vector<cd> psi = smoothest_phases(graph, v, m);
        parallel_for(nv, [&](std::size_t c) {
            const double r = std::abs(psi[c]);
            if (r == 0.0) return;
            const cd ph = psi[c] / r;
            for (std::size_t j = 0; j < m; ++j) v[c * m + j] *= ph;
        });
        least_squares_phases(graph, v, m, out);
        evaluate(graph, v, m, out);
    }

    const bool ok = out.max_edge_defect <= defect_tol(graph.resolution) && out.vortex_faces == 0;
    out.status = ok ? GaugeStatus::Success : GaugeStatus::Failed;
    if (!ok && !graph.faces.empty()) {
        GaugeCertificate cert;
        cert.face = out.worst_face;
        const Face& q = graph.faces[out.worst_face];
        for (int i = 0; i < 4; ++i)
            if (i == 0 || q[static_cast<std::size_t>(i)] != q[static_cast<std::size_t>(i - 1)]) cert.cycle.push_back(q[static_cast<std::size_t>(i)]);
        cert.holonomy_residual = out.worst_face_residual;
        out.certificate = cert;
    }
    return out;
}

CrossCheck cross_check_report(const SymbolField& f, int band, int n)
{
    CrossCheck c;
    const CosphereGraph graph = cosphere_graph(f.geometry(), n);
    const GaugeField g = spanning_tree_gauge(f, band, graph);
    c.gauge_success = g.success();
    c.max_edge_defect = g.max_edge_defect;
    c.max_face_residual = g.max_face_residual;
    c.globally_obstructed = global_obstruction(f, band, n).obstructed;
    c.agree = c.gauge_success == !c.globally_obstructed;
    return c;
}

bool cross_check(const SymbolField& f, int band, int n)
{
    try {
        return cross_check_report(f, band, n).agree;
    } catch (const Error&) {
        return false;
    }
}

void write_gauge_csv(std::ostream& os, const GaugeField& gauge)
{
    const CosphereGraph& g = *gauge.graph;
    const int d = ambient_dimension(g.geometry);
    os << "index";
    for (int i = 0; i < d; ++i) os << ",x" << i;
    for (int i = 0; i < d; ++i) os << ",xi" << i;
    for (int j = 0; j < gauge.m; ++j) os << ",re" << j << ",im" << j;
    os << '\n';
    for (std::size_t k = 0; k < g.vertices.size(); ++k) {
        const auto& p = g.vertices[k];
        os << k;
        for (int i = 0; i < d; ++i) os << ',' << fmt17(p.x[static_cast<std::size_t>(i)]);
        for (int i = 0; i < d; ++i) os << ',' << fmt17(p.xi[static_cast<std::size_t>(i)]);
        for (const cd& z : gauge.vector(static_cast<std::uint32_t>(k))) os << ',' << fmt17(z.real()) << ',' << fmt17(z.imag());
        os << '\n';
    }
}

} // namespace obstrukt
