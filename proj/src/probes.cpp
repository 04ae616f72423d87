#include "obstrukt/probes.hpp"

#include "obstrukt/errors.hpp"
#include "obstrukt/format.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

namespace obstrukt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) { return (std::uint64_t{a} << 32) | b; }

// Collapses cyclically repeated corners. Returns false for faces with fewer
// than three distinct corners.
bool normalize_face(std::array<std::uint32_t, 4> in, Face& out)
{
    std::uint32_t buf[4];
    int k = 0;
    for (int i = 0; i < 4; ++i) {
        if (k > 0 && buf[k - 1] == in[static_cast<std::size_t>(i)]) continue;
        buf[k++] = in[static_cast<std::size_t>(i)];
    }
    while (k > 1 && buf[k - 1] == buf[0]) --k;
    if (k < 3) return false;
    if (k == 3) {
        out = {buf[0], buf[1], buf[2], buf[2]};
        return true;
    }
    // Four corners, but a non-adjacent repeat would pinch the face.
    if (buf[0] == buf[2] || buf[1] == buf[3]) return false;
    out = {buf[0], buf[1], buf[2], buf[3]};
    return true;
}

// Generic cell complex assembled from integer-keyed grid cells.
struct ComplexBuilder {
    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<Face> faces;
    std::unordered_set<std::uint64_t> edge_seen;
    std::set<std::array<std::uint32_t, 4>> face_seen;

    void add_edge(std::uint32_t a, std::uint32_t b)
    {
        if (a == b) return;
        const std::uint64_t key = edge_key(std::min(a, b), std::max(a, b));
        if (edge_seen.insert(key).second) edges.push_back({a, b});
    }
    void add_face(const std::array<std::uint32_t, 4>& raw)
    {
        Face f;
        if (!normalize_face(raw, f)) return;
        std::array<std::uint32_t, 4> key = f;
        std::sort(key.begin(), key.end());
        if (face_seen.insert(key).second) faces.push_back(f);
    }
};

} // namespace

// --- QuadCycleMesh ---------------------------------------------------------

namespace {

std::unordered_map<std::uint64_t, int> directed_edge_counts(const std::vector<Face>& quads)
{
    std::unordered_map<std::uint64_t, int> count;
    for (const Face& q : quads)
        for (int i = 0; i < 4; ++i) {
            const std::uint32_t a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a != b) ++count[edge_key(a, b)];
        }
    return count;
}

} // namespace

bool QuadCycleMesh::is_closed() const
{
    const auto count = directed_edge_counts(quads);
    for (const auto& [key, c] : count) {
        if (c != 1) return false;
        const auto a = static_cast<std::uint32_t>(key >> 32), b = static_cast<std::uint32_t>(key & 0xffffffffu);
        auto it = count.find(edge_key(b, a));
        if (it == count.end() || it->second != 1) return false;
    }
    return true;
}

std::vector<std::array<std::uint32_t, 2>> QuadCycleMesh::boundary_edges() const
{
    const auto count = directed_edge_counts(quads);
    std::vector<std::array<std::uint32_t, 2>> out;
    for (const Face& q : quads)
        for (int i = 0; i < 4; ++i) {
            const std::uint32_t a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a != b && count.find(edge_key(b, a)) == count.end()) out.push_back({a, b});
        }
    return out;
}

std::size_t QuadCycleMesh::edge_count() const
{
    std::unordered_set<std::uint64_t> seen;
    for (const Face& q : quads)
        for (int i = 0; i < 4; ++i) {
            const std::uint32_t a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a != b) seen.insert(edge_key(std::min(a, b), std::max(a, b)));
        }
    return seen.size();
}

QuadCycleMesh QuadCycleMesh::reversed() const
{
    QuadCycleMesh r = *this;
    for (Face& q : r.quads) {
        // (a, b, c, d) -> (d, c, b, a); keep the triangle form (x, y, z, z).
        Face rev = {q[3], q[2], q[1], q[0]};
        if (is_triangle(q)) rev = {q[2], q[1], q[0], q[0]};
        q = rev;
    }
    r.label += "~reversed";
    return r;
}

LoopPath LoopPath::reversed() const
{
    // Same start vertex, opposite direction.
    LoopPath r = *this;
    const std::size_t n = vertices.size();
    for (std::size_t k = 0; k < n; ++k) r.vertices[k] = vertices[(n - k) % n];
    r.label += "~reversed";
    return r;
}

bool LoopPath::is_valid() const
{
    const std::size_t n = vertices.size();
    if (n < 3) return false;
    const double bound = kTwoPi / static_cast<double>(n) * 1.1;
    for (std::size_t i = 0; i < n; ++i) {
        const CovectorPoint& a = vertices[i];
        const CovectorPoint& b = vertices[(i + 1) % n];
        if (a == b) return false;
        double d2 = 0.0;
        for (int k = 0; k < 4; ++k) d2 += (a.x[static_cast<std::size_t>(k)] - b.x[static_cast<std::size_t>(k)]) * (a.x[static_cast<std::size_t>(k)] - b.x[static_cast<std::size_t>(k)]) +
                                         (a.xi[static_cast<std::size_t>(k)] - b.xi[static_cast<std::size_t>(k)]) * (a.xi[static_cast<std::size_t>(k)] - b.xi[static_cast<std::size_t>(k)]);
        if (std::sqrt(d2) > bound) return false;
    }
    return true;
}

TorsionChain TorsionChain::reversed() const
{
    TorsionChain r;
    r.gamma = gamma.reversed();
    r.sigma = sigma.reversed();
    const std::size_t n = boundary.size();
    r.boundary.resize(n);
    for (std::size_t k = 0; k < n; ++k) r.boundary[k] = boundary[(n - k) % n];
    return r;
}

bool TorsionChain::is_valid() const
{
    const std::size_t n = gamma.vertices.size();
    if (n == 0 || boundary.size() != 2 * n) return false;
    for (std::size_t k = 0; k < boundary.size(); ++k) {
        if (boundary[k] >= sigma.vertices.size()) return false;
        if (!(sigma.vertices[boundary[k]] == gamma.vertices[k % n])) return false;
    }
    // The unmatched edges of sigma are exactly boundary[k] -> boundary[k+1].
    auto open = sigma.boundary_edges();
    if (open.size() != boundary.size()) return false;
    std::multiset<std::pair<std::uint32_t, std::uint32_t>> expected, got;
    for (std::size_t k = 0; k < boundary.size(); ++k)
        expected.insert({boundary[k], boundary[(k + 1) % boundary.size()]});
    for (const auto& e : open) got.insert({e[0], e[1]});
    return expected == got;
}

// --- probes ------------------------------------------------------------------

QuadCycleMesh cubed_sphere(int n)
{
    if (n < 1) throw InvalidParameter("cubed sphere needs n >= 1");
    QuadCycleMesh mesh;
    mesh.resolution = n;
    mesh.label = "cubed-sphere";
    std::map<std::array<int, 3>, std::uint32_t> index;

    auto vertex = [&](const std::array<int, 3>& key) {
        auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
        if (inserted) {
            Vec3 p;
            for (int a = 0; a < 3; ++a)
                p[static_cast<std::size_t>(a)] = std::tan(kPi / 4.0 * key[static_cast<std::size_t>(a)] / n);
            const double r = norm3(p);
            CovectorPoint v;
            v.geometry = Geometry::T3;
            v.xi = {p[0] / r, p[1] / r, p[2] / r, 0.0};
            mesh.vertices.push_back(v);
        }
        return it->second;
    };

    // (normal axis, sign, first tangent axis, second tangent axis), with
    // e_first x e_second pointing outward.
    const int layout[6][4] = {{0, 1, 1, 2}, {0, -1, 2, 1}, {1, 1, 2, 0}, {1, -1, 0, 2}, {2, 1, 0, 1}, {2, -1, 1, 0}};
    for (const auto& f : layout) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto corner = [&](int u, int v) {
                    std::array<int, 3> key{};
                    key[static_cast<std::size_t>(f[0])] = f[1] * n;
                    key[static_cast<std::size_t>(f[2])] = 2 * u - n;
                    key[static_cast<std::size_t>(f[3])] = 2 * v - n;
                    return vertex(key);
                };
                mesh.quads.push_back({corner(i, j), corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)});
            }
    }
    return mesh;
}

QuadCycleMesh fiber_sphere_probe(Geometry g, const Vec4& x0, int n)
{
    if (g != Geometry::T3 && g != Geometry::S3) throw InvalidParameter("fiber sphere probe needs a 3-dimensional base");
    if (n < 4) throw InvalidParameter("fiber sphere probe needs n >= 4");
    QuadCycleMesh mesh = cubed_sphere(n);
    std::array<Vec4, 3> frame{};
    if (g == Geometry::S3) {
        if (std::abs(std::sqrt(dot4(x0, x0)) - 1.0) > 1e-12) throw InvalidParameter("S3 base point must be a unit quaternion");
        frame = s3_frame(x0);
    }
    for (CovectorPoint& v : mesh.vertices) {
        const Vec4 c = v.xi;
        v.geometry = g;
        v.x = x0;
        if (g == Geometry::S3) {
            Vec4 xi{};
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 4; ++k) xi[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(j)] * frame[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            const double r = std::sqrt(dot4(xi, xi));
            for (double& z : xi) z /= r;
            v.xi = xi;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "fiber-sphere@(%g,%g,%g,%g)", x0[0], x0[1], x0[2], x0[3]);
    mesh.label = buf;
    mesh.resolution = n;
    return mesh;
}

namespace {

QuadCycleMesh torus_mesh(int n, const std::string& label, const std::function<CovectorPoint(double, double)>& at)
{
    QuadCycleMesh mesh;
    mesh.label = label;
    mesh.resolution = n;
    const double h = kTwoPi / n;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) mesh.vertices.push_back(at(h * i, h * j));
    auto id = [n](int i, int j) { return static_cast<std::uint32_t>((i % n) + n * (j % n)); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) mesh.quads.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    return mesh;
}

} // namespace

std::vector<QuadCycleMesh> torus_probes(Geometry g, int n)
{
    if (n < 8) throw InvalidParameter("torus probes need n >= 8");
    std::vector<QuadCycleMesh> out;
    if (g == Geometry::T2) {
        auto pt = [](double x1, double x2, double theta) {
            CovectorPoint p;
            p.geometry = Geometry::T2;
            p.x = {x1, x2, 0, 0};
            p.xi = {std::cos(theta), std::sin(theta), 0, 0};
            return p;
        };
        out.push_back(torus_mesh(n, "torus(x1,x2)@theta=0.3", [&](double u, double v) { return pt(u, v, 0.3); }));
        out.push_back(torus_mesh(n, "torus(x1,theta)@x2=0.7", [&](double u, double v) { return pt(u, 0.7, v); }));
        out.push_back(torus_mesh(n, "torus(x2,theta)@x1=1.1", [&](double u, double v) { return pt(1.1, u, v); }));
        return out;
    }
    if (g == Geometry::T3) {
        auto pt = [](double x1, double x2, double x3) {
            CovectorPoint p;
            p.geometry = Geometry::T3;
            p.x = {x1, x2, x3, 0};
            p.xi = {0.6, 0.0, 0.8, 0};
            return p;
        };
        out.push_back(torus_mesh(n, "torus(x1,x2)@x3=0.3", [&](double u, double v) { return pt(u, v, 0.3); }));
        out.push_back(torus_mesh(n, "torus(x1,x3)@x2=0.7", [&](double u, double v) { return pt(u, 0.7, v); }));
        out.push_back(torus_mesh(n, "torus(x2,x3)@x1=1.1", [&](double u, double v) { return pt(1.1, u, v); }));
        return out;
    }
    throw InvalidParameter("torus probes need T2 or T3");
}

CovectorPoint frame_point(const Quaternion& q)
{
    const auto r = rotation_matrix(q);
    CovectorPoint p;
    p.geometry = Geometry::S2;
    p.x = {r[0][2], r[1][2], r[2][2], 0.0};
    p.xi = {r[0][0], r[1][0], r[2][0], 0.0};
    return p;
}

TorsionChain belt_trick_chain(int n_loop, int n_disc)
{
    if (n_loop < 32 || n_loop % 2 != 0) throw InvalidParameter("belt trick chain needs an even n_loop >= 32");
    if (n_disc < 16) throw InvalidParameter("belt trick chain needs n_disc >= 16");

    TorsionChain chain;
    chain.gamma.label = "fiber-loop@(0,0,1)";
    for (int k = 0; k < n_loop; ++k) {
        const double t = kTwoPi * k / n_loop;
        CovectorPoint p;
        p.geometry = Geometry::S2;
        p.x = {0.0, 0.0, 1.0, 0.0};
        p.xi = {std::cos(t), std::sin(t), 0.0, 0.0};
        chain.gamma.vertices.push_back(p);
    }

    // Disc D(phi, t) = cos(phi) (cos t + k sin t) + sin(phi) i; at phi = 0 the
    // rotation R(D) turns e1 by 2t about e3, so t in [0, 2 pi) covers gamma twice.
    QuadCycleMesh& sigma = chain.sigma;
    sigma.label = "belt-disc";
    sigma.resolution = n_disc;
    const int nt = 2 * n_loop;
    for (int i = 0; i < n_disc; ++i) {
        const double phi = kPi / 2.0 * i / n_disc;
        for (int k = 0; k < nt; ++k) {
            if (i == 0) {
                sigma.vertices.push_back(chain.gamma.vertices[static_cast<std::size_t>(k % n_loop)]);
                continue;
            }
            const double t = kPi * k / n_loop;
            const Quaternion q = {std::cos(phi) * std::cos(t), std::sin(phi), 0.0, std::cos(phi) * std::sin(t)};
            sigma.vertices.push_back(frame_point(q));
        }
    }
    const auto apex = static_cast<std::uint32_t>(sigma.vertices.size());
    sigma.vertices.push_back(frame_point({0.0, 1.0, 0.0, 0.0}));

    auto id = [nt](int i, int k) { return static_cast<std::uint32_t>(i * nt + (k % nt)); };
    for (int i = 0; i < n_disc; ++i)
        for (int k = 0; k < nt; ++k) {
            if (i + 1 < n_disc)
                sigma.quads.push_back({id(i, k), id(i, k + 1), id(i + 1, k + 1), id(i + 1, k)});
            else
                sigma.quads.push_back({id(i, k), id(i, k + 1), apex, apex});
        }
    for (int k = 0; k < nt; ++k) chain.boundary.push_back(id(0, k));
    return chain;
}

ProbeSet probe_set(Geometry g, int n)
{
    if (n < 8) throw InvalidParameter("probe sets need n >= 8");
    ProbeSet ps;
    ps.geometry = g;
    ps.resolution = n;
    switch (g) {
    case Geometry::S2:
        ps.torsion = belt_trick_chain(4 * n, 2 * n);
        ps.completeness_note =
            "S*S2 = RP3, H2 = Z/2: a single torsion class, detected by the fiber loop and the "
            "quaternionic disc bounding it twice";
        break;
    case Geometry::T2:
        ps.cycles = torus_probes(Geometry::T2, n);
        ps.completeness_note = "S*T2 = T3, H2 = Z^3: generated by the three coordinate 2-tori";
        break;
    case Geometry::T3:
        ps.cycles.push_back(fiber_sphere_probe(Geometry::T3, {0.1, 0.2, 0.3, 0.0}, n));
        for (auto& t : torus_probes(Geometry::T3, n)) ps.cycles.push_back(std::move(t));
        ps.completeness_note = "S*T3 = T3 x S2, H2 = Z^4: the fiber sphere and the three coordinate 2-tori";
        break;
    case Geometry::S3:
        ps.cycles.push_back(fiber_sphere_probe(Geometry::S3, {1.0, 0.0, 0.0, 0.0}, n));
        ps.completeness_note =
            "the left-invariant framing trivializes S*S3 = S3 x S2, and H2(S3 x S2) = Z is generated by the "
            "fiber class (standard topology, external input)";
        break;
    }
    return ps;
}

// --- cosphere graphs -----------------------------------------------------------

void CosphereGraph::build_adjacency()
{
    const std::size_t nv = vertices.size();
    offsets.assign(nv + 1, 0);
    for (const auto& e : edges) {
        ++offsets[e[0] + 1];
        ++offsets[e[1] + 1];
    }
    for (std::size_t v = 0; v < nv; ++v) offsets[v + 1] += offsets[v];
    adj.assign(2 * edges.size(), 0);
    adj_edge.assign(2 * edges.size(), 0);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t k = 0; k < edges.size(); ++k) {
        const auto [a, b] = edges[k];
        adj[fill[a]] = b;
        adj_edge[fill[a]++] = k;
        adj[fill[b]] = a;
        adj_edge[fill[b]++] = k;
    }
}

bool CosphereGraph::is_connected() const
{
    if (vertices.empty()) return true;
    std::vector<char> seen(vertices.size(), 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const auto v = queue[h];
        for (auto k = offsets[v]; k < offsets[v + 1]; ++k)
            if (!seen[adj[k]]) {
                seen[adj[k]] = 1;
                queue.push_back(adj[k]);
            }
    }
    return queue.size() == vertices.size();
}

namespace {

// Cell complex of positions only (vertices carry an opaque payload).
template <typename Payload>
struct BaseComplex {
    std::vector<Payload> vertices;
    std::vector<std::array<std::uint32_t, 2>> edges;
    std::vector<Face> faces;
};

BaseComplex<Vec4> torus3_base(int n)
{
    BaseComplex<Vec4> b;
    const double h = kTwoPi / n;
    auto id = [n](int i, int j, int k) {
        return static_cast<std::uint32_t>(((i + n) % n) + n * (((j + n) % n) + n * ((k + n) % n)));
    };
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) b.vertices.push_back({h * i, h * j, h * k, 0.0});
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const auto v = id(i, j, k);
                b.edges.push_back({v, id(i + 1, j, k)});
                b.edges.push_back({v, id(i, j + 1, k)});
                b.edges.push_back({v, id(i, j, k + 1)});
                b.faces.push_back({v, id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k)});
                b.faces.push_back({v, id(i + 1, j, k), id(i + 1, j, k + 1), id(i, j, k + 1)});
                b.faces.push_back({v, id(i, j + 1, k), id(i, j + 1, k + 1), id(i, j, k + 1)});
            }
    return b;
}

// Hopf grid on S^3: q = (cos eta e^{i a}, sin eta e^{i b}), eta = pi/2 * i/n,
// a = 2 pi j/n, b = 2 pi k/n. With `antipodal`, q ~ -q (SO(3)).
BaseComplex<Quaternion> hopf_base(int n, bool antipodal)
{
    if (antipodal && n % 2 != 0) throw InvalidParameter("SO(3) grid needs even n");
    using Key = std::array<int, 3>;
    auto collapse = [n](Key key) {
        key[1] = ((key[1] % n) + n) % n;
        key[2] = ((key[2] % n) + n) % n;
        if (key[0] == 0) key[2] = 0;
        if (key[0] == n) key[1] = 0;
        return key;
    };
    auto canonical = [&](const Key& key) {
        Key a = collapse(key);
        if (!antipodal) return a;
        Key b = collapse({key[0], key[1] + n / 2, key[2] + n / 2});
        return std::min(a, b);
    };

    BaseComplex<Quaternion> base;
    std::map<Key, std::uint32_t> index;
    auto vertex = [&](const Key& raw) {
        const Key key = canonical(raw);
        auto [it, inserted] = index.try_emplace(key, static_cast<std::uint32_t>(base.vertices.size()));
        if (inserted) {
            const double eta = kPi / 2.0 * key[0] / n;
            const double a = kTwoPi * key[1] / n, b = kTwoPi * key[2] / n;
            base.vertices.push_back({std::cos(eta) * std::cos(a), std::cos(eta) * std::sin(a),
                                     std::sin(eta) * std::cos(b), std::sin(eta) * std::sin(b)});
        }
        return it->second;
    };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) vertex({i, j, k});

    ComplexBuilder cb;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const auto v = vertex({i, j, k});
                if (i < n) cb.add_edge(v, vertex({i + 1, j, k}));
                cb.add_edge(v, vertex({i, j + 1, k}));
                cb.add_edge(v, vertex({i, j, k + 1}));
                if (i < n) {
                    cb.add_face({v, vertex({i + 1, j, k}), vertex({i + 1, j + 1, k}), vertex({i, j + 1, k})});
                    cb.add_face({v, vertex({i + 1, j, k}), vertex({i + 1, j, k + 1}), vertex({i, j, k + 1})});
                }
                cb.add_face({v, vertex({i, j + 1, k}), vertex({i, j + 1, k + 1}), vertex({i, j, k + 1})});
            }
    base.edges = std::move(cb.edges);
    base.faces = std::move(cb.faces);
    return base;
}

// 2-skeleton of base x fiber; vertex (b, f) has index b * |F| + f.
template <typename Payload>
CosphereGraph product_graph(Geometry g, int n, const BaseComplex<Payload>& base, const QuadCycleMesh& fiber,
                            const std::function<CovectorPoint(const Payload&, const Vec4&)>& point)
{
    CosphereGraph out;
    out.geometry = g;
    out.resolution = n;
    const auto nf = static_cast<std::uint32_t>(fiber.vertices.size());
    std::vector<std::array<std::uint32_t, 2>> fiber_edges;
    {
        std::unordered_set<std::uint64_t> seen;
        for (const Face& q : fiber.quads)
            for (int i = 0; i < 4; ++i) {
                const auto a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
                if (a != b && seen.insert(edge_key(std::min(a, b), std::max(a, b))).second) fiber_edges.push_back({a, b});
            }
    }
    out.vertices.reserve(base.vertices.size() * nf);
    for (const Payload& b : base.vertices)
        for (const CovectorPoint& f : fiber.vertices) out.vertices.push_back(point(b, f.xi));

    auto id = [nf](std::uint32_t b, std::uint32_t f) { return b * nf + f; };
    out.edges.reserve(base.edges.size() * nf + base.vertices.size() * fiber_edges.size());
    for (const auto& e : base.edges)
        for (std::uint32_t f = 0; f < nf; ++f) out.edges.push_back({id(e[0], f), id(e[1], f)});
    for (std::uint32_t b = 0; b < base.vertices.size(); ++b)
        for (const auto& e : fiber_edges) out.edges.push_back({id(b, e[0]), id(b, e[1])});

    out.faces.reserve(base.faces.size() * nf + base.edges.size() * fiber_edges.size() +
                      base.vertices.size() * fiber.quads.size());
    for (const Face& q : base.faces)
        for (std::uint32_t f = 0; f < nf; ++f) out.faces.push_back({id(q[0], f), id(q[1], f), id(q[2], f), id(q[3], f)});
    for (const auto& e : base.edges)
        for (const auto& fe : fiber_edges)
            out.faces.push_back({id(e[0], fe[0]), id(e[1], fe[0]), id(e[1], fe[1]), id(e[0], fe[1])});
    for (std::uint32_t b = 0; b < base.vertices.size(); ++b)
        for (const Face& q : fiber.quads) out.faces.push_back({id(b, q[0]), id(b, q[1]), id(b, q[2]), id(b, q[3])});
    return out;
}

} // namespace

CosphereGraph cosphere_graph(Geometry g, int n)
{
    if (n < 8) throw InvalidParameter("cosphere graph needs n >= 8");
    CosphereGraph out;
    switch (g) {
    case Geometry::T2: {
        out.geometry = g;
        out.resolution = n;
        const double h = kTwoPi / n;
        auto id = [n](int i, int j, int k) {
            return static_cast<std::uint32_t>((i % n) + n * ((j % n) + n * (k % n)));
        };
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    CovectorPoint p;
                    p.geometry = Geometry::T2;
                    p.x = {h * i, h * j, 0, 0};
                    p.xi = {std::cos(h * k), std::sin(h * k), 0, 0};
                    out.vertices.push_back(p);
                }
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const auto v = id(i, j, k);
                    out.edges.push_back({v, id(i + 1, j, k)});
                    out.edges.push_back({v, id(i, j + 1, k)});
                    out.edges.push_back({v, id(i, j, k + 1)});
                    out.faces.push_back({v, id(i + 1, j, k), id(i + 1, j + 1, k), id(i, j + 1, k)});
                    out.faces.push_back({v, id(i + 1, j, k), id(i + 1, j, k + 1), id(i, j, k + 1)});
                    out.faces.push_back({v, id(i, j + 1, k), id(i, j + 1, k + 1), id(i, j, k + 1)});
                }
        break;
    }
    case Geometry::T3: {
        if (n % 2 != 0) throw InvalidParameter("T3 cosphere graph needs even n");
        const auto base = torus3_base(n);
        const auto fiber = cubed_sphere(n / 2);
        out = product_graph<Vec4>(g, n, base, fiber, [](const Vec4& x, const Vec4& c) {
            CovectorPoint p;
            p.geometry = Geometry::T3;
            p.x = x;
            p.xi = c;
            return p;
        });
        break;
    }
    case Geometry::S3: {
        if (n % 2 != 0) throw InvalidParameter("S3 cosphere graph needs even n");
        const auto base = hopf_base(n, false);
        const auto fiber = cubed_sphere(n / 2);
        out = product_graph<Quaternion>(g, n, base, fiber, [](const Quaternion& q, const Vec4& c) {
            const auto e = s3_frame(q);
            CovectorPoint p;
            p.geometry = Geometry::S3;
            p.x = q;
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 4; ++k) p.xi[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            return p;
        });
        break;
    }
    case Geometry::S2: {
        // The double cover halves angles: 2n Hopf steps give SO(3) edges of
        // rotation angle about 2 pi / n.
        const auto base = hopf_base(2 * n, true);
        out.geometry = g;
        out.resolution = n;
        for (const Quaternion& q : base.vertices) out.vertices.push_back(frame_point(q));
        out.edges = base.edges;
        out.faces = base.faces;
        break;
    }
    }
    out.build_adjacency();
    return out;
}

void write_vertex_csv(std::ostream& os, const std::vector<CovectorPoint>& vertices)
{
    if (vertices.empty()) {
        os << "index\n";
        return;
    }
    const int d = ambient_dimension(vertices.front().geometry);
    os << "index";
    for (int i = 0; i < d; ++i) os << ",x" << i;
    for (int i = 0; i < d; ++i) os << ",xi" << i;
    os << '\n';
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        os << k;
        for (int i = 0; i < d; ++i) os << ',' << fmt17(vertices[k].x[static_cast<std::size_t>(i)]);
        for (int i = 0; i < d; ++i) os << ',' << fmt17(vertices[k].xi[static_cast<std::size_t>(i)]);
        os << '\n';
    }
}

void write_face_csv(std::ostream& os, const std::vector<Face>& faces)
{
    os << "a,b,c,d\n";
    for (const Face& f : faces) os << f[0] << ',' << f[1] << ',' << f[2] << ',' << f[3] << '\n';
}

} // namespace obstrukt
