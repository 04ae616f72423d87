#include "obstrukt/invariants.hpp"

#include "obstrukt/errors.hpp"
#include "obstrukt/parallel.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace obstrukt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void check_band(const SymbolField& f, int band)
{
    if (band < 0 || band >= f.m())
        throw InvalidParameter("band " + std::to_string(band) + " out of range for " + f.id());
}

cd overlap(const std::vector<cd>& vecs, std::size_t m, std::uint32_t a, std::uint32_t b)
{
    return inner(std::span<const cd>(vecs.data() + a * m, m), std::span<const cd>(vecs.data() + b * m, m));
}

// <a|b> checked against the tr(Pa Pb) = |<a|b>|^2 admissibility floor.
cd checked_overlap(const std::vector<cd>& vecs, std::size_t m, std::uint32_t a, std::uint32_t b, const std::string& where)
{
    const cd z = overlap(vecs, m, a, b);
    if (std::norm(z) < kMinOverlap)
        throw InadmissiblePlaquette("near-orthogonal neighboring eigenlines on " + where, std::norm(z));
    return z;
}

// Arg tr(Pa Pb Pc Pd) for every face, in face order.
std::vector<double> face_args(const std::vector<cd>& vecs, std::size_t m, const std::vector<Face>& faces,
                              const std::string& where)
{
    std::vector<double> args(faces.size());
    parallel_for(faces.size(), [&](std::size_t k) {
        const Face& q = faces[k];
        cd z = 1.0;
        for (int i = 0; i < 4; ++i) {
            const auto a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a == b) continue;
            z *= checked_overlap(vecs, m, a, b, where);
        }
        args[k] = std::arg(z);
    });
    return args;
}

double max_abs(const std::vector<double>& v)
{
    double r = 0.0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

// Arg in (-pi, pi]; std::arg returns [-pi, pi].
double principal(double phase) { return phase <= -std::numbers::pi ? phase + kTwoPi : phase; }

} // namespace

std::string_view kind_name(InvariantKind k)
{
    switch (k) {
    case InvariantKind::Chern: return "chern";
    case InvariantKind::BerryPhase: return "berry_phase";
    case InvariantKind::Torsion: return "torsion";
    }
    return "?";
}

std::string_view question_name(Question q) { return q == Question::Local ? "local" : "global"; }

long InvariantReport::quantized() const { return std::lround(value); }

double plaquette_phase(const HermitianMatrix& p1, const HermitianMatrix& p2, const HermitianMatrix& p3,
                       const HermitianMatrix& p4)
{
    const HermitianMatrix* p[4] = {&p1, &p2, &p3, &p4};
    for (int i = 0; i < 4; ++i) {
        const double t = std::abs((*p[i] * *p[(i + 1) % 4]).trace());
        if (t < kMinOverlap) throw InadmissiblePlaquette("near-orthogonal consecutive projections", t);
    }
    return principal(-std::arg((p1 * p2 * p3 * p4).trace()));
}

std::vector<cd> band_vectors(const SymbolField& f, int band, const std::vector<CovectorPoint>& vertices)
{
    check_band(f, band);
    const auto m = static_cast<std::size_t>(f.m());
    std::vector<cd> out(vertices.size() * m);
    parallel_for(vertices.size(), [&](std::size_t k) {
        const SpectralPoint sp = spectral_decompose(f, vertices[k]);
        const auto& v = sp.vectors[static_cast<std::size_t>(band)];
        std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(k * m));
    });
    return out;
}

InvariantReport chern_number(const SymbolField& f, int band, const QuadCycleMesh& mesh)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!mesh.is_closed()) throw InvalidParameter("chern number needs a closed mesh: " + mesh.label);
    const auto vecs = band_vectors(f, band, mesh.vertices);
    const auto args = face_args(vecs, static_cast<std::size_t>(f.m()), mesh.quads, mesh.label);

    InvariantReport r;
    r.symbol_id = f.id();
    r.band = band;
    r.probe = mesh.label;
    r.kind = InvariantKind::Chern;
    r.resolution = mesh.resolution;
    // Plaquette phase is -Arg tr(...).
    r.raw = -pairwise_sum(args) / kTwoPi;
    r.value = std::nearbyint(r.raw) + 0.0;
    r.residual = std::abs(r.raw - r.value);
    r.max_plaquette_phase = max_abs(args);
    r.admissible = r.max_plaquette_phase < kAdmissiblePhase;
    r.wall_time = seconds_since(t0);
    return r;
}

InvariantReport berry_phase(const SymbolField& f, int band, const LoopPath& loop)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (!loop.is_valid()) throw InvalidParameter("invalid loop: " + loop.label);
    const auto m = static_cast<std::size_t>(f.m());
    const auto vecs = band_vectors(f, band, loop.vertices);
    const auto n = static_cast<std::uint32_t>(loop.vertices.size());

    // Running product, renormalized so long loops neither underflow nor overflow.
    cd z = 1.0;
    for (std::uint32_t k = 0; k < n; ++k) {
        z *= checked_overlap(vecs, m, k, (k + 1) % n, loop.label);
        z /= std::abs(z);
    }

    InvariantReport r;
    r.symbol_id = f.id();
    r.band = band;
    r.probe = loop.label;
    r.kind = InvariantKind::BerryPhase;
    r.resolution = static_cast<int>(n);
    r.value = principal(std::arg(z));
    r.raw = r.value;
    r.wall_time = seconds_since(t0);
    return r;
}

InvariantReport torsion_invariant(const SymbolField& f, int band, const TorsionChain& chain)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (f.geometry() != Geometry::S2) throw InvalidParameter("torsion invariant is defined on S2 only");
    if (!chain.is_valid()) throw InvalidParameter("invalid torsion chain");

    const InvariantReport loop = berry_phase(f, band, chain.gamma);
    const auto vecs = band_vectors(f, band, chain.sigma.vertices);
    const auto args = face_args(vecs, static_cast<std::size_t>(f.m()), chain.sigma.quads, chain.sigma.label);

    InvariantReport r;
    r.symbol_id = f.id();
    r.band = band;
    r.probe = chain.gamma.label + "+" + chain.sigma.label;
    r.kind = InvariantKind::Torsion;
    r.resolution = chain.sigma.resolution;
    r.loop_phase = loop.value;
    r.flux = pairwise_sum(args);
    r.raw = (2.0 * r.loop_phase - r.flux) / kTwoPi;
    const double k = std::nearbyint(r.raw);
    r.residual = std::abs(r.raw - k);
    r.value = static_cast<double>(((std::llround(k) % 2) + 2) % 2);
    r.max_plaquette_phase = max_abs(args);
    r.admissible = r.max_plaquette_phase < kAdmissiblePhase;
    r.wall_time = seconds_since(t0);
    return r;
}

namespace {

template <typename Compute>
InvariantReport with_retry(int n, Compute&& compute, const std::string& what)
{
    double worst = 0.0;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const int k = n << attempt;
        try {
            InvariantReport r = compute(k);
            if (r.admissible) return r;
            worst = r.max_plaquette_phase;
        } catch (const InadmissiblePlaquette& e) {
            worst = e.residual();
        }
    }
    throw NumericalFailure(what + " stays inadmissible at n=" + std::to_string(n) + " and n=" + std::to_string(2 * n),
                           worst);
}

} // namespace

InvariantReport chern_number_adaptive(const SymbolField& f, int band, const MeshFamily& family, int n)
{
    return with_retry(n, [&](int k) { return chern_number(f, band, family(k)); }, "chern number of " + f.id());
}

InvariantReport torsion_invariant_adaptive(const SymbolField& f, int band, const ChainFamily& family, int n)
{
    return with_retry(n, [&](int k) { return torsion_invariant(f, band, family(k)); }, "torsion invariant of " + f.id());
}

Verdict local_obstruction(const SymbolField& f, const Vec4& x0, int band, int n)
{
    check_band(f, band);
    Verdict v;
    v.question = Question::Local;
    v.band = band;
    if (f.d() != 3) {
        v.theorem_branch = "d!=3";
        return v;
    }
    v.theorem_branch = "d=3 fiber degree";
    const Geometry g = f.geometry();
    v.evidence.push_back(chern_number_adaptive(f, band, [g, x0](int k) { return fiber_sphere_probe(g, x0, k); }, n));
    for (const auto& e : v.evidence) v.obstructed = v.obstructed || (e.trusted() && e.quantized() != 0);
    return v;
}

Verdict global_obstruction(const SymbolField& f, int band, int n)
{
    check_band(f, band);
    const Geometry g = f.geometry();
    Verdict v;
    v.question = Question::Global;
    v.band = band;
    switch (g) {
    case Geometry::S2: v.theorem_branch = "H2(S*S2)=Z/2 torsion chain"; break;
    case Geometry::T2: v.theorem_branch = "H2(S*T2)=Z^3 torus probes"; break;
    case Geometry::T3: v.theorem_branch = "H2(S*T3)=Z^4 fiber and torus probes"; break;
    case Geometry::S3: v.theorem_branch = "H2(S*S3)=Z fiber class"; break;
    }
    const ProbeSet ps = probe_set(g, n);
    for (std::size_t i = 0; i < ps.cycles.size(); ++i) {
        v.evidence.push_back(chern_number_adaptive(
            f, band,
            [&, i](int k) { return k == n ? ps.cycles[i] : probe_set(g, k).cycles[i]; }, n));
    }
    if (ps.torsion)
        v.evidence.push_back(torsion_invariant_adaptive(
            f, band, [&](int k) { return k == n ? *ps.torsion : *probe_set(g, k).torsion; }, n));
    for (const auto& e : v.evidence) v.obstructed = v.obstructed || (e.trusted() && e.quantized() != 0);
    return v;
}

} // namespace obstrukt
