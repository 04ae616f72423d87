#include "obstrukt/catalog.hpp"

#include "obstrukt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace obstrukt {

namespace {

constexpr cd I{0.0, 1.0};

Matrix pauli_combination(double a1, double a2, double a3)
{
    return Matrix(2, {cd(a3), cd(a1, -a2), cd(a1, a2), cd(-a3)});
}

void require_on_sphere(const CovectorPoint& p)
{
    const double nx = std::sqrt(dot4(p.x, p.x));
    if (std::abs(nx - 1.0) > 1e-10 || std::abs(dot4(p.x, p.xi)) > 1e-10 * std::max(1.0, p.xi_norm()))
        throw ConstraintViolation("point violates |x| = 1, x.xi = 0");
}

std::vector<BandExpectation> bands(std::initializer_list<const char*> labels, bool local, bool global)
{
    std::vector<BandExpectation> out;
    for (const char* l : labels) out.push_back({l, local, global});
    return out;
}

std::vector<double> plus_minus(double r) { return {-r, r}; }

} // namespace

const PauliBasis& PauliBasis::get()
{
    static const PauliBasis basis{
        {pauli_combination(1, 0, 0), pauli_combination(0, 1, 0), pauli_combination(0, 0, 1)},
        Matrix(2, {0.0, 1.0, -1.0, 0.0}),
    };
    return basis;
}

CatalogEntry dirac3_flat()
{
    SymbolEval eval = [](const CovectorPoint& p) {
        return HermitianMatrix::unchecked(pauli_combination(p.xi[0], p.xi[1], p.xi[2]));
    };
    return {
        SymbolField("dirac3-flat", Geometry::T3, 2, 1.0, std::move(eval)),
        bands({"-", "+"}, true, true),
        [](const CovectorPoint& p) { return plus_minus(p.xi_norm()); },
        "massless Dirac principal symbol, identity framing of the flat 3-torus",
    };
}

CatalogEntry dirac3_s3()
{
    SymbolEval eval = [](const CovectorPoint& p) {
        const auto e = s3_frame(p.x);
        return HermitianMatrix::unchecked(pauli_combination(dot4(e[0], p.xi), dot4(e[1], p.xi), dot4(e[2], p.xi)));
    };
    return {
        SymbolField("dirac3-s3", Geometry::S3, 2, 1.0, std::move(eval)),
        bands({"-", "+"}, true, true),
        [](const CovectorPoint& p) { return plus_minus(p.xi_norm()); },
        "massless Dirac principal symbol on the round 3-sphere, left-invariant quaternionic framing",
    };
}

CatalogEntry curl3_flat()
{
    SymbolEval eval = [](const CovectorPoint& p) {
        const double x = p.xi[0], y = p.xi[1], z = p.xi[2];
        // -i eps_{abc} xi_c
        return HermitianMatrix::unchecked(Matrix(3, {
                                                        0.0, -I * z, I * y,
                                                        I * z, 0.0, -I * x,
                                                        -I * y, I * x, 0.0,
                                                    }));
    };
    std::vector<BandExpectation> expected = {{"-", true, true}, {"0", false, false}, {"+", true, true}};
    return {
        SymbolField("curl3", Geometry::T3, 3, 1.0, std::move(eval)),
        std::move(expected),
        [](const CovectorPoint& p) { return std::vector<double>{-p.xi_norm(), 0.0, p.xi_norm()}; },
        "principal symbol of curl on the flat 3-torus (rho = 1, g = delta)",
    };
}

CatalogEntry dirac_s2()
{
    SymbolEval eval = [](const CovectorPoint& p) {
        require_on_sphere(p);
        return HermitianMatrix::unchecked(pauli_combination(p.xi[0], p.xi[1], p.xi[2]));
    };
    return {
        SymbolField("dirac-s2", Geometry::S2, 2, 1.0, std::move(eval)),
        bands({"-", "+"}, false, true),
        [](const CovectorPoint& p) { return plus_minus(p.xi_norm()); },
        "flat Dirac symbol restricted to the round 2-sphere in ambient coordinates",
    };
}

CatalogEntry artificial_s2(double c_plus, double c_minus, double s)
{
    if (c_plus == c_minus) throw InvalidParameter("artificial-s2 requires c_plus != c_minus");
    if (c_plus == 0.0 || c_minus == 0.0) throw InvalidParameter("artificial-s2 requires nonzero coefficients");
    if (!std::isfinite(c_plus) || !std::isfinite(c_minus) || !std::isfinite(s))
        throw InvalidParameter("artificial-s2 parameters must be finite");

    SymbolEval eval = [c_plus, c_minus, s](const CovectorPoint& p) {
        require_on_sphere(p);
        const Matrix xs = pauli_combination(p.x[0], p.x[1], p.x[2]);
        const Matrix id = Matrix::identity(2);
        const Matrix p_plus = 0.5 * (xs + id);
        const Matrix p_minus = -0.5 * (xs - id);
        const double scale = std::pow(p.xi_norm(), s);
        return HermitianMatrix::unchecked(scale * (c_plus * p_plus + c_minus * p_minus));
    };
    return {
        SymbolField("artificial-s2", Geometry::S2, 2, s, std::move(eval),
                    {{"c_plus", c_plus}, {"c_minus", c_minus}, {"s", s}}),
        bands({c_minus < c_plus ? "-" : "+", c_minus < c_plus ? "+" : "-"}, false, true),
        [c_plus, c_minus, s](const CovectorPoint& p) {
            const double r = std::pow(p.xi_norm(), s);
            std::vector<double> v{c_plus * r, c_minus * r};
            std::sort(v.begin(), v.end());
            return v;
        },
        "projections onto the position line, weighted by c+ and c-",
    };
}

CatalogEntry elasticity_t2(LameParams lame, double amplitude, int framing_twist)
{
    if (!(lame.mu > 0.0) || !(lame.lambda + lame.mu > 0.0))
        throw InvalidParameter("elasticity-t2 requires strong convexity: mu > 0 and lambda + mu > 0");
    if (!(std::abs(amplitude) < 0.5)) throw InvalidParameter("elasticity-t2 requires |conformal| < 0.5");

    const double lambda = lame.lambda, mu = lame.mu;
    auto conformal_factor = [amplitude](const CovectorPoint& p) {
        return amplitude * (std::cos(p.x[0]) + std::cos(p.x[1]));
    };
    SymbolEval eval = [=](const CovectorPoint& p) {
        const double phi = conformal_factor(p);
        const double psi = framing_twist * p.x[0];
        const double c = std::cos(psi), s = std::sin(psi);
        // frame e_j = e^{-phi} R(psi) delta_j; components e_j^a xi_a
        const double f1 = std::exp(-phi) * (c * p.xi[0] + s * p.xi[1]);
        const double f2 = std::exp(-phi) * (-s * p.xi[0] + c * p.xi[1]);
        const double h2 = f1 * f1 + f2 * f2; // g^{ab} xi_a xi_b
        // mu h^2 I + (lambda + mu) h^2 q q^T with h q = (f1, f2)
        const double k = lambda + mu;
        return HermitianMatrix::unchecked(Matrix(2, {
                                                        mu * h2 + k * f1 * f1, k * f1 * f2,
                                                        k * f1 * f2, mu * h2 + k * f2 * f2,
                                                    }));
    };
    return {
        SymbolField("elasticity-t2", Geometry::T2, 2, 2.0, std::move(eval),
                    {{"lambda", lambda}, {"mu", mu}, {"conformal", amplitude},
                     {"framing_twist", static_cast<double>(framing_twist)}}),
        bands({"1", "2"}, false, false),
        [=](const CovectorPoint& p) {
            const double h2 = std::exp(-2.0 * conformal_factor(p)) * (p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1]);
            return std::vector<double>{mu * h2, (lambda + 2.0 * mu) * h2};
        },
        "linear elasticity on T^2 with conformally flat metric, framing e_j = e^{-phi} delta_j",
    };
}

CatalogEntry np_sphere(LameParams lame, double radius)
{
    if (!(lame.mu > 0.0) || !(lame.lambda + 2.0 * lame.mu / 3.0 > 0.0))
        throw InvalidParameter("np-sphere requires mu > 0 and lambda + 2 mu / 3 > 0");
    if (!(radius > 0.0)) throw InvalidParameter("np-sphere requires radius > 0");

    const double c = lame.mu / (2.0 * (lame.lambda + 2.0 * lame.mu));
    SymbolEval eval = [c, radius](const CovectorPoint& p) {
        Vec3 n = {radius * p.x[0], radius * p.x[1], radius * p.x[2]};
        const double rn = norm3(n);
        for (double& v : n) v /= rn;
        const double r = p.xi_norm();
        const Vec3 t = {p.xi[0] / r, p.xi[1] / r, p.xi[2] / r};
        // -i c (n t^T - t n^T)
        Matrix a(3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                a(i, j) = -I * c * (n[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)] -
                                    t[static_cast<std::size_t>(i)] * n[static_cast<std::size_t>(j)]);
        return HermitianMatrix::unchecked(std::move(a));
    };
    return {
        SymbolField("np-sphere", Geometry::S2, 3, 0.0, std::move(eval),
                    {{"lambda", lame.lambda}, {"mu", lame.mu}, {"radius", radius}}),
        {{"-", false, false}, {"0", false, false}, {"+", false, false}},
        [c](const CovectorPoint&) { return std::vector<double>{-c, 0.0, c}; },
        "Neumann-Poincare principal symbol on a sphere, ambient (tangent + normal) form",
    };
}

const std::vector<std::string>& catalog_ids()
{
    static const std::vector<std::string> ids = {"dirac3-flat", "dirac3-s3", "curl3", "dirac-s2",
                                                 "artificial-s2", "elasticity-t2", "np-sphere"};
    return ids;
}

std::vector<std::string> entry_parameter_keys(const std::string& id)
{
    if (id == "artificial-s2") return {"c_minus", "c_plus", "s"};
    if (id == "elasticity-t2") return {"conformal", "framing_twist", "lambda", "mu"};
    if (id == "np-sphere") return {"lambda", "mu", "radius"};
    if (std::find(catalog_ids().begin(), catalog_ids().end(), id) != catalog_ids().end()) return {};
    throw InvalidParameter("unknown catalog id: " + id);
}

CatalogEntry make_entry(const std::string& id, const std::map<std::string, double>& params)
{
    const auto keys = entry_parameter_keys(id);
    for (const auto& [k, v] : params) {
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw InvalidParameter("parameter '" + k + "' does not apply to " + id);
        if (!std::isfinite(v)) throw InvalidParameter("parameter '" + k + "' must be finite");
    }
    auto get = [&](const char* k, double def) {
        auto it = params.find(k);
        return it == params.end() ? def : it->second;
    };
    if (id == "dirac3-flat") return dirac3_flat();
    if (id == "dirac3-s3") return dirac3_s3();
    if (id == "curl3") return curl3_flat();
    if (id == "dirac-s2") return dirac_s2();
    if (id == "artificial-s2") return artificial_s2(get("c_plus", 2.0), get("c_minus", -1.0), get("s", 0.0));
    if (id == "elasticity-t2") {
        const double twist = get("framing_twist", 0.0);
        if (twist != std::round(twist)) throw InvalidParameter("framing_twist must be an integer");
        return elasticity_t2({get("lambda", 1.0), get("mu", 1.0)}, get("conformal", 0.0), static_cast<int>(twist));
    }
    if (id == "np-sphere") return np_sphere({get("lambda", 1.0), get("mu", 1.0)}, get("radius", 1.0));
    throw InvalidParameter("unknown catalog id: " + id);
}

std::vector<CatalogEntry> default_catalog()
{
    std::vector<CatalogEntry> out;
    for (const auto& id : catalog_ids()) out.push_back(make_entry(id));
    return out;
}

std::vector<double> analytic_eigenvalues(const CatalogEntry& entry, const CovectorPoint& p)
{
    return entry.analytic(p);
}

Vec4 registered_base_position(Geometry g)
{
    switch (g) {
    case Geometry::T3: return {0.1, 0.2, 0.3, 0.0};
    case Geometry::S3: return {1.0, 0.0, 0.0, 0.0};
    case Geometry::S2: return {0.0, 0.0, 1.0, 0.0};
    case Geometry::T2: return {0.1, 0.2, 0.0, 0.0};
    }
    return {};
}

} // namespace obstrukt
