#include "obstrukt/geometry.hpp"

#include "obstrukt/errors.hpp"

#include <numbers>
#include <span>

namespace obstrukt {

std::string_view geometry_name(Geometry g)
{
    switch (g) {
    case Geometry::S2: return "S2";
    case Geometry::T2: return "T2";
    case Geometry::T3: return "T3";
    case Geometry::S3: return "S3";
    }
    return "?";
}

Geometry parse_geometry(std::string_view name)
{
    if (name == "S2") return Geometry::S2;
    if (name == "T2") return Geometry::T2;
    if (name == "T3") return Geometry::T3;
    if (name == "S3") return Geometry::S3;
    throw InvalidParameter("unsupported geometry: " + std::string(name));
}

int base_dimension(Geometry g)
{
    switch (g) {
    case Geometry::S2:
    case Geometry::T2: return 2;
    case Geometry::T3:
    case Geometry::S3: return 3;
    }
    return 0;
}

int ambient_dimension(Geometry g)
{
    switch (g) {
    case Geometry::T2: return 2;
    case Geometry::S2:
    case Geometry::T3: return 3;
    case Geometry::S3: return 4;
    }
    return 0;
}

CovectorPoint CovectorPoint::make(Geometry g, std::span<const double> x, std::span<const double> xi)
{
    const auto n = static_cast<std::size_t>(ambient_dimension(g));
    if (x.size() != n || xi.size() != n)
        throw InvalidParameter("coordinate count does not match geometry " + std::string(geometry_name(g)));
    CovectorPoint p;
    p.geometry = g;
    for (std::size_t i = 0; i < n; ++i) {
        p.x[i] = x[i];
        p.xi[i] = xi[i];
    }
    return p;
}

double CovectorPoint::xi_norm() const { return std::sqrt(dot4(xi, xi)); }

CovectorPoint CovectorPoint::scaled(double lambda) const
{
    CovectorPoint p = *this;
    for (auto& c : p.xi) c *= lambda;
    return p;
}

CovectorPoint CovectorPoint::unit() const { return scaled(1.0 / xi_norm()); }

void check_point(const CovectorPoint& p, double tol)
{
    const double r = p.xi_norm();
    if (!(r > 1e-12)) throw ConstraintViolation("covector is zero");
    if (p.geometry == Geometry::S2 || p.geometry == Geometry::S3) {
        const double nx = std::sqrt(dot4(p.x, p.x));
        if (std::abs(nx - 1.0) > tol)
            throw ConstraintViolation("base point not on the unit sphere (|x| = " + std::to_string(nx) + ")");
        const double c = dot4(p.x, p.xi);
        if (std::abs(c) > tol * std::max(1.0, r))
            throw ConstraintViolation("covector not tangent (x.xi = " + std::to_string(c) + ")");
    }
}

bool is_valid_point(const CovectorPoint& p, double tol)
{
    try {
        check_point(p, tol);
        return true;
    } catch (const ConstraintViolation&) {
        return false;
    }
}

namespace {

Vec4 gaussian4(std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    return {g(rng), g(rng), g(rng), g(rng)};
}

} // namespace

CovectorPoint random_point(Geometry geom, std::mt19937_64& rng)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::uniform_real_distribution<double> u(0.0, two_pi);
    CovectorPoint p;
    p.geometry = geom;
    const int n = ambient_dimension(geom);
    if (geom == Geometry::T2 || geom == Geometry::T3) {
        for (int i = 0; i < n; ++i) p.x[i] = u(rng);
        Vec4 v = gaussian4(rng);
        for (int i = n; i < 4; ++i) v[i] = 0.0;
        const double r = std::sqrt(dot4(v, v));
        for (int i = 0; i < n; ++i) p.xi[i] = v[i] / r;
        return p;
    }
    Vec4 x = gaussian4(rng);
    Vec4 v = gaussian4(rng);
    for (int i = n; i < 4; ++i) x[i] = v[i] = 0.0;
    const double rx = std::sqrt(dot4(x, x));
    for (auto& c : x) c /= rx;
    const double c = dot4(x, v);
    for (int i = 0; i < 4; ++i) v[i] -= c * x[i];
    const double rv = std::sqrt(dot4(v, v));
    for (auto& c2 : v) c2 /= rv;
    p.x = x;
    p.xi = v;
    return p;
}

Quaternion qmul(const Quaternion& a, const Quaternion& b)
{
    return {
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    };
}

std::array<Vec3, 3> rotation_matrix(const Quaternion& q)
{
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    return {{
        {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
        {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
        {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)},
    }};
}

std::array<Vec4, 3> s3_frame(const Quaternion& q)
{
    return {qmul(q, {0, 1, 0, 0}), qmul(q, {0, 0, 1, 0}), qmul(q, {0, 0, 0, 1})};
}

} // namespace obstrukt
