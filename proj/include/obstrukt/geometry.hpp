#pragma once

#include <array>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace obstrukt {

// Supported base manifolds. Positions and covectors use ambient coordinates for
// spheres and periodic chart coordinates for tori.
enum class Geometry { S2, T2, T3, S3 };

std::string_view geometry_name(Geometry g);
Geometry parse_geometry(std::string_view name);

// Base dimension d.
int base_dimension(Geometry g);
// Number of stored coordinates for x and xi (3 for S2, 4 for S3, d for tori).
int ambient_dimension(Geometry g);

using Vec4 = std::array<double, 4>;
using Vec3 = std::array<double, 3>;

// A point (x, xi) of the punctured cotangent bundle. Unused trailing
// coordinates are zero.
struct CovectorPoint {
    Geometry geometry = Geometry::T3;
    Vec4 x{};
    Vec4 xi{};

    static CovectorPoint make(Geometry g, std::span<const double> x, std::span<const double> xi);

    double xi_norm() const;
    // Same base point, covector scaled by lambda.
    CovectorPoint scaled(double lambda) const;
    // Same base point, covector normalized to unit Euclidean length.
    CovectorPoint unit() const;

    friend bool operator==(const CovectorPoint&, const CovectorPoint&) = default;
};

// Throws ConstraintViolation if p is off its geometry's constraint set
// (xi == 0, |x| != 1 or x.xi != 0 on spheres).
void check_point(const CovectorPoint& p, double tol = 1e-12);
bool is_valid_point(const CovectorPoint& p, double tol = 1e-12);

// Pseudo-random unit covector point on the given geometry.
CovectorPoint random_point(Geometry g, std::mt19937_64& rng);

// --- small vector helpers -------------------------------------------------

inline double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross3(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
inline Vec3 head3(const Vec4& a) { return {a[0], a[1], a[2]}; }
inline Vec4 pad4(const Vec3& a) { return {a[0], a[1], a[2], 0.0}; }
inline double dot4(const Vec4& a, const Vec4& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]; }

// --- quaternions ------------------------------------------------------------
// Stored as (w, x, y, z) = w + x i + y j + z k.

using Quaternion = Vec4;

Quaternion qmul(const Quaternion& a, const Quaternion& b);
// Rotation matrix of a unit quaternion, row-major.
std::array<Vec3, 3> rotation_matrix(const Quaternion& q);
// Left-invariant orthonormal frame of S^3 at q: q*i, q*j, q*k in ambient R^4.
std::array<Vec4, 3> s3_frame(const Quaternion& q);

} // namespace obstrukt
