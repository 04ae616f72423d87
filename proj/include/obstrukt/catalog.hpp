#pragma once

#include "obstrukt/symbol.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace obstrukt {

// Standard Pauli matrices and the antisymmetric "metric" spinor.
struct PauliBasis {
    std::array<Matrix, 3> s;
    Matrix eps;

    static const PauliBasis& get();
};

struct LameParams {
    double lambda = 1.0;
    double mu = 1.0;
};

struct BandExpectation {
    std::string label; // "-", "0", "+"
    bool local_obstructed = false;
    bool global_obstructed = false;
};

using EigenvalueOracle = std::function<std::vector<double>(const CovectorPoint&)>;

struct CatalogEntry {
    SymbolField symbol;
    std::vector<BandExpectation> expected; // indexed by ascending band
    EigenvalueOracle analytic;
    std::string notes;
};

// dirac3-flat: s^a xi_a on the flat 3-torus.
CatalogEntry dirac3_flat();
// dirac3-s3: Pauli matrices paired with the left-invariant frame of S^3.
CatalogEntry dirac3_s3();
// curl3: -i eps_{abc} xi_c on the flat 3-torus.
CatalogEntry curl3_flat();
// dirac-s2: restriction of the flat Dirac symbol to the round 2-sphere.
CatalogEntry dirac_s2();
// artificial-s2: |xi|^s (c+ P+(x) + c- P-(x)), projections depending on position only.
CatalogEntry artificial_s2(double c_plus = 2.0, double c_minus = -1.0, double s = 0.0);
// elasticity-t2 on T^2 with metric e^{2 phi} delta, phi = a (cos x1 + cos x2).
// framing_twist rotates the orthonormal frame by framing_twist * x1.
CatalogEntry elasticity_t2(LameParams lame = {}, double conformal_amplitude = 0.0, int framing_twist = 0);
// np-sphere: principal symbol of the elastic Neumann-Poincare operator on a
// sphere of the given radius, in ambient C^3 form.
CatalogEntry np_sphere(LameParams lame = {}, double radius = 1.0);

// Ids in registration order.
const std::vector<std::string>& catalog_ids();

// Builds an entry by id; params may contain lambda, mu, c_plus, c_minus, s,
// conformal, radius. Unknown or inapplicable keys throw InvalidParameter.
CatalogEntry make_entry(const std::string& id, const std::map<std::string, double>& params = {});

std::vector<CatalogEntry> default_catalog();

std::vector<double> analytic_eigenvalues(const CatalogEntry& entry, const CovectorPoint& p);

// Registered base position used for local (fiberwise) questions:
// (0.1, 0.2, 0.3) on T^3, the identity quaternion on S^3, the north pole on S^2,
// (0.1, 0.2) on T^2.
Vec4 registered_base_position(Geometry g);

// Parameter keys make_entry accepts for an id.
std::vector<std::string> entry_parameter_keys(const std::string& id);

} // namespace obstrukt
