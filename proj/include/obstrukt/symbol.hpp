#pragma once

#include "obstrukt/geometry.hpp"
#include "obstrukt/hermitian.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace obstrukt {

using SymbolEval = std::function<HermitianMatrix(const CovectorPoint&)>;

// A Hermitian matrix-valued function on the punctured cotangent bundle of a
// geometry, positively homogeneous of degree s in the covector.
// The evaluator must be pure and safe to call concurrently.
class SymbolField {
public:
    SymbolField(std::string id, Geometry geometry, int m, double s, SymbolEval eval,
                std::map<std::string, double> params = {});

    const std::string& id() const noexcept { return id_; }
    Geometry geometry() const noexcept { return geometry_; }
    int d() const noexcept { return base_dimension(geometry_); }
    int m() const noexcept { return m_; }
    double s() const noexcept { return s_; }
    const std::map<std::string, double>& params() const noexcept { return *params_; }

    HermitianMatrix operator()(const CovectorPoint& p) const { return (*eval_)(p); }

    // U A U* for a fixed unitary U.
    SymbolField conjugated(const Matrix& u, std::string id_suffix = "+conj") const;

private:
    std::string id_;
    Geometry geometry_;
    int m_;
    double s_;
    std::shared_ptr<const SymbolEval> eval_;
    std::shared_ptr<const std::map<std::string, double>> params_;
};

inline constexpr double kDefaultGapTol = 1e-8;
inline constexpr double kEighTol = 1e-12;

struct SpectralPoint {
    std::vector<double> eigenvalues;         // ascending
    std::vector<HermitianMatrix> projections; // rank one, one per eigenvalue
    std::vector<std::vector<cd>> vectors;     // unit eigenvectors, arbitrary phase
    double min_rel_gap = 0.0;
};

// Smallest consecutive eigenvalue gap over the spectral radius (or over 1 when
// the radius is below 1e-14).
double min_relative_gap(const std::vector<double>& ascending);

// Throws DegenerateSpectrum when the relative gap falls below gap_tol.
SpectralPoint spectral_decompose(const SymbolField& f, const CovectorPoint& p, double gap_tol = kDefaultGapTol);
SpectralPoint spectral_decompose(const HermitianMatrix& a, double gap_tol = kDefaultGapTol);

struct ValidationReport {
    std::string symbol_id;
    std::size_t samples = 0;
    double max_hermitian_defect = 0.0;
    double max_homogeneity_defect = 0.0;
    double min_rel_gap = 0.0;
    double tol = 0.0;
    double gap_tol = kDefaultGapTol;
    bool passed = false;
    std::vector<std::string> failures;
};

inline constexpr std::array<double, 3> kHomogeneityScales = {0.5, 2.0, 7.3};

// Hermiticity, degree-s homogeneity and simple spectrum on the given samples.
// Never throws for symbol defects; they are recorded in the report.
ValidationReport validate_assumptions(const SymbolField& f, const std::vector<CovectorPoint>& samples,
                                      double tol = 1e-10, double gap_tol = kDefaultGapTol);

// Vertices of the geometry's probe meshes (subsampled) plus `random_count`
// seeded random points.
std::vector<CovectorPoint> validation_samples(Geometry g, std::uint64_t seed, std::size_t random_count = 200);

} // namespace obstrukt
