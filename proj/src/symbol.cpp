#include "obstrukt/symbol.hpp"

#include "obstrukt/errors.hpp"
#include "obstrukt/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace obstrukt {

SymbolField::SymbolField(std::string id, Geometry geometry, int m, double s, SymbolEval eval,
                         std::map<std::string, double> params)
    : id_(std::move(id)), geometry_(geometry), m_(m), s_(s),
      eval_(std::make_shared<const SymbolEval>(std::move(eval))),
      params_(std::make_shared<const std::map<std::string, double>>(std::move(params)))
{
    if (m_ < 2 || m_ > kMaxMatrixDim) throw InvalidParameter("symbol dimension must lie in [2, 8]");
}

SymbolField SymbolField::conjugated(const Matrix& u, std::string id_suffix) const
{
    if (u.dim() != m_) throw InvalidParameter("conjugating unitary has wrong dimension");
    auto inner_eval = eval_;
    const Matrix ua = u.adjoint();
    SymbolEval e = [inner_eval, u, ua](const CovectorPoint& p) {
        return HermitianMatrix::unchecked(u * (*inner_eval)(p) * ua);
    };
    return SymbolField(id_ + id_suffix, geometry_, m_, s_, std::move(e), *params_);
}

double min_relative_gap(const std::vector<double>& ascending)
{
    if (ascending.size() < 2) return std::numeric_limits<double>::infinity();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < ascending.size(); ++j) gap = std::min(gap, ascending[j] - ascending[j - 1]);
    const double radius = std::max(std::abs(ascending.front()), std::abs(ascending.back()));
    return radius < 1e-14 ? gap : gap / radius;
}

SpectralPoint spectral_decompose(const HermitianMatrix& a, double gap_tol)
{
    EigenDecomposition e = eigh(a, kEighTol);
    SpectralPoint sp;
    sp.min_rel_gap = min_relative_gap(e.values);
    if (sp.min_rel_gap < gap_tol) {
        std::ostringstream os;
        os << "eigenvalues are not simple: min relative gap " << sp.min_rel_gap << " < " << gap_tol;
        throw DegenerateSpectrum(os.str(), sp.min_rel_gap);
    }
    const int m = a.dim();
    sp.eigenvalues = e.values;
    sp.projections.reserve(static_cast<std::size_t>(m));
    sp.vectors.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        sp.vectors.push_back(e.vector(j));
        sp.projections.push_back(rank_one_projection(sp.vectors.back()));
    }
    return sp;
}

SpectralPoint spectral_decompose(const SymbolField& f, const CovectorPoint& p, double gap_tol)
{
    check_point(p, 1e-10);
    return spectral_decompose(f(p), gap_tol);
}

ValidationReport validate_assumptions(const SymbolField& f, const std::vector<CovectorPoint>& samples, double tol,
                                      double gap_tol)
{
    ValidationReport r;
    r.symbol_id = f.id();
    r.samples = samples.size();
    r.tol = tol;
    r.gap_tol = gap_tol;
    r.min_rel_gap = std::numeric_limits<double>::infinity();

    for (const CovectorPoint& p : samples) {
        HermitianMatrix a;
        try {
            a = f(p);
        } catch (const Error& ex) {
            r.failures.push_back(std::string("evaluation failed: ") + ex.what());
            continue;
        }
        r.max_hermitian_defect = std::max(r.max_hermitian_defect, a.hermitian_defect());
        for (double lambda : kHomogeneityScales) {
            Matrix expected = std::pow(lambda, f.s()) * static_cast<const Matrix&>(a);
            const Matrix scaled = f(p.scaled(lambda));
            const double defect = (scaled - expected).frobenius_norm() / (1.0 + expected.frobenius_norm());
            r.max_homogeneity_defect = std::max(r.max_homogeneity_defect, defect);
        }
        try {
            const EigenDecomposition e = eigh(a, kEighTol);
            r.min_rel_gap = std::min(r.min_rel_gap, min_relative_gap(e.values));
        } catch (const NumericalFailure& ex) {
            r.failures.push_back(std::string("eigensolver: ") + ex.what());
        }
    }
    if (samples.size() < 100) r.failures.push_back("fewer than 100 sample points");
    if (!(r.max_hermitian_defect < tol)) r.failures.push_back("symbol is not Hermitian");
    if (!(r.max_homogeneity_defect < tol)) r.failures.push_back("symbol is not homogeneous of the declared degree");
    if (!(r.min_rel_gap > gap_tol)) r.failures.push_back("eigenvalues are not simple");
    r.passed = r.failures.empty();
    return r;
}

std::vector<CovectorPoint> validation_samples(Geometry g, std::uint64_t seed, std::size_t random_count)
{
    std::vector<CovectorPoint> out;
    const ProbeSet probes = probe_set(g, 8);
    std::vector<CovectorPoint> mesh_points;
    for (const QuadCycleMesh& c : probes.cycles)
        mesh_points.insert(mesh_points.end(), c.vertices.begin(), c.vertices.end());
    if (probes.torsion) {
        mesh_points.insert(mesh_points.end(), probes.torsion->sigma.vertices.begin(),
                           probes.torsion->sigma.vertices.end());
    }
    constexpr std::size_t kMeshSamples = 200;
    const std::size_t stride = std::max<std::size_t>(1, mesh_points.size() / kMeshSamples);
    for (std::size_t i = 0; i < mesh_points.size(); i += stride) out.push_back(mesh_points[i]);

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < random_count; ++i) out.push_back(random_point(g, rng));
    return out;
}

} // namespace obstrukt
