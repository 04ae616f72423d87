#pragma once

#include "obstrukt/probes.hpp"
#include "obstrukt/symbol.hpp"

#include <optional>
#include <ostream>
#include <vector>

namespace obstrukt {

inline constexpr double kVortexThreshold = 0.3;

// Success bound on the largest edge defect |v_b - v_a|, 10 * 2 pi / n.
double defect_tol(int n);

// A face around which the gauge-fixed phases wind by a nonzero multiple of 2 pi.
struct GaugeCertificate {
    std::size_t face = 0;
    std::vector<std::uint32_t> cycle; // vertex indices, closed implicitly
    double holonomy_residual = 0.0;   // sum of edge phases minus Arg tr(face)
};

enum class GaugeStatus { Success, Failed };

struct GaugeField {
    const CosphereGraph* graph = nullptr;
    int band = 0;
    int m = 0;
    std::uint32_t root = 0;
    std::vector<cd> vectors; // row-major (vertex, component), unit norm
    double max_edge_defect = 0.0;
    double max_face_residual = 0.0;
    std::size_t vortex_faces = 0;
    std::size_t worst_face = 0;
    double worst_face_residual = 0.0;
    bool refined = false; // smoothest-section restart was needed
    double cg_relative_residual = 0.0;
    int cg_iterations = 0;
    GaugeStatus status = GaugeStatus::Failed;
    std::optional<GaugeCertificate> certificate;

    bool success() const { return status == GaugeStatus::Success; }
    std::span<const cd> vector(std::uint32_t v) const
    {
        return {vectors.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
    }
};

// Tree propagation from `root`, then a least-squares phase adjustment solved
// by conjugate gradients on the graph Laplacian. Success requires the defect
// bound and no face with |holonomy residual| above 0.3.
GaugeField spanning_tree_gauge(const SymbolField& f, int band, const CosphereGraph& graph, std::uint32_t root = 0);

struct CrossCheck {
    bool agree = false;
    bool gauge_success = false;
    bool globally_obstructed = false;
    double max_edge_defect = 0.0;
    double max_face_residual = 0.0;
};

CrossCheck cross_check_report(const SymbolField& f, int band, int n);
// True iff the gauge construction succeeds exactly when the global verdict is unobstructed.
bool cross_check(const SymbolField& f, int band, int n);

// Vertex coordinates followed by real and imaginary parts of each component.
void write_gauge_csv(std::ostream& os, const GaugeField& gauge);

} // namespace obstrukt
