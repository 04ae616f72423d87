#pragma once

#include "obstrukt/probes.hpp"
#include "obstrukt/symbol.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace obstrukt {

enum class InvariantKind { Chern, BerryPhase, Torsion };
std::string_view kind_name(InvariantKind k);

inline constexpr double kAdmissiblePhase = 0.9 * 3.14159265358979323846;
inline constexpr double kMinOverlap = 1e-8;
inline constexpr double kTrustResidual = 0.05;

struct InvariantReport {
    std::string symbol_id;
    int band = 0;
    std::string probe;
    InvariantKind kind = InvariantKind::Chern;
    double value = 0.0;    // integer for chern, bit for torsion, phase in (-pi, pi] otherwise
    double raw = 0.0;      // unrounded quantity
    double residual = 0.0; // |raw - value| before the mod-2 reduction
    double max_plaquette_phase = 0.0;
    int resolution = 0;
    double wall_time = 0.0;
    bool admissible = true;
    // Torsion only: Berry phase of the loop and the summed curvature of the disc,
    // F = sum of Arg tr(face) = -(sum of plaquette phases).
    double loop_phase = 0.0;
    double flux = 0.0;

    bool trusted() const { return admissible && residual < kTrustResidual; }
    long quantized() const;
};

enum class Question { Local, Global };
std::string_view question_name(Question q);

struct Verdict {
    Question question = Question::Local;
    int band = 0;
    bool obstructed = false;
    std::vector<InvariantReport> evidence;
    std::string theorem_branch;
};

// -Arg tr(P1 P2 P3 P4). Throws InadmissiblePlaquette if |tr(Pi Pi+1)| < 1e-8
// for some cyclically consecutive pair.
double plaquette_phase(const HermitianMatrix& p1, const HermitianMatrix& p2, const HermitianMatrix& p3,
                       const HermitianMatrix& p4);

// Unit eigenvectors of one band at every vertex, row-major (vertex, component).
// Vertices are processed in parallel; the result does not depend on the thread count.
std::vector<cd> band_vectors(const SymbolField& f, int band, const std::vector<CovectorPoint>& vertices);

// Lattice Chern number over a closed mesh. Plaquettes with a phase beyond
// 0.9 pi mark the report inadmissible; near-orthogonal neighbors throw.
InvariantReport chern_number(const SymbolField& f, int band, const QuadCycleMesh& mesh);

// Arg tr(P0 P1 ... P_{N-1}) around a closed loop.
InvariantReport berry_phase(const SymbolField& f, int band, const LoopPath& loop);

// nu = round((2 phi(gamma) - F_sigma) / 2 pi) mod 2.
InvariantReport torsion_invariant(const SymbolField& f, int band, const TorsionChain& chain);

// Resolution-parametrized probes. The adaptive variants retry once at 2n when
// the first attempt is inadmissible, then throw NumericalFailure.
using MeshFamily = std::function<QuadCycleMesh(int)>;
using ChainFamily = std::function<TorsionChain(int)>;
InvariantReport chern_number_adaptive(const SymbolField& f, int band, const MeshFamily& family, int n);
InvariantReport torsion_invariant_adaptive(const SymbolField& f, int band, const ChainFamily& family, int n);

Verdict local_obstruction(const SymbolField& f, const Vec4& x0, int band, int n);
Verdict global_obstruction(const SymbolField& f, int band, int n);

} // namespace obstrukt
