#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lindspect/structure.hpp"

namespace lindspect::zoo {

using ParamMap = std::map<std::string, double>;

// Truncated oscillator H = nu * diag(0..d-1) with dephasing jump (N - 1)^2.
LindbladModel dephasing_oscillator(double nu, double gamma, int d);

// diag(G_0(x), ..., G_{d-1}(x)) from the three-term recurrence
// (k+1) G_{k+1} = (2k+1-x) G_k - k G_{k-1}, G_0 = 1, G_1 = 1 - x.
CMatrix laguerre_diagonal(double x, int d);

// Same oscillator with the polynomial diagonal jump instead of (N - 1)^2.
LindbladModel laguerre_dephasing(double nu, double x, double gamma, int d);

// Three qubits, H = chi Z1 Z2 Z3 + j12 Z1 Z2 + j23 Z2 Z3, jumps Z1 and Z3.
LindbladModel dephasing_chain(double chi, double j12, double j23, double g1, double g2);

// Open-boundary isotropic Heisenberg chain of three qubits with uniform
// fields and the collective lowering jump; ships the coupled basis splitting
// it into two doublets plus a quartet.
std::pair<LindbladModel, BlockPartition> xxx_collective(double j, double hx, double hy, double hz,
                                                        double gamma);

// Two qubits, H = e (3 Z1 + 6 X2 + Y2 + Z1 Y2), two jumps acting on qubit 2
// only; block-structured in the computational basis with sizes (2, 2, 0).
LindbladModel two_qubit_tunable(double e, double g1, double g2);

// Periodic anisotropic chain plus the tunable boundary term
// -(omega/4)(X1 X3 + Y1 Y3 + Z1 Z3); same jump and coupled basis as
// xxx_collective. delta_h = omega * I.
std::pair<LindbladModel, BlockPartition> xyz_periodic(double jx, double jy, double jz, double hx,
                                                      double hy, double hz, double omega,
                                                      double gamma = 1.0);

// Closed forms for the collective model: the reduced steady block R, and the
// block the bare dissipator leaves behind when hitting the oscillating mode,
// i.e. Xi R Xi^+ - {Xi^+ Xi, R}/2 with Xi = [[0,1],[0,0]].
CMatrix xxx_rstar_formula(double hx, double hy, double hz, double gamma);
CMatrix xxx_deviation_formula(double hx, double hy, double hz, double gamma);

// Named initial states used by the CLI.
DensityMatrix oscillator_revival_state(int d);   // (|0> + |2>)/sqrt(2), d >= 3
DensityMatrix oscillator_decaying_state(int d);  // (|0> + |1> + |2> + |3>)/2, d >= 4
DensityMatrix xxx_revival_state(double hx, double hy, double hz, double gamma);
DensityMatrix xxx_decaying_state();

struct ZooEntry {
    std::string name;
    std::vector<std::pair<std::string, double>> defaults;  // ordered parameter list
    LindbladModel (*build)(const ParamMap&);
    // known verifying partition, when the model ships one
    std::optional<BlockPartition> (*partition)(const ParamMap&);
};

const std::vector<ZooEntry>& registry();
const ZooEntry* find_entry(const std::string& name);

// Merges user parameters over the entry defaults; unknown names throw.
ParamMap resolve_params(const ZooEntry& entry, const ParamMap& overrides);

}  // namespace lindspect::zoo
