#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lindspect/spectral.hpp"

namespace lindspect {

// Unitary change of basis splitting the space into blocks of sizes (n, n, m):
// the first n columns span block a, the next n span block b, the remaining m
// span the residual block.
struct BlockPartition {
    CMatrix basis;
    Eigen::Index n = 0;
    Eigen::Index m = 0;
};

struct StructureReport {
    bool structured = false;
    // set when !structured: -1 for the Hamiltonian, channel index otherwise
    std::optional<int> offending_operator;
    std::vector<CMatrix> xi;        // common n x n jump block per channel
    std::vector<CMatrix> m_blocks;  // residual m x m jump block per channel
    CMatrix h_a, h_b, h_res;
    CMatrix delta_h;  // h_a - h_b
    double max_offblock_residual = 0.0;  // relative to each operator's max |entry|
    double max_xi_mismatch = 0.0;        // block-a vs block-b jump discrepancy
    double tol = 0.0;
    BlockPartition partition;
};

// Checks that H and every jump operator are block-diagonal in the partition
// basis and that the two leading jump blocks coincide. Never throws on a
// structure violation; the report carries the verdict and residuals.
StructureReport verify_block_form(const LindbladModel& model, const BlockPartition& partition,
                                  double tol = 1e-8);

struct DfsSubspace {
    CMatrix basis;            // d x k, orthonormal columns
    std::vector<Complex> xi;  // scalar action of each channel on the subspace
    CMatrix h_restricted;     // k x k Hermitian restriction of H
};

struct DfsResult {
    std::vector<DfsSubspace> subspaces;
};

// Maximal subspaces on which every jump acts as a scalar and every dissipator
// vanishes, refined last by H-invariance. Candidates are enumerated channel
// by channel in input order, eigenvalues ascending by (Re, Im).
DfsResult find_dfs(const LindbladModel& model, double tol = 1e-8);

struct EigenModePair {
    Complex value;
    CMatrix mode;
};

// Modes |u><v| over H-eigenvectors of each subspace, value -i(lambda_u - lambda_v).
std::vector<EigenModePair> dfs_modes(const DfsResult& dfs, const LindbladModel& model);

enum class DeltaCondition { Strong, Weak, None };

std::string to_string(DeltaCondition c);

struct RStarSolution {
    CMatrix r_star;  // Hermitian, unit trace, PSD
    std::optional<double> omega;
    DeltaCondition condition = DeltaCondition::None;
    double sharp_residual = 0.0;
    int null_multiplicity = 0;
};

// Steady state of the reduced block dynamics (Hamiltonian h_a, jumps xi_i with
// the given rates), plus the strong/weak classification of delta_h against it.
RStarSolution solve_rstar(const StructureReport& report, const std::vector<double>& rates,
                          double tol = 1e-9);

// delta_h = omega * I within tol? Returns omega (possibly zero) when it is.
std::optional<double> check_strong(const CMatrix& delta_h, double tol = 1e-9);

// delta_h r = omega r for a real nonzero omega? Returns omega when it is.
std::optional<double> check_weak(const CMatrix& delta_h, const CMatrix& r_star, double tol = 1e-9);

// Embeds r_star into the full space per the partition: an oscillatory pair at
// +-i omega (when a condition holds) plus the steady diagonal embeddings,
// rotated back to the original basis and residual-verified against the model.
std::vector<EigenModePair> construct_modes(const LindbladModel& model,
                                           const BlockPartition& partition,
                                           const RStarSolution& solution, double tol = 1e-8);

// || sum_i rate_i D_i[mode] ||_F: how hard the dissipators work on a mode.
double dissipator_residual(const LindbladModel& model, const CMatrix& mode);

// Searches for a verifying partition by eigendecomposing random Hermitian
// elements of the commutant of {H, L_i, L_i^+} and pairing equal-dimension
// eigenspaces. Deterministic for a fixed seed.
std::optional<BlockPartition> discover_partition(const LindbladModel& model, int trials = 20,
                                                 double tol = 1e-8, std::uint64_t seed = 1);

}  // namespace lindspect
