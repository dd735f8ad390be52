#pragma once

#include <vector>

#include "lindspect/matrix_kernel.hpp"

namespace lindspect {

struct JumpChannel {
    CMatrix op;
    double rate = 1.0;  // nonnegative; applied in master_rhs, not in dissipator()
};

// Time-independent master-equation model: a Hermitian Hamiltonian plus jump
// channels, all on the same finite-dimensional space. Validated on
// construction (Hermiticity within 1e-10 * ||H||, square operators,
// nonnegative rates).
class LindbladModel {
  public:
    LindbladModel(CMatrix hamiltonian, std::vector<JumpChannel> channels);

    const CMatrix& hamiltonian() const { return hamiltonian_; }
    const std::vector<JumpChannel>& channels() const { return channels_; }
    Eigen::Index dim() const { return hamiltonian_.rows(); }

  private:
    CMatrix hamiltonian_;
    std::vector<JumpChannel> channels_;
};

// D[rho] = L rho L^+ - 1/2 {L^+ L, rho} for a single channel, rate excluded.
CMatrix dissipator(const CMatrix& jump_op, const CMatrix& rho);

// d rho / dt = -i [H, rho] + sum_i rate_i D_i[rho].
CMatrix master_rhs(const LindbladModel& model, const CMatrix& rho);

// A validated state: Hermitian within tol, unit trace within tol, eigenvalues
// >= -tol. Eigenvalues in [-tol, 0) are clamped to zero and the trace
// renormalized; larger violations throw std::invalid_argument.
class DensityMatrix {
  public:
    static DensityMatrix validated(const CMatrix& m, double tol = 1e-8);
    static DensityMatrix pure(const CVector& state);

    const CMatrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

  private:
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

// Uhlmann fidelity F = (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2, clipped to [0, 1].
double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

}  // namespace lindspect
