#include "lindspect/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include "lindspect/errors.hpp"

namespace lindspect {

LindbladModel::LindbladModel(CMatrix hamiltonian, std::vector<JumpChannel> channels)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
    const Eigen::Index d = hamiltonian_.rows();
    if (d == 0 || hamiltonian_.cols() != d) {
        throw std::invalid_argument("LindbladModel: Hamiltonian must be square and non-empty");
    }
    if (!hamiltonian_.allFinite()) {
        throw std::invalid_argument("LindbladModel: Hamiltonian has non-finite entries");
    }
    const double herm_dev = (hamiltonian_ - hamiltonian_.adjoint()).norm();
    if (herm_dev > 1e-10 * hamiltonian_.norm()) {
        throw std::invalid_argument("LindbladModel: Hamiltonian is not Hermitian (deviation " +
                                    std::to_string(herm_dev) + ")");
    }
    for (std::size_t i = 0; i < channels_.size(); ++i) {
        const JumpChannel& ch = channels_[i];
        if (ch.op.rows() != d || ch.op.cols() != d) {
            throw std::invalid_argument("LindbladModel: channel " + std::to_string(i) +
                                        " has wrong dimensions");
        }
        if (!ch.op.allFinite() || !std::isfinite(ch.rate)) {
            throw std::invalid_argument("LindbladModel: channel " + std::to_string(i) +
                                        " has non-finite entries");
        }
        if (ch.rate < 0.0) {
            throw std::invalid_argument("LindbladModel: channel " + std::to_string(i) +
                                        " has negative rate");
        }
    }
}

CMatrix dissipator(const CMatrix& jump_op, const CMatrix& rho) {
    if (jump_op.rows() != jump_op.cols() || jump_op.rows() != rho.rows() ||
        rho.rows() != rho.cols()) {
        throw std::invalid_argument("dissipator: dimension mismatch");
    }
    const CMatrix ldl = jump_op.adjoint() * jump_op;
    return jump_op * rho * jump_op.adjoint() - 0.5 * (ldl * rho + rho * ldl);
}

CMatrix master_rhs(const LindbladModel& model, const CMatrix& rho) {
    if (rho.rows() != model.dim() || rho.cols() != model.dim()) {
        throw std::invalid_argument("master_rhs: state dimension mismatch");
    }
    const CMatrix& h = model.hamiltonian();
    CMatrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
    for (const JumpChannel& ch : model.channels()) {
        out += ch.rate * dissipator(ch.op, rho);
    }
    return out;
}

DensityMatrix DensityMatrix::validated(const CMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument("DensityMatrix: non-finite entries");
    }
    if ((m - m.adjoint()).norm() > tol) {
        throw std::invalid_argument("DensityMatrix: not Hermitian at tolerance " +
                                    std::to_string(tol));
    }
    CMatrix sym = (m + m.adjoint()) / 2.0;

    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > tol) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }

    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.eigenvalues().minCoeff() < -tol) {
        throw std::invalid_argument("DensityMatrix: eigenvalue " +
                                    std::to_string(solver.eigenvalues().minCoeff()) +
                                    " below -tol");
    }
    if (solver.eigenvalues().minCoeff() < 0.0) {
        Eigen::VectorXd evals = solver.eigenvalues().cwiseMax(0.0);
        sym = solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().adjoint();
    }
    sym /= sym.trace().real();
    return DensityMatrix(std::move(sym));
}

DensityMatrix DensityMatrix::pure(const CVector& state) {
    const double norm = state.norm();
    if (state.size() == 0 || norm == 0.0) {
        throw std::invalid_argument("DensityMatrix::pure: zero state");
    }
    const CVector s = state / norm;
    return DensityMatrix(s * s.adjoint());
}

double fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    const CMatrix root = sqrt_psd(rho1.matrix(), 1e-6);
    CMatrix inner = root * rho2.matrix() * root;
    inner = (inner + inner.adjoint()) / 2.0;  // clean up roundoff before the second root

    // inner is PSD in exact arithmetic, but when the two states have nearly
    // orthogonal supports it is roundoff through and through and a relative
    // eigenvalue cut would reject it. Both states have unit trace, so judge
    // negatives on an absolute scale and clamp whatever passes.
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(inner);
    if (solver.info() != Eigen::Success) {
        throw NonConvergenceError("fidelity: eigendecomposition did not converge");
    }
    double f = 0.0;
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        const double ev = solver.eigenvalues()(k);
        if (ev < -1e-6) {
            throw NotPsdError("fidelity: eigenvalue " + std::to_string(ev) +
                              " in the product state");
        }
        // the square root turns eigenvalue noise of 1e-16 into 1e-8, so drop
        // anything below the resolution of the inputs before taking it
        if (ev > 1e-15) f += std::sqrt(ev);
    }
    return std::clamp(f * f, 0.0, 1.0);
}

}  // namespace lindspect
