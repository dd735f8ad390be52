#include "lindspect/matrix_kernel.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "lindspect/errors.hpp"

namespace lindspect {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    return Eigen::kroneckerProduct(a, b);
}

EigenDecomposition eig_general(const CMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("eig_general: matrix must be square and non-empty");
    }
    Eigen::ComplexEigenSolver<CMatrix> solver(m, true);
    if (solver.info() != Eigen::Success) {
        throw NonConvergenceError("eig_general: Schur reduction did not converge");
    }

    const Eigen::Index n = m.rows();
    const CMatrix& vectors = solver.eigenvectors();
    const double scale = std::max(1.0, m.norm());

    EigenDecomposition out;
    out.pairs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        EigenPair pair{solver.eigenvalues()(k), vectors.col(k)};
        const double resid = (m * pair.vector - pair.value * pair.vector).norm();
        if (resid > tol * scale) {
            throw NonConvergenceError("eig_general: eigenpair residual " + std::to_string(resid) +
                                      " exceeds tolerance");
        }
        out.pairs.push_back(std::move(pair));
    }

    Eigen::BDCSVD<CMatrix> svd(vectors);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    out.possibly_defective = !(smin > 0.0) || sv(0) / smin > 1e8;
    return out;
}

CMatrix sqrt_psd(const CMatrix& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("sqrt_psd: matrix must be square and non-empty");
    }
    const double scale = m.norm();
    if ((m - m.adjoint()).norm() > tol * std::max(1.0, scale)) {
        throw std::invalid_argument("sqrt_psd: matrix is not Hermitian at this tolerance");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver((m + m.adjoint()) / 2.0);
    if (solver.info() != Eigen::Success) {
        throw NonConvergenceError("sqrt_psd: eigendecomposition did not converge");
    }
    Eigen::VectorXd evals = solver.eigenvalues();
    for (Eigen::Index k = 0; k < evals.size(); ++k) {
        if (evals(k) < -tol * scale) {
            throw NotPsdError("sqrt_psd: eigenvalue " + std::to_string(evals(k)) +
                              " below -tol * ||m||");
        }
        evals(k) = std::sqrt(std::max(evals(k), 0.0));
    }
    return solver.eigenvectors() * evals.asDiagonal() * solver.eigenvectors().adjoint();
}

std::vector<CVector> null_space(const CMatrix& m, double tol) {
    if (m.size() == 0) {
        throw std::invalid_argument("null_space: empty matrix");
    }
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = tol * sv(0);

    std::vector<CVector> basis;
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
        const double sigma = k < sv.size() ? sv(k) : 0.0;
        if (sigma <= cut) {
            basis.push_back(svd.matrixV().col(k));
        }
    }
    return basis;
}

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) {
        throw std::invalid_argument("unvec: size mismatch");
    }
    return Eigen::Map<const CMatrix>(v.data(), rows, cols);
}

}  // namespace lindspect
