#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace lindspect {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct EigenPair {
    Complex value;
    CVector vector;  // unit 2-norm
};

struct EigenDecomposition {
    std::vector<EigenPair> pairs;
    // true when the eigenvector matrix is ill-conditioned enough (cond > 1e8)
    // that the input is likely defective and the basis should not be trusted
    bool possibly_defective = false;
};

// Kronecker product a (x) b.
CMatrix kron(const CMatrix& a, const CMatrix& b);

// Eigendecomposition of a general complex square matrix via complex Schur
// reduction. Eigenvectors are unit-norm; residuals ||m v - lambda v|| are
// checked against tol * max(1, ||m||_F).
EigenDecomposition eig_general(const CMatrix& m, double tol = 1e-9);

// Principal square root of a Hermitian PSD matrix. Eigenvalues in
// [-tol*||m||, 0) are clamped to zero; anything below that throws NotPsdError.
CMatrix sqrt_psd(const CMatrix& m, double tol = 1e-9);

// Orthonormal basis of {v : ||m v|| <= tol * sigma_max}, by singular-value
// thresholding. Empty result: m has full column rank at this tolerance.
std::vector<CVector> null_space(const CMatrix& m, double tol = 1e-9);

// Column-stacking vectorization, so vec(A X B) = (B^T (x) A) vec(X).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace lindspect
