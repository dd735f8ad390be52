#pragma once

#include <string>
#include <vector>

#include "lindspect/lindblad.hpp"

namespace lindspect {

enum class ModeClass { PersistentOscillatory, Steady, Underdamped, Overdamped };

std::string to_string(ModeClass c);

struct SpectralMode {
    Complex value;     // Liouvillian eigenvalue
    CMatrix right;     // unit Frobenius norm, largest-magnitude entry real positive
    CMatrix left;      // scaled so tr(left_j^+ right_k) = delta_jk
    double decay_rate;   // -Re value
    double frequency;    // Im value
    ModeClass mode_class;
};

struct Spectrum {
    std::vector<SpectralMode> modes;  // sorted by decay rate, then frequency
    Eigen::Index dim = 0;             // Hilbert-space dimension d; modes hold d^2 entries
    double eps_re = 0.0;
    double eps_im = 0.0;
    double spectral_radius = 0.0;
    double biorth_residual = 0.0;     // max |tr(l_j^+ r_k) - delta_jk|
    bool possibly_defective = false;
};

// Column-stacked superoperator S with S vec(rho) = vec(master_rhs(rho)).
CMatrix build_superoperator(const LindbladModel& model);

// |Re| <= eps_re: oscillatory if |Im| > eps_im else steady;
// Re < -eps_re: underdamped if |Im| > eps_im else overdamped.
ModeClass classify(Complex value, double eps_re, double eps_im);

// Full eigenmode decomposition of the Liouvillian. Negative eps values
// request the default threshold 1e-8 * max(1, spectral radius).
Spectrum spectrum(const LindbladModel& model, double eps_re = -1.0, double eps_im = -1.0);

// Expansion coefficients c_k = tr(l_k^+ rho0). Verifies that the expansion
// reconstructs rho0 (throws DefectiveError otherwise).
std::vector<Complex> project(const Spectrum& spec, const DensityMatrix& rho0);

// rho(t) = sum_k c_k exp(value_k t) right_k at the given times, symmetrized
// and trace-renormalized; Hermiticity/trace violations beyond 1e-6 throw.
std::vector<DensityMatrix> evolve_expansion(const Spectrum& spec, const DensityMatrix& rho0,
                                            const std::vector<double>& times);

// Fixed-step classical Runge-Kutta integration of master_rhs, sampled at the
// given nondecreasing times (starting from t = 0).
std::vector<DensityMatrix> evolve_rk4(const LindbladModel& model, const DensityMatrix& rho0,
                                      const std::vector<double>& times, double dt);

}  // namespace lindspect
