#include "lindspect/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lindspect/errors.hpp"

namespace lindspect {

std::string to_string(ModeClass c) {
    switch (c) {
        case ModeClass::PersistentOscillatory: return "Persistent oscillatory";
        case ModeClass::Steady: return "Steady";
        case ModeClass::Underdamped: return "Underdamped";
        case ModeClass::Overdamped: return "Overdamped";
    }
    return "Unknown";
}

CMatrix build_superoperator(const LindbladModel& model) {
    const Eigen::Index d = model.dim();
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix& h = model.hamiltonian();

    CMatrix s = Complex(0.0, -1.0) * (kron(id, h) - kron(h.transpose(), id));
    for (const JumpChannel& ch : model.channels()) {
        const CMatrix ldl = ch.op.adjoint() * ch.op;
        s += ch.rate * (kron(ch.op.conjugate(), ch.op) - 0.5 * kron(id, ldl) -
                        0.5 * kron(ldl.transpose(), id));
    }
    return s;
}

ModeClass classify(Complex value, double eps_re, double eps_im) {
    const double re = value.real();
    const double im = std::abs(value.imag());
    if (std::abs(re) <= eps_re) {
        return im > eps_im ? ModeClass::PersistentOscillatory : ModeClass::Steady;
    }
    if (re < -eps_re && im > eps_im) {
        return ModeClass::Underdamped;
    }
    return ModeClass::Overdamped;
}

namespace {

// union-find clustering of eigenvalues within a distance tolerance
std::vector<std::vector<int>> cluster_values(const std::vector<Complex>& values, double ctol) {
    const int n = static_cast<int>(values.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(values[i] - values[j]) <= ctol) {
                parent[find(i)] = find(j);
            }
        }
    }
    std::vector<std::vector<int>> clusters;
    std::vector<int> label(n, -1);
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (label[root] < 0) {
            label[root] = static_cast<int>(clusters.size());
            clusters.emplace_back();
        }
        clusters[label[root]].push_back(i);
    }
    return clusters;
}

void fix_phase(CVector& v) {
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex e = v(imax);
    if (std::abs(e) > 0.0) {
        v *= std::conj(e) / std::abs(e);
    }
}

}  // namespace

Spectrum spectrum(const LindbladModel& model, double eps_re, double eps_im) {
    const CMatrix s = build_superoperator(model);
    const Eigen::Index n = s.rows();

    EigenDecomposition right = eig_general(s);
    EigenDecomposition left = eig_general(CMatrix(s.adjoint()));

    double radius = 0.0;
    std::vector<Complex> rvals(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        rvals[k] = right.pairs[k].value;
        radius = std::max(radius, std::abs(rvals[k]));
    }
    if (eps_re < 0.0) eps_re = 1e-8 * std::max(1.0, radius);
    if (eps_im < 0.0) eps_im = 1e-8 * std::max(1.0, radius);
    const double ctol = 1e-7 * std::max(1.0, radius);

    for (auto& pair : right.pairs) {
        fix_phase(pair.vector);
    }

    // group right eigenvalues, then hand each cluster its left partners
    // (eigenvalues of S^+ conjugate-match those of S)
    const std::vector<std::vector<int>> clusters = cluster_values(rvals, ctol);
    std::vector<Complex> reps(clusters.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        Complex acc = 0.0;
        for (int k : clusters[c]) acc += rvals[k];
        reps[c] = acc / static_cast<double>(clusters[c].size());
    }

    std::vector<std::vector<int>> left_members(clusters.size());
    for (Eigen::Index j = 0; j < n; ++j) {
        const Complex target = std::conj(left.pairs[j].value);
        std::size_t best = 0;
        double best_dist = std::abs(target - reps[0]);
        for (std::size_t c = 1; c < clusters.size(); ++c) {
            const double dist = std::abs(target - reps[c]);
            if (dist < best_dist) {
                best = c;
                best_dist = dist;
            }
        }
        if (best_dist > 100.0 * ctol) {
            throw DefectiveError("spectrum: left eigenvalue has no conjugate right partner");
        }
        left_members[best].push_back(static_cast<int>(j));
    }

    std::vector<CVector> left_sorted(static_cast<std::size_t>(n));
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        const std::size_t k = clusters[c].size();
        if (left_members[c].size() != k) {
            throw DefectiveError("spectrum: left/right multiplicities disagree at eigenvalue " +
                                 std::to_string(reps[c].real()) + (reps[c].imag() < 0 ? "-" : "+") +
                                 std::to_string(std::abs(reps[c].imag())) + "i");
        }
        CMatrix vc(n, k), wc(n, k);
        for (std::size_t t = 0; t < k; ++t) {
            vc.col(t) = right.pairs[clusters[c][t]].vector;
            wc.col(t) = left.pairs[left_members[c][t]].vector;
        }
        const CMatrix overlap = wc.adjoint() * vc;
        Eigen::FullPivLU<CMatrix> lu(overlap);
        if (!lu.isInvertible()) {
            throw DefectiveError("spectrum: singular overlap within a degenerate cluster");
        }
        const CMatrix wfixed = wc * lu.inverse().adjoint();
        for (std::size_t t = 0; t < k; ++t) {
            left_sorted[clusters[c][t]] = wfixed.col(t);
        }
    }

    const Eigen::Index d = model.dim();
    Spectrum out;
    out.dim = d;
    out.eps_re = eps_re;
    out.eps_im = eps_im;
    out.spectral_radius = radius;
    out.possibly_defective = right.possibly_defective || left.possibly_defective;
    out.modes.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        SpectralMode mode;
        mode.value = rvals[k];
        mode.right = unvec(right.pairs[k].vector, d, d);
        mode.left = unvec(left_sorted[k], d, d);
        mode.decay_rate = -mode.value.real();
        mode.frequency = mode.value.imag();
        mode.mode_class = classify(mode.value, eps_re, eps_im);
        out.modes.push_back(std::move(mode));
    }
    std::stable_sort(out.modes.begin(), out.modes.end(),
                     [](const SpectralMode& a, const SpectralMode& b) {
                         if (a.decay_rate != b.decay_rate) return a.decay_rate < b.decay_rate;
                         return a.frequency < b.frequency;
                     });

    double biorth = 0.0;
    for (const SpectralMode& mj : out.modes) {
        const CVector lj = vec(mj.left);
        for (const SpectralMode& mk : out.modes) {
            const Complex g = lj.dot(vec(mk.right));
            const double dev = std::abs(&mj == &mk ? g - 1.0 : g);
            biorth = std::max(biorth, dev);
        }
    }
    out.biorth_residual = biorth;
    return out;
}

std::vector<Complex> project(const Spectrum& spec, const DensityMatrix& rho0) {
    if (rho0.dim() != spec.dim) {
        throw std::invalid_argument("project: state dimension mismatch");
    }
    const CVector r0 = vec(rho0.matrix());
    std::vector<Complex> coeffs;
    coeffs.reserve(spec.modes.size());
    CVector recon = CVector::Zero(r0.size());
    for (const SpectralMode& mode : spec.modes) {
        const Complex c = vec(mode.left).dot(r0);
        coeffs.push_back(c);
        recon += c * vec(mode.right);
    }
    if ((recon - r0).norm() > 1e-8 * std::max(1.0, r0.norm())) {
        throw DefectiveError("project: eigenmode expansion does not reconstruct the state");
    }
    return coeffs;
}

std::vector<DensityMatrix> evolve_expansion(const Spectrum& spec, const DensityMatrix& rho0,
                                            const std::vector<double>& times) {
    const std::vector<Complex> coeffs = project(spec, rho0);
    const Eigen::Index d = spec.dim;

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (double t : times) {
        CMatrix acc = CMatrix::Zero(d, d);
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            acc += coeffs[k] * std::exp(spec.modes[k].value * t) * spec.modes[k].right;
        }
        const double herm_dev = (acc - acc.adjoint()).norm() / 2.0;
        if (herm_dev > 1e-6) {
            throw NumericalError("evolve_expansion: Hermiticity violation " +
                                 std::to_string(herm_dev) + " at t = " + std::to_string(t));
        }
        CMatrix sym = (acc + acc.adjoint()) / 2.0;
        const double tr = sym.trace().real();
        if (std::abs(tr - 1.0) > 1e-6) {
            throw NumericalError("evolve_expansion: trace " + std::to_string(tr) + " at t = " +
                                 std::to_string(t));
        }
        out.push_back(DensityMatrix::validated(sym / tr, 1e-6));
    }
    return out;
}

std::vector<DensityMatrix> evolve_rk4(const LindbladModel& model, const DensityMatrix& rho0,
                                      const std::vector<double>& times, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("evolve_rk4: dt must be positive");
    }
    CMatrix rho = rho0.matrix();
    double t_cur = 0.0;

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    for (double target : times) {
        if (target < t_cur - 1e-12) {
            throw std::invalid_argument("evolve_rk4: times must be nondecreasing from 0");
        }
        const double span = std::max(target - t_cur, 0.0);
        if (span > 0.0) {
            const long steps = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
            const double h = span / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) {
                const CMatrix k1 = master_rhs(model, rho);
                const CMatrix k2 = master_rhs(model, CMatrix(rho + 0.5 * h * k1));
                const CMatrix k3 = master_rhs(model, CMatrix(rho + 0.5 * h * k2));
                const CMatrix k4 = master_rhs(model, CMatrix(rho + h * k3));
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        t_cur = target;

        const double drift = std::abs(rho.trace().real() - 1.0);
        const double herm_dev = (rho - rho.adjoint()).norm() / 2.0;
        if (drift > 1e-6 || herm_dev > 1e-6) {
            throw StepTooLargeError("evolve_rk4: state drift " + std::to_string(drift) +
                                    " at t = " + std::to_string(t_cur) +
                                    "; reduce the step size");
        }
        CMatrix sym = (rho + rho.adjoint()) / 2.0;
        out.push_back(DensityMatrix::validated(sym / sym.trace().real(), 1e-6));
    }
    return out;
}

}  // namespace lindspect
