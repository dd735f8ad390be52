#include <doctest.h>

#include <cmath>
#include <random>

#include "lindspect/model_zoo.hpp"

using namespace lindspect;

namespace {

const Complex I(0.0, 1.0);

// independent little tensor toolkit so the zoo is checked against scratch
CMatrix pauli(char which) {
    CMatrix m = CMatrix::Zero(2, 2);
    switch (which) {
        case 'x': m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 'y': m(0, 1) = -I; m(1, 0) = I; break;
        case 'z': m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        case '-': m(0, 1) = 1.0; break;  // lowering, first basis state is the low one
    }
    return m;
}

CMatrix site_op(char which, int site, int nq) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int k = 0; k < nq; ++k) {
        const CMatrix f = (k == site) ? pauli(which) : CMatrix::Identity(2, 2);
        out = kron(out, f);
    }
    return out;
}

CMatrix bond(char which, int a, int b, int nq) {
    return site_op(which, a, nq) * site_op(which, b, nq);
}

double laguerre_closed(int k, double x) {
    // G_k(x) = sum_j C(k, j) (-x)^j / j!
    double sum = 0.0;
    double binom = 1.0;
    double xpow = 1.0;
    double fact = 1.0;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) {
            binom *= double(k - j + 1) / double(j);
            xpow *= -x;
            fact *= double(j);
        }
        sum += binom * xpow / fact;
    }
    return sum;
}

}  // namespace

TEST_CASE("dephasing oscillator pieces") {
    const LindbladModel model = zoo::dephasing_oscillator(2.0, 0.5, 5);
    REQUIRE(model.dim() == 5);
    REQUIRE(model.channels().size() == 1);
    CHECK(model.channels()[0].rate == 0.5);

    for (int k = 0; k < 5; ++k) {
        CHECK(std::abs(model.hamiltonian()(k, k) - Complex(2.0 * k, 0.0)) < 1e-15);
        const double shifted = double((k - 1) * (k - 1));
        CHECK(std::abs(model.channels()[0].op(k, k) - Complex(shifted, 0.0)) < 1e-15);
    }
    CHECK(model.hamiltonian().diagonal().asDiagonal().toDenseMatrix().isApprox(
        model.hamiltonian()));
}

TEST_CASE("laguerre diagonal follows the recurrence and closed form") {
    // the x = 2 truncation flips sign after the first level
    const CMatrix d3 = zoo::laguerre_diagonal(2.0, 3);
    CHECK(std::abs(d3(0, 0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(d3(1, 1) - Complex(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(d3(2, 2) - Complex(-1.0, 0.0)) < 1e-15);

    // and x = 4 comes back to one at the third level
    const CMatrix d4 = zoo::laguerre_diagonal(4.0, 4);
    CHECK(std::abs(d4(1, 1) - Complex(-3.0, 0.0)) < 1e-14);
    CHECK(std::abs(d4(2, 2) - Complex(1.0, 0.0)) < 1e-14);

    const CMatrix d8 = zoo::laguerre_diagonal(1.7, 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(d8(k, k).real() == doctest::Approx(laguerre_closed(k, 1.7)).epsilon(1e-12));
    }

    const LindbladModel model = zoo::laguerre_dephasing(2.0, 4.0, 1.0, 6);
    CHECK((model.channels()[0].op - zoo::laguerre_diagonal(4.0, 6)).norm() < 1e-15);
    CHECK(std::abs(model.hamiltonian()(3, 3) - Complex(6.0, 0.0)) < 1e-15);
}

TEST_CASE("dephasing chain Hamiltonian and jumps entry by entry") {
    const double chi = 0.3, j12 = 0.9, j23 = 1.0;
    const LindbladModel model = zoo::dephasing_chain(chi, j12, j23, 0.7, 1.3);
    REQUIRE(model.dim() == 8);
    REQUIRE(model.channels().size() == 2);
    CHECK(model.channels()[0].rate == 0.7);
    CHECK(model.channels()[1].rate == 1.3);

    const CMatrix expected = chi * CMatrix(bond('z', 0, 1, 3) * site_op('z', 2, 3)) +
                             j12 * bond('z', 0, 1, 3) + j23 * bond('z', 1, 2, 3);
    CHECK((model.hamiltonian() - expected).norm() < 1e-14);
    CHECK((model.channels()[0].op - site_op('z', 0, 3)).norm() < 1e-15);
    CHECK((model.channels()[1].op - site_op('z', 2, 3)).norm() < 1e-15);
}

TEST_CASE("collective chain Hamiltonian and jump from scratch") {
    const double j = 5.0, hx = 1.0, hy = 2.0, hz = 3.0, gamma = 0.8;
    const auto [model, part] = zoo::xxx_collective(j, hx, hy, hz, gamma);
    REQUIRE(model.dim() == 8);

    CMatrix expected = CMatrix::Zero(8, 8);
    for (const auto& [a, b] : {std::pair<int, int>{0, 1}, {1, 2}}) {
        expected += j * (bond('x', a, b, 3) + bond('y', a, b, 3) + bond('z', a, b, 3));
    }
    for (int s = 0; s < 3; ++s) {
        expected += hx * site_op('x', s, 3) + hy * site_op('y', s, 3) + hz * site_op('z', s, 3);
    }
    CHECK((model.hamiltonian() - expected).norm() < 1e-13);

    const CMatrix lower =
        site_op('-', 0, 3) + site_op('-', 1, 3) + site_op('-', 2, 3);
    REQUIRE(model.channels().size() == 1);
    CHECK((model.channels()[0].op - lower).norm() < 1e-15);
    CHECK(model.channels()[0].rate == gamma);

    // shipped partition basis is unitary with the advertised sizes
    CHECK(part.n == 2);
    CHECK(part.m == 4);
    CHECK((part.basis.adjoint() * part.basis - CMatrix::Identity(8, 8)).norm() < 1e-14);
}

TEST_CASE("periodic anisotropic chain closes the loop and reduces when isotropic") {
    const double jx = 1.0, jy = 2.0, jz = 3.0, hx = 1.0, hy = 1.0, hz = 1.0, om = 2.0;
    const auto [model, part] = zoo::xyz_periodic(jx, jy, jz, hx, hy, hz, om, 1.0);

    CMatrix expected = CMatrix::Zero(8, 8);
    const double js[3] = {jx, jy, jz};
    const char axes[3] = {'x', 'y', 'z'};
    for (const auto& [a, b] : {std::pair<int, int>{0, 1}, {1, 2}, {2, 0}}) {
        for (int c = 0; c < 3; ++c) expected += js[c] * bond(axes[c], a, b, 3);
    }
    for (int s = 0; s < 3; ++s) {
        expected += hx * site_op('x', s, 3) + hy * site_op('y', s, 3) + hz * site_op('z', s, 3);
    }
    for (int c = 0; c < 3; ++c) expected -= (om / 4.0) * bond(axes[c], 0, 2, 3);
    CHECK((model.hamiltonian() - expected).norm() < 1e-13);

    // isotropic couplings with the matched boundary knob cancel the extra bond
    const double j = 5.0;
    const auto [xyz, p1] = zoo::xyz_periodic(j, j, j, 5.0, 5.0, 5.0, 4.0 * j, 1.0);
    const auto [xxx, p2] = zoo::xxx_collective(j, 5.0, 5.0, 5.0, 1.0);
    CHECK((xyz.hamiltonian() - xxx.hamiltonian()).norm() < 1e-12);
    CHECK((xyz.channels()[0].op - xxx.channels()[0].op).norm() < 1e-15);
}

TEST_CASE("two-qubit model entry goldens") {
    const double e = 1.5;
    const LindbladModel model = zoo::two_qubit_tunable(e, 0.5, 2.0);
    REQUIRE(model.dim() == 4);

    const CMatrix expected =
        e * (3.0 * site_op('z', 0, 2) + 6.0 * site_op('x', 1, 2) + site_op('y', 1, 2) +
             CMatrix(site_op('z', 0, 2) * site_op('y', 1, 2)));
    CHECK((model.hamiltonian() - expected).norm() < 1e-14);

    CMatrix l1(2, 2), l2(2, 2);
    l1 << Complex(1, 0), I, I, Complex(3, 0);
    l2 << Complex(1, 0), Complex(0, 0), I, Complex(2, 0);
    REQUIRE(model.channels().size() == 2);
    CHECK((model.channels()[0].op - kron(CMatrix::Identity(2, 2), l1)).norm() < 1e-15);
    CHECK((model.channels()[1].op - kron(CMatrix::Identity(2, 2), l2)).norm() < 1e-15);
    CHECK(model.channels()[0].rate == 0.5);
    CHECK(model.channels()[1].rate == 2.0);
}

TEST_CASE("closed-form steady block and its leftover dissipator block") {
    CMatrix xi = CMatrix::Zero(2, 2);
    xi(0, 1) = 1.0;

    std::mt19937 gen(404);
    std::uniform_real_distribution<double> dist(0.2, 4.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double hx = dist(gen), hy = dist(gen), hz = dist(gen), gamma = dist(gen);
        const CMatrix r = zoo::xxx_rstar_formula(hx, hy, hz, gamma);
        CHECK((r - r.adjoint()).norm() < 1e-14);
        CHECK(r.trace().real() == doctest::Approx(1.0).epsilon(1e-13));

        // the published leftover is exactly the bare dissipator applied to it
        const CMatrix dev = zoo::xxx_deviation_formula(hx, hy, hz, gamma);
        CHECK((dev - dissipator(xi, r)).norm() < 1e-13);
    }

    // spot values at the symmetric point
    const CMatrix r = zoo::xxx_rstar_formula(5.0, 5.0, 5.0, 1.0);
    CHECK(std::abs(r(0, 0) - Complex((400.5 + 200.5) / 801.0, 0.0)) < 1e-12);
    CHECK(std::abs(r(0, 1) - Complex(210.0 / 801.0, -190.0 / 801.0)) < 1e-12);
    const CMatrix dev = zoo::xxx_deviation_formula(5.0, 5.0, 5.0, 1.0);
    CHECK(std::abs(dev(0, 0) - Complex(200.0 / 801.0, 0.0)) < 1e-12);
    CHECK(std::abs(dev(1, 1) + Complex(200.0 / 801.0, 0.0)) < 1e-12);
}

TEST_CASE("named initial states") {
    const DensityMatrix osc = zoo::oscillator_revival_state(4);
    CHECK(std::abs(osc.matrix()(0, 0) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(osc.matrix()(0, 2) - Complex(0.5, 0.0)) < 1e-15);
    CHECK(std::abs(osc.matrix()(1, 1)) < 1e-15);
    CHECK_THROWS_AS((void)zoo::oscillator_revival_state(2), std::invalid_argument);

    const DensityMatrix damp = zoo::oscillator_decaying_state(4);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK(std::abs(damp.matrix()(a, b) - Complex(0.25, 0.0)) < 1e-15);
    CHECK_THROWS_AS((void)zoo::oscillator_decaying_state(3), std::invalid_argument);

    // the oscillating preparation is the steady block smeared across both
    // doublets, so rotating to the block basis must reveal that shape
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    const DensityMatrix rho = zoo::xxx_revival_state(5.0, 5.0, 5.0, 1.0);
    const CMatrix blocked = part.basis.adjoint() * rho.matrix() * part.basis;
    const CMatrix r = zoo::xxx_rstar_formula(5.0, 5.0, 5.0, 1.0);
    CHECK((blocked.block(0, 0, 2, 2) - 0.5 * r).norm() < 1e-12);
    CHECK((blocked.block(0, 2, 2, 2) - 0.5 * r).norm() < 1e-12);
    CHECK((blocked.block(2, 0, 2, 2) - 0.5 * r).norm() < 1e-12);
    CHECK((blocked.block(2, 2, 2, 2) - 0.5 * r).norm() < 1e-12);
    CHECK(blocked.block(4, 4, 4, 4).norm() < 1e-13);

    const DensityMatrix damp2 = zoo::xxx_decaying_state();
    REQUIRE(damp2.dim() == 8);
    CHECK(std::abs(damp2.matrix()(1, 1) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("registry lookups and parameter merging") {
    REQUIRE(zoo::registry().size() == 6);
    CHECK(zoo::find_entry("missing_model") == nullptr);

    const zoo::ZooEntry* entry = zoo::find_entry("dephasing_oscillator");
    REQUIRE(entry != nullptr);
    const zoo::ParamMap defaults = zoo::resolve_params(*entry, {});
    CHECK(defaults.at("nu") == 2.0);
    CHECK(defaults.at("gamma") == 1.0);
    CHECK(defaults.at("d") == 10.0);

    const zoo::ParamMap merged = zoo::resolve_params(*entry, {{"nu", 7.0}});
    CHECK(merged.at("nu") == 7.0);
    CHECK(merged.at("d") == 10.0);
    CHECK_THROWS_AS((void)zoo::resolve_params(*entry, {{"bogus", 1.0}}), std::invalid_argument);

    // building through the registry matches the direct constructor
    const LindbladModel via_registry = entry->build(defaults);
    const LindbladModel direct = zoo::dephasing_oscillator(2.0, 1.0, 10);
    CHECK((via_registry.hamiltonian() - direct.hamiltonian()).norm() == 0.0);

    // every entry that ships a partition must verify with it
    for (const zoo::ZooEntry& z : zoo::registry()) {
        const zoo::ParamMap p = zoo::resolve_params(z, {});
        if (z.partition == nullptr) continue;
        const auto part = z.partition(p);
        if (!part.has_value()) continue;
        const StructureReport report = verify_block_form(z.build(p), *part);
        CHECK(report.structured);
    }
}
