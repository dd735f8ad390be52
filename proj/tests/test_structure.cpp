#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lindspect/errors.hpp"
#include "lindspect/model_zoo.hpp"
#include "lindspect/structure.hpp"

using namespace lindspect;

namespace {

const Complex I(0.0, 1.0);

CMatrix random_hermitian(Eigen::Index n, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return (m + m.adjoint()) / 2.0;
}

CMatrix random_general(Eigen::Index n, std::uint32_t seed) {
    std::mt19937 gen(seed + 1000);
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(dist(gen), dist(gen));
    return m;
}

// sorted real eigenvalues of a small Hermitian block
std::vector<double> herm_eigs(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + solver.eigenvalues().size());
    return out;
}

bool has_value(const std::vector<EigenModePair>& modes, Complex v, double tol) {
    return std::any_of(modes.begin(), modes.end(),
                       [&](const EigenModePair& m) { return std::abs(m.value - v) < tol; });
}

}  // namespace

TEST_CASE("collective chain verifies against its shipped partition") {
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    const StructureReport report = verify_block_form(model, part);
    REQUIRE(report.structured);
    CHECK(report.max_offblock_residual < 1e-12);
    CHECK(report.max_xi_mismatch < 1e-12);
    REQUIRE(report.xi.size() == 1);

    // the common jump block is the nilpotent raiser-free ladder step
    CMatrix xi_expected = CMatrix::Zero(2, 2);
    xi_expected(0, 1) = 1.0;
    CHECK((report.xi[0] - xi_expected).norm() < 1e-12);

    // the two Hamiltonian blocks differ by a multiple of the identity, 4J
    CHECK((report.delta_h - 20.0 * CMatrix::Identity(2, 2)).norm() < 1e-12);

    // leading block carries the transverse field structure
    CHECK(std::abs(report.h_a(0, 0) - Complex(5.0, 0.0)) < 1e-12);
    CHECK(std::abs(report.h_a(0, 1) - Complex(5.0, -5.0)) < 1e-12);
    CHECK(std::abs(report.h_a(1, 1) - Complex(-5.0, 0.0)) < 1e-12);
}

TEST_CASE("verify_block_form pinpoints the offender") {
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);

    // poke an off-block entry into the Hamiltonian, in the partition basis
    CMatrix poke = CMatrix::Zero(8, 8);
    poke(0, 3) = 0.05;
    poke(3, 0) = 0.05;
    const CMatrix h_bad = model.hamiltonian() + part.basis * poke * part.basis.adjoint();
    LindbladModel bad_h(h_bad, model.channels());
    const StructureReport rh = verify_block_form(bad_h, part);
    CHECK_FALSE(rh.structured);
    REQUIRE(rh.offending_operator.has_value());
    CHECK(*rh.offending_operator == -1);
    CHECK(rh.max_offblock_residual > 1e-4);

    // same poke on the jump operator blames channel 0
    CMatrix l_bad = model.channels()[0].op + part.basis * poke * part.basis.adjoint();
    LindbladModel bad_l(model.hamiltonian(), {JumpChannel{l_bad, 1.0}});
    const StructureReport rl = verify_block_form(bad_l, part);
    CHECK_FALSE(rl.structured);
    REQUIRE(rl.offending_operator.has_value());
    CHECK(*rl.offending_operator == 0);

    // block-diagonal but with mismatched leading blocks is also rejected
    CMatrix mismatch = CMatrix::Zero(8, 8);
    mismatch(0, 1) = 0.1;  // lives inside block a only
    CMatrix l_skew = model.channels()[0].op + part.basis * mismatch * part.basis.adjoint();
    LindbladModel bad_skew(model.hamiltonian(), {JumpChannel{l_skew, 1.0}});
    const StructureReport rs = verify_block_form(bad_skew, part);
    CHECK_FALSE(rs.structured);
    CHECK(rs.max_xi_mismatch > 1e-4);
}

TEST_CASE("verify_block_form rejects a non-unitary basis") {
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    BlockPartition skewed = part;
    skewed.basis(0, 0) += 0.01;
    CHECK_THROWS_AS((void)verify_block_form(model, skewed), std::invalid_argument);
}

TEST_CASE("three-qubit dephasing chain has four two-level protected subspaces") {
    const LindbladModel model = zoo::dephasing_chain(0.3, 0.9, 1.0, 1.0, 1.0);
    const DfsResult dfs = find_dfs(model);
    REQUIRE(dfs.subspaces.size() == 4);

    // each subspace carries definite jump eigenvalues (s1, s3) and the
    // restricted Hamiltonian c(s1, s3) sz with c = chi s1 s3 + j12 s1 + j23 s3
    const double chi = 0.3, j12 = 0.9, j23 = 1.0;
    std::vector<std::pair<double, double>> seen;
    for (const DfsSubspace& sub : dfs.subspaces) {
        REQUIRE(sub.basis.cols() == 2);
        REQUIRE(sub.xi.size() == 2);
        const double s1 = sub.xi[0].real();
        const double s3 = sub.xi[1].real();
        CHECK(std::abs(sub.xi[0] - Complex(s1, 0.0)) < 1e-9);
        CHECK(std::abs(std::abs(s1) - 1.0) < 1e-9);
        CHECK(std::abs(std::abs(s3) - 1.0) < 1e-9);

        const double c = chi * s1 * s3 + j12 * s1 + j23 * s3;
        const std::vector<double> evs = herm_eigs(sub.h_restricted);
        CHECK(evs[0] == doctest::Approx(-std::abs(c)).epsilon(1e-9));
        CHECK(evs[1] == doctest::Approx(std::abs(c)).epsilon(1e-9));
        seen.emplace_back(s1, s3);

        // basis columns are orthonormal and the jumps really act as scalars
        CHECK((sub.basis.adjoint() * sub.basis - CMatrix::Identity(2, 2)).norm() < 1e-10);
        const CMatrix l1 = model.channels()[0].op;
        CHECK((l1 * sub.basis - s1 * sub.basis).norm() < 1e-9);
    }
    // all four sign combinations show up exactly once
    std::sort(seen.begin(), seen.end());
    const std::vector<std::pair<double, double>> expected = {
        {-1.0, -1.0}, {-1.0, 1.0}, {1.0, -1.0}, {1.0, 1.0}};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(seen[k].first - expected[k].first) < 1e-9);
        CHECK(std::abs(seen[k].second - expected[k].second) < 1e-9);
    }
}

TEST_CASE("chain subspace modes oscillate at twice the level splitting") {
    const LindbladModel model = zoo::dephasing_chain(0.3, 0.9, 1.0, 1.0, 1.0);
    const std::vector<EigenModePair> modes = dfs_modes(find_dfs(model), model);
    // four subspaces, four |u><v| combinations each
    REQUIRE(modes.size() == 16);

    for (const double f : {4.4, 0.4, 0.8, 3.2}) {
        CHECK(has_value(modes, Complex(0.0, f), 1e-9));
        CHECK(has_value(modes, Complex(0.0, -f), 1e-9));
    }
    // every mode is an exact eigenmode of the full master equation
    for (const EigenModePair& m : modes) {
        CHECK(std::abs(m.value.real()) < 1e-9);
        const CMatrix rhs = master_rhs(model, m.mode);
        CHECK((rhs - m.value * m.mode).norm() < 1e-8 * m.mode.norm());
    }
}

TEST_CASE("diagonal dephasing also leaves a protected pair") {
    // levels 0 and 2 share the jump eigenvalue, level 1 and 3 sit alone
    const LindbladModel model = zoo::dephasing_oscillator(2.0, 1.0, 4);
    const DfsResult dfs = find_dfs(model);

    int pair_count = 0;
    for (const DfsSubspace& sub : dfs.subspaces) {
        if (sub.basis.cols() == 2) {
            ++pair_count;
            const std::vector<double> evs = herm_eigs(sub.h_restricted);
            CHECK(evs[0] == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(evs[1] == doctest::Approx(4.0).epsilon(1e-10));
        }
    }
    CHECK(pair_count == 1);
}

TEST_CASE("reduced steady block of the collective chain, strong case") {
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    const StructureReport report = verify_block_form(model, part);
    REQUIRE(report.structured);

    const RStarSolution sol = solve_rstar(report, {1.0});
    CHECK(sol.condition == DeltaCondition::Strong);
    REQUIRE(sol.omega.has_value());
    CHECK(*sol.omega == doctest::Approx(20.0).epsilon(1e-10));
    CHECK(sol.sharp_residual < 1e-9);

    // closed form for the steady block
    const CMatrix expected = zoo::xxx_rstar_formula(5.0, 5.0, 5.0, 1.0);
    CHECK((sol.r_star - expected).norm() < 1e-9);
    CHECK(sol.r_star.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steady block formula holds across random parameters") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> dist(0.3, 3.0);
    for (int trial = 0; trial < 4; ++trial) {
        const double hx = dist(gen), hy = dist(gen), hz = dist(gen), gamma = dist(gen);
        const double j = dist(gen);
        const auto [model, part] = zoo::xxx_collective(j, hx, hy, hz, gamma);
        const StructureReport report = verify_block_form(model, part);
        REQUIRE(report.structured);
        const RStarSolution sol = solve_rstar(report, {gamma});
        CHECK(sol.condition == DeltaCondition::Strong);
        REQUIRE(sol.omega.has_value());
        CHECK(*sol.omega == doctest::Approx(4.0 * j).epsilon(1e-9));
        CHECK((sol.r_star - zoo::xxx_rstar_formula(hx, hy, hz, gamma)).norm() < 1e-8);
    }
}

TEST_CASE("two-qubit model switches between weak and no condition") {
    // strong never holds here; the asymmetric rate pair lands the weak case
    const LindbladModel weak_model = zoo::two_qubit_tunable(1.0, 1.0, 8.0);
    BlockPartition ident;
    ident.basis = CMatrix::Identity(4, 4);
    ident.n = 2;
    ident.m = 0;
    const StructureReport report = verify_block_form(weak_model, ident);
    REQUIRE(report.structured);
    CHECK_FALSE(check_strong(report.delta_h).has_value());

    const RStarSolution weak_sol = solve_rstar(report, {1.0, 8.0});
    CHECK(weak_sol.condition == DeltaCondition::Weak);
    REQUIRE(weak_sol.omega.has_value());
    CHECK(*weak_sol.omega == doctest::Approx(4.0).epsilon(1e-9));
    CMatrix expected(2, 2);
    expected << Complex(0.5, 0.0), Complex(0.0, 0.5), Complex(0.0, -0.5), Complex(0.5, 0.0);
    CHECK((weak_sol.r_star - expected).norm() < 1e-8);

    // balanced rates push the steady block off the delta_h eigenvector
    const LindbladModel none_model = zoo::two_qubit_tunable(1.0, 1.0, 1.0);
    const StructureReport report2 = verify_block_form(none_model, ident);
    REQUIRE(report2.structured);
    const RStarSolution none_sol = solve_rstar(report2, {1.0, 1.0});
    CHECK(none_sol.condition == DeltaCondition::None);
    CMatrix golden(2, 2);
    golden << Complex(73.0, 0.0), Complex(-70.0, 52.0), Complex(-70.0, -52.0), Complex(178.0, 0.0);
    CHECK((none_sol.r_star - golden / 251.0).norm() < 1e-8);
}

TEST_CASE("strong condition detector") {
    const CMatrix id = CMatrix::Identity(3, 3);
    auto omega = check_strong(CMatrix(2.5 * id));
    REQUIRE(omega.has_value());
    CHECK(*omega == doctest::Approx(2.5).epsilon(1e-12));

    // zero is a legitimate strong value
    auto zero = check_strong(CMatrix(CMatrix::Zero(3, 3)));
    REQUIRE(zero.has_value());
    CHECK(*zero == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_FALSE(check_strong(random_hermitian(3, 201)).has_value());

    CMatrix nearly = 2.5 * id;
    nearly(0, 1) = 1e-12;
    nearly(1, 0) = 1e-12;
    CHECK(check_strong(nearly).has_value());
}

TEST_CASE("weak condition detector") {
    // plant an eigenvector and hand it over as the steady block
    CMatrix delta = random_hermitian(3, 211);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(delta);
    const CVector v = solver.eigenvectors().col(1);
    const double omega_true = solver.eigenvalues()(1);
    const CMatrix r = v * v.adjoint();

    auto omega = check_weak(delta, r);
    REQUIRE(omega.has_value());
    CHECK(*omega == doctest::Approx(omega_true).epsilon(1e-9));

    // a full-rank mixture of different eigenvectors is not an eigenvector
    const CMatrix mix = 0.5 * (solver.eigenvectors().col(0) * solver.eigenvectors().col(0).adjoint() +
                               solver.eigenvectors().col(2) * solver.eigenvectors().col(2).adjoint());
    CHECK_FALSE(check_weak(delta, mix).has_value());

    // omega = 0 does not count as weak
    CHECK_FALSE(check_weak(CMatrix(CMatrix::Zero(3, 3)), r).has_value());
}

TEST_CASE("constructed modes are exact eigenmodes of the full dynamics") {
    const auto [model, part] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    const StructureReport report = verify_block_form(model, part);
    const RStarSolution sol = solve_rstar(report, {1.0});
    REQUIRE(sol.condition == DeltaCondition::Strong);

    const std::vector<EigenModePair> modes = construct_modes(model, part, sol);
    REQUIRE(modes.size() == 4);
    CHECK(has_value(modes, Complex(0.0, 20.0), 1e-9));
    CHECK(has_value(modes, Complex(0.0, -20.0), 1e-9));
    CHECK(has_value(modes, Complex(0.0, 0.0), 1e-9));

    for (const EigenModePair& m : modes) {
        const CMatrix rhs = master_rhs(model, m.mode);
        CHECK((rhs - m.value * m.mode).norm() < 1e-8 * m.mode.norm());
    }

    // the oscillating pair survives even though the dissipator acts on it
    for (const EigenModePair& m : modes) {
        if (std::abs(m.value.imag()) > 1.0) {
            CHECK(dissipator_residual(model, m.mode) > 1e-3 * m.mode.norm());
        }
    }
}

TEST_CASE("without a condition only the leading steady embedding comes back") {
    const LindbladModel model = zoo::two_qubit_tunable(1.0, 1.0, 1.0);
    BlockPartition ident;
    ident.basis = CMatrix::Identity(4, 4);
    ident.n = 2;
    ident.m = 0;
    const StructureReport report = verify_block_form(model, ident);
    const RStarSolution sol = solve_rstar(report, {1.0, 1.0});
    REQUIRE(sol.condition == DeltaCondition::None);

    const std::vector<EigenModePair> modes = construct_modes(model, ident, sol);
    REQUIRE(modes.size() == 1);
    CHECK(std::abs(modes[0].value) < 1e-9);
    const CMatrix rhs = master_rhs(model, modes[0].mode);
    CHECK(rhs.norm() < 1e-8 * modes[0].mode.norm());
}

TEST_CASE("partition discovery finds the hidden doublets") {
    const auto [model, shipped] = zoo::xxx_collective(5.0, 5.0, 5.0, 5.0, 1.0);
    const auto found = discover_partition(model, 20, 1e-8, 1);
    REQUIRE(found.has_value());
    CHECK(found->n == 2);
    CHECK(found->m == 4);

    const StructureReport report = verify_block_form(model, *found);
    CHECK(report.structured);

    // deterministic for a fixed seed
    const auto again = discover_partition(model, 20, 1e-8, 1);
    REQUIRE(again.has_value());
    CHECK((found->basis - again->basis).norm() == 0.0);
}

TEST_CASE("discovery gives up on an unstructured model") {
    LindbladModel model(random_hermitian(4, 221), {JumpChannel{random_general(4, 222), 1.0}});
    CHECK_FALSE(discover_partition(model, 5, 1e-8, 1).has_value());
}
