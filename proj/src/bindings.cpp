#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lindspect/errors.hpp"
#include "lindspect/model_zoo.hpp"
#include "lindspect/spectral.hpp"
#include "lindspect/structure.hpp"

namespace py = pybind11;
using namespace lindspect;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lindblad spectra, persistent oscillations, and block structure";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<JumpChannel>(m, "JumpChannel")
        .def(py::init([](CMatrix op, double rate) {
                 return JumpChannel{std::move(op), rate};
             }),
             py::arg("op"), py::arg("rate") = 1.0)
        .def_readwrite("op", &JumpChannel::op)
        .def_readwrite("rate", &JumpChannel::rate);

    py::class_<LindbladModel>(m, "LindbladModel")
        .def(py::init<CMatrix, std::vector<JumpChannel>>(), py::arg("hamiltonian"),
             py::arg("channels") = std::vector<JumpChannel>{})
        .def_property_readonly("hamiltonian", &LindbladModel::hamiltonian)
        .def_property_readonly("channels", &LindbladModel::channels)
        .def_property_readonly("dim", &LindbladModel::dim);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_static("validated", &DensityMatrix::validated, py::arg("matrix"),
                    py::arg("tol") = 1e-8)
        .def_static("pure", &DensityMatrix::pure, py::arg("state"))
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def_property_readonly("dim", &DensityMatrix::dim);

    m.def("dissipator", &dissipator, py::arg("jump_op"), py::arg("rho"));
    m.def("master_rhs", &master_rhs, py::arg("model"), py::arg("rho"));
    m.def("fidelity", &fidelity, py::arg("rho1"), py::arg("rho2"));

    py::enum_<ModeClass>(m, "ModeClass")
        .value("PersistentOscillatory", ModeClass::PersistentOscillatory)
        .value("Steady", ModeClass::Steady)
        .value("Underdamped", ModeClass::Underdamped)
        .value("Overdamped", ModeClass::Overdamped);

    py::class_<SpectralMode>(m, "SpectralMode")
        .def_readonly("value", &SpectralMode::value)
        .def_readonly("right", &SpectralMode::right)
        .def_readonly("left", &SpectralMode::left)
        .def_readonly("decay_rate", &SpectralMode::decay_rate)
        .def_readonly("frequency", &SpectralMode::frequency)
        .def_readonly("mode_class", &SpectralMode::mode_class);

    py::class_<Spectrum>(m, "Spectrum")
        .def_readonly("modes", &Spectrum::modes)
        .def_readonly("dim", &Spectrum::dim)
        .def_readonly("eps_re", &Spectrum::eps_re)
        .def_readonly("eps_im", &Spectrum::eps_im)
        .def_readonly("spectral_radius", &Spectrum::spectral_radius)
        .def_readonly("biorth_residual", &Spectrum::biorth_residual)
        .def_readonly("possibly_defective", &Spectrum::possibly_defective);

    m.def("build_superoperator", &build_superoperator, py::arg("model"));
    m.def("classify", &classify, py::arg("value"), py::arg("eps_re"), py::arg("eps_im"));
    m.def("spectrum", &spectrum, py::arg("model"), py::arg("eps_re") = -1.0,
          py::arg("eps_im") = -1.0);
    m.def("project", &project, py::arg("spectrum"), py::arg("rho0"));
    m.def("evolve_expansion", &evolve_expansion, py::arg("spectrum"), py::arg("rho0"),
          py::arg("times"));
    m.def("evolve_rk4", &evolve_rk4, py::arg("model"), py::arg("rho0"), py::arg("times"),
          py::arg("dt"));

    py::class_<BlockPartition>(m, "BlockPartition")
        .def(py::init([](CMatrix basis, Eigen::Index n, Eigen::Index m_) {
                 return BlockPartition{std::move(basis), n, m_};
             }),
             py::arg("basis"), py::arg("n"), py::arg("m"))
        .def_readwrite("basis", &BlockPartition::basis)
        .def_readwrite("n", &BlockPartition::n)
        .def_readwrite("m", &BlockPartition::m);

    py::class_<StructureReport>(m, "StructureReport")
        .def_readonly("structured", &StructureReport::structured)
        .def_readonly("offending_operator", &StructureReport::offending_operator)
        .def_readonly("xi", &StructureReport::xi)
        .def_readonly("m_blocks", &StructureReport::m_blocks)
        .def_readonly("h_a", &StructureReport::h_a)
        .def_readonly("h_b", &StructureReport::h_b)
        .def_readonly("h_res", &StructureReport::h_res)
        .def_readonly("delta_h", &StructureReport::delta_h)
        .def_readonly("max_offblock_residual", &StructureReport::max_offblock_residual)
        .def_readonly("max_xi_mismatch", &StructureReport::max_xi_mismatch)
        .def_readonly("tol", &StructureReport::tol)
        .def_readonly("partition", &StructureReport::partition);

    m.def("verify_block_form", &verify_block_form, py::arg("model"), py::arg("partition"),
          py::arg("tol") = 1e-8);

    py::class_<DfsSubspace>(m, "DfsSubspace")
        .def_readonly("basis", &DfsSubspace::basis)
        .def_readonly("xi", &DfsSubspace::xi)
        .def_readonly("h_restricted", &DfsSubspace::h_restricted);

    py::class_<DfsResult>(m, "DfsResult").def_readonly("subspaces", &DfsResult::subspaces);

    m.def("find_dfs", &find_dfs, py::arg("model"), py::arg("tol") = 1e-8);

    py::class_<EigenModePair>(m, "EigenModePair")
        .def_readonly("value", &EigenModePair::value)
        .def_readonly("mode", &EigenModePair::mode);

    m.def("dfs_modes", &dfs_modes, py::arg("dfs"), py::arg("model"));

    py::enum_<DeltaCondition>(m, "DeltaCondition")
        .value("Strong", DeltaCondition::Strong)
        .value("Weak", DeltaCondition::Weak)
        .value("NoCondition", DeltaCondition::None);

    py::class_<RStarSolution>(m, "RStarSolution")
        .def_readonly("r_star", &RStarSolution::r_star)
        .def_readonly("omega", &RStarSolution::omega)
        .def_readonly("condition", &RStarSolution::condition)
        .def_readonly("sharp_residual", &RStarSolution::sharp_residual)
        .def_readonly("null_multiplicity", &RStarSolution::null_multiplicity);

    m.def("solve_rstar", &solve_rstar, py::arg("report"), py::arg("rates"),
          py::arg("tol") = 1e-9);
    m.def("check_strong", &check_strong, py::arg("delta_h"), py::arg("tol") = 1e-9);
    m.def("check_weak", &check_weak, py::arg("delta_h"), py::arg("r_star"),
          py::arg("tol") = 1e-9);
    m.def("construct_modes", &construct_modes, py::arg("model"), py::arg("partition"),
          py::arg("solution"), py::arg("tol") = 1e-8);
    m.def("dissipator_residual", &dissipator_residual, py::arg("model"), py::arg("mode"));
    m.def("discover_partition", &discover_partition, py::arg("model"), py::arg("trials") = 20,
          py::arg("tol") = 1e-8, py::arg("seed") = 1);

    auto zoo_mod = m.def_submodule("zoo", "Ready-made models");
    zoo_mod.def("dephasing_oscillator", &zoo::dephasing_oscillator, py::arg("nu"),
                py::arg("gamma"), py::arg("d"));
    zoo_mod.def("laguerre_diagonal", &zoo::laguerre_diagonal, py::arg("x"), py::arg("d"));
    zoo_mod.def("laguerre_dephasing", &zoo::laguerre_dephasing, py::arg("nu"), py::arg("x"),
                py::arg("gamma"), py::arg("d"));
    zoo_mod.def("dephasing_chain", &zoo::dephasing_chain, py::arg("chi"), py::arg("j12"),
                py::arg("j23"), py::arg("g1"), py::arg("g2"));
    zoo_mod.def("xxx_collective", &zoo::xxx_collective, py::arg("j"), py::arg("hx"),
                py::arg("hy"), py::arg("hz"), py::arg("gamma"));
    zoo_mod.def("two_qubit_tunable", &zoo::two_qubit_tunable, py::arg("e"), py::arg("g1"),
                py::arg("g2"));
    zoo_mod.def("xyz_periodic", &zoo::xyz_periodic, py::arg("jx"), py::arg("jy"), py::arg("jz"),
                py::arg("hx"), py::arg("hy"), py::arg("hz"), py::arg("omega"),
                py::arg("gamma") = 1.0);
    zoo_mod.def("xxx_rstar_formula", &zoo::xxx_rstar_formula, py::arg("hx"), py::arg("hy"),
                py::arg("hz"), py::arg("gamma"));
    zoo_mod.def("xxx_deviation_formula", &zoo::xxx_deviation_formula, py::arg("hx"),
                py::arg("hy"), py::arg("hz"), py::arg("gamma"));
    zoo_mod.def("oscillator_revival_state", &zoo::oscillator_revival_state, py::arg("d"));
    zoo_mod.def("oscillator_decaying_state", &zoo::oscillator_decaying_state, py::arg("d"));
    zoo_mod.def("xxx_revival_state", &zoo::xxx_revival_state, py::arg("hx"), py::arg("hy"), py::arg("hz"),
                py::arg("gamma"));
    zoo_mod.def("xxx_decaying_state", &zoo::xxx_decaying_state);
}
