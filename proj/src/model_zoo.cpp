#include "lindspect/model_zoo.hpp"

#include <cmath>
#include <stdexcept>

namespace lindspect::zoo {

namespace {

CMatrix sigma_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix sigma_y() {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

CMatrix sigma_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

CMatrix sigma_minus() {
    CMatrix m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

// op on the given site of an nq-qubit register, site 0 slowest
CMatrix on_site(const CMatrix& op, int site, int nq) {
    CMatrix acc = CMatrix::Identity(1, 1);
    for (int q = 0; q < nq; ++q) {
        acc = kron(acc, q == site ? op : CMatrix::Identity(2, 2));
    }
    return acc;
}

CMatrix two_site(const CMatrix& op, int a, int b, int nq) {
    return on_site(op, a, nq) * on_site(op, b, nq);
}

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// the eight-dimensional basis splitting the collective lowering operator into
// two doublets and a quartet; columns are the new basis vectors
CMatrix coupled_basis() {
    const double s2 = 1.0 / std::sqrt(2.0);
    const double s3 = 1.0 / std::sqrt(3.0);
    const double s6 = 1.0 / std::sqrt(6.0);
    CMatrix u = CMatrix::Zero(8, 8);
    u(1, 0) = s2;
    u(4, 0) = -s2;
    u(3, 1) = s2;
    u(6, 1) = -s2;
    u(1, 2) = -s6;
    u(4, 2) = -s6;
    u(2, 2) = 2.0 * s6;
    u(3, 3) = s6;
    u(6, 3) = s6;
    u(5, 3) = -2.0 * s6;
    u(0, 4) = 1.0;
    u(1, 5) = s3;
    u(2, 5) = s3;
    u(4, 5) = s3;
    u(3, 6) = s3;
    u(5, 6) = s3;
    u(6, 6) = s3;
    u(7, 7) = 1.0;
    return u;
}

CMatrix collective_lowering() {
    return on_site(sigma_minus(), 0, 3) + on_site(sigma_minus(), 1, 3) +
           on_site(sigma_minus(), 2, 3);
}

CMatrix uniform_fields(double hx, double hy, double hz) {
    CMatrix h = CMatrix::Zero(8, 8);
    for (int q = 0; q < 3; ++q) {
        h += hx * on_site(sigma_x(), q, 3) + hy * on_site(sigma_y(), q, 3) +
             hz * on_site(sigma_z(), q, 3);
    }
    return h;
}

}  // namespace

LindbladModel dephasing_oscillator(double nu, double gamma, int d) {
    require(d >= 3, "dephasing_oscillator: d must be at least 3");
    CMatrix h = CMatrix::Zero(d, d);
    CMatrix l = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) {
        h(n, n) = nu * n;
        l(n, n) = double(n - 1) * double(n - 1);
    }
    return LindbladModel(h, {{l, gamma}});
}

CMatrix laguerre_diagonal(double x, int d) {
    require(d >= 1, "laguerre_diagonal: d must be at least 1");
    CMatrix l = CMatrix::Zero(d, d);
    double prev = 1.0;      // degree 0
    double cur = 1.0 - x;   // degree 1
    l(0, 0) = prev;
    if (d > 1) l(1, 1) = cur;
    for (int k = 1; k + 1 < d; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        l(k + 1, k + 1) = cur;
    }
    return l;
}

LindbladModel laguerre_dephasing(double nu, double x, double gamma, int d) {
    require(d >= 3, "laguerre_dephasing: d must be at least 3");
    CMatrix h = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) h(n, n) = nu * n;
    return LindbladModel(h, {{laguerre_diagonal(x, d), gamma}});
}

LindbladModel dephasing_chain(double chi, double j12, double j23, double g1, double g2) {
    const CMatrix z1 = on_site(sigma_z(), 0, 3);
    const CMatrix z2 = on_site(sigma_z(), 1, 3);
    const CMatrix z3 = on_site(sigma_z(), 2, 3);
    const CMatrix h = chi * z1 * z2 * z3 + j12 * z1 * z2 + j23 * z2 * z3;
    return LindbladModel(h, {{z1, g1}, {z3, g2}});
}

std::pair<LindbladModel, BlockPartition> xxx_collective(double j, double hx, double hy, double hz,
                                                        double gamma) {
    CMatrix h = uniform_fields(hx, hy, hz);
    for (int q = 0; q < 2; ++q) {
        h += j * (two_site(sigma_x(), q, q + 1, 3) + two_site(sigma_y(), q, q + 1, 3) +
                  two_site(sigma_z(), q, q + 1, 3));
    }
    LindbladModel model(h, {{collective_lowering(), gamma}});
    return {std::move(model), BlockPartition{coupled_basis(), 2, 4}};
}

LindbladModel two_qubit_tunable(double e, double g1, double g2) {
    const CMatrix id = CMatrix::Identity(2, 2);
    const CMatrix h = e * (3.0 * kron(sigma_z(), id) + 6.0 * kron(id, sigma_x()) +
                           kron(id, sigma_y()) + kron(sigma_z(), sigma_y()));
    CMatrix l1(2, 2), l2(2, 2);
    l1 << 1, Complex(0, 1), Complex(0, 1), 3;
    l2 << 1, 0, Complex(0, 1), 2;
    return LindbladModel(h, {{kron(id, l1), g1}, {kron(id, l2), g2}});
}

std::pair<LindbladModel, BlockPartition> xyz_periodic(double jx, double jy, double jz, double hx,
                                                      double hy, double hz, double omega,
                                                      double gamma) {
    CMatrix h = uniform_fields(hx, hy, hz);
    for (int q = 0; q < 3; ++q) {
        const int p = (q + 1) % 3;
        h += jx * two_site(sigma_x(), q, p, 3) + jy * two_site(sigma_y(), q, p, 3) +
             jz * two_site(sigma_z(), q, p, 3);
    }
    h -= (omega / 4.0) * (two_site(sigma_x(), 0, 2, 3) + two_site(sigma_y(), 0, 2, 3) +
                          two_site(sigma_z(), 0, 2, 3));
    LindbladModel model(h, {{collective_lowering(), gamma}});
    return {std::move(model), BlockPartition{coupled_basis(), 2, 4}};
}

CMatrix xxx_rstar_formula(double hx, double hy, double hz, double gamma) {
    const double denom = 8.0 * (hx * hx + hy * hy + 2.0 * hz * hz) + gamma * gamma;
    require(denom > 0.0, "xxx_rstar_formula: fields and rate cannot all vanish");
    const double cx = (8.0 * hx * hz + 2.0 * hy * gamma) / denom;
    const double cy = (8.0 * hy * hz - 2.0 * hx * gamma) / denom;
    const double cz = (8.0 * hz * hz + gamma * gamma / 2.0) / denom;
    return cx * sigma_x() + cy * sigma_y() + cz * sigma_z() +
           0.5 * CMatrix::Identity(2, 2);
}

CMatrix xxx_deviation_formula(double hx, double hy, double hz, double gamma) {
    const double denom = 8.0 * (hx * hx + hy * hy + 2.0 * hz * hz) + gamma * gamma;
    require(denom > 0.0, "xxx_deviation_formula: fields and rate cannot all vanish");
    const double dx = -(4.0 * hx * hz + hy * gamma) / denom;
    const double dy = -(4.0 * hy * hz - hx * gamma) / denom;
    const double dz = 4.0 * (hx * hx + hy * hy) / denom;
    return dx * sigma_x() + dy * sigma_y() + dz * sigma_z();
}

DensityMatrix oscillator_revival_state(int d) {
    require(d >= 3, "oscillator_revival_state: d must be at least 3");
    CVector psi = CVector::Zero(d);
    psi(0) = 1.0;
    psi(2) = 1.0;
    return DensityMatrix::pure(psi);
}

DensityMatrix oscillator_decaying_state(int d) {
    require(d >= 4, "oscillator_decaying_state: d must be at least 4");
    CVector psi = CVector::Zero(d);
    psi(0) = psi(1) = psi(2) = psi(3) = 1.0;
    return DensityMatrix::pure(psi);
}

DensityMatrix xxx_revival_state(double hx, double hy, double hz, double gamma) {
    const CMatrix r = xxx_rstar_formula(hx, hy, hz, gamma);
    CMatrix blocks = CMatrix::Zero(8, 8);
    blocks.block(0, 0, 2, 2) = 0.5 * r;
    blocks.block(0, 2, 2, 2) = 0.5 * r;
    blocks.block(2, 0, 2, 2) = 0.5 * r;
    blocks.block(2, 2, 2, 2) = 0.5 * r;
    const CMatrix u = coupled_basis();
    return DensityMatrix::validated(u * blocks * u.adjoint());
}

DensityMatrix xxx_decaying_state() {
    CVector psi = CVector::Zero(8);
    psi(1) = 1.0;
    return DensityMatrix::pure(psi);
}

namespace {

double at(const ParamMap& p, const char* key) { return p.at(key); }

LindbladModel build_oscillator(const ParamMap& p) {
    return dephasing_oscillator(at(p, "nu"), at(p, "gamma"), int(at(p, "d")));
}

LindbladModel build_laguerre(const ParamMap& p) {
    return laguerre_dephasing(at(p, "nu"), at(p, "x"), at(p, "gamma"), int(at(p, "d")));
}

LindbladModel build_chain(const ParamMap& p) {
    return dephasing_chain(at(p, "chi"), at(p, "j12"), at(p, "j23"), at(p, "g1"), at(p, "g2"));
}

LindbladModel build_xxx(const ParamMap& p) {
    return xxx_collective(at(p, "j"), at(p, "hx"), at(p, "hy"), at(p, "hz"), at(p, "gamma")).first;
}

std::optional<BlockPartition> partition_xxx(const ParamMap&) {
    return BlockPartition{coupled_basis(), 2, 4};
}

LindbladModel build_two_qubit(const ParamMap& p) {
    return two_qubit_tunable(at(p, "e"), at(p, "g1"), at(p, "g2"));
}

std::optional<BlockPartition> partition_two_qubit(const ParamMap&) {
    return BlockPartition{CMatrix::Identity(4, 4), 2, 0};
}

LindbladModel build_xyz(const ParamMap& p) {
    return xyz_periodic(at(p, "jx"), at(p, "jy"), at(p, "jz"), at(p, "hx"), at(p, "hy"),
                        at(p, "hz"), at(p, "omega"), at(p, "gamma"))
        .first;
}

std::optional<BlockPartition> no_partition(const ParamMap&) { return std::nullopt; }

}  // namespace

const std::vector<ZooEntry>& registry() {
    static const std::vector<ZooEntry> entries = {
        {"dephasing_oscillator",
         {{"nu", 2.0}, {"gamma", 1.0}, {"d", 10.0}},
         build_oscillator,
         no_partition},
        {"laguerre_dephasing",
         {{"nu", 2.0}, {"x", 4.0}, {"gamma", 1.0}, {"d", 10.0}},
         build_laguerre,
         no_partition},
        {"dephasing_chain",
         {{"chi", 0.3}, {"j12", 0.9}, {"j23", 1.0}, {"g1", 1.0}, {"g2", 1.0}},
         build_chain,
         no_partition},
        {"xxx_collective",
         {{"j", 5.0}, {"hx", 5.0}, {"hy", 5.0}, {"hz", 5.0}, {"gamma", 1.0}},
         build_xxx,
         partition_xxx},
        {"two_qubit_tunable",
         {{"e", 1.0}, {"g1", 1.0}, {"g2", 8.0}},
         build_two_qubit,
         partition_two_qubit},
        {"xyz_periodic",
         {{"jx", 1.0},
          {"jy", 2.0},
          {"jz", 3.0},
          {"hx", 1.0},
          {"hy", 1.0},
          {"hz", 1.0},
          {"omega", 2.0},
          {"gamma", 1.0}},
         build_xyz,
         partition_xxx},
    };
    return entries;
}

const ZooEntry* find_entry(const std::string& name) {
    for (const ZooEntry& entry : registry()) {
        if (entry.name == name) return &entry;
    }
    return nullptr;
}

ParamMap resolve_params(const ZooEntry& entry, const ParamMap& overrides) {
    ParamMap resolved;
    for (const auto& [key, value] : entry.defaults) resolved[key] = value;
    for (const auto& [key, value] : overrides) {
        if (resolved.find(key) == resolved.end()) {
            std::string valid;
            for (const auto& [name, unused] : entry.defaults) {
                if (!valid.empty()) valid += ", ";
                valid += name;
            }
            throw std::invalid_argument("unknown parameter '" + key + "' for model '" +
                                        entry.name + "' (expected one of: " + valid + ")");
        }
        resolved[key] = value;
    }
    return resolved;
}

}  // namespace lindspect::zoo
