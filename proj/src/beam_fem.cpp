#include "macro/beam_fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include <Eigen/SparseCholesky>

#include "macro/error.hpp"

namespace macro {

void Material::validate() const
{
    if (!(youngs_modulus > 0.0)) throw ValidationError("youngs_modulus must be positive");
    if (!(poissons_ratio > -1.0 && poissons_ratio < 0.5)) throw ValidationError("poissons_ratio must be in (-1, 0.5)");
}

void Section::validate() const
{
    if (!(in_plane_width > 0.0)) throw ValidationError("section in_plane_width must be positive");
    if (!(out_of_plane_depth > 0.0)) throw ValidationError("section out_of_plane_depth must be positive");
}

SectionProperties section_properties(const Section& s)
{
    const double w = s.in_plane_width;
    const double d = s.out_of_plane_depth;
    return {w * d, d * w * w * w / 12.0, 5.0 / 6.0};
}

BeamConstants BeamConstants::from(const Material& material, const Section& section)
{
    const SectionProperties p = section_properties(section);
    return {material.youngs_modulus, material.shear_modulus(), p.area, p.second_moment, p.shear_correction};
}

Matrix6 rotation_to_local(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Matrix6 t = Matrix6::Zero();
    for (int k : {0, 3}) {
        t(k, k) = c;
        t(k, k + 1) = s;
        t(k + 1, k) = -s;
        t(k + 1, k + 1) = c;
        t(k + 2, k + 2) = 1.0;
    }
    return t;
}

Matrix6 local_element_stiffness(const BeamConstants& c, double length)
{
    if (!(length > 0.0)) throw ValidationError("element length must be positive");
    const double L = length;
    const double phi = 12.0 * c.E * c.I / (c.kappa * c.G * c.A * L * L);
    const double ea = c.E * c.A / L;
    const double b = c.E * c.I / ((1.0 + phi) * L * L * L);

    Matrix6 k = Matrix6::Zero();
    k(0, 0) = ea;
    k(0, 3) = -ea;
    k(3, 3) = ea;

    k(1, 1) = 12.0 * b;
    k(1, 2) = 6.0 * L * b;
    k(1, 4) = -12.0 * b;
    k(1, 5) = 6.0 * L * b;
    k(2, 2) = (4.0 + phi) * L * L * b;
    k(2, 4) = -6.0 * L * b;
    k(2, 5) = (2.0 - phi) * L * L * b;
    k(4, 4) = 12.0 * b;
    k(4, 5) = -6.0 * L * b;
    k(5, 5) = (4.0 + phi) * L * L * b;

    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < i; ++j) k(i, j) = k(j, i);
    return k;
}

Matrix6 element_stiffness(const BeamConstants& c, double length, double angle)
{
    const Matrix6 t = rotation_to_local(angle);
    return t.transpose() * local_element_stiffness(c, length) * t;
}

Vector6 equivalent_actuation_loads(const BeamConstants& c, double angle, double strain)
{
    Vector6 local = Vector6::Zero();
    local(0) = -c.E * c.A * strain;
    local(3) = c.E * c.A * strain;
    return rotation_to_local(angle).transpose() * local;
}

void FemParams::validate() const
{
    material.validate();
    actuator.validate();
    arm.validate();
    if (!(arm_fraction > 0.0 && arm_fraction < 0.5)) throw ValidationError("arm_fraction must lie in (0, 0.5)");
    if (!std::isfinite(eps_a)) throw ValidationError("eps_a must be finite");
    if (refinement < 1) throw ValidationError("refinement must be >= 1");
}

namespace {

// Energy of local end displacements written as a sum of squares (axial,
// relative rotation, shear-corrected chord rotation) so it is never negative.
double element_energy(const BeamConstants& c, double L, const Vector6& q)
{
    const double phi = 12.0 * c.E * c.I / (c.kappa * c.G * c.A * L * L);
    const double stretch = q[3] - q[0];
    const double bend = q[5] - q[2];
    const double chord = (q[4] - q[1]) / L - 0.5 * (q[2] + q[5]);
    return 0.5 * c.E * c.A / L * stretch * stretch + 0.5 * c.E * c.I / L * bend * bend +
           6.0 * c.E * c.I / ((1.0 + phi) * L) * chord * chord;
}

// Lowest vertex (then leftmost) is pinned; the rightmost vertex of that
// bottom row takes the roller. When the bottom row is a single vertex the
// roller moves to the rightmost vertex overall.
std::pair<std::size_t, std::size_t> pick_supports(const Mesh& mesh)
{
    const double tol = 1e-6 * mesh.edge_length;
    double ymin = mesh.nodes[0].y;
    for (const Vec2& p : mesh.nodes) ymin = std::min(ymin, p.y);

    std::size_t pin = mesh.nodes.size();
    std::size_t roller = mesh.nodes.size();
    for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
        const Vec2& p = mesh.nodes[k];
        if (p.y > ymin + tol) continue;
        if (pin == mesh.nodes.size() || p.x < mesh.nodes[pin].x) pin = k;
        if (roller == mesh.nodes.size() || p.x > mesh.nodes[roller].x) roller = k;
    }
    if (roller == pin) {
        roller = mesh.nodes.size();
        for (std::size_t k = 0; k < mesh.nodes.size(); ++k) {
            if (k == pin) continue;
            const Vec2& p = mesh.nodes[k];
            if (roller == mesh.nodes.size() || p.x > mesh.nodes[roller].x + tol ||
                (std::fabs(p.x - mesh.nodes[roller].x) <= tol && p.y < mesh.nodes[roller].y))
                roller = k;
        }
    }
    return {pin, roller};
}

} // namespace

FeModel::FeModel(const Mesh& mesh, const FemParams& params) : params_(params)
{
    params_.validate();
    if (mesh.nodes.size() < 2 || mesh.edges.empty()) throw ValidationError("mesh needs at least one edge");
    if (!is_connected(mesh)) throw ValidationError("mesh graph is not connected");

    actuator_ = BeamConstants::from(params_.material, params_.actuator);
    arm_ = BeamConstants::from(params_.material, params_.arm);

    vertex_count_ = mesh.nodes.size();
    edge_count_ = mesh.edges.size();
    positions_ = mesh.nodes;

    const int r = params_.refinement;
    const double f = params_.arm_fraction;
    // Segment boundaries along the edge, as fractions of its length.
    const std::array<double, 4> cuts{0.0, f, 1.0 - f, 1.0};
    const std::array<SectionRole, 3> roles{SectionRole::flexure_arm, SectionRole::actuator, SectionRole::flexure_arm};

    elements_.reserve(mesh.edges.size() * 3 * static_cast<std::size_t>(r));
    positions_.reserve(vertex_count_ + mesh.edges.size() * (3 * static_cast<std::size_t>(r) - 1));
    for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
        const MeshEdge& edge = mesh.edges[e];
        const Vec2 a = mesh.nodes[edge.a];
        const Vec2 d = mesh.nodes[edge.b] - a;
        const double len = norm(d);
        const double angle = std::atan2(d.y, d.x);

        std::size_t prev = edge.a;
        double prev_t = 0.0;
        for (std::size_t seg = 0; seg < 3; ++seg) {
            for (int k = 1; k <= r; ++k) {
                const double t = cuts[seg] + (cuts[seg + 1] - cuts[seg]) * k / r;
                std::size_t next;
                if (seg == 2 && k == r) {
                    next = edge.b;
                } else {
                    next = positions_.size();
                    positions_.push_back(a + d * t);
                }
                elements_.push_back({prev, next, (t - prev_t) * len, angle, roles[seg], e});
                prev = next;
                prev_t = t;
            }
        }
    }

    std::tie(pinned_, roller_) = pick_supports(mesh);
    // A u_y roller straight above the pin would leave rotation about the pin free.
    const Vec2 span = mesh.nodes[roller_] - mesh.nodes[pinned_];
    roller_along_x_ = std::fabs(span.x) < std::fabs(span.y);
}

std::array<std::size_t, 3> FeModel::constrained_dofs() const
{
    return {3 * pinned_, 3 * pinned_ + 1, 3 * roller_ + (roller_along_x_ ? 0 : 1)};
}

const BeamConstants& FeModel::constants(SectionRole role) const
{
    return role == SectionRole::actuator ? actuator_ : arm_;
}

std::vector<double> FeModel::prescribed_strains(std::span<const std::size_t> on_edges, double eps_a) const
{
    std::vector<char> on(edge_count_, 0);
    for (std::size_t e : on_edges) {
        if (e >= edge_count_) throw ValidationError("actuated edge index out of range");
        on[e] = 1;
    }
    const double segment_strain = eps_a / (1.0 - 2.0 * params_.arm_fraction);
    std::vector<double> strains(elements_.size(), 0.0);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        const BeamElement& el = elements_[k];
        if (el.role == SectionRole::actuator && on[el.edge]) strains[k] = segment_strain;
    }
    return strains;
}

Eigen::VectorXd FeModel::load_vector(std::span<const double> prescribed) const
{
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dof_count()));
    for (std::size_t k = 0; k < elements_.size(); ++k) {
        if (prescribed[k] == 0.0) continue;
        const BeamElement& el = elements_[k];
        const Vector6 fe = equivalent_actuation_loads(constants(el.role), el.angle, prescribed[k]);
        for (int i = 0; i < 3; ++i) {
            f[static_cast<Eigen::Index>(3 * el.node_i) + i] += fe[i];
            f[static_cast<Eigen::Index>(3 * el.node_j) + i] += fe[i + 3];
        }
    }
    return f;
}

Eigen::SparseMatrix<double> FeModel::global_stiffness() const
{
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(elements_.size() * 36);
    for (const BeamElement& el : elements_) {
        const Matrix6 k = element_stiffness(constants(el.role), el.length, el.angle);
        const std::array<std::size_t, 6> dofs{3 * el.node_i, 3 * el.node_i + 1, 3 * el.node_i + 2,
                                              3 * el.node_j, 3 * el.node_j + 1, 3 * el.node_j + 2};
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                trips.emplace_back(static_cast<int>(dofs[static_cast<std::size_t>(i)]),
                                   static_cast<int>(dofs[static_cast<std::size_t>(j)]), k(i, j));
    }
    const auto n = static_cast<Eigen::Index>(dof_count());
    Eigen::SparseMatrix<double> K(n, n);
    K.setFromTriplets(trips.begin(), trips.end());
    return K;
}

struct ActuationSolver::Factorization {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

ActuationSolver::ActuationSolver(FeModel model) : model_(std::move(model)), factor_(std::make_unique<Factorization>())
{
    stiffness_ = model_.global_stiffness();

    const std::size_t ndof = model_.dof_count();
    std::vector<char> fixed(ndof, 0);
    for (std::size_t d : model_.constrained_dofs()) fixed[d] = 1;
    free_index_.resize(ndof);
    Eigen::Index nfree = 0;
    for (std::size_t d = 0; d < ndof; ++d) free_index_[d] = fixed[d] ? -1 : nfree++;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(stiffness_.nonZeros()));
    for (Eigen::Index col = 0; col < stiffness_.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness_, col); it; ++it) {
            const Eigen::Index r = free_index_[static_cast<std::size_t>(it.row())];
            const Eigen::Index c = free_index_[static_cast<std::size_t>(it.col())];
            if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
        }
    }
    Eigen::SparseMatrix<double> reduced(nfree, nfree);
    reduced.setFromTriplets(trips.begin(), trips.end());

    factor_->ldlt.compute(reduced);
    if (factor_->ldlt.info() != Eigen::Success)
        throw SolverError("stiffness factorisation failed (" + std::to_string(nfree) + " free dofs)");
    const Eigen::VectorXd diag = factor_->ldlt.vectorD();
    const double dmax = diag.cwiseAbs().maxCoeff();
    if (diag.minCoeff() <= 1e-14 * dmax)
        throw SolverError("constrained stiffness is not positive definite: the model has a zero-energy mode");
}

ActuationSolver::~ActuationSolver() = default;
ActuationSolver::ActuationSolver(ActuationSolver&&) noexcept = default;
ActuationSolver& ActuationSolver::operator=(ActuationSolver&&) noexcept = default;

SolveResult ActuationSolver::solve(std::span<const std::size_t> on_edges, double eps_a) const
{
    SolveResult res;
    res.prescribed = model_.prescribed_strains(on_edges, eps_a);
    res.loads = model_.load_vector(res.prescribed);

    const auto ndof = static_cast<Eigen::Index>(model_.dof_count());
    const Eigen::Index nfree = factor_->ldlt.rows();
    Eigen::VectorXd f_free(nfree);
    for (Eigen::Index d = 0; d < ndof; ++d) {
        const Eigen::Index idx = free_index_[static_cast<std::size_t>(d)];
        if (idx >= 0) f_free[idx] = res.loads[d];
    }

    res.u = Eigen::VectorXd::Zero(ndof);
    if (f_free.squaredNorm() > 0.0) {
        const Eigen::VectorXd u_free = factor_->ldlt.solve(f_free);
        if (factor_->ldlt.info() != Eigen::Success) throw SolverError("back substitution failed");
        for (Eigen::Index d = 0; d < ndof; ++d) {
            const Eigen::Index idx = free_index_[static_cast<std::size_t>(d)];
            if (idx >= 0) res.u[d] = u_free[idx];
        }
    }

    const Eigen::VectorXd r = stiffness_ * res.u - res.loads;
    double rfree = 0.0;
    double ffree = 0.0;
    res.reactions = Eigen::VectorXd::Zero(ndof);
    for (Eigen::Index d = 0; d < ndof; ++d) {
        if (free_index_[static_cast<std::size_t>(d)] >= 0) {
            rfree += r[d] * r[d];
            ffree += res.loads[d] * res.loads[d];
        } else {
            res.reactions[d] = r[d];
        }
    }
    res.residual_norm = ffree > 0.0 ? std::sqrt(rfree / ffree) : std::sqrt(rfree);

    res.forces.reserve(model_.elements().size());
    for (std::size_t k = 0; k < model_.elements().size(); ++k) {
        const BeamElement& el = model_.elements()[k];
        Vector6 q;
        q << res.u.segment<3>(static_cast<Eigen::Index>(3 * el.node_i)),
            res.u.segment<3>(static_cast<Eigen::Index>(3 * el.node_j));
        Vector6 ql = rotation_to_local(el.angle) * q;
        ql[3] -= res.prescribed[k] * el.length;
        const Vector6 fl = local_element_stiffness(model_.constants(el.role), el.length) * ql;
        res.forces.push_back({fl[3], fl[4], fl[2], fl[5]});
    }

    res.vertex_positions_deformed.reserve(model_.vertex_count());
    for (std::size_t v = 0; v < model_.vertex_count(); ++v) {
        const auto d = res.displacement(v);
        res.vertex_positions_deformed.push_back(model_.node_positions()[v] + Vec2{d[0], d[1]});
    }

    res.strain_energy = elastic_strain_energy(res, model_);
    return res;
}

SolveResult ActuationSolver::solve(const Mesh& mesh, const ActuationMode& mode) const
{
    if (mesh.edges.size() != model_.edge_count()) throw ValidationError("mesh does not match the solver model");
    return solve(edges_for_mode(mesh, mode), model_.params().eps_a);
}

SolveResult assemble_and_solve(const Mesh& mesh, const ActuationMode& mode, const FemParams& params)
{
    const std::vector<std::size_t> on = edges_for_mode(mesh, mode);
    ActuationSolver solver(FeModel(mesh, params));
    return solver.solve(on, params.eps_a);
}

double elastic_strain_energy(const SolveResult& result, const FeModel& model)
{
    double energy = 0.0;
    for (std::size_t k = 0; k < model.elements().size(); ++k) {
        const BeamElement& el = model.elements()[k];
        Vector6 q;
        q << result.u.segment<3>(static_cast<Eigen::Index>(3 * el.node_i)),
            result.u.segment<3>(static_cast<Eigen::Index>(3 * el.node_j));
        Vector6 ql = rotation_to_local(el.angle) * q;
        ql[3] -= result.prescribed[k] * el.length;
        energy += element_energy(model.constants(el.role), el.length, ql);
    }
    return energy;
}

double strain_energy_from_work(const SolveResult& result, const FeModel& model)
{
    double free_energy = 0.0;
    for (std::size_t k = 0; k < model.elements().size(); ++k) {
        const BeamElement& el = model.elements()[k];
        const BeamConstants& c = model.constants(el.role);
        free_energy += 0.5 * c.E * c.A * el.length * result.prescribed[k] * result.prescribed[k];
    }
    return free_energy - 0.5 * result.u.dot(result.loads);
}

} // namespace macro
