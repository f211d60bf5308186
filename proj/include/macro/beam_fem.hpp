#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "macro/actuation.hpp"
#include "macro/geometry.hpp"
#include "macro/tiling.hpp"

namespace macro {

struct Material {
    double youngs_modulus = 2000.0;  // MPa
    double poissons_ratio = 0.3;

    double shear_modulus() const { return youngs_modulus / (2.0 * (1.0 + poissons_ratio)); }
    void validate() const;
};

/// Rectangular cross-section; bending is about the out-of-plane axis.
struct Section {
    double in_plane_width = 5.0;      // mm
    double out_of_plane_depth = 5.0;  // mm

    void validate() const;
};

struct SectionProperties {
    double area = 0.0;              // mm^2
    double second_moment = 0.0;     // mm^4
    double shear_correction = 0.0;  // kappa
};

SectionProperties section_properties(const Section& section);

/// Material and section constants of one beam element.
struct BeamConstants {
    double E = 0.0;
    double G = 0.0;
    double A = 0.0;
    double I = 0.0;
    double kappa = 0.0;

    static BeamConstants from(const Material& material, const Section& section);
};

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

/// Maps global end displacements (ux, uy, theta) x 2 onto the element frame.
Matrix6 rotation_to_local(double angle);

/// Two-node Timoshenko beam in its own frame (axial, transverse, rotation per end).
Matrix6 local_element_stiffness(const BeamConstants& c, double length);

/// Timoshenko beam stiffness in the global frame; `angle` in radians from +X.
Matrix6 element_stiffness(const BeamConstants& c, double length, double angle);

/// Nodal forces equivalent to a free axial strain `strain` (initial-strain
/// analogy), global frame. Negative strain pulls the ends together.
Vector6 equivalent_actuation_loads(const BeamConstants& c, double angle, double strain);

struct FemParams {
    Material material;
    Section actuator{5.0, 5.0};
    Section arm{1.0, 5.0};
    double arm_fraction = 0.1;
    double eps_a = -0.05;  // edge strain of an ON actuator cell
    int refinement = 1;    // elements per edge segment

    void validate() const;
};

enum class SectionRole { actuator, flexure_arm };

struct BeamElement {
    std::size_t node_i = 0;
    std::size_t node_j = 0;
    double length = 0.0;
    double angle = 0.0;
    SectionRole role = SectionRole::actuator;
    std::size_t edge = 0;
};

/// Discretised beam model of a mesh: every edge becomes arm - actuator - arm.
/// FE nodes [0, vertex_count) coincide with the mesh vertices.
class FeModel {
public:
    FeModel(const Mesh& mesh, const FemParams& params);

    const std::vector<BeamElement>& elements() const { return elements_; }
    const std::vector<Vec2>& node_positions() const { return positions_; }
    std::size_t node_count() const { return positions_.size(); }
    std::size_t dof_count() const { return 3 * positions_.size(); }
    std::size_t vertex_count() const { return vertex_count_; }
    std::size_t edge_count() const { return edge_count_; }
    const FemParams& params() const { return params_; }

    std::size_t pinned_vertex() const { return pinned_; }
    std::size_t roller_vertex() const { return roller_; }
    /// u_x and u_y of the pinned vertex, u_y of the roller vertex (u_x when
    /// the roller sits more above the pin than beside it).
    std::array<std::size_t, 3> constrained_dofs() const;

    const BeamConstants& constants(SectionRole role) const;

    /// Axial strain prescribed on each element when `on_edges` are actuated.
    /// Actuator segments carry eps_a / (1 - 2 arm_fraction) so that a free
    /// edge shortens by exactly eps_a times its length.
    std::vector<double> prescribed_strains(std::span<const std::size_t> on_edges, double eps_a) const;

    Eigen::VectorXd load_vector(std::span<const double> prescribed) const;
    Eigen::SparseMatrix<double> global_stiffness() const;

private:
    FemParams params_;
    std::vector<Vec2> positions_;
    std::vector<BeamElement> elements_;
    std::size_t vertex_count_ = 0;
    std::size_t edge_count_ = 0;
    std::size_t pinned_ = 0;
    std::size_t roller_ = 0;
    bool roller_along_x_ = false;
    BeamConstants actuator_;
    BeamConstants arm_;
};

struct ElementForces {
    double axial = 0.0;     // N, tension positive
    double shear = 0.0;     // N
    double moment_i = 0.0;  // N mm
    double moment_j = 0.0;  // N mm
};

struct SolveResult {
    Eigen::VectorXd u;                    // (ux, uy, theta) per FE node
    Eigen::VectorXd loads;                // equivalent actuation loads
    Eigen::VectorXd reactions;            // nonzero only at constrained dofs
    std::vector<double> prescribed;       // per-element prescribed strain
    std::vector<ElementForces> forces;    // per element
    std::vector<Vec2> vertex_positions_deformed;
    double strain_energy = 0.0;           // N mm
    double residual_norm = 0.0;           // relative, free dofs

    std::array<double, 3> displacement(std::size_t node) const
    {
        return {u[static_cast<Eigen::Index>(3 * node)], u[static_cast<Eigen::Index>(3 * node + 1)],
                u[static_cast<Eigen::Index>(3 * node + 2)]};
    }
};

/// Factorises the constrained stiffness once and solves any number of
/// actuation load cases against it. solve() is safe to call concurrently.
class ActuationSolver {
public:
    explicit ActuationSolver(FeModel model);
    ~ActuationSolver();
    ActuationSolver(ActuationSolver&&) noexcept;
    ActuationSolver& operator=(ActuationSolver&&) noexcept;

    const FeModel& model() const { return model_; }

    SolveResult solve(std::span<const std::size_t> on_edges, double eps_a) const;
    SolveResult solve(const Mesh& mesh, const ActuationMode& mode) const;

private:
    struct Factorization;
    FeModel model_;
    Eigen::SparseMatrix<double> stiffness_;
    std::vector<Eigen::Index> free_index_;  // -1 for constrained dofs
    std::unique_ptr<Factorization> factor_;
};

SolveResult assemble_and_solve(const Mesh& mesh, const ActuationMode& mode, const FemParams& params);

/// Sum over elements of the energy of the elastic (non-prescribed) part of
/// their end displacements.
double elastic_strain_energy(const SolveResult& result, const FeModel& model);

/// 1/2 sum EA L eps0^2 - 1/2 u.f, which equals the elastic strain energy at equilibrium.
double strain_energy_from_work(const SolveResult& result, const FeModel& model);

} // namespace macro
