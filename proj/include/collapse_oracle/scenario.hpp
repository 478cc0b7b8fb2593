#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "collapse_oracle/linalg.hpp"
#include "collapse_oracle/rng.hpp"
#include "collapse_oracle/state.hpp"

namespace collapse_oracle {

/// Collapse projects onto the rays of a basis of the full space.
struct BasisStructure {
    CollapseBasis basis;
};

/// S is entangled with T; collapse projects the S factor onto a basis of S.
/// Experiments act on S only.
struct FactorSBasisStructure {
    int dim_t;
    CollapseBasis basis_s;
};

/// S is entangled with T; collapse projects the T factor onto a basis of T.
/// Experiments act on S only.
struct FactorTBasisStructure {
    int dim_s;
    CollapseBasis basis_t;
};

/// S is entangled with T; collapse projects onto a basis of the joint space.
/// Experiments act on S only.
struct JointBasisStructure {
    int dim_s;
    int dim_t;
    CollapseBasis basis_st;
};

/// Collapse projects onto K < d mutually orthogonal subspaces that sum to
/// the whole space.
struct SubspacesStructure {
    std::vector<ComplexMatrix> projectors;
};

/// Unsharp collapse: positive operators P_k with sum_k P_k^2 = I.
struct UnsharpStructure {
    std::vector<ComplexMatrix> operators;
};

/// Prior collapse probability p plus the structure collapse projects onto.
class CollapseScenario {
  public:
    using Structure = std::variant<BasisStructure, FactorSBasisStructure, FactorTBasisStructure,
                                   JointBasisStructure, SubspacesStructure, UnsharpStructure>;

    static CollapseScenario basis(double p, CollapseBasis b);
    static CollapseScenario factor_s_basis(double p, int dim_t, CollapseBasis basis_s);
    static CollapseScenario factor_t_basis(double p, int dim_s, CollapseBasis basis_t);
    static CollapseScenario joint_basis(double p, int dim_s, int dim_t, CollapseBasis basis_st);
    static CollapseScenario subspaces(double p, std::vector<ComplexMatrix> projectors);
    static CollapseScenario unsharp(double p, std::vector<ComplexMatrix> operators);

    double p() const noexcept { return p_; }

    /// Dimension of the state the scenario acts on (dim_s * dim_t for the
    /// bipartite variants).
    int state_dim() const;

    /// Dimension of the system the discrimination problem lives on (S for
    /// the bipartite variants).
    int system_dim() const;

    const Structure& structure() const noexcept { return structure_; }

    template <typename T>
    const T* get_if() const noexcept {
        return std::get_if<T>(&structure_);
    }

  private:
    CollapseScenario(double p, Structure s) : p_(p), structure_(std::move(s)) {}

    double p_ = 0.0;
    Structure structure_;
};

/// Result of one stochastic collapse event. `branch` is the basis element
/// or subspace index; absent when no collapse occurred (then `state` is the
/// unchanged input).
struct CollapseSampleOutcome {
    StateVector state;
    bool collapsed = false;
    std::optional<int> branch;
};

struct DensityMatrixPair {
    DensityMatrix rho1;  // collapsed branch
    DensityMatrix rho2;  // uncollapsed
};

/// Builds the (rho1, rho2) discrimination pair for a state subject to the
/// scenario's collapse channel. For the bipartite variants both outputs are
/// reduced to S.
DensityMatrixPair apply_collapse_channel(const StateVector& psi, const CollapseScenario& scenario);

/// Draws one collapse event: with probability 1-p the state passes through
/// unchanged, otherwise a branch is selected with its Born weight and the
/// collapsed state is returned. Basis, Subspaces and Unsharp structures only.
CollapseSampleOutcome sample_collapse(const StateVector& psi, const CollapseScenario& scenario,
                                      RngStream& rng);

/// sum_i w_i |psi_i><psi_i| for a discrete ensemble.
DensityMatrix density_from_ensemble(const std::vector<StateVector>& states,
                                    const std::vector<double>& weights);

/// Haar-uniform state on the unit sphere: 2d independent standard normals,
/// normalized.
StateVector sample_uniform_state(int dim, RngStream& rng);

}  // namespace collapse_oracle
