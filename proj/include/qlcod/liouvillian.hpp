#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qlcod/fock.hpp"
#include "qlcod/linalg.hpp"
#include "qlcod/params.hpp"

namespace qlcod {

/// Density matrix on a FockSpace. Construction does not validate; call
/// validate() where the physical invariants must hold.
class DensityMatrix {
 public:
  DensityMatrix(linalg::DenseMatrix matrix, FockSpace space);

  static DensityMatrix vacuum(const FockSpace& space);
  static DensityMatrix pure(const linalg::Vector& psi, const FockSpace& space);

  const linalg::DenseMatrix& matrix() const noexcept { return matrix_; }
  const FockSpace& space() const noexcept { return space_; }

  /// Throws Error(InvalidArgument) unless Hermitian, unit trace and positive
  /// semidefinite, each within `tolerance`.
  void validate(double tolerance = 1e-8) const;

  double min_eigenvalue() const;

 private:
  linalg::DenseMatrix matrix_;
  FockSpace space_;
};

/// Linear map on column-stacked density matrices, vec(rho)[j*d + i] = rho(i, j).
struct Superoperator {
  linalg::SparseMatrix matrix;
  std::optional<FockSpace> space;  // enables symmetry reduction in steady_state()

  linalg::Index hilbert_dim() const;
};

struct Dissipator {
  double rate;
  linalg::SparseMatrix op;
};

/// H0 + Hc for the coupled pair.
linalg::SparseMatrix build_hamiltonian(const SystemParams& p, const FockSpace& space);

/// Jump operators with their rates: (k1, a1^dagger), (k1, a2^dagger), (k2, a1^2), (k2, a2^2).
std::vector<Dissipator> collapse_operators(const SystemParams& p, const FockSpace& space);

/// L = -i(I (x) H - H^T (x) I) + sum_c rate * [conj(c) (x) c - 1/2 (I (x) c^dagger c + (c^dagger c)^T (x) I)]
Superoperator lindblad_superoperator(const linalg::SparseMatrix& hamiltonian,
                                     std::span<const Dissipator> dissipators,
                                     std::optional<FockSpace> space = std::nullopt);

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{3} << 30;

Superoperator build_liouvillian(const SystemParams& p, const FockSpace& space,
                                std::size_t memory_budget_bytes = kDefaultMemoryBudget);

/// unvec(L vec(rho)), the (unnormalized) time derivative.
linalg::DenseMatrix apply(const Superoperator& l, const linalg::DenseMatrix& rho);
linalg::DenseMatrix apply(const Superoperator& l, const DensityMatrix& rho);

struct SteadyStateOptions {
  bool use_symmetries = true;
  double residual_tolerance = 1e-8;
};

struct SteadyState {
  DensityMatrix rho;
  double residual;              // ||L vec(rho)||_2
  linalg::Index system_size;    // unknowns in the solved linear system
  bool parity_reduced;
  bool exchange_reduced;
};

/// Solves L rho = 0 with Tr rho = 1 by replacing the rho_00 equation with the
/// trace row. When the superoperator carries its FockSpace, the solve is
/// restricted to the total-parity sector containing the diagonal and to
/// site-exchange-symmetric matrices, each only after verifying that L
/// respects the symmetry. Throws Error(Singular) if the steady state is not
/// unique.
SteadyState steady_state(const Superoperator& l, const SteadyStateOptions& options = {});

/// 0.5 / ||L||_inf, the largest accepted RK4 step.
double stability_bound(const Superoperator& l);

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;  // always ends with the state at t_final
  double trace_drift = 0.0;
};

/// Fixed-step RK4 for vec(rho)' = L vec(rho). `record_every` > 0 stores every
/// n-th step in addition to the initial and final states.
Trajectory evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt,
                  std::size_t record_every = 0);

/// Two smallest singular values of L (dense SVD; rejects hilbert dims > 50).
struct SpectralGap {
  double smallest;
  double second_smallest;
};
SpectralGap spectral_gap(const Superoperator& l);

struct TruncationCheck {
  int n_max;             // accepted truncation
  double value;          // observable at n_max
  double check_value;    // observable at n_max + step
  double relative_change;
  bool converged;        // false if n_cap was reached first
};

/// Recomputes `observable` of the steady state at n and n + step, raising n
/// by `step` until the relative change drops below `rel_tol` or n + step
/// exceeds `n_cap`.
TruncationCheck converge_truncation(const SystemParams& p, int n_start,
                                    const std::function<double(const DensityMatrix&)>& observable,
                                    int step = 4, double rel_tol = 1e-3, int n_cap = 32);

}  // namespace qlcod
