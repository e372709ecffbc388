#include "qlcod/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/SVD>

#include "qlcod/error.hpp"

namespace qlcod {

using linalg::Complex;
using linalg::DenseMatrix;
using linalg::Index;
using linalg::SparseMatrix;
using linalg::Vector;

namespace {

constexpr Complex kI{0.0, 1.0};

using Triplets = std::vector<Eigen::Triplet<Complex>>;

void drop_exact_zeros(SparseMatrix& m) {
  m.prune([](Index, Index, const Complex& v) { return v != Complex(0.0); });
  m.makeCompressed();
}

// Hilbert-space index of the swapped basis state |n2, n1>.
Index swapped(Index i, int n) { return (i % n) * n + i / n; }

int total_parity(Index i, const FockSpace& s) {
  if (s.n_sites() == 1) return static_cast<int>(i % 2);
  return static_cast<int>((i / s.n_max() + i % s.n_max()) % 2);
}

bool respects_parity(const SparseMatrix& l, const FockSpace& s) {
  const Index d = s.dim();
  for (Index c = 0; c < l.outerSize(); ++c) {
    const int pc = (total_parity(c % d, s) + total_parity(c / d, s)) % 2;
    for (SparseMatrix::InnerIterator it(l, c); it; ++it) {
      const Index r = it.row();
      if ((total_parity(r % d, s) + total_parity(r / d, s)) % 2 != pc) return false;
    }
  }
  return true;
}

Index vec_swapped(Index r, const FockSpace& s) {
  const Index d = s.dim();
  return swapped(r / d, s.n_max()) * d + swapped(r % d, s.n_max());
}

bool respects_exchange(const SparseMatrix& l, const FockSpace& s) {
  if (s.n_sites() != 2) return false;
  Triplets t;
  t.reserve(static_cast<std::size_t>(l.nonZeros()));
  double scale = 0.0;
  for (Index c = 0; c < l.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(l, c); it; ++it) {
      t.emplace_back(static_cast<int>(vec_swapped(it.row(), s)), static_cast<int>(vec_swapped(c, s)),
                     it.value());
      scale = std::max(scale, std::abs(it.value()));
    }
  }
  SparseMatrix permuted(l.rows(), l.cols());
  permuted.setFromTriplets(t.begin(), t.end());
  const SparseMatrix diff = l - permuted;
  for (Index c = 0; c < diff.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(diff, c); it; ++it) {
      if (std::abs(it.value()) > 1e-13 * std::max(scale, 1.0)) return false;
    }
  }
  return true;
}

DenseMatrix unvec(const Vector& v, Index d) { return Eigen::Map<const DenseMatrix>(v.data(), d, d); }

Vector vec(const DenseMatrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(DenseMatrix matrix, FockSpace space)
    : matrix_(std::move(matrix)), space_(space) {
  if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim()) {
    throw Error(ErrorCode::InvalidArgument, "DensityMatrix: matrix dims do not match the Fock space");
  }
}

DensityMatrix DensityMatrix::vacuum(const FockSpace& space) {
  DenseMatrix m = DenseMatrix::Zero(space.dim(), space.dim());
  m(0, 0) = 1.0;
  return {std::move(m), space};
}

DensityMatrix DensityMatrix::pure(const Vector& psi, const FockSpace& space) {
  if (psi.size() != space.dim()) {
    throw Error(ErrorCode::InvalidArgument, "DensityMatrix::pure: state dimension mismatch");
  }
  const Vector n = psi / psi.norm();
  return {n * n.adjoint(), space};
}

double DensityMatrix::min_eigenvalue() const { return linalg::hermitian_eigenvalues(matrix_, 1e-8)(0); }

void DensityMatrix::validate(double tolerance) const {
  const double asym = linalg::max_asymmetry(matrix_);
  const Complex tr = matrix_.trace();
  std::ostringstream os;
  if (!(asym <= tolerance)) {
    os << "density matrix not Hermitian (asymmetry " << asym << ")";
  } else if (!(std::abs(tr - Complex(1.0)) <= tolerance)) {
    os << "density matrix trace " << tr << " differs from 1";
  } else {
    const double lo = linalg::hermitian_eigenvalues(matrix_, tolerance)(0);
    if (!(lo >= -tolerance)) os << "density matrix has negative eigenvalue " << lo;
  }
  if (!os.str().empty()) throw Error(ErrorCode::InvalidArgument, os.str());
}

Index Superoperator::hilbert_dim() const {
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
  return d;
}

// ---------------------------------------------------------------------------

SparseMatrix build_hamiltonian(const SystemParams& p, const FockSpace& space) {
  p.validate();
  if (space.n_sites() != 2) throw Error(ErrorCode::InvalidArgument, "build_hamiltonian: needs two sites");
  const SparseMatrix a = annihilation(space);
  const SparseMatrix a1 = embed(a, 1, space);
  const SparseMatrix a2 = embed(a, 2, space);
  const SparseMatrix a1d = a1.adjoint();
  const SparseMatrix a2d = a2.adjoint();

  const SparseMatrix n1 = a1d * a1;
  const SparseMatrix n2 = a2d * a2;
  const SparseMatrix a1d2 = a1d * a1d;
  const SparseMatrix a2d2 = a2d * a2d;
  const SparseMatrix a12 = a1 * a1;
  const SparseMatrix a22 = a2 * a2;

  const SparseMatrix h0 = p.omega * (n1 + n2) + (0.5 * p.kerr) * (SparseMatrix(a1d2 * a12) + SparseMatrix(a2d2 * a22));
  const SparseMatrix pair_create = a1d * a2d;
  const SparseMatrix pair_destroy = a1 * a2;
  const SparseMatrix hc = (-kI * p.epsilon) * (pair_create - pair_destroy) +
                    (0.5 * kI * p.epsilon) * (a1d2 + a2d2 - a12 - a22);
  SparseMatrix h = h0 + hc;
  drop_exact_zeros(h);
  return h;
}

std::vector<Dissipator> collapse_operators(const SystemParams& p, const FockSpace& space) {
  p.validate();
  const SparseMatrix a = annihilation(space);
  const SparseMatrix a1 = embed(a, 1, space);
  const SparseMatrix a2 = embed(a, 2, space);
  return {
      {p.k1, SparseMatrix(a1.adjoint())},
      {p.k1, SparseMatrix(a2.adjoint())},
      {p.k2, SparseMatrix(a1 * a1)},
      {p.k2, SparseMatrix(a2 * a2)},
  };
}

Superoperator lindblad_superoperator(const SparseMatrix& hamiltonian, std::span<const Dissipator> dissipators,
                                     std::optional<FockSpace> space) {
  const Index d = hamiltonian.rows();
  if (hamiltonian.cols() != d) throw Error(ErrorCode::InvalidArgument, "lindblad_superoperator: H not square");
  if (space && space->dim() != d) {
    throw Error(ErrorCode::InvalidArgument, "lindblad_superoperator: H does not match the Fock space");
  }
  const SparseMatrix id = linalg::sparse_identity(d);
  const SparseMatrix ht = hamiltonian.transpose();
  SparseMatrix l = (-kI) * (linalg::kron(id, hamiltonian) - linalg::kron(ht, id));
  for (const auto& [rate, c] : dissipators) {
    if (c.rows() != d || c.cols() != d) {
      throw Error(ErrorCode::InvalidArgument, "lindblad_superoperator: jump operator dimension mismatch");
    }
    const SparseMatrix cdc = c.adjoint() * c;
    const SparseMatrix cdc_t = cdc.transpose();
    const SparseMatrix c_bar = c.conjugate();
    l += rate * (linalg::kron(c_bar, c) - 0.5 * (linalg::kron(id, cdc) + linalg::kron(cdc_t, id)));
  }
  drop_exact_zeros(l);
  return {std::move(l), space};
}

Superoperator build_liouvillian(const SystemParams& p, const FockSpace& space, std::size_t memory_budget_bytes) {
  p.validate();
  // Each superoperator row carries roughly 2 * nnz_per_row(H) + 8 entries.
  const double d2 = static_cast<double>(space.dim()) * static_cast<double>(space.dim());
  const double estimate = d2 * 40.0 * (sizeof(Complex) + sizeof(int));
  if (estimate > static_cast<double>(memory_budget_bytes)) {
    std::ostringstream os;
    os << "build_liouvillian: n_max=" << space.n_max() << " needs about " << estimate / (1 << 20)
       << " MiB, above the budget of " << memory_budget_bytes / (1 << 20) << " MiB";
    throw Error(ErrorCode::DimensionLimit, os.str());
  }
  const SparseMatrix h = build_hamiltonian(p, space);
  const auto cs = collapse_operators(p, space);
  return lindblad_superoperator(h, cs, space);
}

DenseMatrix apply(const Superoperator& l, const DenseMatrix& rho) {
  const Index d = rho.rows();
  if (rho.cols() != d || d * d != l.matrix.cols()) {
    throw Error(ErrorCode::InvalidArgument, "apply: density matrix does not match the superoperator");
  }
  const Vector out = l.matrix * vec(rho);
  return unvec(out, d);
}

DenseMatrix apply(const Superoperator& l, const DensityMatrix& rho) { return apply(l, rho.matrix()); }

// ---------------------------------------------------------------------------

SteadyState steady_state(const Superoperator& l, const SteadyStateOptions& options) {
  const Index n = l.matrix.rows();
  const Index d = l.hilbert_dim();
  if (l.matrix.cols() != n || d * d != n) {
    throw Error(ErrorCode::InvalidArgument, "steady_state: superoperator is not d^2 x d^2");
  }
  const FockSpace space = l.space ? *l.space : FockSpace(static_cast<int>(std::max<Index>(d, 2)), 1);
  const bool have_space = l.space.has_value() && l.space->dim() == d;

  const bool parity = options.use_symmetries && have_space && respects_parity(l.matrix, space);
  const bool exchange = options.use_symmetries && have_space && respects_exchange(l.matrix, space);

  // Column index in the reduced system for every vec index; -1 outside the sector.
  std::vector<Index> reduced(static_cast<std::size_t>(n), -1);
  Index m = 0;
  for (Index r = 0; r < n; ++r) {
    if (parity && (total_parity(r % d, space) + total_parity(r / d, space)) % 2 != 0) continue;
    const Index partner = exchange ? vec_swapped(r, space) : r;
    if (partner < r) {
      reduced[static_cast<std::size_t>(r)] = reduced[static_cast<std::size_t>(partner)];
    } else {
      reduced[static_cast<std::size_t>(r)] = m++;
    }
  }

  // rho_00 sits at vec index 0 and is its own exchange partner.
  const Index trace_row = reduced[0];
  Triplets t;
  t.reserve(static_cast<std::size_t>(l.matrix.nonZeros()) / (exchange ? 2 : 1) + static_cast<std::size_t>(d));
  for (Index c = 0; c < l.matrix.outerSize(); ++c) {
    const Index rc = reduced[static_cast<std::size_t>(c)];
    if (rc < 0) continue;
    for (SparseMatrix::InnerIterator it(l.matrix, c); it; ++it) {
      const Index r = it.row();
      const Index rr = reduced[static_cast<std::size_t>(r)];
      if (rr < 0 || rr == trace_row) continue;
      if (exchange && vec_swapped(r, space) < r) continue;  // one equation per orbit
      t.emplace_back(static_cast<int>(rr), static_cast<int>(rc), it.value());
    }
  }
  for (Index i = 0; i < d; ++i) {
    t.emplace_back(static_cast<int>(trace_row), static_cast<int>(reduced[static_cast<std::size_t>(i * d + i)]),
                   Complex(1.0));
  }
  Vector rhs = Vector::Zero(m);
  rhs(trace_row) = 1.0;

  Vector y;
  try {
    if (m < linalg::kDenseSolveThreshold) {
      DenseMatrix a = DenseMatrix::Zero(m, m);
      for (const auto& e : t) a(e.row(), e.col()) += e.value();
      y = linalg::solve(a, rhs);
    } else {
      SparseMatrix a(m, m);
      a.setFromTriplets(t.begin(), t.end());
      y = linalg::solve(a, rhs);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Singular) {
      throw Error(ErrorCode::Singular,
                  std::string("steady_state: steady state is not unique or the system is degenerate (") +
                      e.what() + "); fall back to long-time evolve()");
    }
    throw;
  }

  Vector x = Vector::Zero(n);
  for (Index r = 0; r < n; ++r) {
    const Index rr = reduced[static_cast<std::size_t>(r)];
    if (rr >= 0) x(r) = y(rr);
  }
  DenseMatrix rho = unvec(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();

  const double residual = (l.matrix * vec(rho)).norm();
  if (!(residual <= options.residual_tolerance)) {
    std::ostringstream os;
    os << "steady_state: residual " << residual << " above tolerance " << options.residual_tolerance;
    throw Error(ErrorCode::Computation, os.str());
  }
  return {DensityMatrix(std::move(rho), space), residual, m, parity, exchange};
}

// ---------------------------------------------------------------------------

double stability_bound(const Superoperator& l) {
  const double norm = linalg::inf_norm(l.matrix);
  return norm > 0.0 ? 0.5 / norm : std::numeric_limits<double>::infinity();
}

Trajectory evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final, double dt,
                  std::size_t record_every) {
  const Index d = rho0.space().dim();
  if (d * d != l.matrix.rows()) {
    throw Error(ErrorCode::InvalidArgument, "evolve: state does not match the superoperator");
  }
  if (!(dt > 0.0) || !(t_final >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "evolve: need dt > 0 and t_final >= 0");
  }
  const double bound = stability_bound(l);
  if (dt > bound) {
    std::ostringstream os;
    os << "evolve: dt=" << dt << " exceeds the RK4 stability bound; use dt <= " << bound;
    throw Error(ErrorCode::StabilityBound, os.str());
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double h = steps ? t_final / static_cast<double>(steps) : 0.0;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(rho0);
  Vector x = vec(rho0.matrix());
  const Complex trace0 = rho0.matrix().trace();
  Vector k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size());
  for (std::size_t s = 1; s <= steps; ++s) {
    k1.noalias() = l.matrix * x;
    k2.noalias() = l.matrix * (x + 0.5 * h * k1);
    k3.noalias() = l.matrix * (x + 0.5 * h * k2);
    k4.noalias() = l.matrix * (x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) throw Error(ErrorCode::Divergence, "evolve: state became non-finite");
    if ((record_every && s % record_every == 0) || s == steps) {
      traj.times.push_back(static_cast<double>(s) * h);
      traj.states.emplace_back(unvec(x, d), rho0.space());
    }
  }
  traj.trace_drift = std::abs(traj.states.back().matrix().trace() - trace0);
  if (traj.trace_drift > 1e-7) {
    std::ostringstream os;
    os << "evolve: trace drifted by " << traj.trace_drift;
    throw Error(ErrorCode::Computation, os.str());
  }
  return traj;
}

SpectralGap spectral_gap(const Superoperator& l) {
  if (l.hilbert_dim() > 50) {
    throw Error(ErrorCode::DimensionLimit, "spectral_gap: dense SVD limited to Hilbert dimension 50");
  }
  const DenseMatrix dense(l.matrix);
  Eigen::BDCSVD<DenseMatrix> svd(dense);
  const auto& sv = svd.singularValues();
  const Index k = sv.size();
  return {sv(k - 1), k > 1 ? sv(k - 2) : 0.0};
}

TruncationCheck converge_truncation(const SystemParams& p, int n_start,
                                    const std::function<double(const DensityMatrix&)>& observable, int step,
                                    double rel_tol, int n_cap) {
  if (step < 1 || n_start < 2) throw Error(ErrorCode::InvalidArgument, "converge_truncation: bad n_start or step");
  const auto value_at = [&](int n) {
    const FockSpace space(n);
    return observable(steady_state(build_liouvillian(p, space)).rho);
  };
  int n = n_start;
  double v = value_at(n);
  while (true) {
    const double next = value_at(n + step);
    const double change = std::abs(next - v) / std::max(std::abs(next), 1e-12);
    if (change < rel_tol) return {n, v, next, change, true};
    if (n + 2 * step > n_cap) return {n + step, next, v, change, false};
    n += step;
    v = next;
  }
}

}  // namespace qlcod
