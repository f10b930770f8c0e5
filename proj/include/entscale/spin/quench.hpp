#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "entscale/parallel.hpp"
#include "entscale/spin/schmidt.hpp"

namespace entscale::spin {

/// e^{itH}|0> for a fixed chain hamiltonian. The dense path diagonalizes once
/// and is reused across times; larger chains use Krylov steps on the sparse operator.
class QuenchEvolver {
 public:
  explicit QuenchEvolver(const LocalHamiltonian& h, linalg::EvolveMethod method = linalg::EvolveMethod::automatic)
      : n_(h.sites()), sparse_(h.sparse()) {
    if (method == linalg::EvolveMethod::automatic)
      method = h.dim() <= linalg::kDenseEvolveMaxDim ? linalg::EvolveMethod::dense : linalg::EvolveMethod::krylov;
    if (method == linalg::EvolveMethod::dense)
      dense_ = std::make_shared<const linalg::DenseEvolver>(linalg::HermitianMatrix(CMatrix(sparse_)));
  }

  bool dense() const noexcept { return dense_ != nullptr; }

  StateVector evolve(double t, const StateVector& start) const {
    if (!std::isfinite(t)) throw PreconditionError("evolve: time must be finite");
    if (start.sites() != n_) throw DimensionMismatch("evolve: state and hamiltonian disagree on n");
    CVector v = dense_ ? dense_->apply(t, start.amplitudes())
                       : linalg::evolve_action(sparse_, t, start.amplitudes(), linalg::EvolveMethod::krylov);
    return StateVector(n_, std::move(v));
  }

  StateVector evolve(double t) const { return evolve(t, StateVector::all_up(n_)); }

 private:
  int n_;
  SparseCMatrix sparse_;
  std::shared_ptr<const linalg::DenseEvolver> dense_;
};

/// |psi(t)> = e^{itH}|0>.
inline StateVector evolve(const LocalHamiltonian& h, double t,
                          linalg::EvolveMethod method = linalg::EvolveMethod::automatic) {
  if (!std::isfinite(t)) throw PreconditionError("evolve: time must be finite");
  if (method == linalg::EvolveMethod::automatic && h.dim() <= linalg::kDenseEvolveMaxDim)
    return QuenchEvolver(h, linalg::EvolveMethod::dense).evolve(t);
  const StateVector up = StateVector::all_up(h.sites());
  CVector v = linalg::evolve_action(h.sparse(), t, up.amplitudes(),
                                    method == linalg::EvolveMethod::automatic ? linalg::EvolveMethod::krylov : method);
  return StateVector(h.sites(), std::move(v));
}

struct EntropyRow {
  double t = 0.0;
  int m = 0;
  double entropy = 0.0;  // bits
  double s_max = 0.0;
  int eff_rank = 0;
};

struct EntropyCurve {
  int sites = 0;
  std::vector<EntropyRow> rows;  // (t, m) lexical order
};

/// Block entropy for every (t, m); one evolution per t.
inline EntropyCurve entropy_profile(const LocalHamiltonian& h, std::vector<double> t_grid, std::vector<int> m_list) {
  if (t_grid.empty() || m_list.empty()) throw PreconditionError("entropy_profile: grids must be nonempty");
  std::sort(t_grid.begin(), t_grid.end());
  std::sort(m_list.begin(), m_list.end());
  for (int m : m_list) CutPartition(h.sites(), m);
  const QuenchEvolver evolver(h);
  auto per_t = parallel_map(t_grid.size(), [&](std::size_t i) {
    const StateVector psi = evolver.evolve(t_grid[i]);
    std::vector<EntropyRow> rows;
    for (int m : m_list) {
      const SchmidtSpectrum s = schmidt_spectrum(psi, CutPartition(h.sites(), m));
      rows.push_back({t_grid[i], m, block_entropy(s), s.largest(), s.effective_rank()});
    }
    return rows;
  });
  EntropyCurve curve{h.sites(), {}};
  for (auto& rows : per_t) curve.rows.insert(curve.rows.end(), rows.begin(), rows.end());
  return curve;
}

}  // namespace entscale::spin
