#include <Eigen/Dense>
#include <stdexcept>

#include "roompass/eigensolve.hpp"

namespace roompass {

Spectrum dense_eig_oracle(const SparseSymMatrix& S, const SparseSymMatrix& B,
                          double merge_tol) {
  if (S.n != B.n) throw std::invalid_argument("dense_eig_oracle: dimension mismatch");
  if (S.n > 2000)
    throw std::invalid_argument("dense_eig_oracle: dimension budget (2000) exceeded");

  auto densify = [](const SparseSymMatrix& a) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.n, a.n);
    for (int i = 0; i < a.n; ++i) {
      for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
        const int j = a.cols[p];
        d(i, j) = a.vals[p];
        d(j, i) = a.vals[p];
      }
    }
    return d;
  };

  const Eigen::MatrixXd sd = densify(S);
  const Eigen::MatrixXd bd = densify(B);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sd, bd,
                                                                   Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense_eig_oracle: dense reduction failed");

  std::vector<double> vals(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + S.n);
  return Spectrum::from_values(std::move(vals), merge_tol);
}

}  // namespace roompass
