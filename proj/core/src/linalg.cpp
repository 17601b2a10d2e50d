#include "depsgld/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "depsgld/error.hpp"

namespace depsgld {

Vector symmetric_eigenvalues(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("symmetric_eigenvalues: matrix is not square");
  if (a.size() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericFailure("symmetric_eigenvalues: eigensolver did not converge");
  }
  return solver.eigenvalues();
}

}  // namespace depsgld
