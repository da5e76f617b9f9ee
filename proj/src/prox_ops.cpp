#include "ccs/prox_ops.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace ccs {

namespace {

void check_stack(const MatStack& stack) {
  if (stack.empty()) throw ValidationError("matrix stack: must be non-empty");
  Eigen::Index p = stack[0].rows();
  for (const Matrix& m : stack)
    if (m.rows() != p || m.cols() != p)
      throw DimensionError("matrix stack: all matrices must be square with equal size");
}

}  // namespace

Matrix group_norms_raw(const MatStack& stack) {
  check_stack(stack);
  Eigen::Index p = stack[0].rows();
  Matrix g = Matrix::Zero(p, p);
  for (const Matrix& m : stack) g += m.cwiseProduct(m);
  return g.cwiseSqrt();
}

MatStack group_prox(const MatStack& stack, double t) {
  if (!(t >= 0.0)) throw ValidationError("group_prox: t must be nonnegative");
  Matrix g = group_norms_raw(stack);
  Eigen::Index p = g.rows();
  Matrix scale(p, p);
  for (Eigen::Index u = 0; u < p; ++u) {
    for (Eigen::Index v = 0; v < p; ++v) {
      if (u == v) {
        scale(u, v) = 1.0;
      } else {
        double guv = g(u, v);
        scale(u, v) = guv > t ? 1.0 - t / guv : 0.0;
      }
    }
  }
  MatStack out;
  out.reserve(stack.size());
  for (const Matrix& m : stack) out.push_back(m.cwiseProduct(scale));
  return out;
}

MatStack soft_threshold_prox(const MatStack& stack, double t) {
  if (!(t >= 0.0)) throw ValidationError("soft_threshold_prox: t must be nonnegative");
  check_stack(stack);
  MatStack out;
  out.reserve(stack.size());
  for (const Matrix& m : stack) {
    Matrix r = m;
    Eigen::Index p = m.rows();
    for (Eigen::Index u = 0; u < p; ++u) {
      for (Eigen::Index v = 0; v < p; ++v) {
        if (u == v) continue;
        double a = m(u, v);
        double mag = std::abs(a) - t;
        r(u, v) = mag > 0.0 ? (a > 0.0 ? mag : -mag) : 0.0;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

Matrix logdet_prox(const Matrix& A, double L) {
  if (A.rows() != A.cols()) throw DimensionError("logdet_prox: A must be square");
  if (!(L > 0.0)) throw ValidationError("logdet_prox: L must be positive");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-8)
    throw ValidationError("logdet_prox: A must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(L * A);
  if (eig.info() != Eigen::Success)
    throw Error("logdet_prox: eigendecomposition failed");
  Vector lam = eig.eigenvalues();
  Vector omega(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    omega(i) = (lam(i) + std::sqrt(lam(i) * lam(i) + 4.0 * L)) / (2.0 * L);
  Matrix out = eig.eigenvectors() * omega.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

MatStack moreau_gradient(const MatStack& stack, double lambda, double beta) {
  if (!(lambda > 0.0)) throw ValidationError("moreau_gradient: lambda must be positive");
  if (!(beta > 0.0)) throw ValidationError("moreau_gradient: beta must be positive");
  MatStack prox = group_prox(stack, lambda * beta);
  MatStack out;
  out.reserve(stack.size());
  for (std::size_t k = 0; k < stack.size(); ++k) out.push_back((stack[k] - prox[k]) / beta);
  return out;
}

}  // namespace ccs
