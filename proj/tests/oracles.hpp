#pragma once

// Independent numeric oracles used by the tests. Everything here is written
// from the defining objective or textbook formula, not from the library's
// closed forms, so agreement is evidence rather than tautology.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ccs/rng.hpp"
#include "ccs/types.hpp"

namespace oracles {

// Composite Simpson quadrature; n must be even.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Golden-section minimization of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-12) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - invphi * (b - a);
    d = a + invphi * (b - a);
  }
  return 0.5 * (a + b);
}

// argmin over SPD X of 0.5*L*||X - A||_F^2 - log det X, by projected gradient
// descent with Armijo backtracking from the identity. Steps that leave the PD
// cone are rejected by the line search.
inline ccs::Matrix logdet_prox_gd(const ccs::Matrix& a, double L, int iters = 20000) {
  const int p = static_cast<int>(a.rows());
  ccs::Matrix x = ccs::Matrix::Identity(p, p);
  auto objective = [&](const ccs::Matrix& m, bool& pd) -> double {
    Eigen::LLT<ccs::Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
      pd = false;
      return 0.0;
    }
    pd = true;
    double logdet = 0.0;
    for (int i = 0; i < p; ++i) logdet += std::log(llt.matrixL()(i, i));
    logdet *= 2.0;
    return 0.5 * L * (m - a).squaredNorm() - logdet;
  };
  bool pd = false;
  double fx = objective(x, pd);
  for (int k = 0; k < iters; ++k) {
    ccs::Matrix grad = L * (x - a) - x.inverse();
    double step = 1.0;
    ccs::Matrix trial;
    double ft = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      trial = x - step * grad;
      trial = 0.5 * (trial + trial.transpose()).eval();
      bool tpd = false;
      ft = objective(trial, tpd);
      if (tpd && ft <= fx - 1e-4 * step * grad.squaredNorm()) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) break;
    if (fx - ft < 1e-15 * (std::abs(fx) + 1.0)) {
      x = trial;
      break;
    }
    x = trial;
    fx = ft;
  }
  return x;
}

// Random symmetric matrix with independent N(0, scale^2) entries.
inline ccs::Matrix rand_symmetric(ccs::Rng& rng, int p, double scale = 1.0) {
  ccs::Matrix m(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = i; j < p; ++j) {
      double v = scale * rng.normal();
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// Random SPD matrix: symmetric noise pushed away from singularity.
inline ccs::Matrix rand_spd(ccs::Rng& rng, int p, double ridge = 0.0) {
  ccs::Matrix g(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) g(i, j) = rng.normal();
  ccs::Matrix m = g * g.transpose() / p;
  double bump = ridge > 0.0 ? ridge : 0.5;
  return m + bump * ccs::Matrix::Identity(p, p);
}

// Materialized Kronecker product, column-major convention.
inline ccs::Matrix kron(const ccs::Matrix& a, const ccs::Matrix& b) {
  ccs::Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// vec by stacked columns, matching the Kronecker identity vec(AXB) = (B^T (x) A) vec(X).
inline ccs::Vector vec(const ccs::Matrix& m) {
  ccs::Vector v(m.rows() * m.cols());
  int idx = 0;
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v(idx++) = m(i, j);
  return v;
}

// Entrywise max abs.
inline double linf(const ccs::Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Induced infinity operator norm: max absolute row sum.
inline double op_inf(const ccs::Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Entrywise quadratic mean over a list of matrices, written independently of
// the library's version.
inline ccs::Matrix quad_mean_ref(const std::vector<ccs::Matrix>& ms) {
  ccs::Matrix acc = ccs::Matrix::Zero(ms[0].rows(), ms[0].cols());
  for (const ccs::Matrix& m : ms) acc += m.cwiseProduct(m);
  return (acc / static_cast<double>(ms.size())).cwiseSqrt();
}

}  // namespace oracles
