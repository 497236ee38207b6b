#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace necrosim::detail {

struct GmresResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

// Right-preconditioned restarted GMRES for A x = b, starting from x = 0.
template <class Apply, class Precondition>
GmresResult gmres(const Apply& apply, const Precondition& precondition, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                  double tol, int restart, int max_iterations) {
  GmresResult out;
  const Eigen::Index n = b.size();
  x = Eigen::VectorXd::Zero(n);
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }

  Eigen::VectorXd r = b;
  double r_norm = b_norm;
  while (true) {
    out.relative_residual = r_norm / b_norm;
    if (out.relative_residual <= tol) {
      out.converged = true;
      return out;
    }
    if (out.iterations >= max_iterations) return out;

    const int m = restart;
    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sn = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    V.col(0) = r / r_norm;
    g(0) = r_norm;

    int k = 0;
    for (int j = 0; j < m && out.iterations < max_iterations; ++j) {
      Eigen::VectorXd w = apply(precondition(V.col(j)));
      ++out.iterations;
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double h = V.col(i).dot(w);
          H(i, j) += h;
          w -= h * V.col(i);
        }
      }
      H(j + 1, j) = w.norm();
      if (H(j + 1, j) > 0.0) V.col(j + 1) = w / H(j + 1, j);

      for (int i = 0; i < j; ++i) {
        const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double d = std::hypot(H(j, j), H(j + 1, j));
      cs(j) = d == 0.0 ? 1.0 : H(j, j) / d;
      sn(j) = d == 0.0 ? 0.0 : H(j + 1, j) / d;
      H(j, j) = d;
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);
      k = j + 1;
      if (std::abs(g(j + 1)) / b_norm <= tol * 0.5) break;
    }

    const Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    x += precondition(V.leftCols(k) * y);
    r = b - apply(x);
    r_norm = r.norm();
  }
}

}  // namespace necrosim::detail
