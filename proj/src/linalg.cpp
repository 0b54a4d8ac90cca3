#include "fluxsim/linalg.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/SparseLU>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

namespace fluxsim {

int level_index_from_label(const std::string& label) {
  if (label == "g") return 0;
  if (label == "e") return 1;
  if (label == "f") return 2;
  if (label == "h") return 3;
  if (label == "i") return 4;
  throw DomainError("unknown level label: " + label);
}

std::string level_label_from_index(int index) {
  static const char* names[] = {"g", "e", "f", "h", "i"};
  if (index < 0) throw DomainError("negative level index");
  if (index <= 4) return names[index];
  return "o" + std::to_string(index);
}

EigenDecomposition eigh(const Matrix& h) {
  if (h.rows() != h.cols()) throw DomainError("eigh: matrix not square");
  const int n = static_cast<int>(h.rows());
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = (h + h.adjoint()) / 2.0;
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(),
                            n, out.values.data());
  if (info != 0) throw ConvergenceError("zheevd failed, info=" + std::to_string(info));
  return out;
}

EigenDecomposition eigh_window(const SparseMatrix& h, double sigma, int k,
                               double tol, int max_iter) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw DomainError("eigh_window: matrix not square");
  if (k <= 0 || k > n) throw DomainError("eigh_window: bad k");
  if (n <= 4 * k && n <= 3500) {
    EigenDecomposition full = eigh(Matrix(h));
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      return std::abs(full.values[a] - sigma) < std::abs(full.values[b] - sigma);
    });
    idx.resize(k);
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return full.values[a] < full.values[b]; });
    EigenDecomposition out;
    out.values.resize(k);
    out.vectors.resize(n, k);
    for (int j = 0; j < k; ++j) {
      out.values[j] = full.values[idx[j]];
      out.vectors.col(j) = full.vectors.col(idx[j]);
    }
    return out;
  }

  SparseMatrix shifted = h;
  for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) -= sigma;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success)
    throw ConvergenceError("eigh_window: sparse factorization failed");

  if (max_iter <= 0) max_iter = std::min(n, std::max(4 * k, k + 80));
  Matrix v(n, max_iter + 1);
  std::vector<double> alpha, beta;
  Vector q = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    q[i] = Complex(std::cos(0.7 * i + 0.3), std::sin(1.3 * i + 0.1));
  q.normalize();
  v.col(0) = q;

  int m = 0;
  for (; m < max_iter; ++m) {
    Vector w = lu.solve(v.col(m));
    double a = std::real(v.col(m).dot(w));
    w -= a * v.col(m);
    if (m > 0) w -= beta[m - 1] * v.col(m - 1);
    // full reorthogonalization, twice for stability
    for (int pass = 0; pass < 2; ++pass)
      w -= v.leftCols(m + 1) * (v.leftCols(m + 1).adjoint() * w);
    alpha.push_back(a);
    double b = w.norm();
    beta.push_back(b);
    if (b < 1e-14) {
      ++m;
      break;
    }
    v.col(m + 1) = w / b;
  }

  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    tri(i, i) = alpha[i];
    if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  if (m < k) throw ConvergenceError("eigh_window: Lanczos space too small");

  // Ritz values of (H - sigma)^-1; largest |theta| are nearest sigma.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
  });

  EigenDecomposition out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (int j = 0; j < k; ++j) {
    int i = order[j];
    double theta = es.eigenvalues()[i];
    if (std::abs(theta) < 1e-300)
      throw ConvergenceError("eigh_window: degenerate Ritz value");
    Vector y = v.leftCols(m) * es.eigenvectors().col(i).cast<Complex>();
    y.normalize();
    double lambda = sigma + 1.0 / theta;
    double resid = (h * y - lambda * y).norm();
    if (resid > std::max(tol, 1e-8) * std::max(1.0, std::abs(lambda)) * 100)
      throw ConvergenceError("eigh_window: unconverged Ritz pair");
    out.values[j] = lambda;
    out.vectors.col(j) = y;
  }
  std::vector<int> fin(k);
  std::iota(fin.begin(), fin.end(), 0);
  std::sort(fin.begin(), fin.end(),
            [&](int a, int b) { return out.values[a] < out.values[b]; });
  EigenDecomposition sorted;
  sorted.values.resize(k);
  sorted.vectors.resize(n, k);
  for (int j = 0; j < k; ++j) {
    sorted.values[j] = out.values[fin[j]];
    sorted.vectors.col(j) = out.vectors.col(fin[j]);
  }
  return sorted;
}

}  // namespace fluxsim
