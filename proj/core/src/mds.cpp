#include "tba/mds.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "tba/errors.hpp"

namespace tba {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double raw_stress(const DistanceMatrix& d, const RowMatrix& x) {
  double s = 0.0;
  const auto n = static_cast<Eigen::Index>(d.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = d(i, j) - (x.row(i) - x.row(j)).norm();
      s += r * r;
    }
  }
  return s;
}

double sum_sq(const DistanceMatrix& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) s += d(i, j) * d(i, j);
  }
  return s;
}

void center(RowMatrix& x) {
  if (x.rows() == 0) return;
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
}

Embedding to_embedding(const RowMatrix& x) {
  Embedding e;
  e.n = static_cast<std::size_t>(x.rows());
  e.m = static_cast<std::size_t>(x.cols());
  e.coords.assign(x.data(), x.data() + x.size());
  return e;
}

RowMatrix from_embedding(const Embedding& e) {
  RowMatrix x(e.n, e.m);
  std::copy(e.coords.begin(), e.coords.end(), x.data());
  return x;
}

// Guttman transform: X <- (1/n) B(X) X.
RowMatrix guttman(const DistanceMatrix& d, const RowMatrix& x) {
  const auto n = x.rows();
  RowMatrix b = RowMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double dist = (x.row(i) - x.row(j)).norm();
      if (dist > 0.0) {
        const double v = -d(i, j) / dist;
        b(i, j) = v;
        b(j, i) = v;
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) b(i, i) = -b.row(i).sum();
  return (b * x) / static_cast<double>(n);
}

}  // namespace

double Embedding::distance(std::size_t i, std::size_t j) const {
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double t = row(i)[k] - row(j)[k];
    s += t * t;
  }
  return std::sqrt(s);
}

void MdsOptions::validate() const {
  if (m < 1) throw ValidationError("mds: dimension m must be >= 1");
  if (!(rel_tol > 0.0)) throw ValidationError("mds: rel_tol must be > 0");
}

double normalized_stress(const DistanceMatrix& d, const Embedding& x) {
  if (d.size() != x.n) throw ValidationError("normalized_stress: matrix and embedding sizes differ");
  const double denom = sum_sq(d);
  if (denom == 0.0) throw NumericalError("normalized_stress: undefined for an all-zero distance matrix");
  double num = 0.0;
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = i + 1; j < x.n; ++j) {
      const double r = d(i, j) - x.distance(i, j);
      num += r * r;
    }
  }
  return num / denom;
}

Embedding classical_init(const DistanceMatrix& d, std::size_t m) {
  if (m < 1) throw ValidationError("classical_init: dimension m must be >= 1");
  const auto n = static_cast<Eigen::Index>(d.size());
  RowMatrix x = RowMatrix::Zero(n, static_cast<Eigen::Index>(m));
  if (n == 0) return to_embedding(x);

  Eigen::MatrixXd sq(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) sq(i, j) = d(i, j) * d(i, j);
  }
  // B = -1/2 J D^2 J with J = I - 11^T/n.
  const Eigen::VectorXd row_mean = sq.rowwise().mean();
  const Eigen::RowVectorXd col_mean = sq.colwise().mean();
  const double all_mean = sq.mean();
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = -0.5 * (sq(i, j) - row_mean(i) - col_mean(j) + all_mean);
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw NumericalError("classical_init: eigen-decomposition failed");
  // Eigenvalues ascend; walk from the top.
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m) && k < n; ++k) {
    const Eigen::Index idx = n - 1 - k;
    const double lambda = eig.eigenvalues()(idx);
    if (!(lambda > 0.0)) break;
    Eigen::VectorXd v = eig.eigenvectors().col(idx);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    x.col(k) = v * std::sqrt(lambda);
  }
  center(x);
  Embedding e = to_embedding(x);
  if (n > 1 && sum_sq(d) > 0.0) e.stress = normalized_stress(d, e);
  return e;
}

Embedding embed(const DistanceMatrix& d, const MdsOptions& opts) {
  opts.validate();
  for (double v : d.data()) {
    if (!std::isfinite(v)) throw NumericalError("embed: distance matrix has non-finite entries");
  }
  const auto n = static_cast<Eigen::Index>(d.size());
  const auto m = static_cast<Eigen::Index>(opts.m);

  RowMatrix x;
  if (opts.init == MdsInit::classical) {
    x = from_embedding(classical_init(d, opts.m));
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    double scale = 0.0;
    for (double v : d.data()) scale = std::max(scale, v);
    x.resize(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index k = 0; k < m; ++k) x(i, k) = 0.5 * scale * unit(rng);
    }
    center(x);
  }

  const double denom = sum_sq(d);
  Embedding out;
  if (n < 2 || denom == 0.0) {
    out = to_embedding(x);
    out.stress = 0.0;
    out.stress_history = {0.0};
    return out;
  }

  double stress = raw_stress(d, x);
  std::vector<double> history{stress / denom};
  std::size_t iter = 0;
  while (iter < opts.max_iterations && stress > 0.0) {
    RowMatrix next = guttman(d, x);
    ++iter;
    if (!next.allFinite()) {
      throw NumericalError("embed: non-finite coordinates at SMACOF iteration " + std::to_string(iter));
    }
    const double next_stress = raw_stress(d, next);
    x = std::move(next);
    history.push_back(next_stress / denom);
    const double rel_drop = (stress - next_stress) / stress;
    stress = next_stress;
    if (rel_drop < opts.rel_tol) break;
  }

  center(x);
  out = to_embedding(x);
  out.iterations = iter;
  out.stress = normalized_stress(d, out);
  out.stress_history = std::move(history);
  return out;
}

double max_relative_distortion(const DistanceMatrix& d, const Embedding& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t j = i + 1; j < x.n; ++j) {
      if (d(i, j) > 0.0) worst = std::max(worst, std::abs(x.distance(i, j) - d(i, j)) / d(i, j));
    }
  }
  return worst;
}

}  // namespace tba
