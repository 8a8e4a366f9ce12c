#ifndef VANETCONN_GRAPH_HPP
#define VANETCONN_GRAPH_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vanetconn/numerics.hpp"

namespace vanetconn {

/// Symmetric matrix of per-pair received SNR. The diagonal is ignored.
using SnrMatrix = Eigen::MatrixXd;

/// Adjacency, degrees and Laplacian of an unweighted undirected graph.
/// Immutable once built.
class GraphMatrices {
 public:
  /// Takes a 0/1 adjacency matrix; throws unless it is square, symmetric and
  /// hollow.
  explicit GraphMatrices(Eigen::MatrixXi adjacency) : adjacency_(std::move(adjacency)) {
    const Eigen::Index n = adjacency_.rows();
    if (adjacency_.cols() != n) throw std::invalid_argument("GraphMatrices: adjacency must be square");
    degrees_.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (adjacency_(i, i) != 0) throw std::invalid_argument("GraphMatrices: self-loop");
      for (Eigen::Index j = 0; j < n; ++j) {
        const int a = adjacency_(i, j);
        if (a != 0 && a != 1) throw std::invalid_argument("GraphMatrices: adjacency must be 0/1");
        if (a != adjacency_(j, i)) throw std::invalid_argument("GraphMatrices: adjacency not symmetric");
        degrees_[static_cast<std::size_t>(i)] += a;
      }
    }
    // Integer-valued, so row sums are exactly zero in double.
    laplacian_ = (-adjacency_).cast<double>();
    for (Eigen::Index i = 0; i < n; ++i) laplacian_(i, i) = degrees_[static_cast<std::size_t>(i)];
  }

  std::size_t size() const { return degrees_.size(); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }

 private:
  Eigen::MatrixXi adjacency_;
  std::vector<int> degrees_;
  Eigen::MatrixXd laplacian_;
};

/// Thresholds an SNR matrix: an edge wherever snr(i, j) >= psi, i != j.
inline GraphMatrices adjacency_from_snr(const SnrMatrix& snr, double psi) {
  const Eigen::Index n = snr.rows();
  if (snr.cols() != n) throw std::invalid_argument("adjacency_from_snr: SNR matrix must be square");
  Eigen::MatrixXi adjacency = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (snr(i, j) != snr(j, i))
        throw std::invalid_argument("adjacency_from_snr: SNR matrix not symmetric (reciprocity)");
      const int linked = snr(i, j) >= psi ? 1 : 0;
      adjacency(i, j) = linked;
      adjacency(j, i) = linked;
    }
  }
  return GraphMatrices(std::move(adjacency));
}

/// Ascending Laplacian eigenvalues.
inline Eigen::VectorXd laplacian_spectrum(const GraphMatrices& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.laplacian(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("laplacian_spectrum: eigensolver did not converge");
  return solver.eigenvalues();
}

inline constexpr double kDefaultZeroTolerance = 1e-8;

/// Eigenvalues below this count as zero: relative to the spectral radius.
inline double zero_threshold(const Eigen::VectorXd& spectrum, double relative_tol = kDefaultZeroTolerance) {
  const double radius = spectrum.size() > 0 ? spectrum.cwiseAbs().maxCoeff() : 0.0;
  return relative_tol * std::max(1.0, radius);
}

/// Second-smallest Laplacian eigenvalue.
inline double algebraic_connectivity(const GraphMatrices& g) {
  if (g.size() < 2) throw std::invalid_argument("algebraic_connectivity: need at least 2 nodes");
  return laplacian_spectrum(g)(1);
}

inline int count_partitions_eigen(const GraphMatrices& g, std::optional<double> zero_tol = std::nullopt) {
  const Eigen::VectorXd spectrum = laplacian_spectrum(g);
  const double tol = zero_tol.value_or(zero_threshold(spectrum));
  return static_cast<int>((spectrum.array().abs() < tol).count());
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0), count_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --count_;
  }

  std::size_t count() const { return count_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
  std::size_t count_;
};

}  // namespace detail

/// Exact component count by union-find over the edges.
inline int count_partitions_unionfind(const GraphMatrices& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  detail::DisjointSets sets(g.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (g.adjacency()(i, j) != 0) sets.unite(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return static_cast<int>(sets.count());
}

struct ConnectivityOptions {
  double relative_zero_tol = kDefaultZeroTolerance;
  /// Also run union-find and throw if the two verdicts disagree.
  bool cross_check = false;
};

/// Connected iff the algebraic connectivity is nonzero (above tolerance).
inline bool is_connected(const GraphMatrices& g, const ConnectivityOptions& options = {}) {
  if (g.size() < 2) throw std::invalid_argument("is_connected: need at least 2 nodes");
  const Eigen::VectorXd spectrum = laplacian_spectrum(g);
  const bool connected = spectrum(1) > zero_threshold(spectrum, options.relative_zero_tol);
  if (options.cross_check && connected != (count_partitions_unionfind(g) == 1))
    throw NumericalError("is_connected: eigenvalue and union-find verdicts disagree");
  return connected;
}

/// Plain-text dump, one space-separated row per line.
template <class Derived>
void write_matrix(std::ostream& out, const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
}

}  // namespace vanetconn

#endif  // VANETCONN_GRAPH_HPP
