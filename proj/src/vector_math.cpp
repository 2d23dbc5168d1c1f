#include "dhd/vector_math.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dhd/errors.hpp"

namespace dhd {

double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) throw DomainError("cosine: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw DomainError("cosine: zero vector");
  const double c = a.dot(b) / (na * nb);
  return std::clamp(c, -1.0, 1.0);
}

std::pair<EmbeddingSet, Vector> decenter(const EmbeddingSet& e) {
  if (e.empty()) throw DomainError("decenter: empty embedding set");
  Vector mean = e.vectors().colwise().mean().transpose();
  Matrix centered = e.vectors().rowwise() - mean.transpose();
  return {e.with_vectors(std::move(centered)), std::move(mean)};
}

Eigen::MatrixXd covariance(const Matrix& rows, const Vector& mean) {
  const Eigen::Index n = rows.rows();
  Matrix centered = rows.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(rows.cols(), rows.cols());
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  cov /= static_cast<double>(n);
  return cov;
}

PrincipalComponents principal_components(const Matrix& rows, std::size_t k) {
  const auto n = static_cast<std::size_t>(rows.rows());
  const auto d = static_cast<std::size_t>(rows.cols());
  if (n < 2) throw DomainError("principal_components: need at least 2 rows");
  if (k < 1 || k > std::min(n, d)) {
    throw DomainError("principal_components: k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(std::min(n, d)) + "]");
  }

  PrincipalComponents pc;
  pc.mean = rows.colwise().mean().transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance(rows, pc.mean));
  if (solver.info() != Eigen::Success) throw DomainError("principal_components: eigensolver failed");

  // Eigen returns eigenvalues in ascending order.
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - i);
    Vector u = vectors.col(col).normalized();
    Eigen::Index pivot = 0;
    for (Eigen::Index j = 1; j < u.size(); ++j) {
      if (std::abs(u(j)) > std::abs(u(pivot))) pivot = j;
    }
    if (u(pivot) < 0) u = -u;
    pc.components.push_back(std::move(u));
    pc.explained_variance.push_back(std::max(0.0, values(col)));
  }
  return pc;
}

PrincipalComponents principal_components(const EmbeddingSet& e, std::size_t k) {
  return principal_components(e.vectors(), k);
}

void require_unit(const Eigen::Ref<const Vector>& u, double tol) {
  if (std::abs(u.norm() - 1.0) >= tol) {
    throw DomainError("expected a unit vector, got norm " + std::to_string(u.norm()));
  }
}

Vector remove_component(const Eigen::Ref<const Vector>& v, const Eigen::Ref<const Vector>& u) {
  require_unit(u);
  if (v.size() != u.size()) throw DomainError("remove_component: dimension mismatch");
  // Dividing by u.u keeps the result orthogonal even when u is only unit to 1e-6.
  return v - (v.dot(u) / u.squaredNorm()) * u;
}

void remove_component_rows(Matrix& rows, const Eigen::Ref<const Vector>& u) {
  require_unit(u);
  if (rows.cols() != u.size()) throw DomainError("remove_component: dimension mismatch");
  const double uu = u.squaredNorm();
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double p = rows.row(r).dot(u) / uu;
    rows.row(r) -= p * u.transpose();
  }
}

}  // namespace dhd
