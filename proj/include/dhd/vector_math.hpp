#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "dhd/embedding_store.hpp"

namespace dhd {

/// Top principal directions of a set of row vectors.
struct PrincipalComponents {
  Vector mean;                       // the decentering mean
  std::vector<Vector> components;    // unit vectors, descending explained variance
  std::vector<double> explained_variance;
};

/// Cosine similarity. Throws DomainError if either argument is the zero vector.
double cosine(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Returns the column means and a copy of `e` with those means subtracted.
std::pair<EmbeddingSet, Vector> decenter(const EmbeddingSet& e);

/// Population covariance (1/n) of the rows, about their mean.
Eigen::MatrixXd covariance(const Matrix& rows, const Vector& mean);

/// First k eigenvectors of the covariance of the mean-centered rows.
///
/// Each component is sign-normalized so that its entry of largest magnitude
/// is positive (ties go to the lowest index); two calls on the same data give
/// bit-identical results. Requires 2 <= |vocab| and 1 <= k <= min(|vocab|, dim).
PrincipalComponents principal_components(const Matrix& rows, std::size_t k);
PrincipalComponents principal_components(const EmbeddingSet& e, std::size_t k);

/// v minus its projection on the unit vector u.
Vector remove_component(const Eigen::Ref<const Vector>& v, const Eigen::Ref<const Vector>& u);

/// Row-wise remove_component over a matrix, in place.
void remove_component_rows(Matrix& rows, const Eigen::Ref<const Vector>& u);

/// Throws DomainError unless | ||u|| - 1 | < tol.
void require_unit(const Eigen::Ref<const Vector>& u, double tol = 1e-6);

}  // namespace dhd
