#ifndef CONFORMAP_KNN_HPP
#define CONFORMAP_KNN_HPP

#include "conformap/types.hpp"

namespace conformap {

// Euclidean distance between two coordinate vectors of equal length.
double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& u,
                          const Eigen::Ref<const Eigen::VectorXd>& v);

// Exact k nearest neighbors per point under the Euclidean metric.
// Ties are broken by the smaller point index. Requires 1 <= k < N.
KnnGraph build_knn(const Dataset& data, int k);

} // namespace conformap

#endif
