// Copyright 2026 The Auto-GDA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "autogda/embed_space.h"

#include <limits>

namespace autogda {

void TargetIndex::add(const std::string& evidence_id,
                      const std::vector<std::string>& claims,
                      const std::vector<EmbeddingVector>& vectors) {
  if (claims.empty() || claims.size() != vectors.size()) {
    throw std::invalid_argument("TargetIndex: need one vector per claim for " +
                                evidence_id);
  }
  const Eigen::Index dim = vectors.front().size();
  if (dim_ >= 0 && dim != dim_) {
    throw DimensionError("TargetIndex: embedding dimension changed");
  }
  Entry entry;
  entry.points.resize(static_cast<Eigen::Index>(vectors.size()), dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) {
      throw DimensionError("TargetIndex: ragged target embeddings");
    }
    entry.points.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
  }
  entry.claims = claims;
  dim_ = dim;
  entries_[evidence_id] = std::move(entry);
}

const TargetIndex::Entry& TargetIndex::entry(
    const std::string& evidence_id) const {
  auto it = entries_.find(evidence_id);
  if (it == entries_.end()) {
    throw std::out_of_range("TargetIndex: unknown evidence_id " + evidence_id);
  }
  return it->second;
}

NearestTarget TargetIndex::nearest_target(
    const EmbeddingVector& claim_vec, const std::string& evidence_id) const {
  const Entry& e = entry(evidence_id);
  if (claim_vec.size() != e.points.cols()) {
    throw DimensionError("nearest_target: dimension mismatch");
  }
  const Eigen::VectorXd sq =
      (e.points.rowwise() - claim_vec.transpose()).rowwise().squaredNorm();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < sq.size(); ++i) {
    if (sq[i] < sq[best] ||
        (sq[i] == sq[best] && e.claims[i] < e.claims[best])) {
      best = i;
    }
  }
  return {e.claims[best], std::sqrt(sq[best])};
}

}  // namespace autogda
