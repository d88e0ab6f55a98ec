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

#ifndef AUTOGDA_EMBED_SPACE_H_
#define AUTOGDA_EMBED_SPACE_H_

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace autogda {

// Sentence embedding as produced by the embedding service; passed through
// untouched (no normalization).
using EmbeddingVector = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Euclidean distance ||u - v||_2.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar distance(const Eigen::MatrixBase<DerivedU>& u,
                                   const Eigen::MatrixBase<DerivedV>& v) {
  if (u.size() != v.size()) {
    throw DimensionError("distance: dimension mismatch (" +
                         std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
  }
  return (u - v).norm();
}

struct NearestTarget {
  std::string claim;
  double distance = 0.0;
};

// Target-claim embeddings grouped per evidence; rows of `points` align with
// `claims`. Built once per run, then read-only.
class TargetIndex {
 public:
  struct Entry {
    Eigen::MatrixXd points;
    std::vector<std::string> claims;
  };

  // Adds (or replaces) the targets of one evidence. All vectors must share
  // the index dimension.
  void add(const std::string& evidence_id,
           const std::vector<std::string>& claims,
           const std::vector<EmbeddingVector>& vectors);

  bool contains(const std::string& evidence_id) const {
    return entries_.count(evidence_id) > 0;
  }
  const Entry& entry(const std::string& evidence_id) const;
  Eigen::Index dim() const { return dim_; }

  // Closest target claim by Euclidean distance; ties go to the
  // lexicographically smallest claim text. Linear scan.
  NearestTarget nearest_target(const EmbeddingVector& claim_vec,
                               const std::string& evidence_id) const;

 private:
  std::map<std::string, Entry> entries_;
  Eigen::Index dim_ = -1;
};

}  // namespace autogda

#endif  // AUTOGDA_EMBED_SPACE_H_
