// jplda/trials.h

// Copyright 2026  The JPLDA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef JPLDA_TRIALS_H_
#define JPLDA_TRIALS_H_

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "jplda/error.h"

namespace jplda {

/// Named embeddings, one per row of `vectors`.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : vectors_(0, dim) {}

  /// Appends rows in bulk; ids must be unique.
  EmbeddingTable(std::vector<std::string> ids, Eigen::MatrixXd vectors)
      : ids_(std::move(ids)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows())
      throw Error(ErrorCode::kDimensionMismatch,
                  "id count does not match row count");
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!index_.emplace(ids_[i], static_cast<int>(i)).second)
        throw Error(ErrorCode::kParseError, "duplicate id " + ids_[i]);
    }
  }

  int Size() const { return static_cast<int>(ids_.size()); }
  int Dim() const { return static_cast<int>(vectors_.cols()); }
  const std::vector<std::string> &ids() const { return ids_; }
  const Eigen::MatrixXd &vectors() const { return vectors_; }

  /// Row index of `id`, or -1.
  int Find(const std::string &id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }

  Eigen::VectorXd Row(int i) const { return vectors_.row(i).transpose(); }

 private:
  std::vector<std::string> ids_;
  Eigen::MatrixXd vectors_;
  std::unordered_map<std::string, int> index_;
};

struct Trial {
  std::string enroll_id;
  std::string test_id;
  std::optional<bool> is_target;  // Present when the list doubles as a key.
};

}  // namespace jplda

#endif  // JPLDA_TRIALS_H_
