// Copyright 2026 The cohframe Authors
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

#include "cohframe/matcore.hpp"

#include <limits>

namespace cohframe {

CMat basis_projector(Eigen::Index d, Eigen::Index i) {
  if (i < 0 || i >= d) {
    throw Error(ErrorKind::InvalidArgument,
                "basis index " + std::to_string(i) + " outside dimension " +
                    std::to_string(d));
  }
  CMat out = CMat::Zero(d, d);
  out(i, i) = 1.0;
  return out;
}

double max_entry_diff(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace cohframe
