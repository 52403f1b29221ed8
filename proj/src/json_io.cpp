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

#include "cohframe/json_io.hpp"

#include <fstream>
#include <string>

namespace cohframe {

namespace {

const json& field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw Error(ErrorKind::Parse, std::string("missing field '") + key + "'");
  }
  return doc.at(key);
}

Eigen::Index positive_count(const json& doc, const char* key) {
  const json& v = field(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorKind::Parse,
                std::string("field '") + key + "' must be a positive integer");
  }
  return static_cast<Eigen::Index>(v.get<long long>());
}

void read_part(const json& part, const char* key, Eigen::Index rows,
               Eigen::Index cols, CMat& out, bool imaginary) {
  if (!part.is_array() || static_cast<Eigen::Index>(part.size()) != rows) {
    throw Error(ErrorKind::Parse, std::string("'") + key + "' must have " +
                                      std::to_string(rows) + " rows");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = part[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorKind::Parse, std::string("'") + key + "' row " +
                                        std::to_string(i) + " must have " +
                                        std::to_string(cols) + " entries");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!row[j].is_number()) {
        throw Error(ErrorKind::Parse, std::string("'") + key + "'[" +
                                          std::to_string(i) + "][" +
                                          std::to_string(j) + "] is not a number");
      }
      const double x = row[j].get<double>();
      if (imaginary) {
        out(i, j).imag(x);
      } else {
        out(i, j).real(x);
      }
    }
  }
}

}  // namespace

json matrix_to_json(const CMat& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re_row.push_back(m(i, j).real());
      im_row.push_back(m(i, j).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

CMat matrix_from_json(const json& doc, Eigen::Index rows, Eigen::Index cols) {
  CMat out = CMat::Zero(rows, cols);
  read_part(field(doc, "re"), "re", rows, cols, out, false);
  read_part(field(doc, "im"), "im", rows, cols, out, true);
  return out;
}

json state_to_json(const DensityState& rho) {
  json doc = matrix_to_json(rho.mat());
  doc["dim"] = rho.dim();
  return doc;
}

DensityState state_from_json(const json& doc, double tol) {
  const Eigen::Index dim = positive_count(doc, "dim");
  return make_density(matrix_from_json(doc, dim, dim), tol);
}

json observable_to_json(const Observable& h) {
  json doc = matrix_to_json(h.mat());
  doc["dim"] = h.dim();
  return doc;
}

Observable observable_from_json(const json& doc) {
  const Eigen::Index dim = positive_count(doc, "dim");
  return Observable::make(matrix_from_json(doc, dim, dim));
}

json channel_to_json(const KrausChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return json{{"in_dim", ch.in_dim()},
              {"out_dim", ch.out_dim()},
              {"kraus", std::move(kraus)}};
}

KrausChannel channel_from_json(const json& doc) {
  const Eigen::Index in_dim = positive_count(doc, "in_dim");
  const Eigen::Index out_dim = positive_count(doc, "out_dim");
  const json& list = field(doc, "kraus");
  if (!list.is_array()) {
    throw Error(ErrorKind::Parse, "'kraus' must be an array");
  }
  std::vector<CMat> kraus;
  for (const auto& k : list) kraus.push_back(matrix_from_json(k, out_dim, in_dim));
  return KrausChannel::make(in_dim, out_dim, std::move(kraus));
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorKind::InvalidArgument,
                "cannot write '" + path.string() + "'");
  }
  out << doc.dump(2) << '\n';
}

}  // namespace cohframe
