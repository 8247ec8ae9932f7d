// Copyright 2026 The chanmaj Authors
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

#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "chanmaj/classical.hpp"
#include "chanmaj/errors.hpp"
#include "chanmaj/games.hpp"
#include "chanmaj/linalg.hpp"
#include "chanmaj/majorization.hpp"
#include "chanmaj/quantum.hpp"

namespace chanmaj::io {

using Json = nlohmann::json;

/// Rounds to 9 significant digits through the shortest locale-independent
/// decimal form, so the JSON writer prints at most 9 digits.
inline double round_significant(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 9);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

inline Json number(double v) { return round_significant(v); }

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

/// Row-major nested arrays.
inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

inline Json to_json(const ProbVector& p) { return to_json(p.entries()); }

inline Json to_json(const ClassicalChannel& n) {
  return Json{{"rows", n.output_dim()}, {"cols", n.input_dim()}, {"transition", to_json(n.transition())}};
}

inline Json to_json(const MajorizationCertificate& c) {
  Json out = Json::object();
  if (c.S) out["S"] = to_json(*c.S);
  if (c.separating_s) out["separating_s"] = to_json(*c.separating_s);
  if (c.failing_column) out["failing_column"] = *c.failing_column;
  return out;
}

inline Json parse_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DomainError("malformed JSON in " + origin + ": " + e.what());
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), "'" + path + "'");
}

namespace detail {

inline double as_number(const Json& j, const char* what) {
  if (!j.is_number()) throw DomainError(std::string(what) + ": expected a number");
  return j.get<double>();
}

inline Index as_dim(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 1) {
    throw DomainError(std::string("field '") + key + "' must be a positive integer");
  }
  return static_cast<Index>(j.at(key).get<long long>());
}

inline Vector vector_from(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DomainError(std::string(what) + ": expected a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = as_number(j[i], what);
  return v;
}

inline Matrix matrix_from(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw DomainError(std::string(what) + ": expected a non-empty array of rows");
  const Index rows = static_cast<Index>(j.size());
  Index cols = -1;
  Matrix m;
  for (Index i = 0; i < rows; ++i) {
    const Vector row = vector_from(j[static_cast<std::size_t>(i)], what);
    if (cols < 0) {
      cols = row.size();
      m.resize(rows, cols);
    } else if (row.size() != cols) {
      throw DomainError(std::string(what) + ": rows have different lengths");
    }
    m.row(i) = row.transpose();
  }
  return m;
}

inline Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw DomainError("Kraus entry must be a number or a [re, im] pair");
}

}  // namespace detail

inline ProbVector prob_vector_from_json(const Json& j) { return ProbVector(detail::vector_from(j, "vector")); }

/// {"rows": n, "cols": m, "transition": [[...], ...]} with n rows of m entries.
inline ClassicalChannel channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("transition")) throw DomainError("channel JSON needs a 'transition' field");
  const Index rows = detail::as_dim(j, "rows");
  const Index cols = detail::as_dim(j, "cols");
  Matrix t = detail::matrix_from(j.at("transition"), "transition");
  if (t.rows() != rows || t.cols() != cols) throw DomainError("transition shape does not match rows/cols");
  return ClassicalChannel(std::move(t));
}

/// {"pre": m×m' matrix, "post": post[x][w] matrices}.
inline ClassicalSuperchannel superchannel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("pre") || !j.contains("post")) {
    throw DomainError("superchannel JSON needs 'pre' and 'post' fields");
  }
  Matrix pre = detail::matrix_from(j.at("pre"), "pre");
  const Json& post_json = j.at("post");
  if (!post_json.is_array()) throw DomainError("'post' must be an array");
  std::vector<std::vector<Matrix>> post;
  for (const auto& row : post_json) {
    if (!row.is_array()) throw DomainError("'post' must be an array of arrays of matrices");
    std::vector<Matrix> r;
    for (const auto& e : row) r.push_back(detail::matrix_from(e, "post"));
    post.push_back(std::move(r));
  }
  return ClassicalSuperchannel(std::move(pre), std::move(post));
}

inline Json to_json(const ClassicalSuperchannel& t) {
  Json post = Json::array();
  for (Index x = 0; x < t.input_channel_inputs(); ++x) {
    Json row = Json::array();
    for (Index w = 0; w < t.output_channel_inputs(); ++w) row.push_back(to_json(t.post(x, w)));
    post.push_back(std::move(row));
  }
  return Json{{"pre", to_json(t.pre())}, {"post", std::move(post)}};
}

/// {"n": n, "l": ℓ, "t": [[...]]} with t[k][w].
inline TGame game_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("t")) throw DomainError("game JSON needs a 't' field");
  const Index n = detail::as_dim(j, "n");
  const Index l = detail::as_dim(j, "l");
  Matrix t = detail::matrix_from(j.at("t"), "t");
  if (t.rows() != n || t.cols() != l) throw DomainError("game table shape does not match n/l");
  return TGame(std::move(t));
}

/// {"in": m, "out": n, "kraus": [K_1, ...]}, each K an out×in array of rows
/// whose entries are [re, im] pairs or plain numbers.
inline QuantumChannel quantum_channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kraus")) throw DomainError("quantum channel JSON needs a 'kraus' field");
  const Index in = detail::as_dim(j, "in");
  const Index out = detail::as_dim(j, "out");
  const Json& ks = j.at("kraus");
  if (!ks.is_array() || ks.empty()) throw DomainError("'kraus' must be a non-empty array");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : ks) {
    if (!k.is_array() || static_cast<Index>(k.size()) != out) throw DomainError("Kraus operator must have 'out' rows");
    ComplexMatrix m(out, in);
    for (Index r = 0; r < out; ++r) {
      const Json& row = k[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != in) {
        throw DomainError("Kraus operator rows must have 'in' entries");
      }
      for (Index c = 0; c < in; ++c) m(r, c) = detail::complex_from(row[static_cast<std::size_t>(c)]);
    }
    kraus.push_back(std::move(m));
  }
  return QuantumChannel::from_kraus(std::move(kraus));
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace chanmaj::io
