// Copyright 2026 The qchan Authors
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

/**
 * @file io.hpp
 * The "qchan-v1" JSON channel format.
 *
 *     {"format": "qchan-v1", "m": 2, "n": 2, "representation": "choi",
 *      "choi": [[[1, 0], [0, 0], ...], ...]}
 *
 * Complex entries are [re, im] pairs (a bare number is read as real).
 * Matrices are row-major lists of rows. A Choi payload is the mn x mn matrix
 * with flat index i*n + p; a Kraus payload ("kraus") is a list of n x m
 * operators.
 */

#pragma once

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qchan/channel.hpp"

namespace qchan::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatTag = "qchan-v1";

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw FormatError("expected a number or [re, im], got " + j.dump());
}

inline Json to_json(const CMatrix& a) {
  Json rows = Json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const CVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline CMatrix matrix_from_json(const Json& j, Index rows, Index cols,
                                const std::string& what) {
  if (!j.is_array() || Index(j.size()) != rows)
    throw FormatError(what + ": expected " + std::to_string(rows) + " rows");
  CMatrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[std::size_t(i)];
    if (!row.is_array() || Index(row.size()) != cols)
      throw FormatError(what + ": row " + std::to_string(i + 1) +
                        " must have " + std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k)
      a(i, k) = complex_from_json(row[std::size_t(k)]);
  }
  return a;
}

/// Raw contents of a channel file before validation.
struct ChannelFile {
  int m = 0;
  int n = 0;
  std::string representation;
  CMatrix choi;
  std::vector<CMatrix> kraus;
};

inline ChannelFile parse_channel_file(const Json& j) {
  if (!j.is_object()) throw FormatError("channel file must be a JSON object");
  if (!j.contains("format") || j["format"] != kFormatTag)
    throw FormatError(std::string("missing or unknown format tag, expected \"") +
                      kFormatTag + "\"");
  for (const char* key : {"m", "n"})
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<int>() < 1)
      throw FormatError(std::string("field \"") + key +
                        "\" must be a positive integer");
  if (!j.contains("representation") || !j["representation"].is_string())
    throw FormatError("field \"representation\" must be \"kraus\" or \"choi\"");
  ChannelFile f;
  f.m = j["m"].get<int>();
  f.n = j["n"].get<int>();
  f.representation = j["representation"].get<std::string>();
  if (f.representation == "choi") {
    if (!j.contains("choi")) throw FormatError("missing \"choi\" payload");
    const Index d = Index(f.m) * f.n;
    f.choi = matrix_from_json(j["choi"], d, d, "choi");
  } else if (f.representation == "kraus") {
    if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty())
      throw FormatError("\"kraus\" payload must be a nonempty list");
    int idx = 0;
    for (const Json& op : j["kraus"])
      f.kraus.push_back(matrix_from_json(op, f.n, f.m,
                                         "kraus[" + std::to_string(idx++) + "]"));
  } else {
    throw FormatError("unknown representation \"" + f.representation + "\"");
  }
  return f;
}

inline Channel to_channel(const ChannelFile& f, const TolerancePolicy& tol = {},
                          double repair_tol = kDefaultRepairTol) {
  if (f.representation == "choi")
    return Channel::from_choi(f.choi, f.m, f.n, tol, repair_tol);
  return Channel::from_kraus(f.kraus, tol, repair_tol);
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

/// Reads a file; "-" reads standard input.
inline std::string read_text(const std::string& path) {
  if (path == "-")
    return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Channel read_channel(const std::string& path,
                            const TolerancePolicy& tol = {}) {
  return to_channel(parse_channel_file(parse_json_text(read_text(path))), tol);
}

inline Json channel_to_json(const Channel& l,
                            const std::string& representation = "choi") {
  Json j;
  j["format"] = kFormatTag;
  j["m"] = l.m();
  j["n"] = l.n();
  j["representation"] = representation;
  if (representation == "choi") {
    j["choi"] = to_json(l.choi().matrix());
  } else if (representation == "kraus") {
    Json ops = Json::array();
    for (const CMatrix& a : l.kraus().operators()) ops.push_back(to_json(a));
    j["kraus"] = std::move(ops);
  } else {
    throw InvalidArgument("unknown representation \"" + representation + "\"");
  }
  return j;
}

inline Json to_json(const TolerancePolicy& tol) {
  Json j;
  j["hermitian_tol"] = tol.hermitian_tol;
  j["psd_tol"] = tol.psd_tol;
  j["rank_rel_tol"] = tol.rank_rel_tol;
  j["search_tol"] = tol.search_tol;
  j["trace_tol"] = kTraceTol;
  j["repair_tol"] = kDefaultRepairTol;
  return j;
}

}  // namespace qchan::io
