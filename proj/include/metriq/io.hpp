// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON and CSV encodings.
 *
 *   complex matrix   [[[re, im], ...], ...]   (a bare number is a real entry)
 *   metric           {"dim": n, "matrix": <complex matrix>}
 *   channel          {"dim_in": n, "dim_out": m, "kraus": [<complex matrix>, ...]}
 *   PT parameters    {"r": x, "s": y, "phi": z, "t": t}
 *
 * Numbers are written locale-independently; CSV fields use 17 significant
 * digits.
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "metriq/channels.hpp"
#include "metriq/errors.hpp"
#include "metriq/linalg.hpp"
#include "metriq/montecarlo.hpp"
#include "metriq/ptsym.hpp"
#include "metriq/tomography.hpp"

namespace metriq::io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

inline double number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::uint64_t unsigned_integer(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    throw ParseError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

}  // namespace detail

inline json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
    throw ParseError("complex matrix must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = j.front().size();
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) throw ParseError("ragged complex matrix");
    for (std::size_t k = 0; k < cols; ++k) {
      const auto& e = row[k];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, k) = {e[0].get<double>(), e[1].get<double>()};
      } else {
        throw ParseError("complex entries must be [re, im] pairs");
      }
    }
  }
  if (!m.is_finite()) throw ParseError("complex matrix has non-finite entries");
  return m;
}

inline json metric_to_json(const ComplexMatrix& m) {
  return {{"dim", m.rows()}, {"matrix", to_json(m)}};
}

/// Shape-checked matrix of a metric JSON block; validate_metric does the rest.
inline ComplexMatrix metric_matrix_from_json(const json& j) {
  const auto dim = detail::unsigned_integer(detail::field(j, "dim"), "dim");
  ComplexMatrix m = matrix_from_json(detail::field(j, "matrix"));
  if (m.rows() != dim || m.cols() != dim) throw ParseError("metric matrix does not match dim");
  return m;
}

inline json to_json(const KrausChannel& ch) {
  json ops = json::array();
  for (const auto& k : ch.kraus_ops()) ops.push_back(to_json(k));
  return {{"dim_in", ch.dim_in()}, {"dim_out", ch.dim_out()}, {"kraus", std::move(ops)}};
}

inline KrausChannel channel_from_json(const json& j) {
  const auto din = detail::unsigned_integer(detail::field(j, "dim_in"), "dim_in");
  const auto dout = detail::unsigned_integer(detail::field(j, "dim_out"), "dim_out");
  const auto& ops = detail::field(j, "kraus");
  if (!ops.is_array()) throw ParseError("kraus must be an array");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : ops) kraus.push_back(matrix_from_json(k));
  for (const auto& k : kraus)
    if (k.rows() != dout || k.cols() != din) throw ParseError("Kraus operator shape mismatch");
  return KrausChannel(std::move(kraus), din, dout);
}

struct PtParameters {
  PtHamiltonian hamiltonian;
  double t = 0.0;
};

inline PtParameters pt_from_json(const json& j) {
  PtParameters p;
  p.hamiltonian.r = detail::number(detail::field(j, "r"), "r");
  p.hamiltonian.s = detail::number(detail::field(j, "s"), "s");
  p.hamiltonian.phi = detail::number(detail::field(j, "phi"), "phi");
  p.t = j.contains("t") ? detail::number(j.at("t"), "t") : 0.0;
  return p;
}

inline json to_json(const PtParameters& p) {
  return {{"r", p.hamiltonian.r}, {"s", p.hamiltonian.s}, {"phi", p.hamiltonian.phi}, {"t", p.t}};
}

inline json to_json(const SimulationRecord& rec) {
  return {{"requested_successes", rec.requested_successes},
          {"total_copies_used", rec.total_copies_used},
          {"success_ratio", rec.success_ratio},
          {"output_state", to_json(rec.output_state)},
          {"seed", rec.seed},
          {"stream_id", rec.stream_id}};
}

inline json to_json(const VerificationReport& rep) {
  return {{"distance", rep.distance},
          {"threshold", rep.threshold},
          {"verdict", std::string(to_string(rep.verdict))},
          {"eta_eigenvalues", {rep.eta_eigenvalues.first, rep.eta_eigenvalues.second}},
          {"shots_per_input", rep.shots_per_input},
          {"seed", rep.seed}};
}

/// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double overflow");
  return std::string(buf, res.ptr);
}

/// Shortest representation that round-trips, for human-readable summaries.
inline std::string format_shortest(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_shortest overflow");
  return std::string(buf, res.ptr);
}

inline constexpr const char* kCsvHeader = "seed,N,total_copies,success_ratio,analytic_prob,abs_error";

inline std::string csv_row(const SimulationRecord& rec, double analytic_probability) {
  std::ostringstream os;
  os << rec.seed << ',' << rec.requested_successes << ',' << rec.total_copies_used << ','
     << format_double(rec.success_ratio) << ',' << format_double(analytic_probability) << ','
     << format_double(std::abs(rec.success_ratio - analytic_probability));
  return os.str();
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace metriq::io
