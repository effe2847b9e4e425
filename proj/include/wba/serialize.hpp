#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "wba/algebra22.hpp"
#include "wba/contraction33.hpp"
#include "wba/gram.hpp"
#include "wba/matrix_units.hpp"
#include "wba/report.hpp"

namespace wba {

using json = nlohmann::ordered_json;

inline json to_json(const Partition& mu) { return json(mu.parts()); }

inline json to_json(const Permutation& s) { return json(s.images()); }

inline json to_json(const BranchPath& path) {
  json out = json::array();
  for (const Partition& shape : path.chain) out.push_back(to_json(shape));
  return out;
}

inline json to_json(const UnitLabel& label) {
  json out;
  out["mu"] = to_json(label.mu);
  out["row"] = to_json(label.row);
  out["col"] = to_json(label.col);
  out["orient"] = to_string(label.orient);
  return out;
}

inline json to_json(const VerificationReport& r) {
  json out;
  out["claim_id"] = r.claim_id;
  out["p"] = r.p;
  out["d"] = r.d;
  out["max_abs_deviation"] = r.max_abs_deviation;
  out["tolerance"] = r.tolerance;
  out["pass"] = r.pass;
  out["n_cases"] = r.n_cases;
  return out;
}

// Row paths travel as 1-based path indices of their shape's table; the chains
// themselves are recoverable from shape and index.
inline json to_json(const MultiIndex& m) {
  json out;
  out["xi"] = to_json(m.xi);
  out["eta"] = to_json(m.eta);
  out["row_left"] = young_yamanouchi(m.xi, Orientation::LeftToRight)->path_index(m.row_left);
  out["row_right"] = young_yamanouchi(m.eta, Orientation::LeftToRight)->path_index(m.row_right);
  out["kappa"] = to_json(m.kappa);
  return out;
}

inline json to_json(const GramMatrix& g) {
  json set = json::array();
  for (const MultiIndex& m : g.index_set) set.push_back(to_json(m));
  json rows = json::array();
  for (Eigen::Index r = 0; r < g.entries.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < g.entries.cols(); ++c) row.push_back(g.entries(r, c));
    rows.push_back(std::move(row));
  }
  json out;
  out["index_set"] = std::move(set);
  out["entries"] = std::move(rows);
  return out;
}

inline json to_json(const Decomposition22& dec) {
  json blocks = json::array();
  for (const Block22& b : dec.blocks) {
    json jb;
    jb["ideal"] = b.ideal;
    jb["kind"] = b.matrix ? "matrix" : "scalar";
    jb["size"] = b.size;
    blocks.push_back(std::move(jb));
  }
  json out;
  out["d"] = dec.d;
  out["blocks"] = std::move(blocks);
  out["dim"] = dec.total_dimension;
  return out;
}

inline json to_json(const SqueezeExpansion& sq) {
  json input;
  input["mu"] = to_json(sq.left.mu);
  input["ij"] = letter_pair_key(sq.left.row, sq.left.col);
  input["nu"] = to_json(sq.right.mu);
  input["kl"] = letter_pair_key(sq.right.row, sq.right.col);
  json out;
  out["input"] = std::move(input);
  out["lambda2"] = json(sq.lambda2);
  out["lambda1"] = json(sq.lambda1);
  out["lambda0"] = json(sq.lambda0);
  out["residual"] = sq.residual;
  return out;
}

inline json to_json(const DenseOperator& x) {
  json rows = json::array();
  for (std::int64_t r = 0; r < x.dim(); ++r) {
    json row = json::array();
    for (std::int64_t c = 0; c < x.dim(); ++c)
      row.push_back(json::array({x.m(r, c).real(), x.m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- binary operator format ----
//
// Magic "WBAOP1", then unsigned 32-bit arity and local dimension, then the
// d^(2n) matrix entries as little-endian (re, im) float64 pairs, row-major.

static_assert(std::endian::native == std::endian::little,
              "binary operator format is little-endian");

inline void write_operator(std::ostream& out, const DenseOperator& x) {
  out.write("WBAOP1", 6);
  std::uint32_t header[2] = {static_cast<std::uint32_t>(x.n), static_cast<std::uint32_t>(x.d)};
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (std::int64_t r = 0; r < x.dim(); ++r)
    for (std::int64_t c = 0; c < x.dim(); ++c) {
      double pair[2] = {x.m(r, c).real(), x.m(r, c).imag()};
      out.write(reinterpret_cast<const char*>(pair), sizeof pair);
    }
  if (!out) throw std::runtime_error("operator write failed");
}

inline DenseOperator read_operator(std::istream& in) {
  char magic[6];
  in.read(magic, 6);
  if (!in || std::string(magic, 6) != "WBAOP1")
    throw std::runtime_error("not an operator file: bad magic");
  std::uint32_t header[2];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || header[0] == 0 || header[1] == 0 || header[0] > 16)
    throw std::runtime_error("operator header out of range");
  DenseOperator x = DenseOperator::zero(static_cast<int>(header[1]),
                                        static_cast<int>(header[0]));
  for (std::int64_t r = 0; r < x.dim(); ++r)
    for (std::int64_t c = 0; c < x.dim(); ++c) {
      double pair[2];
      in.read(reinterpret_cast<char*>(pair), sizeof pair);
      x.m(r, c) = {pair[0], pair[1]};
    }
  if (!in) throw std::runtime_error("operator payload truncated");
  return x;
}

inline void write_operator_file(const std::string& path, const DenseOperator& x) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_operator(out, x);
}

inline DenseOperator read_operator_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_operator(in);
}

// ---- csv ----

namespace detail {
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

inline std::string csv_of(const GramMatrix& g) {
  std::string out;
  for (Eigen::Index r = 0; r < g.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.entries.cols(); ++c) {
      if (c) out += ',';
      out += detail::format_double(g.entries(r, c));
    }
    out += '\n';
  }
  return out;
}

// One matrix row per line, columns alternating real and imaginary parts.
inline std::string csv_of(const DenseOperator& x) {
  std::string out;
  for (std::int64_t r = 0; r < x.dim(); ++r) {
    for (std::int64_t c = 0; c < x.dim(); ++c) {
      if (c) out += ',';
      out += detail::format_double(x.m(r, c).real());
      out += ',';
      out += detail::format_double(x.m(r, c).imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace wba
