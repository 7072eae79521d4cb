// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#include "retrodict/io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace retrodict {

namespace {

using nlohmann::json;

json complex_matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat complex_matrix_from_json(const json& j) {
  const int rows = static_cast<int>(j.size());
  if (rows == 0) throw IoError("channel file: empty complex matrix");
  const int cols = static_cast<int>(j.at(0).size());
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != cols) {
      throw IoError("channel file: ragged complex matrix");
    }
    for (int k = 0; k < cols; ++k) {
      const auto& cell = j.at(i).at(k);
      m(i, k) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

}  // namespace

std::string channel_to_json(const StochasticMatrix& map) {
  json j;
  j["type"] = "classical";
  j["dim"] = map.dim();
  json rows = json::array();
  for (int i = 0; i < map.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < map.dim(); ++k) row.push_back(map(i, k));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j.dump(1);
}

std::string channel_to_json(const SampledQubitChannel& chan) {
  json j;
  j["type"] = "dilation";
  j["dim"] = chan.dilation.system_dim();
  j["ancilla_dim"] = chan.dilation.ancilla_dim();
  j["U"] = complex_matrix_to_json(chan.dilation.unitary());
  j["beta"] = complex_matrix_to_json(chan.dilation.beta().mat());
  j["coords"] = {chan.det_coord, chan.fix_coord};
  j["cell"] = {chan.cell_i, chan.cell_j};
  return j.dump(1);
}

LoadedChannel channel_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("channel file: bad JSON: ") + e.what());
  }
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "classical") {
      const int d = j.at("dim").get<int>();
      const auto& rows = j.at("matrix");
      if (static_cast<int>(rows.size()) != d) {
        throw IoError("channel file: matrix row count differs from dim");
      }
      Eigen::MatrixXd m(d, d);
      for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows.at(i).size()) != d) {
          throw IoError("channel file: ragged matrix");
        }
        for (int k = 0; k < d; ++k) m(i, k) = rows.at(i).at(k).get<double>();
      }
      return StochasticMatrix(std::move(m));
    }
    if (type == "dilation") {
      const int d = j.at("dim").get<int>();
      const int dB = j.at("ancilla_dim").get<int>();
      CMat u = complex_matrix_from_json(j.at("U"));
      DensityOperator beta(complex_matrix_from_json(j.at("beta")));
      return Dilation(d, dB, std::move(u), std::move(beta));
    }
    throw IoError("channel file: unknown type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw IoError(std::string("channel file: ") + e.what());
  }
}

LoadedChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open channel file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return channel_from_json(buf.str());
}

void save_channel(const StochasticMatrix& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write channel file: " + path);
  out << channel_to_json(map) << "\n";
}

void save_channel(const SampledQubitChannel& chan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write channel file: " + path);
  out << channel_to_json(chan) << "\n";
}

std::string format_sig12(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), ncols_(header.size()) {
  if (!out_) throw IoError("cannot write CSV file: " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << header[i] << (i + 1 < header.size() ? "," : "");
  }
  out_ << "\n";
}

void CsvWriter::field(double v) { field(format_sig12(v)); }

void CsvWriter::field(long long v) { field(std::to_string(v)); }

void CsvWriter::field(const std::string& s) {
  out_ << s;
  if (++col_ < ncols_) out_ << ",";
}

void CsvWriter::end_row() {
  if (col_ != ncols_) throw IoError("CSV row with wrong field count");
  out_ << "\n";
  col_ = 0;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace retrodict
