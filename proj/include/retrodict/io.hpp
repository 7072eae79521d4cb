// Copyright 2026 the retrodict authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "retrodict/classical.hpp"
#include "retrodict/quantum.hpp"
#include "retrodict/samplers.hpp"

namespace retrodict {

struct IoError : Error {
  using Error::Error;
};

// Channel files are JSON with a "type" discriminator:
//   {"type":"classical","dim":d,"matrix":[[row0...],...]}   columns sum to 1
//   {"type":"dilation","dim":d,"ancilla_dim":dB,
//    "U":[[[re,im],...],...],"beta":[[[re,im],...],...],
//    "coords":[u,f],"cell":[i,j]}                            optional coords/cell
using LoadedChannel = std::variant<StochasticMatrix, Dilation>;

LoadedChannel load_channel(const std::string& path);

void save_channel(const StochasticMatrix& map, const std::string& path);
void save_channel(const SampledQubitChannel& chan, const std::string& path);

std::string channel_to_json(const StochasticMatrix& map);
std::string channel_to_json(const SampledQubitChannel& chan);
LoadedChannel channel_from_json(const std::string& text);

// CSV with a header row, 12 significant digits, LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void field(double v);
  void field(const std::string& s);
  void field(long long v);
  void end_row();

 private:
  std::ofstream out_;
  std::size_t ncols_;
  std::size_t col_ = 0;
};

std::string format_sig12(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace retrodict
