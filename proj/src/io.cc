// src/io.cc

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

#include "jplda/io.h"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace jplda {

namespace {

class ByteWriter {
 public:
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void F64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i)
      out_.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
  }
  void Raw(const char *data, std::size_t n) { out_.append(data, n); }
  // Row-major.
  void Matrix(const Eigen::MatrixXd &m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) F64(m(r, c));
  }
  std::string Take() { return std::move(out_); }

 private:
  std::string out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t Remaining() const { return bytes_.size() - pos_; }

  void Need(std::size_t n, const char *what) const {
    if (Remaining() < n)
      throw Error(ErrorCode::kTruncatedPayload,
                  std::string("file ends inside ") + what);
  }
  std::uint32_t U32(const char *what) {
    Need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    pos_ += 4;
    return v;
  }
  double F64() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i]))
              << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(bits);
  }
  Eigen::MatrixXd Matrix(std::uint32_t rows, std::uint32_t cols) {
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
      for (std::uint32_t c = 0; c < cols; ++c) m(r, c) = F64();
    return m;
  }
  std::string_view Take(std::size_t n) {
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::ifstream OpenIn(const std::string &path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string &path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc
                                 : std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

// getline without the trailing '\r' of CRLF files.
bool NextLine(std::istream &in, std::string *line) {
  if (!std::getline(in, *line)) return false;
  if (!line->empty() && line->back() == '\r') line->pop_back();
  return true;
}

std::string LineError(int line_no, const std::string &what) {
  return "line " + std::to_string(line_no) + ": " + what;
}

int ParseInt(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw Error(ErrorCode::kParseError, "bad integer '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::string SerializeModel(const ModelParams &model) {
  ValidateModel(model);
  ByteWriter w;
  w.Raw(kModelMagic, sizeof(kModelMagic));
  w.U32(kModelFormatVersion);
  w.U32(static_cast<std::uint32_t>(model.Dim()));
  w.U32(static_cast<std::uint32_t>(model.SpeakerRank()));
  w.U32(static_cast<std::uint32_t>(model.NumConditions()));
  for (int j = 0; j < model.NumConditions(); ++j)
    w.U32(static_cast<std::uint32_t>(model.ConditionRank(j)));
  for (Eigen::Index i = 0; i < model.mean.size(); ++i) w.F64(model.mean(i));
  w.Matrix(model.speaker_loadings);
  for (const auto &u : model.condition_loadings) w.Matrix(u);
  w.Matrix(model.precision);
  return w.Take();
}

ModelParams DeserializeModel(std::string_view bytes) {
  ByteReader r(bytes);
  if (r.Remaining() < sizeof(kModelMagic) ||
      std::memcmp(r.Take(sizeof(kModelMagic)).data(), kModelMagic,
                  sizeof(kModelMagic)) != 0)
    throw Error(ErrorCode::kBadMagic, "not a JPLDA model file");
  const std::uint32_t version = r.U32("version");
  if (version != kModelFormatVersion)
    throw Error(ErrorCode::kVersionUnsupported,
                "model format version " + std::to_string(version));
  const std::uint32_t d = r.U32("header");
  const std::uint32_t ry = r.U32("header");
  const std::uint32_t n = r.U32("header");
  // Each rank takes 4 bytes, so a bogus N is caught before allocating.
  r.Need(std::uint64_t{n} * 4, "header");
  std::vector<std::uint32_t> rx(n);
  for (auto &rank : rx) rank = r.U32("header");

  std::uint64_t doubles = std::uint64_t{d} + std::uint64_t{d} * ry +
                          std::uint64_t{d} * d;
  for (std::uint32_t rank : rx) doubles += std::uint64_t{d} * rank;
  if (doubles > r.Remaining() / 8)
    throw Error(ErrorCode::kTruncatedPayload,
                "header expects " + std::to_string(doubles * 8) +
                    " payload bytes, found " + std::to_string(r.Remaining()));
  if (doubles * 8 != r.Remaining())
    throw Error(ErrorCode::kValidationFailed,
                std::to_string(r.Remaining() - doubles * 8) +
                    " trailing bytes after payload");

  ModelParams model;
  model.mean = r.Matrix(d, 1);
  model.speaker_loadings = r.Matrix(d, ry);
  for (std::uint32_t rank : rx) model.condition_loadings.push_back(r.Matrix(d, rank));
  model.precision = r.Matrix(d, d);
  try {
    ValidateModel(model);
  } catch (const Error &e) {
    throw Error(ErrorCode::kValidationFailed, e.what());
  }
  return model;
}

void SaveModel(const std::string &path, const ModelParams &model) {
  const std::string bytes = SerializeModel(model);
  auto out = OpenOut(path, true);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

ModelParams LoadModel(const std::string &path) {
  auto in = OpenIn(path, true);
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return DeserializeModel(bytes);
}

std::string FormatDouble(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string FormatScore(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view text) {
  double v = 0.0;
  const char *begin = text.data(), *end = text.data() + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (begin == end || ec != std::errc() || ptr != end)
    throw Error(ErrorCode::kParseError, "bad number '" + std::string(text) + "'");
  return v;
}

EmbeddingTable ReadEmbeddingTable(std::istream &in) {
  std::vector<std::string> ids;
  std::vector<double> values;
  long dim = -1;
  std::string line;
  for (int line_no = 1; NextLine(in, &line); ++line_no) {
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields[0].empty())
      throw Error(ErrorCode::kParseError, LineError(line_no, "empty id"));
    const long row_dim = static_cast<long>(fields.size()) - 1;
    if (dim < 0) dim = row_dim;
    if (row_dim != dim || dim == 0)
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "expected " + std::to_string(dim) +
                                         " values, found " +
                                         std::to_string(row_dim)));
    ids.emplace_back(fields[0]);
    try {
      for (std::size_t k = 1; k < fields.size(); ++k)
        values.push_back(ParseDouble(fields[k]));
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, LineError(line_no, e.what()));
    }
  }
  if (dim < 0) return EmbeddingTable();
  Eigen::MatrixXd vectors =
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>(values.data(),
                                                 static_cast<Eigen::Index>(ids.size()),
                                                 dim);
  return EmbeddingTable(std::move(ids), std::move(vectors));
}

EmbeddingTable ReadEmbeddingTable(const std::string &path) {
  auto in = OpenIn(path);
  try {
    return ReadEmbeddingTable(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WriteEmbeddingTable(std::ostream &out, const EmbeddingTable &table) {
  for (int i = 0; i < table.Size(); ++i) {
    out << table.ids()[i];
    for (int k = 0; k < table.Dim(); ++k)
      out << '\t' << FormatDouble(table.vectors()(i, k));
    out << '\n';
  }
}

void WriteEmbeddingTable(const std::string &path, const EmbeddingTable &table) {
  auto out = OpenOut(path);
  WriteEmbeddingTable(out, table);
}

std::vector<Trial> ReadTrialList(std::istream &in) {
  std::vector<Trial> trials;
  std::string line;
  for (int line_no = 1; NextLine(in, &line); ++line_no) {
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty() ||
        fields[1].empty())
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "expected enroll<TAB>test[<TAB>label]"));
    Trial t{std::string(fields[0]), std::string(fields[1]), std::nullopt};
    if (fields.size() == 3) {
      if (fields[2] == "target")
        t.is_target = true;
      else if (fields[2] == "nontarget")
        t.is_target = false;
      else
        throw Error(ErrorCode::kParseError,
                    LineError(line_no, "label must be target or nontarget"));
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

std::vector<Trial> ReadTrialList(const std::string &path) {
  auto in = OpenIn(path);
  try {
    return ReadTrialList(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WriteTrialList(std::ostream &out, const std::vector<Trial> &trials) {
  for (const Trial &t : trials) {
    out << t.enroll_id << '\t' << t.test_id;
    if (t.is_target) out << '\t' << (*t.is_target ? "target" : "nontarget");
    out << '\n';
  }
}

void WriteTrialList(const std::string &path, const std::vector<Trial> &trials) {
  auto out = OpenOut(path);
  WriteTrialList(out, trials);
}

PriorConfig ReadPriors(std::istream &in, int num_conditions) {
  PriorConfig priors = PriorConfig::Uniform(num_conditions);
  std::string line;
  for (int line_no = 1; NextLine(in, &line); ++line_no) {
    const std::string_view text = Trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::kParseError, LineError(line_no, "expected key = value"));
    const std::string_view key = Trim(text.substr(0, eq));
    const std::string_view value = Trim(text.substr(eq + 1));

    constexpr std::string_view kPrefix = "condition.";
    const std::size_t dot = key.find('.', kPrefix.size());
    if (key.substr(0, kPrefix.size()) != kPrefix || dot == std::string_view::npos)
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "unknown key '" + std::string(key) + "'"));
    int j = 0;
    double p = 0.0;
    try {
      j = ParseInt(key.substr(kPrefix.size(), dot - kPrefix.size()));
      p = ParseDouble(value);
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, LineError(line_no, e.what()));
    }
    if (j < 1 || j > num_conditions)
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "condition index " + std::to_string(j) +
                                         " out of range 1.." +
                                         std::to_string(num_conditions)));
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "probability outside [0,1]"));
    const std::string_view field = key.substr(dot + 1);
    if (field == "p_same_given_ss")
      priors.conditions[j - 1].p_same_given_ss = p;
    else if (field == "p_same_given_ds")
      priors.conditions[j - 1].p_same_given_ds = p;
    else
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "unknown key '" + std::string(key) + "'"));
  }
  return priors;
}

PriorConfig ReadPriors(const std::string &path, int num_conditions) {
  auto in = OpenIn(path);
  try {
    return ReadPriors(in, num_conditions);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WritePriors(std::ostream &out, const PriorConfig &priors) {
  for (std::size_t j = 0; j < priors.conditions.size(); ++j) {
    out << "condition." << j + 1 << ".p_same_given_ss = "
        << FormatDouble(priors.conditions[j].p_same_given_ss) << '\n';
    out << "condition." << j + 1 << ".p_same_given_ds = "
        << FormatDouble(priors.conditions[j].p_same_given_ds) << '\n';
  }
}

void WriteScores(std::ostream &out, const std::vector<Trial> &trials,
                 const std::vector<double> &scores) {
  if (trials.size() != scores.size())
    throw Error(ErrorCode::kDimensionMismatch, "one score per trial expected");
  for (std::size_t t = 0; t < trials.size(); ++t)
    out << trials[t].enroll_id << '\t' << trials[t].test_id << '\t'
        << FormatScore(scores[t]) << '\n';
}

std::vector<ScoreRow> ReadScores(std::istream &in) {
  std::vector<ScoreRow> rows;
  std::string line;
  for (int line_no = 1; NextLine(in, &line); ++line_no) {
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
      throw Error(ErrorCode::kParseError,
                  LineError(line_no, "expected enroll<TAB>test<TAB>score"));
    try {
      rows.push_back({std::string(fields[0]), std::string(fields[1]),
                      ParseDouble(fields[2])});
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, LineError(line_no, e.what()));
    }
  }
  return rows;
}

std::vector<ScoreRow> ReadScores(const std::string &path) {
  auto in = OpenIn(path);
  try {
    return ReadScores(in);
  } catch (const Error &e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void WriteLabels(std::ostream &out, const SyntheticDataset &data) {
  for (int i = 0; i < data.NumSamples(); ++i) {
    out << data.ids[i] << '\t' << data.speaker_labels[i];
    for (const auto &labels : data.condition_labels) out << '\t' << labels[i];
    out << '\n';
  }
}

std::vector<LabelRow> ReadLabels(std::istream &in) {
  std::vector<LabelRow> rows;
  std::string line;
  for (int line_no = 1; NextLine(in, &line); ++line_no) {
    if (Trim(line).empty()) continue;
    const auto fields = SplitTabs(line);
    if (fields.size() < 2)
      throw Error(ErrorCode::kParseError, LineError(line_no, "expected id<TAB>speaker"));
    LabelRow row;
    row.id = std::string(fields[0]);
    try {
      row.speaker = ParseInt(fields[1]);
      for (std::size_t k = 2; k < fields.size(); ++k)
        row.conditions.push_back(ParseInt(fields[k]));
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, LineError(line_no, e.what()));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace jplda
