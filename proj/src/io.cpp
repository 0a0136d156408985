#include "albench/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace albench {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

[[noreturn]] void fail(const std::string& path, size_t line_no, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + msg);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

double parse_double(const std::string& path, size_t line_no, const std::string& s) {
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) fail(path, line_no, "malformed number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(path, line_no, "malformed number '" + s + "'");
  }
}

int parse_int(const std::string& path, size_t line_no, const std::string& s) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) fail(path, line_no, "malformed integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(path, line_no, "malformed integer '" + s + "'");
  }
}

}  // namespace

int IdMap::add_or_get(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

int IdMap::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::runtime_error("unknown id '" + name + "'");
  return it->second;
}

bool IdMap::contains(const std::string& name) const { return index_.count(name) > 0; }

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

AnnotationsFile read_annotations_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv_line(lines[0]);
  if (header.size() != 3 || header[0] != "example_id" || header[1] != "annotator_id" ||
      header[2] != "label")
    fail(path, 1, "expected header example_id,annotator_id,label");
  AnnotationsFile out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv_line(lines[i]);
    if (f.size() != 3) fail(path, i + 1, "expected 3 fields");
    int label = parse_int(path, i + 1, f[2]);
    if (label < 0) fail(path, i + 1, "negative label");
    out.entries.push_back(
        {out.examples.add_or_get(f[0]), out.annotators.add_or_get(f[1]), label});
    out.max_label = std::max(out.max_label, label);
  }
  return out;
}

FeaturesFile read_features_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "example_id")
    fail(path, 1, "expected header example_id,f_0,...");
  const int dim = static_cast<int>(header.size()) - 1;
  FeaturesFile out;
  std::vector<double> values;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv_line(lines[i]);
    if (static_cast<int>(f.size()) != dim + 1) fail(path, i + 1, "field count mismatch");
    if (out.examples.contains(f[0])) fail(path, i + 1, "duplicate example id '" + f[0] + "'");
    out.examples.add_or_get(f[0]);
    for (int j = 0; j < dim; ++j) values.push_back(parse_double(path, i + 1, f[j + 1]));
  }
  out.features = Matrix(out.examples.size(), dim);
  out.features.data = std::move(values);
  return out;
}

PredictionsFile read_predictions_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv_line(lines[0]);
  if (header.size() < 3 || header[0] != "example_id")
    fail(path, 1, "expected header example_id,p_0,...,p_{K-1}");
  const int K = static_cast<int>(header.size()) - 1;
  PredictionsFile out;
  std::vector<double> values;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv_line(lines[i]);
    if (static_cast<int>(f.size()) != K + 1) fail(path, i + 1, "field count mismatch");
    if (out.examples.contains(f[0])) fail(path, i + 1, "duplicate example id '" + f[0] + "'");
    out.examples.add_or_get(f[0]);
    double sum = 0.0;
    size_t base = values.size();
    for (int k = 0; k < K; ++k) {
      double p = parse_double(path, i + 1, f[k + 1]);
      if (p < 0.0 || !std::isfinite(p)) fail(path, i + 1, "probabilities must be finite and >= 0");
      values.push_back(p);
      sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-6)
      fail(path, i + 1, "row sums to " + format_double(sum) + ", outside 1 +/- 1e-6");
    for (int k = 0; k < K; ++k) values[base + k] /= sum;
  }
  out.probs = Matrix(out.examples.size(), K);
  out.probs.data = std::move(values);
  return out;
}

std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path) {
  auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error(path + ": empty file");
  auto header = split_csv_line(lines[0]);
  if (header.size() != 2 || header[0] != "example_id" || header[1] != "label")
    fail(path, 1, "expected header example_id,label");
  std::vector<std::pair<std::string, int>> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    auto f = split_csv_line(lines[i]);
    if (f.size() != 2) fail(path, i + 1, "expected 2 fields");
    out.emplace_back(f[0], parse_int(path, i + 1, f[1]));
  }
  return out;
}

Matrix align_rows(const Matrix& rows, const IdMap& file_ids, const IdMap& universe,
                  const std::string& what) {
  Matrix out(universe.size(), rows.cols);
  for (int i = 0; i < universe.size(); ++i) {
    const std::string& id = universe.name(i);
    if (!file_ids.contains(id))
      throw std::runtime_error(what + " is missing example '" + id + "'");
    auto src = rows.row(file_ids.get(id));
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace albench
