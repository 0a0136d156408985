#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "albench/matrix.hpp"

namespace albench {

// External string ids mapped to dense indices in order of first appearance.
class IdMap {
 public:
  int add_or_get(const std::string& name);
  int get(const std::string& name) const;  // throws if unknown
  bool contains(const std::string& name) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int index) const { return names_[index]; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

// Shortest decimal form that round-trips a double exactly (17 significant
// digits). All floating-point output goes through this.
std::string format_double(double value);

struct AnnotationsFile {
  IdMap examples;
  IdMap annotators;
  // (example index, annotator index, label) in file order
  std::vector<std::array<int, 3>> entries;
  int max_label = -1;
};
// CSV with header example_id,annotator_id,label.
AnnotationsFile read_annotations_csv(const std::string& path);

struct FeaturesFile {
  IdMap examples;
  Matrix features;
};
// CSV with header example_id,f_0,...,f_{d-1}.
FeaturesFile read_features_csv(const std::string& path);

struct PredictionsFile {
  IdMap examples;
  Matrix probs;
};
// CSV with header example_id,p_0,...,p_{K-1}. Rows whose sum is within 1e-6
// of 1 are renormalized; anything further off is rejected.
PredictionsFile read_predictions_csv(const std::string& path);

// CSV with header example_id,label.
std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path);

// Reorders file rows to match a universe of ids; throws naming any id the
// file does not cover.
Matrix align_rows(const Matrix& rows, const IdMap& file_ids, const IdMap& universe,
                  const std::string& what);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// FNV-1a, hex-encoded; used for config fingerprints in run manifests.
std::string fnv1a_hex(const std::string& text);

}  // namespace albench
