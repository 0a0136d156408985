#include "albench/annotation_store.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace albench {

AnnotationTable::AnnotationTable(int num_examples, int num_classes)
    : num_classes_(num_classes), by_example_(num_examples), class_totals_(num_classes, 0) {
  if (num_examples < 0) throw std::invalid_argument("negative example count");
  if (num_classes < 2) throw std::invalid_argument("need at least 2 classes");
}

void AnnotationTable::add(ExampleId example, AnnotatorId annotator, ClassLabel label) {
  if (example < 0 || example >= num_examples())
    throw std::out_of_range("example id " + std::to_string(example) + " out of range");
  if (annotator < 0) throw std::out_of_range("negative annotator id");
  if (label < 0 || label >= num_classes_)
    throw std::out_of_range("label " + std::to_string(label) + " outside [0, " +
                            std::to_string(num_classes_) + ")");
  auto& entries = by_example_[example];
  auto pos = std::lower_bound(entries.begin(), entries.end(), annotator,
                              [](const Annotation& an, AnnotatorId a) { return an.annotator < a; });
  if (pos != entries.end() && pos->annotator == annotator)
    throw std::invalid_argument("annotator " + std::to_string(annotator) +
                                " already labeled example " + std::to_string(example));
  entries.insert(pos, Annotation{annotator, label});
  num_annotators_ = std::max(num_annotators_, annotator + 1);
  class_totals_[label] += 1;
  total_ += 1;
}

std::span<const Annotation> AnnotationTable::annotations_of(ExampleId e) const {
  return {by_example_[e].data(), by_example_[e].size()};
}

int AnnotationTable::annotation_count(ExampleId e) const {
  return static_cast<int>(by_example_[e].size());
}

bool AnnotationTable::has(ExampleId e, AnnotatorId a) const {
  const auto& entries = by_example_[e];
  auto pos = std::lower_bound(entries.begin(), entries.end(), a,
                              [](const Annotation& an, AnnotatorId x) { return an.annotator < x; });
  return pos != entries.end() && pos->annotator == a;
}

std::vector<ExampleId> AnnotationTable::labeled_examples() const {
  std::vector<ExampleId> out;
  for (int e = 0; e < num_examples(); ++e)
    if (!by_example_[e].empty()) out.push_back(e);
  return out;
}

std::vector<ExampleId> AnnotationTable::unlabeled_examples() const {
  std::vector<ExampleId> out;
  for (int e = 0; e < num_examples(); ++e)
    if (by_example_[e].empty()) out.push_back(e);
  return out;
}

std::vector<ExampleId> AnnotationTable::multi_annotated_subset() const {
  std::vector<ExampleId> out;
  for (int e = 0; e < num_examples(); ++e)
    if (by_example_[e].size() >= 2) out.push_back(e);
  return out;
}

std::vector<ExampleId> AnnotationTable::examples_of(AnnotatorId a) const {
  std::vector<ExampleId> out;
  for (int e = 0; e < num_examples(); ++e)
    if (has(e, a)) out.push_back(e);
  return out;
}

ClassLabel AnnotationTable::most_labeled_class() const {
  if (total_ == 0) throw std::logic_error("most_labeled_class on empty table");
  int best = 0;
  for (int k = 1; k < num_classes_; ++k)
    if (class_totals_[k] > class_totals_[best]) best = k;
  return best;
}

std::vector<double> AnnotationTable::empirical_distribution(ExampleId e) const {
  const auto& entries = by_example_[e];
  if (entries.empty())
    throw std::logic_error("empirical distribution undefined for unlabeled example " +
                           std::to_string(e));
  std::vector<double> probs(num_classes_, 0.0);
  for (const auto& an : entries) probs[an.label] += 1.0;
  for (double& p : probs) p /= static_cast<double>(entries.size());
  return probs;
}

ConsensusResult majority_vote_consensus(const AnnotationTable& table, const Matrix& tie_breaker) {
  if (tie_breaker.rows < table.num_examples() || tie_breaker.cols != table.num_classes())
    throw std::invalid_argument("tie breaker does not cover the table");
  const int K = table.num_classes();
  ConsensusResult result;
  result.labels.assign(table.num_examples(), -1);
  result.probs = Matrix(table.num_examples(), K, 0.0);
  for (int e = 0; e < table.num_examples(); ++e) {
    if (!table.is_labeled(e)) continue;
    std::vector<double> votes = table.empirical_distribution(e);
    double top = *std::max_element(votes.begin(), votes.end());
    int best = -1;
    for (int k = 0; k < K; ++k) {
      if (votes[k] < top) continue;
      if (best == -1 || tie_breaker.at(e, k) > tie_breaker.at(e, best)) best = k;
    }
    result.labels[e] = best;
    std::copy(votes.begin(), votes.end(), result.probs.row(e).begin());
  }
  return result;
}

ConsensusResult majority_vote_consensus(const AnnotationTable& table) {
  return majority_vote_consensus(table,
                                 uniform_rows(table.num_examples(), table.num_classes()));
}

}  // namespace albench
