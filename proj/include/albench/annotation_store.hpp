#pragma once

#include <span>
#include <vector>

#include "albench/matrix.hpp"

namespace albench {

using ExampleId = int;
using AnnotatorId = int;
// Class index in [0, K). K is fixed per dataset, K >= 2.
using ClassLabel = int;

struct Annotation {
  AnnotatorId annotator;
  ClassLabel label;
};

// Sparse example x annotator label table. An annotator labels a given example
// at most once. Ids are dense integers assigned at ingestion; external string
// ids are mapped through IdMap at the I/O boundary. Labeled set = examples
// with >= 1 entry, unlabeled pool = examples with none.
//
// Readers may run concurrently; add() requires exclusive access (the harness
// mutates only between rounds).
class AnnotationTable {
 public:
  AnnotationTable() : AnnotationTable(0, 2) {}
  AnnotationTable(int num_examples, int num_classes);

  // Throws on out-of-range ids/labels and on duplicate (example, annotator).
  void add(ExampleId example, AnnotatorId annotator, ClassLabel label);

  int num_examples() const { return static_cast<int>(by_example_.size()); }
  int num_classes() const { return num_classes_; }
  // Count of distinct annotators seen so far (ids are dense, so max id + 1).
  int num_annotators() const { return num_annotators_; }
  long total_annotations() const { return total_; }

  // Entries for one example, sorted by annotator id.
  std::span<const Annotation> annotations_of(ExampleId e) const;
  int annotation_count(ExampleId e) const;
  bool is_labeled(ExampleId e) const { return annotation_count(e) > 0; }
  bool has(ExampleId e, AnnotatorId a) const;

  std::vector<ExampleId> labeled_examples() const;
  std::vector<ExampleId> unlabeled_examples() const;
  // Examples with at least two annotations.
  std::vector<ExampleId> multi_annotated_subset() const;
  std::vector<ExampleId> examples_of(AnnotatorId a) const;

  // Class with the highest total annotation count over the whole table;
  // ties resolve to the smallest class index. Throws on an empty table.
  ClassLabel most_labeled_class() const;

  // Class frequencies among this example's annotations. Throws if unlabeled.
  std::vector<double> empirical_distribution(ExampleId e) const;

 private:
  int num_classes_;
  int num_annotators_ = 0;
  long total_ = 0;
  std::vector<std::vector<Annotation>> by_example_;
  std::vector<long> class_totals_;
};

struct ConsensusResult {
  std::vector<int> labels;  // per example; -1 where unlabeled
  Matrix probs;             // aggregate class distribution; zero rows where unlabeled
};

// Plurality class per labeled example. Tied classes resolve to the one with
// the highest tie_breaker probability, then to the smallest class index.
// tie_breaker must cover all examples (num_examples rows).
ConsensusResult majority_vote_consensus(const AnnotationTable& table, const Matrix& tie_breaker);
// Uniform tie-break variant (ties go to the smallest class index).
ConsensusResult majority_vote_consensus(const AnnotationTable& table);

}  // namespace albench
