#pragma once

#include <optional>
#include <vector>

#include "albench/annotation_store.hpp"

namespace albench {

// Trust estimates for the current table: how much to weigh the classifier(s)
// and each annotator when aggregating their predicted class distributions.
// All accuracy statistics are computed over the examples with more than one
// annotation; low_confidence marks the fallback taken when there are none.
struct TrustEstimates {
  // Chance a typical annotator picks the consensus label.
  double typical_accuracy = 0.0;
  std::vector<double> annotator_weights;  // indexed by annotator id, clipped at 0
  double avg_annotator_weight = 0.0;      // mean annotator weight over all annotators
  std::vector<double> model_weights;      // one per classifier, clipped at 0
  std::vector<double> agreements;         // indexed by annotator id
  std::vector<double> model_accuracies;   // one per classifier
  double mlc_accuracy = 0.0;              // accuracy of always predicting the most labeled class
  bool low_confidence = false;
};

// Fraction of co-annotations on shared examples that agree with this
// annotator's label. nullopt when the annotator appears only on
// singly-annotated examples (no co-annotation evidence).
std::optional<double> annotator_agreement(const AnnotationTable& table, AnnotatorId annotator);

// Mean, over examples with 2+ annotations, of the fraction of that example's
// annotations equal to its consensus label. Throws when no such example exists.
double estimate_typical_accuracy(const AnnotationTable& table, const std::vector<int>& consensus);

// Distribution placing typical_accuracy on the chosen class and the
// remainder split evenly over the others.
std::vector<double> annotator_likelihood(ClassLabel chosen, double typical_accuracy, int num_classes);

// Fraction of multi-annotated examples whose consensus equals the model's
// argmax prediction. Throws when the subset is empty.
double model_accuracy(const AnnotationTable& table, const std::vector<int>& consensus, const Matrix& preds);

// Fraction of multi-annotated examples whose consensus equals the overall
// most labeled class. Throws when the subset is empty.
double mlc_accuracy(const AnnotationTable& table, const std::vector<int>& consensus);

double annotator_weight(double agreement, double mlc_acc);
double model_weight(double model_acc, double mlc_acc, double mean_labels_per_example);

// Fixed estimation pipeline: majority-vote consensus (ties broken by the
// first model's predictions) -> agreements, per-model accuracy, most-labeled-
// class accuracy, typical accuracy -> weights. preds_per_model rows must be
// out-of-sample for labeled examples and cover every example.
TrustEstimates fit_trust(const AnnotationTable& table, const std::vector<Matrix>& preds_per_model);

// Weighted ensemble of classifier prediction(s) and per-annotator likelihood
// vectors for each labeled example; the consensus label maximizes the
// normalized aggregate (ties to the smallest class index). No uniform
// average-annotator term here; that term exists only in the acquisition score.
ConsensusResult crowdlab_consensus(const AnnotationTable& table, const Matrix& preds,
                                   const TrustEstimates& trust);
ConsensusResult crowdlab_consensus(const AnnotationTable& table,
                                   const std::vector<Matrix>& preds_per_model,
                                   const TrustEstimates& trust);

}  // namespace albench
