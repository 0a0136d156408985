#include "albench/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace albench {

namespace {

// A constant consensus makes the most-labeled-class accuracy 1 and the
// normalization 1/(1 - A_MLC) divide by zero; keep the denominator positive.
constexpr double kMinMlcGap = 1e-3;

double clipped_ratio_weight(double accuracy, double mlc_acc) {
  double gap = std::max(1.0 - mlc_acc, kMinMlcGap);
  return std::max(0.0, 1.0 - (1.0 - accuracy) / gap);
}

double mean_labels_per_labeled_example(const AnnotationTable& table) {
  auto labeled = table.labeled_examples();
  if (labeled.empty()) return 0.0;
  double sum = 0.0;
  for (ExampleId e : labeled) sum += table.annotation_count(e);
  return sum / static_cast<double>(labeled.size());
}

}  // namespace

std::optional<double> annotator_agreement(const AnnotationTable& table, AnnotatorId annotator) {
  long agree = 0;
  long pairs = 0;
  for (ExampleId e : table.examples_of(annotator)) {
    auto entries = table.annotations_of(e);
    ClassLabel own = -1;
    for (const auto& an : entries)
      if (an.annotator == annotator) own = an.label;
    for (const auto& an : entries) {
      if (an.annotator == annotator) continue;
      pairs += 1;
      if (an.label == own) agree += 1;
    }
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(agree) / static_cast<double>(pairs);
}

double estimate_typical_accuracy(const AnnotationTable& table, const std::vector<int>& consensus) {
  auto multi = table.multi_annotated_subset();
  if (multi.empty()) throw std::logic_error("no multi-annotated examples");
  double sum = 0.0;
  for (ExampleId e : multi) {
    auto entries = table.annotations_of(e);
    int matches = 0;
    for (const auto& an : entries)
      if (an.label == consensus[e]) matches += 1;
    sum += static_cast<double>(matches) / static_cast<double>(entries.size());
  }
  return sum / static_cast<double>(multi.size());
}

std::vector<double> annotator_likelihood(ClassLabel chosen, double typical_accuracy, int num_classes) {
  std::vector<double> probs(num_classes, (1.0 - typical_accuracy) / (num_classes - 1));
  probs[chosen] = typical_accuracy;
  return probs;
}

double model_accuracy(const AnnotationTable& table, const std::vector<int>& consensus,
                      const Matrix& preds) {
  auto multi = table.multi_annotated_subset();
  if (multi.empty()) throw std::logic_error("no multi-annotated examples");
  long hits = 0;
  for (ExampleId e : multi)
    if (argmax(preds.row(e)) == consensus[e]) hits += 1;
  return static_cast<double>(hits) / static_cast<double>(multi.size());
}

double mlc_accuracy(const AnnotationTable& table, const std::vector<int>& consensus) {
  auto multi = table.multi_annotated_subset();
  if (multi.empty()) throw std::logic_error("no multi-annotated examples");
  ClassLabel mlc = table.most_labeled_class();
  long hits = 0;
  for (ExampleId e : multi)
    if (consensus[e] == mlc) hits += 1;
  return static_cast<double>(hits) / static_cast<double>(multi.size());
}

double annotator_weight(double agreement, double mlc_acc) {
  return clipped_ratio_weight(agreement, mlc_acc);
}

double model_weight(double model_acc, double mlc_acc, double mean_labels_per_example) {
  return clipped_ratio_weight(model_acc, mlc_acc) * std::sqrt(mean_labels_per_example);
}

TrustEstimates fit_trust(const AnnotationTable& table, const std::vector<Matrix>& preds_per_model) {
  if (preds_per_model.empty()) throw std::invalid_argument("need at least one prediction matrix");
  if (table.total_annotations() == 0) throw std::invalid_argument("empty annotation table");
  const int K = table.num_classes();
  const int num_models = static_cast<int>(preds_per_model.size());
  const int m = table.num_annotators();

  TrustEstimates trust;
  trust.model_accuracies.resize(num_models);
  trust.model_weights.resize(num_models);
  trust.agreements.assign(m, 0.0);
  trust.annotator_weights.assign(m, 0.0);

  ConsensusResult vote = majority_vote_consensus(table, preds_per_model[0]);
  const double mean_labels = mean_labels_per_labeled_example(table);
  const bool have_multi = !table.multi_annotated_subset().empty();

  if (have_multi) {
    trust.typical_accuracy = estimate_typical_accuracy(table, vote.labels);
    trust.mlc_accuracy = mlc_accuracy(table, vote.labels);
    for (int l = 0; l < num_models; ++l)
      trust.model_accuracies[l] = model_accuracy(table, vote.labels, preds_per_model[l]);
    for (AnnotatorId j = 0; j < m; ++j) {
      auto g = annotator_agreement(table, j);
      trust.agreements[j] = g.value_or(trust.typical_accuracy);
    }
  } else {
    // No example has two annotations, so agreement statistics do not exist.
    // Score each model against the sole annotation of every labeled example
    // and treat the first model's accuracy (kept inside [1/K, 1]) as the
    // typical-annotator accuracy.
    trust.low_confidence = true;
    auto labeled = table.labeled_examples();
    ClassLabel mlc = table.most_labeled_class();
    long mlc_hits = 0;
    for (ExampleId e : labeled)
      if (vote.labels[e] == mlc) mlc_hits += 1;
    trust.mlc_accuracy = static_cast<double>(mlc_hits) / static_cast<double>(labeled.size());
    for (int l = 0; l < num_models; ++l) {
      long hits = 0;
      for (ExampleId e : labeled)
        if (argmax(preds_per_model[l].row(e)) == vote.labels[e]) hits += 1;
      trust.model_accuracies[l] = static_cast<double>(hits) / static_cast<double>(labeled.size());
    }
    trust.typical_accuracy = std::clamp(trust.model_accuracies[0], 1.0 / K, 1.0);
    for (AnnotatorId j = 0; j < m; ++j) trust.agreements[j] = trust.typical_accuracy;
  }

  for (AnnotatorId j = 0; j < m; ++j)
    trust.annotator_weights[j] = annotator_weight(trust.agreements[j], trust.mlc_accuracy);
  for (int l = 0; l < num_models; ++l)
    trust.model_weights[l] = model_weight(trust.model_accuracies[l], trust.mlc_accuracy, mean_labels);

  double weight_sum = 0.0;
  for (double w : trust.annotator_weights) weight_sum += w;
  trust.avg_annotator_weight = m > 0 ? weight_sum / static_cast<double>(m) : 0.0;
  return trust;
}

ConsensusResult crowdlab_consensus(const AnnotationTable& table,
                                   const std::vector<Matrix>& preds_per_model,
                                   const TrustEstimates& trust) {
  const int K = table.num_classes();
  const int num_models = static_cast<int>(preds_per_model.size());
  ConsensusResult result;
  result.labels.assign(table.num_examples(), -1);
  result.probs = Matrix(table.num_examples(), K, 0.0);

  ConsensusResult vote_fallback = majority_vote_consensus(table, preds_per_model[0]);

  for (int e = 0; e < table.num_examples(); ++e) {
    if (!table.is_labeled(e)) continue;
    std::vector<double> agg(K, 0.0);
    double denom = 0.0;
    for (int l = 0; l < num_models; ++l) {
      double w = trust.model_weights[l];
      denom += w;
      for (int k = 0; k < K; ++k) agg[k] += w * preds_per_model[l].at(e, k);
    }
    for (const auto& an : table.annotations_of(e)) {
      double w = trust.annotator_weights[an.annotator];
      denom += w;
      auto lik = annotator_likelihood(an.label, trust.typical_accuracy, K);
      for (int k = 0; k < K; ++k) agg[k] += w * lik[k];
    }
    if (denom <= 0.0) {
      // Every vote in the ensemble has zero weight; fall back to majority vote.
      std::fill(agg.begin(), agg.end(), 1.0 / K);
      result.labels[e] = vote_fallback.labels[e];
    } else {
      for (double& v : agg) v /= denom;
      result.labels[e] = argmax(agg);
    }
    std::copy(agg.begin(), agg.end(), result.probs.row(e).begin());
  }
  return result;
}

ConsensusResult crowdlab_consensus(const AnnotationTable& table, const Matrix& preds,
                                   const TrustEstimates& trust) {
  return crowdlab_consensus(table, std::vector<Matrix>{preds}, trust);
}

}  // namespace albench
