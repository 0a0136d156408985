#include "albench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "albench/rng.hpp"

namespace albench {

namespace {

constexpr double kProbFloor = 1e-12;

double safe_log(double p) { return std::log(std::max(p, kProbFloor)); }

double max_entry(std::span<const double> row) {
  return *std::max_element(row.begin(), row.end());
}

}  // namespace

ScorerKind scorer_from_name(const std::string& name) {
  const auto& names = scorer_names();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<ScorerKind>(i);
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown scorer '" + name + "' (valid: " + valid + ")");
}

const std::vector<std::string>& scorer_names() {
  static const std::vector<std::string> names = {
      "activelab", "activelab_ensemble", "activelab_single", "random",    "good_random",
      "entropy",   "uncertainty",        "alc",              "disagreement"};
  return names;
}

std::string scorer_name(ScorerKind kind) { return scorer_names()[static_cast<size_t>(kind)]; }

bool scorer_needs_ensemble(ScorerKind kind) {
  return kind == ScorerKind::ActiveLabEnsemble || kind == ScorerKind::Disagreement;
}

bool scorer_uses_crowdlab(ScorerKind kind) {
  return kind == ScorerKind::ActiveLab || kind == ScorerKind::ActiveLabEnsemble;
}

double activelab_ensemble_labeled_score(const AnnotationTable& table, ExampleId e,
                                        int consensus_label, const std::vector<Matrix>& preds,
                                        const TrustEstimates& trust) {
  const int K = table.num_classes();
  double num = trust.avg_annotator_weight / K;
  double den = trust.avg_annotator_weight;
  for (size_t l = 0; l < preds.size(); ++l) {
    num += trust.model_weights[l] * preds[l].at(e, consensus_label);
    den += trust.model_weights[l];
  }
  for (const auto& an : table.annotations_of(e)) {
    double w = trust.annotator_weights[an.annotator];
    double lik = an.label == consensus_label
                     ? trust.typical_accuracy
                     : (1.0 - trust.typical_accuracy) / (K - 1);
    num += w * lik;
    den += w;
  }
  if (den <= 0.0) return 1.0 / K;
  return num / den;
}

double activelab_labeled_score(const AnnotationTable& table, ExampleId e, int consensus_label,
                               const Matrix& preds, const TrustEstimates& trust) {
  return activelab_ensemble_labeled_score(table, e, consensus_label, {preds}, trust);
}

double activelab_ensemble_unlabeled_score(ExampleId e, const std::vector<Matrix>& preds,
                                          const TrustEstimates& trust) {
  const int K = preds[0].cols;
  // Proxy consensus: argmax of the weight-averaged model predictions.
  std::vector<double> avg(K, 0.0);
  double wsum = 0.0;
  for (size_t l = 0; l < preds.size(); ++l) wsum += trust.model_weights[l];
  for (size_t l = 0; l < preds.size(); ++l) {
    double w = wsum > 0.0 ? trust.model_weights[l] / wsum : 1.0 / preds.size();
    for (int k = 0; k < K; ++k) avg[k] += w * preds[l].at(e, k);
  }
  int proxy = argmax(avg);

  double num = trust.avg_annotator_weight / K;
  double den = trust.avg_annotator_weight;
  for (size_t l = 0; l < preds.size(); ++l) {
    num += trust.model_weights[l] * preds[l].at(e, proxy);
    den += trust.model_weights[l];
  }
  if (den <= 0.0) return 1.0 / K;
  return num / den;
}

double activelab_unlabeled_score(ExampleId e, const Matrix& preds, const TrustEstimates& trust) {
  const int K = preds.cols;
  double num = trust.model_weights[0] * max_entry(preds.row(e)) + trust.avg_annotator_weight / K;
  double den = trust.model_weights[0] + trust.avg_annotator_weight;
  if (den <= 0.0) return 1.0 / K;
  return num / den;
}

double activelab_single_label_score(std::span<const double> pred_row) {
  return (max_entry(pred_row) + 1.0 / pred_row.size()) / 2.0;
}

double entropy_score(std::span<const double> pred_row) {
  double s = 0.0;
  for (double p : pred_row) s += p * safe_log(p);
  return s;
}

double uncertainty_score(std::span<const double> pred_row) { return max_entry(pred_row); }

double alc_score(std::span<const double> pred_row, std::span<const double> empirical) {
  // Printed form: entropy term minus the cross term; high raw value = model
  // confidently contradicts the annotations = top relabel priority.
  double raw = 0.0;
  for (size_t k = 0; k < pred_row.size(); ++k) {
    raw += pred_row[k] * safe_log(pred_row[k]);
    raw -= empirical[k] * safe_log(pred_row[k]);
  }
  return -raw;
}

double disagreement_score(const std::vector<Matrix>& preds, ExampleId e, DisagreementForm form) {
  const size_t L = preds.size();
  if (L < 2) throw std::invalid_argument("disagreement needs at least 2 models");
  const int K = preds[0].cols;
  std::vector<double> mean(K, 0.0);
  for (const auto& m : preds)
    for (int k = 0; k < K; ++k) mean[k] += m.at(e, k) / static_cast<double>(L);
  double total = 0.0;
  for (const auto& m : preds) {
    for (int k = 0; k < K; ++k) {
      double p = m.at(e, k);
      total += form == DisagreementForm::CrossEntropy ? p * safe_log(mean[k]) : p * mean[k];
    }
  }
  // Both forms are largest under perfect agreement, so the average itself
  // already sends disagreeing examples to the front of the queue.
  return total / static_cast<double>(L);
}

std::vector<double> score_all(ScorerKind kind, const ScoreInputs& in) {
  const AnnotationTable& table = *in.table;
  const std::vector<Matrix>& preds = *in.preds;
  const int n = table.num_examples();
  std::vector<double> scores(n, 0.0);

  switch (kind) {
    case ScorerKind::Random:
      for (int e = 0; e < n; ++e) scores[e] = unit_from(in.rng_seed, e);
      break;
    case ScorerKind::GoodRandom:
      for (int e = 0; e < n; ++e)
        scores[e] = unit_from(in.rng_seed, e) + table.annotation_count(e);
      break;
    case ScorerKind::Entropy:
      for (int e = 0; e < n; ++e) scores[e] = entropy_score(preds[0].row(e));
      break;
    case ScorerKind::Uncertainty:
      for (int e = 0; e < n; ++e) scores[e] = uncertainty_score(preds[0].row(e));
      break;
    case ScorerKind::ActiveLabSingle:
      for (int e = 0; e < n; ++e) scores[e] = activelab_single_label_score(preds[0].row(e));
      break;
    case ScorerKind::ActiveLabelCleaning:
      for (int e = 0; e < n; ++e) {
        // Unlabeled examples have no empirical distribution; fall back to the
        // entropy score so mixed pools stay scoreable.
        if (table.is_labeled(e)) {
          auto emp = table.empirical_distribution(e);
          scores[e] = alc_score(preds[0].row(e), emp);
        } else {
          scores[e] = entropy_score(preds[0].row(e));
        }
      }
      break;
    case ScorerKind::Disagreement:
      for (int e = 0; e < n; ++e) scores[e] = disagreement_score(preds, e, in.disagreement_form);
      break;
    case ScorerKind::ActiveLab:
      for (int e = 0; e < n; ++e) {
        if (table.is_labeled(e)) {
          scores[e] = activelab_labeled_score(table, e, in.consensus->labels[e], preds[0], *in.trust);
        } else {
          scores[e] = activelab_unlabeled_score(e, preds[0], *in.trust);
        }
      }
      break;
    case ScorerKind::ActiveLabEnsemble:
      for (int e = 0; e < n; ++e) {
        if (table.is_labeled(e)) {
          scores[e] =
              activelab_ensemble_labeled_score(table, e, in.consensus->labels[e], preds, *in.trust);
        } else {
          scores[e] = activelab_ensemble_unlabeled_score(e, preds, *in.trust);
        }
      }
      break;
  }
  return scores;
}

Batch select_batch(std::span<const double> scores, std::span<const ExampleId> candidates,
                   int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  Batch batch;
  batch.example_ids.assign(candidates.begin(), candidates.end());
  std::sort(batch.example_ids.begin(), batch.example_ids.end(), [&](ExampleId a, ExampleId b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });
  if (static_cast<int>(batch.example_ids.size()) > batch_size) {
    batch.example_ids.resize(batch_size);
  } else if (static_cast<int>(batch.example_ids.size()) < batch_size) {
    batch.truncated = true;
  }
  return batch;
}

}  // namespace albench
