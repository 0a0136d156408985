#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "albench/annotation_store.hpp"
#include "albench/consensus.hpp"

namespace albench {

// Lower score = more informative to (re)label next; selection always takes
// the lowest-scored candidates. Scorers whose printed form ranks informative
// examples highest (active label cleaning, disagreement) are sign-flipped so
// the one selection rule applies everywhere.
enum class ScorerKind {
  ActiveLab,
  ActiveLabEnsemble,
  ActiveLabSingle,
  Random,
  GoodRandom,
  Entropy,
  Uncertainty,
  ActiveLabelCleaning,
  Disagreement,
};

ScorerKind scorer_from_name(const std::string& name);  // throws listing valid names
std::string scorer_name(ScorerKind kind);
const std::vector<std::string>& scorer_names();
bool scorer_needs_ensemble(ScorerKind kind);
bool scorer_uses_crowdlab(ScorerKind kind);

enum class DisagreementForm { CrossEntropy, Product };

// Per-example scores. Labeled-example forms are the estimated likelihood that
// the consensus label is correct under the trust-weighted ensemble, with a
// uniform predictor of weight avg_annotator_weight pulling examples with few
// annotations toward 1/K.
double activelab_labeled_score(const AnnotationTable& table, ExampleId e, int consensus_label,
                               const Matrix& preds, const TrustEstimates& trust);
double activelab_unlabeled_score(ExampleId e, const Matrix& preds, const TrustEstimates& trust);
double activelab_ensemble_labeled_score(const AnnotationTable& table, ExampleId e,
                                        int consensus_label, const std::vector<Matrix>& preds,
                                        const TrustEstimates& trust);
double activelab_ensemble_unlabeled_score(ExampleId e, const std::vector<Matrix>& preds,
                                          const TrustEstimates& trust);
// Single-label setting: no annotator statistics exist; score blends classifier
// confidence with the uniform 1/K at equal weight. Ranks identically to the
// uncertainty score.
double activelab_single_label_score(std::span<const double> pred_row);

double entropy_score(std::span<const double> pred_row);
double uncertainty_score(std::span<const double> pred_row);
// Emitted negated relative to its printed form (see enum note).
double alc_score(std::span<const double> pred_row, std::span<const double> empirical);
double disagreement_score(const std::vector<Matrix>& preds, ExampleId e, DisagreementForm form);

struct ScoreInputs {
  const AnnotationTable* table = nullptr;
  const std::vector<Matrix>* preds = nullptr;  // calibrated, one matrix per model, full coverage
  const TrustEstimates* trust = nullptr;       // activelab kinds
  const ConsensusResult* consensus = nullptr;  // activelab labeled kinds
  uint64_t rng_seed = 0;                       // random kinds; counter-derived per example
  DisagreementForm disagreement_form = DisagreementForm::CrossEntropy;
};

// One finite score per example in the table. Non-ensemble model-based scorers
// read the first prediction matrix.
std::vector<double> score_all(ScorerKind kind, const ScoreInputs& in);

struct Batch {
  std::vector<ExampleId> example_ids;  // ascending score, ties to smaller id
  bool truncated = false;              // fewer candidates than requested
};

// The batch_size lowest-scored candidates. Output is invariant to candidate
// enumeration order.
Batch select_batch(std::span<const double> scores, std::span<const ExampleId> candidates,
                   int batch_size);

}  // namespace albench
