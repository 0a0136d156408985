#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "albench/annotation_store.hpp"
#include "albench/calibration.hpp"
#include "albench/classifiers.hpp"
#include "albench/consensus.hpp"
#include "albench/scoring.hpp"
#include "albench/simulation.hpp"

namespace albench {

struct FileDataPaths {
  std::string features;          // example_id,f_0..f_{d-1} over train+pool
  std::string annotations;       // initial labeled set
  std::string truth;             // per train+pool example, drives simulated annotators
  std::string test_features;
  std::string test_truth;
  std::string predictions;       // external classifier, train+pool (optional)
  std::string test_predictions;  // external classifier, test (optional)
};

struct ExperimentConfig {
  enum class Mode { Multiannotator, SingleLabel, LabelCleaning };
  enum class ConsensusRule { Auto, Crowdlab, MajorityVote };
  enum class DataSource { Blobs, Files };

  DataSource source = DataSource::Blobs;
  PoolSpec pool;
  FileDataPaths files;
  int file_classes = 0;  // K in files mode

  int roster = 3;              // initial annotator count
  double initial_noise = 0.2;  // noise rate of roster annotators
  std::vector<double> round_noise;  // per-round noise of the fresh annotator; last value repeats

  std::vector<ClassifierSpec> classifiers{ClassifierSpec{}};
  ScorerKind scorer = ScorerKind::Entropy;
  Mode mode = Mode::Multiannotator;
  ConsensusRule consensus = ConsensusRule::Auto;
  CalibrationOptions calibration;
  DisagreementForm disagreement_form = DisagreementForm::CrossEntropy;

  int batch_size = 10;
  int rounds = 5;  // label-collection rounds; accuracy is logged rounds+1 times
  int cv_folds = 5;
  std::vector<uint64_t> seeds{1};

  double round_noise_at(int round) const;
  // The rule actually applied: Auto links crowdlab to the activelab scorers;
  // single-label mode always takes each sole annotation as its consensus.
  ConsensusRule effective_consensus(int) const;
  ConsensusRule effective_consensus() const;
  // In single-label mode the activelab scorer reduces to its single-label form.
  ScorerKind effective_scorer() const;
};

// Throws std::invalid_argument describing every violated constraint.
void validate(const ExperimentConfig& config);

struct TrustSnapshot {
  double typical_accuracy = 0.0;
  double avg_annotator_weight = 0.0;
  double mlc_accuracy = 0.0;
  std::vector<double> model_weights;
  bool low_confidence = false;
};

struct RoundLog {
  int round = 0;
  long total_annotations = 0;
  double test_accuracy = 0.0;
  std::vector<ExampleId> batch;  // empty on the final (evaluation-only) round
  int batch_from_labeled = 0;
  int batch_from_pool = 0;
  TrustSnapshot trust;
  int consensus_changes = 0;  // vs. previous round, over examples labeled in both
};

struct SeedRun {
  uint64_t seed = 0;
  std::vector<RoundLog> rounds;
};

struct ExperimentResult {
  std::vector<SeedRun> runs;
  std::vector<long> total_labels;     // per round index
  std::vector<double> mean_accuracy;  // across seeds, per round index
  std::vector<double> std_accuracy;   // population standard deviation
};

// Fraction of rows whose argmax (ties to the smallest class) matches truth.
double evaluate_accuracy(const Matrix& preds, const std::vector<int>& truth);

// Resolved data for one experiment; identical across run seeds so every
// method/seed starts from the same pools and initial annotations.
struct DatasetBundle {
  Matrix features;
  std::vector<int> truth;
  Matrix test_features;
  std::vector<int> test_truth;
  AnnotationTable initial_table;
  int num_classes = 0;
  // Static per-model predictions for external classifiers (empty otherwise).
  std::vector<Matrix> external_preds;
  std::vector<Matrix> external_test_preds;
};

DatasetBundle build_dataset(const ExperimentConfig& config);

// One active-learning run for a single seed. Each round executes: majority-
// vote training consensus -> k-fold training -> out-of-sample/pool/test
// predictions -> calibration -> trust fit -> rule-selected scoring consensus
// -> evaluation; then scores candidates, selects the batch and collects one
// fresh annotator's labels, unless the round budget is spent. The table
// mutates only after everything else succeeded.
class ExperimentRun {
 public:
  ExperimentRun(const ExperimentConfig& config, const DatasetBundle& data, uint64_t run_seed);

  RoundLog run_round();
  bool done() const { return next_round_ > config_.rounds; }
  const AnnotationTable& table() const { return table_; }

 private:
  const ExperimentConfig& config_;
  const DatasetBundle& data_;
  uint64_t run_seed_;
  AnnotationTable table_;
  int next_round_ = 0;
  std::vector<Matrix> prev_preds_;  // calibrated, previous round, full coverage
  bool have_prev_ = false;
  std::vector<int> prev_consensus_;  // rule-selected consensus of the previous round
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Paired label-new-vs-relabel study: the single arm runs entropy over the
// unlabeled pool only, the multi arm runs activelab over everything; both
// share pools, initial annotations, seeds and noise.
struct ComparisonResult {
  ExperimentResult single_arm;
  ExperimentResult multi_arm;
};
ComparisonResult compare_single_vs_multi(const ExperimentConfig& single_config,
                                         const ExperimentConfig& multi_config);
// Builds the two arms from a shared base configuration.
std::pair<ExperimentConfig, ExperimentConfig> make_single_vs_multi_pair(
    const ExperimentConfig& base);

}  // namespace albench
