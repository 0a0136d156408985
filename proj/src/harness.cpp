#include "albench/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "albench/io.hpp"
#include "albench/rng.hpp"

namespace albench {

double ExperimentConfig::round_noise_at(int round) const {
  if (round_noise.empty()) return initial_noise;
  size_t i = std::min(static_cast<size_t>(round), round_noise.size() - 1);
  return round_noise[i];
}

ExperimentConfig::ConsensusRule ExperimentConfig::effective_consensus() const {
  if (mode == Mode::SingleLabel) return ConsensusRule::MajorityVote;
  if (consensus != ConsensusRule::Auto) return consensus;
  return scorer_uses_crowdlab(scorer) ? ConsensusRule::Crowdlab : ConsensusRule::MajorityVote;
}

ExperimentConfig::ConsensusRule ExperimentConfig::effective_consensus(int) const {
  return effective_consensus();
}

ScorerKind ExperimentConfig::effective_scorer() const {
  if (mode == Mode::SingleLabel && scorer == ScorerKind::ActiveLab)
    return ScorerKind::ActiveLabSingle;
  return scorer;
}

void validate(const ExperimentConfig& config) {
  std::string problems;
  auto complain = [&](const std::string& p) { problems += (problems.empty() ? "" : "; ") + p; };

  if (config.classifiers.empty()) complain("need at least one classifier");
  if (scorer_needs_ensemble(config.scorer) && config.classifiers.size() < 2)
    complain("scorer '" + scorer_name(config.scorer) + "' needs at least 2 classifiers");
  if (config.mode == ExperimentConfig::Mode::SingleLabel &&
      (config.scorer == ScorerKind::ActiveLabEnsemble ||
       config.scorer == ScorerKind::Disagreement ||
       config.scorer == ScorerKind::ActiveLabelCleaning ||
       config.scorer == ScorerKind::GoodRandom))
    complain("scorer '" + scorer_name(config.scorer) + "' is not defined in single_label mode");
  if (config.batch_size < 1) complain("batch_size must be >= 1");
  if (config.rounds < 0) complain("rounds must be >= 0");
  if (config.cv_folds < 2) complain("cv_folds must be >= 2");
  if (config.seeds.empty()) complain("need at least one seed");
  if (config.roster < 1) complain("roster must be >= 1");
  if (config.initial_noise < 0.0 || config.initial_noise > 1.0)
    complain("initial_noise must lie in [0, 1]");
  for (double nr : config.round_noise)
    if (nr < 0.0 || nr > 1.0) complain("round_noise values must lie in [0, 1]");
  if (config.calibration.grid_points < 1 || config.calibration.grid_min <= 0.0 ||
      config.calibration.grid_max < config.calibration.grid_min)
    complain("bad calibration grid");

  if (config.source == ExperimentConfig::DataSource::Blobs) {
    if (config.pool.labeled < 1) complain("need at least one initially labeled example");
    if (config.pool.num_classes < 2) complain("classes must be >= 2");
    if (config.pool.dim < 1) complain("dim must be >= 1");
    if (config.pool.test < 1) complain("need a test set");
    if (config.pool.spread < 0.0) complain("spread must be >= 0");
    double min_density = 1.0 / config.roster;
    if (config.pool.density < min_density - 1e-9 || config.pool.density > 1.0 + 1e-9)
      complain("density must lie in [1/roster, 1]");
    for (const auto& spec : config.classifiers)
      if (spec.kind == ClassifierSpec::Kind::External)
        complain("external classifiers require file data (no id correspondence with blobs)");
  } else {
    if (config.files.features.empty() || config.files.annotations.empty() ||
        config.files.truth.empty() || config.files.test_features.empty() ||
        config.files.test_truth.empty())
      complain("files mode needs features, annotations, truth, test_features, test_truth");
  }

  if (config.mode == ExperimentConfig::Mode::LabelCleaning &&
      config.source == ExperimentConfig::DataSource::Blobs && config.pool.pool != 0)
    complain("label_cleaning mode runs with pool size 0");
  if (config.mode == ExperimentConfig::Mode::SingleLabel &&
      config.source == ExperimentConfig::DataSource::Blobs && config.pool.pool < 1)
    complain("single_label mode needs an unlabeled pool");

  for (const auto& spec : config.classifiers) {
    if (spec.kind == ClassifierSpec::Kind::Knn && spec.neighbors < 1)
      complain("knn neighbors must be >= 1");
    if (spec.kind == ClassifierSpec::Kind::SoftmaxRegression &&
        (spec.epochs < 1 || spec.learning_rate <= 0.0 || spec.l2_penalty < 0.0))
      complain("bad softmax regression hyperparameters");
    if (spec.kind == ClassifierSpec::Kind::External && spec.predictions_path.empty())
      complain("external classifier needs a predictions path");
  }

  if (!problems.empty()) throw std::invalid_argument(problems);
}

double evaluate_accuracy(const Matrix& preds, const std::vector<int>& truth) {
  if (preds.rows != static_cast<int>(truth.size()))
    throw std::invalid_argument("prediction rows do not cover the test set");
  if (preds.rows == 0) return 0.0;
  long hits = 0;
  for (int i = 0; i < preds.rows; ++i)
    if (argmax(preds.row(i)) == truth[i]) hits += 1;
  return static_cast<double>(hits) / preds.rows;
}

DatasetBundle build_dataset(const ExperimentConfig& config) {
  if (config.source == ExperimentConfig::DataSource::Blobs) {
    BlobsDataset blobs = generate_blobs(config.pool);
    std::vector<AnnotatorProfile> roster(config.roster);
    for (int j = 0; j < config.roster; ++j) roster[j] = {j, config.initial_noise};
    // The initial annotations depend only on the pool seed, so every run
    // seed and every method starts from the same table.
    Rng rng(derive_seed(config.pool.seed, "init_annotations"));
    AnnotationTable table = initialize_pools(config.pool, blobs.truth, roster, rng);
    return DatasetBundle{std::move(blobs.features),     std::move(blobs.truth),
                         std::move(blobs.test_features), std::move(blobs.test_truth),
                         std::move(table),               config.pool.num_classes,
                         {},                             {}};
  }

  FeaturesFile feats = read_features_csv(config.files.features);
  FeaturesFile test_feats = read_features_csv(config.files.test_features);
  AnnotationsFile ann = read_annotations_csv(config.files.annotations);
  auto truth_rows = read_labels_csv(config.files.truth);
  auto test_truth_rows = read_labels_csv(config.files.test_truth);

  int K = config.file_classes;
  if (K == 0) {
    K = ann.max_label + 1;
    for (const auto& [id, label] : truth_rows) K = std::max(K, label + 1);
    for (const auto& [id, label] : test_truth_rows) K = std::max(K, label + 1);
  }
  if (K < 2) throw std::runtime_error("could not infer a class count >= 2 from files");

  std::vector<int> truth(feats.examples.size(), -1);
  for (const auto& [id, label] : truth_rows) {
    if (!feats.examples.contains(id))
      throw std::runtime_error("truth file names unknown example '" + id + "'");
    if (label < 0 || label >= K) throw std::runtime_error("truth label outside [0, K)");
    truth[feats.examples.get(id)] = label;
  }
  for (int i = 0; i < feats.examples.size(); ++i)
    if (truth[i] < 0)
      throw std::runtime_error("truth file is missing example '" + feats.examples.name(i) + "'");

  std::vector<int> test_truth(test_feats.examples.size(), -1);
  for (const auto& [id, label] : test_truth_rows) {
    if (!test_feats.examples.contains(id))
      throw std::runtime_error("test truth names unknown example '" + id + "'");
    if (label < 0 || label >= K) throw std::runtime_error("test truth label outside [0, K)");
    test_truth[test_feats.examples.get(id)] = label;
  }
  for (int i = 0; i < test_feats.examples.size(); ++i)
    if (test_truth[i] < 0)
      throw std::runtime_error("test truth is missing example '" +
                               test_feats.examples.name(i) + "'");

  AnnotationTable table(feats.examples.size(), K);
  for (const auto& [e, a, label] : ann.entries) {
    const std::string& id = ann.examples.name(e);
    if (!feats.examples.contains(id))
      throw std::runtime_error("annotations name unknown example '" + id + "'");
    if (label >= K) throw std::runtime_error("annotation label outside [0, K)");
    table.add(feats.examples.get(id), a, label);
  }

  DatasetBundle data{std::move(feats.features), std::move(truth),
                     std::move(test_feats.features), std::move(test_truth),
                     std::move(table), K, {}, {}};

  for (const auto& spec : config.classifiers) {
    if (spec.kind != ClassifierSpec::Kind::External) continue;
    PredictionsFile p = read_predictions_csv(
        spec.predictions_path.empty() ? config.files.predictions : spec.predictions_path);
    if (p.probs.cols != K) throw std::runtime_error("external predictions have wrong class count");
    data.external_preds.push_back(align_rows(p.probs, p.examples, feats.examples,
                                             "external predictions"));
    if (config.files.test_predictions.empty())
      throw std::runtime_error("external classifier needs test predictions for evaluation");
    PredictionsFile tp = read_predictions_csv(config.files.test_predictions);
    if (tp.probs.cols != K)
      throw std::runtime_error("external test predictions have wrong class count");
    data.external_test_preds.push_back(align_rows(tp.probs, tp.examples, test_feats.examples,
                                                  "external test predictions"));
  }
  return data;
}

ExperimentRun::ExperimentRun(const ExperimentConfig& config, const DatasetBundle& data,
                             uint64_t run_seed)
    : config_(config), data_(data), run_seed_(run_seed), table_(data.initial_table) {}

RoundLog ExperimentRun::run_round() {
  if (done()) throw std::logic_error("experiment already finished");
  const int round = next_round_;
  const int K = data_.num_classes;
  const int num_models = static_cast<int>(config_.classifiers.size());
  const auto rule = config_.effective_consensus();

  // 1. Training consensus: always the majority-vote bootstrap, tie-broken by
  //    the freshest predictions available. Training directly on a
  //    crowdlab consensus would let a heavily-weighted model override the
  //    collected labels with its own previous predictions; every method
  //    trains on the same vote-based labels, and the configured rule decides
  //    which consensus the scorers see below.
  ConsensusResult training_consensus = have_prev_
                                           ? majority_vote_consensus(table_, prev_preds_[0])
                                           : majority_vote_consensus(table_);

  const std::vector<ExampleId> labeled = table_.labeled_examples();
  const std::vector<ExampleId> unlabeled = table_.unlabeled_examples();

  // 2-3. Five-fold training on (features, consensus) and predictions for
  //      every example plus the test set.
  Matrix features_labeled(static_cast<int>(labeled.size()), data_.features.cols);
  std::vector<int> y(labeled.size());
  for (size_t i = 0; i < labeled.size(); ++i) {
    auto src = data_.features.row(labeled[i]);
    std::copy(src.begin(), src.end(), features_labeled.row(static_cast<int>(i)).begin());
    y[i] = training_consensus.labels[labeled[i]];
  }
  Matrix features_unlabeled(static_cast<int>(unlabeled.size()), data_.features.cols);
  for (size_t i = 0; i < unlabeled.size(); ++i) {
    auto src = data_.features.row(unlabeled[i]);
    std::copy(src.begin(), src.end(), features_unlabeled.row(static_cast<int>(i)).begin());
  }

  std::vector<Matrix> preds(num_models);       // full coverage, calibrated below
  std::vector<Matrix> test_preds(num_models);  // raw model outputs
  int external_index = 0;
  for (int l = 0; l < num_models; ++l) {
    const ClassifierSpec& spec = config_.classifiers[l];
    if (spec.kind == ClassifierSpec::Kind::External) {
      preds[l] = data_.external_preds[external_index];
      test_preds[l] = data_.external_test_preds[external_index];
      ++external_index;
      continue;
    }
    ClassifierSpec seeded = spec;
    seeded.seed = derive_seed(run_seed_, "classifier", round, l);
    uint64_t split_seed = derive_seed(run_seed_, "fold_split", round, l);
    CrossValResult cv = cross_val_oos(seeded, features_labeled, y, K, config_.cv_folds, split_seed);

    preds[l] = Matrix(table_.num_examples(), K);
    for (size_t i = 0; i < labeled.size(); ++i) {
      auto src = cv.out_of_sample.row(static_cast<int>(i));
      std::copy(src.begin(), src.end(), preds[l].row(labeled[i]).begin());
    }
    if (!unlabeled.empty()) {
      Matrix pool_preds = predict_pool(cv.fold_models, features_unlabeled);
      for (size_t i = 0; i < unlabeled.size(); ++i) {
        auto src = pool_preds.row(static_cast<int>(i));
        std::copy(src.begin(), src.end(), preds[l].row(unlabeled[i]).begin());
      }
    }
    test_preds[l] = predict_pool(cv.fold_models, data_.test_features);
  }

  // Calibrate each model against the empirical annotation distributions of
  // the labeled set, then rescale its rows for every example.
  if (config_.calibration.enabled) {
    Matrix empirical(static_cast<int>(labeled.size()), K);
    for (size_t i = 0; i < labeled.size(); ++i) {
      auto emp = table_.empirical_distribution(labeled[i]);
      std::copy(emp.begin(), emp.end(), empirical.row(static_cast<int>(i)).begin());
    }
    for (int l = 0; l < num_models; ++l) {
      Matrix on_labeled(static_cast<int>(labeled.size()), K);
      for (size_t i = 0; i < labeled.size(); ++i) {
        auto src = preds[l].row(labeled[i]);
        std::copy(src.begin(), src.end(), on_labeled.row(static_cast<int>(i)).begin());
      }
      double t = fit_temperature(on_labeled, empirical, config_.calibration);
      preds[l] = apply_temperature(preds[l], t, config_.calibration);
    }
  }

  // 4. Trust estimates from the current table and calibrated predictions.
  TrustEstimates trust = fit_trust(table_, preds);

  // 5. The consensus the scorers see this round.
  ConsensusResult scoring_consensus =
      rule == ExperimentConfig::ConsensusRule::Crowdlab
          ? crowdlab_consensus(table_, preds, trust)
          : majority_vote_consensus(table_, preds[0]);

  RoundLog log;
  log.round = round;
  log.total_annotations = table_.total_annotations();
  log.trust = TrustSnapshot{trust.typical_accuracy, trust.avg_annotator_weight,
                            trust.mlc_accuracy, trust.model_weights, trust.low_confidence};
  log.consensus_changes = 0;
  if (!prev_consensus_.empty()) {
    for (int e = 0; e < table_.num_examples(); ++e)
      if (prev_consensus_[e] >= 0 && scoring_consensus.labels[e] >= 0 &&
          prev_consensus_[e] != scoring_consensus.labels[e])
        log.consensus_changes += 1;
  }

  // 6. Test accuracy of this round's model(s).
  if (num_models == 1) {
    log.test_accuracy = evaluate_accuracy(test_preds[0], data_.test_truth);
  } else {
    // ActiveLab ensembles predict with their trust weights; other ensemble
    // methods average the members.
    std::span<const double> w;
    if (config_.scorer == ScorerKind::ActiveLabEnsemble) w = trust.model_weights;
    log.test_accuracy = evaluate_accuracy(ensemble_predict(test_preds, w), data_.test_truth);
  }

  // 7. Score, select, and collect one fresh annotator's labels.
  if (round < config_.rounds) {
    ScoreInputs inputs;
    inputs.table = &table_;
    inputs.preds = &preds;
    inputs.trust = &trust;
    inputs.consensus = &scoring_consensus;
    inputs.rng_seed = derive_seed(run_seed_, "scorer", round);
    inputs.disagreement_form = config_.disagreement_form;
    std::vector<double> scores = score_all(config_.effective_scorer(), inputs);

    std::vector<ExampleId> candidates;
    if (config_.mode == ExperimentConfig::Mode::SingleLabel) {
      candidates = unlabeled;
    } else {
      candidates.resize(table_.num_examples());
      for (int e = 0; e < table_.num_examples(); ++e) candidates[e] = e;
    }

    if (!candidates.empty()) {
      Batch batch = select_batch(scores, candidates, config_.batch_size);
      for (ExampleId e : batch.example_ids)
        (table_.is_labeled(e) ? log.batch_from_labeled : log.batch_from_pool) += 1;
      Rng noise_rng(derive_seed(run_seed_, "annotator", round));
      collect_batch_labels(table_, batch.example_ids, table_.num_annotators(),
                           config_.round_noise_at(round), data_.truth, noise_rng);
      log.batch = std::move(batch.example_ids);
    }
  }

  prev_preds_ = std::move(preds);
  have_prev_ = true;
  prev_consensus_ = std::move(scoring_consensus.labels);
  next_round_ += 1;
  return log;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  DatasetBundle data = build_dataset(config);

  ExperimentResult result;
  for (uint64_t seed : config.seeds) {
    SeedRun run;
    run.seed = seed;
    ExperimentRun state(config, data, seed);
    while (!state.done()) run.rounds.push_back(state.run_round());
    result.runs.push_back(std::move(run));
  }

  const int rounds_logged = config.rounds + 1;
  result.total_labels.resize(rounds_logged);
  result.mean_accuracy.assign(rounds_logged, 0.0);
  result.std_accuracy.assign(rounds_logged, 0.0);
  const double n = static_cast<double>(result.runs.size());
  for (int r = 0; r < rounds_logged; ++r) {
    double mean = 0.0;
    for (const auto& run : result.runs) mean += run.rounds[r].test_accuracy;
    mean /= n;
    double var = 0.0;
    for (const auto& run : result.runs) {
      double d = run.rounds[r].test_accuracy - mean;
      var += d * d;
    }
    result.mean_accuracy[r] = mean;
    result.std_accuracy[r] = std::sqrt(var / n);
    result.total_labels[r] = result.runs[0].rounds[r].total_annotations;
  }
  return result;
}

std::pair<ExperimentConfig, ExperimentConfig> make_single_vs_multi_pair(
    const ExperimentConfig& base) {
  ExperimentConfig single = base;
  single.mode = ExperimentConfig::Mode::SingleLabel;
  single.scorer = ScorerKind::Entropy;
  single.consensus = ExperimentConfig::ConsensusRule::Auto;
  ExperimentConfig multi = base;
  multi.mode = ExperimentConfig::Mode::Multiannotator;
  multi.scorer = ScorerKind::ActiveLab;
  multi.consensus = ExperimentConfig::ConsensusRule::Auto;
  return {single, multi};
}

ComparisonResult compare_single_vs_multi(const ExperimentConfig& single_config,
                                         const ExperimentConfig& multi_config) {
  auto same = [](const PoolSpec& a, const PoolSpec& b) {
    return a.labeled == b.labeled && a.pool == b.pool && a.test == b.test &&
           a.num_classes == b.num_classes && a.dim == b.dim && a.spread == b.spread &&
           a.density == b.density && a.seed == b.seed;
  };
  if (!same(single_config.pool, multi_config.pool) ||
      single_config.seeds != multi_config.seeds ||
      single_config.round_noise != multi_config.round_noise ||
      single_config.initial_noise != multi_config.initial_noise ||
      single_config.roster != multi_config.roster)
    throw std::invalid_argument("comparison arms must share pools, seeds, and noise");
  if (single_config.mode != ExperimentConfig::Mode::SingleLabel)
    throw std::invalid_argument("first arm must run in single_label mode");
  ComparisonResult out;
  out.single_arm = run_experiment(single_config);
  out.multi_arm = run_experiment(multi_config);
  return out;
}

}  // namespace albench
