// albench: benchmark harness for pool-based batch active learning with
// multiple imperfect annotators. Subcommands: run, score, consensus, report.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "albench/calibration.hpp"
#include "albench/config.hpp"
#include "albench/io.hpp"
#include "albench/report.hpp"

namespace fs = std::filesystem;
using namespace albench;

namespace {

std::string default_out_root() {
  const char* env = std::getenv("ALBENCH_OUT");
  return env && *env ? env : ".";
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void require_writable(const std::vector<fs::path>& outputs, bool force) {
  for (const auto& p : outputs) {
    if (fs::exists(p) && !force)
      throw std::runtime_error("output " + p.string() + " exists; pass --force to overwrite");
  }
}

// Removes everything this invocation managed to write before failing.
struct OutputGuard {
  std::vector<fs::path> written;
  bool commit = false;
  ~OutputGuard() {
    if (commit) return;
    std::error_code ec;
    for (const auto& p : written) fs::remove(p, ec);
  }
};

struct ScoreData {
  AnnotationTable table;
  std::vector<Matrix> preds;  // raw, full coverage
  IdMap examples;
};

// Assembles the table and per-model predictions for the one-shot commands.
// The example universe comes from the predictions (or features) file so that
// unlabeled examples exist even though the annotations never mention them.
ScoreData load_score_data(const std::string& annotations_path,
                          const std::vector<std::string>& predictions_paths,
                          const std::string& features_path, const std::string& classifier_kind,
                          int classes_flag, uint64_t seed) {
  AnnotationsFile ann = read_annotations_csv(annotations_path);

  IdMap universe;
  std::vector<Matrix> preds;
  int num_classes = classes_flag;

  if (!predictions_paths.empty()) {
    PredictionsFile first = read_predictions_csv(predictions_paths[0]);
    universe = first.examples;
    if (num_classes == 0) num_classes = first.probs.cols;
    if (first.probs.cols != num_classes)
      throw std::runtime_error("class count differs between flags and " + predictions_paths[0]);
    preds.push_back(std::move(first.probs));
    for (size_t i = 1; i < predictions_paths.size(); ++i) {
      PredictionsFile p = read_predictions_csv(predictions_paths[i]);
      if (p.probs.cols != num_classes)
        throw std::runtime_error("class count differs across prediction files");
      preds.push_back(align_rows(p.probs, p.examples, universe, predictions_paths[i]));
    }
  } else if (!features_path.empty()) {
    FeaturesFile feats = read_features_csv(features_path);
    universe = feats.examples;
    if (num_classes == 0) num_classes = ann.max_label + 1;
    if (num_classes < 2) throw std::runtime_error("need --classes (could not infer K >= 2)");

    AnnotationTable table(universe.size(), num_classes);
    for (const auto& [e, a, label] : ann.entries) {
      if (label >= num_classes) throw std::runtime_error("annotation label outside [0, K)");
      table.add(universe.get(ann.examples.name(e)), a, label);
    }
    auto labeled = table.labeled_examples();
    if (labeled.empty()) throw std::runtime_error("no labeled examples to train on");
    ConsensusResult vote = majority_vote_consensus(table);
    Matrix features_labeled(static_cast<int>(labeled.size()), feats.features.cols);
    std::vector<int> y(labeled.size());
    for (size_t i = 0; i < labeled.size(); ++i) {
      auto src = feats.features.row(labeled[i]);
      std::copy(src.begin(), src.end(), features_labeled.row(static_cast<int>(i)).begin());
      y[i] = vote.labels[labeled[i]];
    }
    ClassifierSpec spec;
    spec.kind = classifier_kind_from_name(classifier_kind);
    spec.seed = derive_seed(seed, "classifier");
    CrossValResult cv =
        cross_val_oos(spec, features_labeled, y, num_classes, 5, derive_seed(seed, "fold_split"));
    Matrix full(universe.size(), num_classes);
    for (size_t i = 0; i < labeled.size(); ++i) {
      auto src = cv.out_of_sample.row(static_cast<int>(i));
      std::copy(src.begin(), src.end(), full.row(labeled[i]).begin());
    }
    auto unlabeled = table.unlabeled_examples();
    if (!unlabeled.empty()) {
      Matrix fu(static_cast<int>(unlabeled.size()), feats.features.cols);
      for (size_t i = 0; i < unlabeled.size(); ++i) {
        auto src = feats.features.row(unlabeled[i]);
        std::copy(src.begin(), src.end(), fu.row(static_cast<int>(i)).begin());
      }
      Matrix pool = predict_pool(cv.fold_models, fu);
      for (size_t i = 0; i < unlabeled.size(); ++i) {
        auto src = pool.row(static_cast<int>(i));
        std::copy(src.begin(), src.end(), full.row(unlabeled[i]).begin());
      }
    }
    preds.push_back(std::move(full));
  } else {
    throw std::runtime_error("need --predictions or --features");
  }

  AnnotationTable table(universe.size(), num_classes);
  for (const auto& [e, a, label] : ann.entries) {
    const std::string& id = ann.examples.name(e);
    if (!universe.contains(id))
      throw std::runtime_error("annotations name example '" + id +
                               "' absent from the prediction/feature files");
    if (label >= num_classes)
      throw std::runtime_error("annotation label " + std::to_string(label) +
                               " inconsistent with K=" + std::to_string(num_classes));
    table.add(universe.get(id), a, label);
  }
  return {std::move(table), std::move(preds), std::move(universe)};
}

std::vector<Matrix> calibrate_all(const AnnotationTable& table, std::vector<Matrix> preds,
                                  const CalibrationOptions& opts) {
  if (!opts.enabled) return preds;
  auto labeled = table.labeled_examples();
  if (labeled.empty()) return preds;
  const int K = table.num_classes();
  Matrix empirical(static_cast<int>(labeled.size()), K);
  for (size_t i = 0; i < labeled.size(); ++i) {
    auto emp = table.empirical_distribution(labeled[i]);
    std::copy(emp.begin(), emp.end(), empirical.row(static_cast<int>(i)).begin());
  }
  for (auto& m : preds) {
    Matrix on_labeled(static_cast<int>(labeled.size()), K);
    for (size_t i = 0; i < labeled.size(); ++i) {
      auto src = m.row(labeled[i]);
      std::copy(src.begin(), src.end(), on_labeled.row(static_cast<int>(i)).begin());
    }
    double t = fit_temperature(on_labeled, empirical, opts);
    m = apply_temperature(m, t, opts);
  }
  return preds;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool force,
            long seed_override) {
  LoadedConfig loaded;
  try {
    loaded = load_config_file(config_path);
    if (seed_override >= 0) {
      loaded.experiment.seeds = {static_cast<uint64_t>(seed_override)};
      loaded.canonical = canonical_config(loaded.experiment, loaded.write_chart);
    }
    validate(loaded.experiment);
  } catch (const ConfigError& e) {
    std::cerr << config_path << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }

  fs::path dir(out_dir.empty() ? default_out_root() : out_dir);
  fs::create_directories(dir);
  std::vector<fs::path> outputs = {dir / "results.csv", dir / "results.json",
                                   dir / "manifest.json"};
  if (loaded.write_chart) outputs.push_back(dir / "chart.svg");
  require_writable(outputs, force);

  OutputGuard guard;
  ExperimentResult result = run_experiment(loaded.experiment);

  std::string csv = results_csv(result, loaded.experiment);
  write_text_file((dir / "results.csv").string(), csv);
  guard.written.push_back(dir / "results.csv");
  write_text_file((dir / "results.json").string(), results_json(result, loaded.canonical));
  guard.written.push_back(dir / "results.json");
  if (loaded.write_chart) {
    auto curves = curves_from_results_csv({csv});
    write_text_file((dir / "chart.svg").string(), render_chart_svg(curves));
    guard.written.push_back(dir / "chart.svg");
  }
  std::vector<std::string> names;
  for (const auto& p : outputs) names.push_back(p.filename().string());
  write_text_file((dir / "manifest.json").string(),
                  manifest_json(fnv1a_hex(loaded.canonical), utc_timestamp(), names));
  guard.written.push_back(dir / "manifest.json");
  guard.commit = true;

  std::cout << "wrote " << (dir / "results.csv").string() << " ("
            << loaded.experiment.seeds.size() << " seeds x " << loaded.experiment.rounds + 1
            << " rounds)\n";
  return 0;
}

int cmd_score(const std::string& annotations, const std::vector<std::string>& predictions,
              const std::string& features, const std::string& scorer_str,
              const std::string& classifier, int classes, uint64_t seed, bool no_calibration,
              const std::string& out_path, bool force) {
  ScorerKind kind = scorer_from_name(scorer_str);
  ScoreData data = load_score_data(annotations, predictions, features, classifier, classes, seed);
  if (scorer_needs_ensemble(kind) && data.preds.size() < 2)
    throw std::runtime_error("scorer '" + scorer_str + "' needs at least 2 prediction files");

  CalibrationOptions cal;
  cal.enabled = !no_calibration;
  std::vector<Matrix> preds = calibrate_all(data.table, std::move(data.preds), cal);

  ScoreInputs inputs;
  inputs.table = &data.table;
  inputs.preds = &preds;
  inputs.rng_seed = derive_seed(seed, "scorer");
  TrustEstimates trust;
  ConsensusResult consensus;
  if (scorer_uses_crowdlab(kind)) {
    trust = fit_trust(data.table, preds);
    consensus = crowdlab_consensus(data.table, preds, trust);
    inputs.trust = &trust;
    inputs.consensus = &consensus;
  }
  std::vector<double> scores = score_all(kind, inputs);

  std::vector<int> order(data.table.num_examples());
  for (int i = 0; i < data.table.num_examples(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] < scores[b];
    return a < b;
  });

  std::string out = "example_id,score,pool\n";
  for (int e : order) {
    out += data.examples.name(e) + "," + format_double(scores[e]) + "," +
           (data.table.is_labeled(e) ? "labeled" : "unlabeled") + "\n";
  }
  require_writable({fs::path(out_path)}, force);
  write_text_file(out_path, out);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

int cmd_consensus(const std::string& annotations, const std::string& predictions,
                  const std::string& method, const std::string& out_dir, bool force) {
  if (method != "crowdlab" && method != "majority_vote")
    throw std::runtime_error("unknown method '" + method + "' (valid: crowdlab, majority_vote)");
  if (method == "crowdlab" && predictions.empty())
    throw std::runtime_error("crowdlab consensus needs --predictions");

  ScoreData data;
  if (!predictions.empty()) {
    data = load_score_data(annotations, {predictions}, "", "knn", 0, 0);
  } else {
    // Without a model, a uniform predictor stands in; its trust weight comes
    // out 0 so only annotator statistics matter.
    AnnotationsFile ann = read_annotations_csv(annotations);
    int K = ann.max_label + 1;
    if (K < 2) K = 2;
    AnnotationTable table(ann.examples.size(), K);
    for (const auto& [e, a, label] : ann.entries) table.add(e, a, label);
    data.preds.push_back(uniform_rows(table.num_examples(), K));
    data.examples = ann.examples;
    data.table = std::move(table);
  }

  TrustEstimates trust = fit_trust(data.table, data.preds);
  ConsensusResult consensus = method == "crowdlab"
                                  ? crowdlab_consensus(data.table, data.preds, trust)
                                  : majority_vote_consensus(data.table, data.preds[0]);

  fs::path dir(out_dir.empty() ? default_out_root() : out_dir);
  fs::create_directories(dir);
  fs::path consensus_path = dir / "consensus.csv";
  fs::path weights_path = dir / "annotator_weights.csv";
  require_writable({consensus_path, weights_path}, force);

  std::string out = "example_id,consensus_label,consensus_confidence\n";
  for (int e = 0; e < data.table.num_examples(); ++e) {
    if (consensus.labels[e] < 0) continue;
    out += data.examples.name(e) + "," + std::to_string(consensus.labels[e]) + "," +
           format_double(consensus.probs.at(e, consensus.labels[e])) + "\n";
  }
  write_text_file(consensus_path.string(), out);

  std::string wout = "annotator_id,weight,agreement\n";
  for (int j = 0; j < data.table.num_annotators(); ++j) {
    // In file-backed tables annotator ids are dense in file order.
    wout += std::to_string(j) + "," + format_double(trust.annotator_weights[j]) + "," +
            format_double(trust.agreements[j]) + "\n";
  }
  write_text_file(weights_path.string(), wout);
  std::cout << "wrote " << consensus_path.string() << " and " << weights_path.string() << "\n";
  return 0;
}

int cmd_report(const std::vector<std::string>& results_paths, const std::string& out_dir,
               bool force) {
  std::vector<std::string> texts;
  for (const auto& p : results_paths) texts.push_back(read_text_file(p));
  auto curves = curves_from_results_csv(texts);

  fs::path dir(out_dir.empty() ? default_out_root() : out_dir);
  fs::create_directories(dir);
  fs::path chart_path = dir / "chart.svg";
  fs::path summary_path = dir / "summary.csv";
  require_writable({chart_path, summary_path}, force);
  write_text_file(chart_path.string(), render_chart_svg(curves));
  std::string summary = summary_table(curves);
  write_text_file(summary_path.string(), summary);
  std::cout << summary;
  std::cout << "wrote " << chart_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"active learning benchmark harness with multi-annotator re-labeling"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  bool force = false;
  long seed_override = -1;

  auto* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")->required();
  run->add_option("--out", out_dir, "output directory (default $ALBENCH_OUT or .)");
  run->add_option("--seed", seed_override, "override the config's seed list with one seed");
  run->add_flag("--force", force, "overwrite existing outputs");

  std::string annotations, features, scorer = "activelab", classifier = "knn";
  std::vector<std::string> predictions;
  std::string out_path = "scores.csv";
  int classes = 0;
  uint64_t seed = 0;
  bool no_calibration = false;

  auto* score = app.add_subcommand("score", "score a static dataset for labeling priority");
  score->add_option("--annotations", annotations, "annotations CSV")->required();
  score->add_option("--predictions", predictions,
                    "predicted-probability CSV (repeat for ensembles)");
  score->add_option("--features", features, "features CSV (trains a built-in classifier)");
  score->add_option("--scorer", scorer, "scoring method");
  score->add_option("--classifier", classifier, "built-in classifier for --features");
  score->add_option("--classes", classes, "class count (inferred when omitted)");
  score->add_option("--seed", seed, "seed for the random scorers");
  score->add_flag("--no-calibration", no_calibration, "skip temperature scaling");
  score->add_option("--out", out_path, "output CSV path");
  score->add_flag("--force", force, "overwrite existing outputs");

  std::string method = "crowdlab", cons_predictions;
  auto* cons = app.add_subcommand("consensus", "estimate consensus labels and annotator weights");
  cons->add_option("--annotations", annotations, "annotations CSV")->required();
  cons->add_option("--predictions", cons_predictions, "predicted-probability CSV");
  cons->add_option("--method", method, "crowdlab or majority_vote");
  cons->add_option("--out", out_dir, "output directory");
  cons->add_flag("--force", force, "overwrite existing outputs");

  std::vector<std::string> results_paths;
  auto* report = app.add_subcommand("report", "chart accuracy curves from results files");
  report->add_option("results", results_paths, "results CSV files")->required();
  report->add_option("--out", out_dir, "output directory");
  report->add_flag("--force", force, "overwrite existing outputs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, force, seed_override);
    if (score->parsed())
      return cmd_score(annotations, predictions, features, scorer, classifier, classes, seed,
                       no_calibration, out_path, force);
    if (cons->parsed()) return cmd_consensus(annotations, cons_predictions, method, out_dir, force);
    if (report->parsed()) return cmd_report(results_paths, out_dir, force);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
