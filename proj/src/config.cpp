#include "albench/config.hpp"

#include <algorithm>
#include <sstream>

#include "albench/io.hpp"

namespace albench {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::stringstream ss(value);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct Entry {
  int line;
  std::string section;
  std::string key;
  std::string value;
};

double as_double(const Entry& e) {
  try {
    size_t used = 0;
    double v = std::stod(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(e.line, "expected a number for '" + e.key + "', got '" + e.value + "'");
  }
}

long as_long(const Entry& e) {
  try {
    size_t used = 0;
    long v = std::stol(e.value, &used);
    if (used != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::logic_error&) {
    throw ConfigError(e.line, "expected an integer for '" + e.key + "', got '" + e.value + "'");
  }
}

bool as_bool(const Entry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(e.line, "expected true/false for '" + e.key + "'");
}

}  // namespace

std::string mode_name(ExperimentConfig::Mode mode) {
  switch (mode) {
    case ExperimentConfig::Mode::Multiannotator: return "multiannotator";
    case ExperimentConfig::Mode::SingleLabel: return "single_label";
    case ExperimentConfig::Mode::LabelCleaning: return "label_cleaning";
  }
  return "?";
}

ExperimentConfig::Mode mode_from_name(const std::string& name) {
  if (name == "multiannotator") return ExperimentConfig::Mode::Multiannotator;
  if (name == "single_label") return ExperimentConfig::Mode::SingleLabel;
  if (name == "label_cleaning") return ExperimentConfig::Mode::LabelCleaning;
  throw std::invalid_argument("unknown mode '" + name +
                              "' (valid: multiannotator, single_label, label_cleaning)");
}

std::string consensus_rule_name(ExperimentConfig::ConsensusRule rule) {
  switch (rule) {
    case ExperimentConfig::ConsensusRule::Auto: return "auto";
    case ExperimentConfig::ConsensusRule::Crowdlab: return "crowdlab";
    case ExperimentConfig::ConsensusRule::MajorityVote: return "majority_vote";
  }
  return "?";
}

ExperimentConfig::ConsensusRule consensus_rule_from_name(const std::string& name) {
  if (name == "auto") return ExperimentConfig::ConsensusRule::Auto;
  if (name == "crowdlab") return ExperimentConfig::ConsensusRule::Crowdlab;
  if (name == "majority_vote") return ExperimentConfig::ConsensusRule::MajorityVote;
  throw std::invalid_argument("unknown consensus rule '" + name +
                              "' (valid: auto, crowdlab, majority_vote)");
}

std::string classifier_list_name(const std::vector<ClassifierSpec>& specs) {
  std::string out;
  for (const auto& spec : specs) {
    if (!out.empty()) out += "+";
    out += classifier_kind_name(spec.kind);
  }
  return out;
}

LoadedConfig parse_config_text(const std::string& text) {
  std::vector<Entry> entries;
  {
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      // Inline comments start at a whitespace-preceded '#' or ';'.
      for (size_t i = 0; i < line.size(); ++i) {
        if ((line[i] == '#' || line[i] == ';') &&
            (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
          line.resize(i);
          break;
        }
      }
      std::string t = trim(line);
      if (t.empty()) continue;
      if (t.front() == '[') {
        if (t.back() != ']') throw ConfigError(line_no, "unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) throw ConfigError(line_no, "empty section name");
        continue;
      }
      size_t eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError(line_no, "expected key = value");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw ConfigError(line_no, "empty key");
      if (section.empty()) throw ConfigError(line_no, "key outside any [section]");
      entries.push_back({line_no, section, key, value});
    }
  }

  LoadedConfig loaded;
  ExperimentConfig& cfg = loaded.experiment;
  cfg.classifiers.clear();
  bool seeds_set = false;
  std::vector<int> classifier_section_lines;

  // Ensemble members live in [classifier], [classifier.2], [classifier.3]...
  auto classifier_slot = [&](const Entry& e) -> ClassifierSpec& {
    size_t index = 0;
    if (e.section != "classifier") {
      std::string suffix = e.section.substr(std::string("classifier.").size());
      try {
        index = static_cast<size_t>(std::stoul(suffix)) - 1;
      } catch (const std::logic_error&) {
        throw ConfigError(e.line, "bad classifier section '" + e.section + "'");
      }
      if (index < 1 || index > 15)
        throw ConfigError(e.line, "classifier sections go [classifier], [classifier.2]...");
    }
    if (cfg.classifiers.size() <= index) {
      cfg.classifiers.resize(index + 1);
      classifier_section_lines.resize(index + 1, 0);
    }
    classifier_section_lines[index] = e.line;
    return cfg.classifiers[index];
  };

  for (const Entry& e : entries) {
    try {
      if (e.section == "experiment") {
        if (e.key == "scorer") cfg.scorer = scorer_from_name(e.value);
        else if (e.key == "mode") cfg.mode = mode_from_name(e.value);
        else if (e.key == "consensus") cfg.consensus = consensus_rule_from_name(e.value);
        else if (e.key == "batch_size") cfg.batch_size = static_cast<int>(as_long(e));
        else if (e.key == "rounds") cfg.rounds = static_cast<int>(as_long(e));
        else if (e.key == "cv_folds") cfg.cv_folds = static_cast<int>(as_long(e));
        else if (e.key == "seeds") {
          cfg.seeds.clear();
          for (const auto& s : split_list(e.value))
            cfg.seeds.push_back(static_cast<uint64_t>(std::stoull(s)));
          seeds_set = true;
        } else throw ConfigError(e.line, "unknown key '" + e.key + "' in [experiment]");
      } else if (e.section == "data") {
        if (e.key == "source") {
          if (e.value == "blobs") cfg.source = ExperimentConfig::DataSource::Blobs;
          else if (e.value == "files") cfg.source = ExperimentConfig::DataSource::Files;
          else throw ConfigError(e.line, "source must be blobs or files");
        } else if (e.key == "labeled") cfg.pool.labeled = static_cast<int>(as_long(e));
        else if (e.key == "pool") cfg.pool.pool = static_cast<int>(as_long(e));
        else if (e.key == "test") cfg.pool.test = static_cast<int>(as_long(e));
        else if (e.key == "classes") {
          cfg.pool.num_classes = static_cast<int>(as_long(e));
          cfg.file_classes = cfg.pool.num_classes;
        } else if (e.key == "dim") cfg.pool.dim = static_cast<int>(as_long(e));
        else if (e.key == "spread") cfg.pool.spread = as_double(e);
        else if (e.key == "density") cfg.pool.density = as_double(e);
        else if (e.key == "seed") cfg.pool.seed = static_cast<uint64_t>(as_long(e));
        else if (e.key == "features") cfg.files.features = e.value;
        else if (e.key == "annotations") cfg.files.annotations = e.value;
        else if (e.key == "truth") cfg.files.truth = e.value;
        else if (e.key == "test_features") cfg.files.test_features = e.value;
        else if (e.key == "test_truth") cfg.files.test_truth = e.value;
        else if (e.key == "test_predictions") cfg.files.test_predictions = e.value;
        else throw ConfigError(e.line, "unknown key '" + e.key + "' in [data]");
      } else if (e.section == "annotators") {
        if (e.key == "roster") cfg.roster = static_cast<int>(as_long(e));
        else if (e.key == "initial_noise") cfg.initial_noise = as_double(e);
        else if (e.key == "round_noise") {
          cfg.round_noise.clear();
          for (const auto& s : split_list(e.value)) cfg.round_noise.push_back(std::stod(s));
        } else throw ConfigError(e.line, "unknown key '" + e.key + "' in [annotators]");
      } else if (e.section == "classifier" || e.section.rfind("classifier.", 0) == 0) {
        ClassifierSpec& spec = classifier_slot(e);
        if (e.key == "kind") spec.kind = classifier_kind_from_name(e.value);
        else if (e.key == "neighbors") spec.neighbors = static_cast<int>(as_long(e));
        else if (e.key == "learning_rate") spec.learning_rate = as_double(e);
        else if (e.key == "epochs") spec.epochs = static_cast<int>(as_long(e));
        else if (e.key == "l2") spec.l2_penalty = as_double(e);
        else if (e.key == "predictions") spec.predictions_path = e.value;
        else throw ConfigError(e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
      } else if (e.section == "calibration") {
        if (e.key == "enabled") cfg.calibration.enabled = as_bool(e);
        else if (e.key == "input") {
          if (e.value == "probabilities") cfg.calibration.input = CalibrationOptions::Input::Probabilities;
          else if (e.value == "logits") cfg.calibration.input = CalibrationOptions::Input::Logits;
          else throw ConfigError(e.line, "input must be probabilities or logits");
        } else if (e.key == "grid_min") cfg.calibration.grid_min = as_double(e);
        else if (e.key == "grid_max") cfg.calibration.grid_max = as_double(e);
        else if (e.key == "grid_points") cfg.calibration.grid_points = static_cast<int>(as_long(e));
        else throw ConfigError(e.line, "unknown key '" + e.key + "' in [calibration]");
      } else if (e.section == "scoring") {
        if (e.key == "disagreement_form") {
          if (e.value == "cross_entropy") cfg.disagreement_form = DisagreementForm::CrossEntropy;
          else if (e.value == "product") cfg.disagreement_form = DisagreementForm::Product;
          else throw ConfigError(e.line, "disagreement_form must be cross_entropy or product");
        } else throw ConfigError(e.line, "unknown key '" + e.key + "' in [scoring]");
      } else if (e.section == "output") {
        if (e.key == "chart") loaded.write_chart = as_bool(e);
        else throw ConfigError(e.line, "unknown key '" + e.key + "' in [output]");
      } else {
        throw ConfigError(e.line, "unknown section [" + e.section + "]");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(e.line, ex.what());
    }
  }

  if (cfg.classifiers.empty()) cfg.classifiers.push_back(ClassifierSpec{});
  for (size_t i = 0; i < classifier_section_lines.size(); ++i) {
    if (classifier_section_lines[i] == 0)
      throw ConfigError(0, "classifier list has a gap at [classifier" +
                               (i == 0 ? std::string("]") : "." + std::to_string(i + 1) + "]"));
  }
  if (!seeds_set && cfg.seeds.empty()) cfg.seeds = {1};

  loaded.canonical = canonical_config(cfg, loaded.write_chart);
  return loaded;
}

LoadedConfig load_config_file(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::string canonical_config(const ExperimentConfig& cfg, bool write_chart) {
  std::ostringstream out;
  out << "[experiment]\n";
  out << "scorer = " << scorer_name(cfg.scorer) << "\n";
  out << "mode = " << mode_name(cfg.mode) << "\n";
  out << "consensus = " << consensus_rule_name(cfg.consensus) << "\n";
  out << "batch_size = " << cfg.batch_size << "\n";
  out << "rounds = " << cfg.rounds << "\n";
  out << "cv_folds = " << cfg.cv_folds << "\n";
  out << "seeds = ";
  for (size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
  out << "\n";
  out << "[data]\n";
  if (cfg.source == ExperimentConfig::DataSource::Blobs) {
    out << "source = blobs\n";
    out << "labeled = " << cfg.pool.labeled << "\n";
    out << "pool = " << cfg.pool.pool << "\n";
    out << "test = " << cfg.pool.test << "\n";
    out << "classes = " << cfg.pool.num_classes << "\n";
    out << "dim = " << cfg.pool.dim << "\n";
    out << "spread = " << format_double(cfg.pool.spread) << "\n";
    out << "density = " << format_double(cfg.pool.density) << "\n";
    out << "seed = " << cfg.pool.seed << "\n";
  } else {
    out << "source = files\n";
    out << "features = " << cfg.files.features << "\n";
    out << "annotations = " << cfg.files.annotations << "\n";
    out << "truth = " << cfg.files.truth << "\n";
    out << "test_features = " << cfg.files.test_features << "\n";
    out << "test_truth = " << cfg.files.test_truth << "\n";
    if (!cfg.files.test_predictions.empty())
      out << "test_predictions = " << cfg.files.test_predictions << "\n";
    if (cfg.file_classes > 0) out << "classes = " << cfg.file_classes << "\n";
  }
  out << "[annotators]\n";
  out << "roster = " << cfg.roster << "\n";
  out << "initial_noise = " << format_double(cfg.initial_noise) << "\n";
  out << "round_noise = ";
  if (cfg.round_noise.empty()) {
    out << format_double(cfg.initial_noise);
  } else {
    for (size_t i = 0; i < cfg.round_noise.size(); ++i)
      out << (i ? "," : "") << format_double(cfg.round_noise[i]);
  }
  out << "\n";
  for (size_t l = 0; l < cfg.classifiers.size(); ++l) {
    const auto& spec = cfg.classifiers[l];
    out << (l == 0 ? "[classifier]\n" : "[classifier." + std::to_string(l + 1) + "]\n");
    out << "kind = " << classifier_kind_name(spec.kind) << "\n";
    switch (spec.kind) {
      case ClassifierSpec::Kind::Knn:
        out << "neighbors = " << spec.neighbors << "\n";
        break;
      case ClassifierSpec::Kind::SoftmaxRegression:
        out << "learning_rate = " << format_double(spec.learning_rate) << "\n";
        out << "epochs = " << spec.epochs << "\n";
        out << "l2 = " << format_double(spec.l2_penalty) << "\n";
        break;
      case ClassifierSpec::Kind::External:
        out << "predictions = " << spec.predictions_path << "\n";
        break;
    }
  }
  out << "[calibration]\n";
  out << "enabled = " << (cfg.calibration.enabled ? "true" : "false") << "\n";
  out << "input = "
      << (cfg.calibration.input == CalibrationOptions::Input::Probabilities ? "probabilities"
                                                                            : "logits")
      << "\n";
  out << "grid_min = " << format_double(cfg.calibration.grid_min) << "\n";
  out << "grid_max = " << format_double(cfg.calibration.grid_max) << "\n";
  out << "grid_points = " << cfg.calibration.grid_points << "\n";
  out << "[scoring]\n";
  out << "disagreement_form = "
      << (cfg.disagreement_form == DisagreementForm::CrossEntropy ? "cross_entropy" : "product")
      << "\n";
  out << "[output]\n";
  out << "chart = " << (write_chart ? "true" : "false") << "\n";
  return out.str();
}

}  // namespace albench
