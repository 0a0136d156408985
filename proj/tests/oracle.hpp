#pragma once

// Test-only direct evaluation of every estimator and score, written straight
// from the formulas over naive map-based structures. Deliberately shares no
// code with the library so the two paths can check each other.

#include <map>
#include <optional>
#include <vector>

namespace oracle {

struct Instance {
  int num_examples = 0;
  int num_annotators = 0;
  int num_classes = 0;
  // labels[{example, annotator}] = class
  std::map<std::pair<int, int>, int> labels;
  // per model: preds[model][example][class]
  std::vector<std::vector<std::vector<double>>> preds;
};

std::vector<int> annotators_of(const Instance& in, int example);
std::vector<int> examples_of(const Instance& in, int annotator);
std::vector<int> multi_annotated(const Instance& in);
std::vector<int> labeled(const Instance& in);
std::vector<int> unlabeled(const Instance& in);

int most_labeled_class(const Instance& in);
std::vector<int> majority_vote(const Instance& in, int tie_model);
std::optional<double> agreement(const Instance& in, int annotator);
double typical_accuracy(const Instance& in, const std::vector<int>& consensus);
double model_accuracy(const Instance& in, const std::vector<int>& consensus, int model);
double mlc_accuracy(const Instance& in, const std::vector<int>& consensus);

struct Weights {
  double typical_accuracy = 0.0;
  std::vector<double> annotator;  // clipped at zero
  double annotator_avg = 0.0;
  std::vector<double> model;
  std::vector<double> agreements;
  std::vector<double> model_acc;
  double mlc_acc = 0.0;
};
// Mirrors the documented estimation pipeline, including the clamped
// normalizer and the agreement fallback, evaluated naively.
Weights fit_weights(const Instance& in);

std::vector<double> likelihood(int chosen, double p, int num_classes);
std::vector<int> crowdlab_labels(const Instance& in, const Weights& w);

double score_labeled(const Instance& in, const Weights& w, const std::vector<int>& consensus,
                     int example);
double score_unlabeled(const Instance& in, const Weights& w, int example);
double score_labeled_ensemble(const Instance& in, const Weights& w,
                              const std::vector<int>& consensus, int example);
double score_unlabeled_ensemble(const Instance& in, const Weights& w, int example);

double entropy(const Instance& in, int model, int example);
double uncertainty(const Instance& in, int model, int example);
double alc(const Instance& in, int model, int example);  // emitted (negated) form
double disagreement_xent(const Instance& in, int example);

}  // namespace oracle
