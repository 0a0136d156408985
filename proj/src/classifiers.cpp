#include "albench/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "albench/rng.hpp"

namespace albench {

namespace {

void check_training_inputs(const Matrix& features, const std::vector<int>& labels,
                           int num_classes) {
  if (features.rows == 0) throw std::invalid_argument("empty training set");
  if (static_cast<int>(labels.size()) != features.rows)
    throw std::invalid_argument("label count does not match feature rows");
  for (int y : labels)
    if (y < 0 || y >= num_classes) throw std::invalid_argument("label outside [0, K)");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

class KnnClassifier final : public Classifier {
 public:
  KnnClassifier(int k, Matrix features, std::vector<int> labels, int num_classes)
      : k_(k), features_(std::move(features)), labels_(std::move(labels)), num_classes_(num_classes) {}

  Matrix predict_proba(const Matrix& queries) const override {
    if (queries.cols != features_.cols) throw std::invalid_argument("feature dimension mismatch");
    const int n = features_.rows;
    const int k = std::min(k_, n);
    Matrix out(queries.rows, num_classes_);
    std::vector<int> order(n);
    std::vector<double> dist(n);
    for (int q = 0; q < queries.rows; ++q) {
      auto query = queries.row(q);
      for (int i = 0; i < n; ++i) dist[i] = squared_distance(query, features_.row(i));
      std::iota(order.begin(), order.end(), 0);
      // Neighbor ties resolve to the smaller training index.
      std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
      });
      // Vote fractions with a +1/K pseudo-count per class so no entry is 0.
      auto row = out.row(q);
      for (int c = 0; c < num_classes_; ++c) row[c] = 1.0 / num_classes_;
      for (int i = 0; i < k; ++i) row[labels_[order[i]]] += 1.0;
      for (int c = 0; c < num_classes_; ++c) row[c] /= (k + 1.0);
    }
    return out;
  }

 private:
  int k_;
  Matrix features_;
  std::vector<int> labels_;
  int num_classes_;
};

void softmax_probs_row(std::span<const double> logits, std::span<double> out) {
  double max_z = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (size_t k = 0; k < logits.size(); ++k) {
    out[k] = std::exp(logits[k] - max_z);
    sum += out[k];
  }
  for (size_t k = 0; k < logits.size(); ++k) out[k] /= sum;
}

class SoftmaxClassifier final : public Classifier {
 public:
  SoftmaxClassifier(SoftmaxParams params, int num_classes)
      : params_(std::move(params)), num_classes_(num_classes) {}

  Matrix predict_proba(const Matrix& queries) const override {
    if (queries.cols != params_.weights.rows)
      throw std::invalid_argument("feature dimension mismatch");
    Matrix out(queries.rows, num_classes_);
    std::vector<double> logits(num_classes_);
    for (int q = 0; q < queries.rows; ++q) {
      compute_logits(params_, queries.row(q), logits);
      softmax_probs_row(logits, out.row(q));
    }
    return out;
  }

  static void compute_logits(const SoftmaxParams& p, std::span<const double> x,
                             std::vector<double>& logits) {
    const int K = static_cast<int>(p.bias.size());
    for (int k = 0; k < K; ++k) logits[k] = p.bias[k];
    for (int j = 0; j < p.weights.rows; ++j) {
      double xj = x[j];
      auto wrow = p.weights.row(j);
      for (int k = 0; k < K; ++k) logits[k] += xj * wrow[k];
    }
  }

  const SoftmaxParams& params() const { return params_; }

 private:
  SoftmaxParams params_;
  int num_classes_;
};

SoftmaxParams fit_softmax(const ClassifierSpec& spec, const Matrix& features,
                          const std::vector<int>& labels, int num_classes) {
  SoftmaxParams params{Matrix(features.cols, num_classes, 0.0),
                       std::vector<double>(num_classes, 0.0)};
  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    SoftmaxParams grad = softmax_gradient(params, features, labels, spec.l2_penalty);
    for (size_t i = 0; i < params.weights.data.size(); ++i)
      params.weights.data[i] -= spec.learning_rate * grad.weights.data[i];
    for (int k = 0; k < num_classes; ++k) params.bias[k] -= spec.learning_rate * grad.bias[k];
  }
  return params;
}

}  // namespace

ClassifierSpec::Kind classifier_kind_from_name(const std::string& name) {
  if (name == "knn") return ClassifierSpec::Kind::Knn;
  if (name == "softmax_regression") return ClassifierSpec::Kind::SoftmaxRegression;
  if (name == "external") return ClassifierSpec::Kind::External;
  throw std::invalid_argument("unknown classifier '" + name +
                              "' (valid: knn, softmax_regression, external)");
}

std::string classifier_kind_name(ClassifierSpec::Kind kind) {
  switch (kind) {
    case ClassifierSpec::Kind::Knn: return "knn";
    case ClassifierSpec::Kind::SoftmaxRegression: return "softmax_regression";
    case ClassifierSpec::Kind::External: return "external";
  }
  return "?";
}

double softmax_nll(const SoftmaxParams& params, const Matrix& features,
                   const std::vector<int>& labels, double l2_penalty) {
  const int n = features.rows;
  const int K = static_cast<int>(params.bias.size());
  std::vector<double> logits(K), probs(K);
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    SoftmaxClassifier::compute_logits(params, features.row(i), logits);
    softmax_probs_row(logits, probs);
    loss -= std::log(std::max(probs[labels[i]], 1e-300));
  }
  loss /= n;
  double reg = 0.0;
  for (double w : params.weights.data) reg += w * w;
  return loss + 0.5 * l2_penalty * reg;
}

SoftmaxParams softmax_gradient(const SoftmaxParams& params, const Matrix& features,
                               const std::vector<int>& labels, double l2_penalty) {
  const int n = features.rows;
  const int d = features.cols;
  const int K = static_cast<int>(params.bias.size());
  SoftmaxParams grad{Matrix(d, K, 0.0), std::vector<double>(K, 0.0)};
  std::vector<double> logits(K), probs(K);
  for (int i = 0; i < n; ++i) {
    auto x = features.row(i);
    SoftmaxClassifier::compute_logits(params, x, logits);
    softmax_probs_row(logits, probs);
    probs[labels[i]] -= 1.0;
    for (int j = 0; j < d; ++j) {
      auto grow = grad.weights.row(j);
      for (int k = 0; k < K; ++k) grow[k] += x[j] * probs[k];
    }
    for (int k = 0; k < K; ++k) grad.bias[k] += probs[k];
  }
  const double inv_n = 1.0 / n;
  for (size_t i = 0; i < grad.weights.data.size(); ++i)
    grad.weights.data[i] = grad.weights.data[i] * inv_n + l2_penalty * params.weights.data[i];
  for (int k = 0; k < K; ++k) grad.bias[k] *= inv_n;
  return grad;
}

std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const Matrix& features,
                                  const std::vector<int>& labels, int num_classes) {
  check_training_inputs(features, labels, num_classes);
  switch (spec.kind) {
    case ClassifierSpec::Kind::Knn:
      if (spec.neighbors < 1) throw std::invalid_argument("neighbors must be >= 1");
      return std::make_unique<KnnClassifier>(spec.neighbors, features, labels, num_classes);
    case ClassifierSpec::Kind::SoftmaxRegression: {
      if (spec.epochs < 1 || spec.learning_rate <= 0.0 || spec.l2_penalty < 0.0)
        throw std::invalid_argument("bad softmax regression hyperparameters");
      return std::make_unique<SoftmaxClassifier>(fit_softmax(spec, features, labels, num_classes),
                                                 num_classes);
    }
    case ClassifierSpec::Kind::External:
      throw std::invalid_argument("external classifiers provide predictions, not training");
  }
  throw std::logic_error("unreachable");
}

CrossValResult cross_val_oos(const ClassifierSpec& spec, const Matrix& features,
                             const std::vector<int>& labels, int num_classes, int folds,
                             uint64_t split_seed) {
  check_training_inputs(features, labels, num_classes);
  const int n = features.rows;
  CrossValResult result;
  result.folds_used = folds;
  if (folds > n) {
    result.folds_used = n;
    result.folds_reduced = true;
  }
  if (result.folds_used < 1) throw std::invalid_argument("folds must be >= 1");
  const int F = result.folds_used;

  // Seeded uniform shuffle of row indices, then contiguous F-way split.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(split_seed);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.next_below(i + 1)]);

  result.fold_of.assign(n, 0);
  for (int pos = 0; pos < n; ++pos) {
    int fold = std::min(static_cast<int>(static_cast<long>(pos) * F / n), F - 1);
    result.fold_of[order[pos]] = fold;
  }

  result.out_of_sample = Matrix(n, num_classes);
  result.fold_models.reserve(F);
  for (int fold = 0; fold < F; ++fold) {
    std::vector<int> train_rows, held_rows;
    for (int i = 0; i < n; ++i)
      (result.fold_of[i] == fold ? held_rows : train_rows).push_back(i);
    // With a single fold there is nothing to hold out; train on everything.
    if (train_rows.empty()) train_rows = held_rows;

    Matrix train_x(static_cast<int>(train_rows.size()), features.cols);
    std::vector<int> train_y(train_rows.size());
    for (size_t i = 0; i < train_rows.size(); ++i) {
      auto src = features.row(train_rows[i]);
      std::copy(src.begin(), src.end(), train_x.row(static_cast<int>(i)).begin());
      train_y[i] = labels[train_rows[i]];
    }
    auto model = train(spec, train_x, train_y, num_classes);

    if (!held_rows.empty()) {
      Matrix held_x(static_cast<int>(held_rows.size()), features.cols);
      for (size_t i = 0; i < held_rows.size(); ++i) {
        auto src = features.row(held_rows[i]);
        std::copy(src.begin(), src.end(), held_x.row(static_cast<int>(i)).begin());
      }
      Matrix preds = model->predict_proba(held_x);
      for (size_t i = 0; i < held_rows.size(); ++i) {
        auto src = preds.row(static_cast<int>(i));
        std::copy(src.begin(), src.end(), result.out_of_sample.row(held_rows[i]).begin());
      }
    }
    result.fold_models.push_back(std::move(model));
  }
  return result;
}

Matrix predict_pool(std::span<const std::unique_ptr<Classifier>> fold_models,
                    const Matrix& features) {
  if (fold_models.empty()) throw std::invalid_argument("no fold models");
  std::vector<Matrix> per_fold;
  per_fold.reserve(fold_models.size());
  for (const auto& model : fold_models) per_fold.push_back(model->predict_proba(features));
  // Cells are averaged in sorted order so examples whose fold predictions
  // permute each other come out bit-identical (stable ties downstream).
  Matrix mean(per_fold[0].rows, per_fold[0].cols);
  std::vector<double> addends(per_fold.size());
  const double inv = 1.0 / static_cast<double>(per_fold.size());
  for (size_t cell = 0; cell < mean.data.size(); ++cell) {
    for (size_t f = 0; f < per_fold.size(); ++f) addends[f] = per_fold[f].data[cell];
    std::sort(addends.begin(), addends.end());
    double sum = 0.0;
    for (double a : addends) sum += a;
    mean.data[cell] = sum * inv;
  }
  return mean;
}

Matrix ensemble_predict(const std::vector<Matrix>& per_model, std::span<const double> weights) {
  if (per_model.empty()) throw std::invalid_argument("no model predictions");
  double total = 0.0;
  for (double w : weights) total += w;
  std::vector<double> norm(per_model.size());
  if (total > 0.0 && weights.size() == per_model.size()) {
    for (size_t l = 0; l < per_model.size(); ++l) norm[l] = weights[l] / total;
  } else {
    std::fill(norm.begin(), norm.end(), 1.0 / per_model.size());
  }
  Matrix out(per_model[0].rows, per_model[0].cols, 0.0);
  for (size_t l = 0; l < per_model.size(); ++l) {
    if (per_model[l].rows != out.rows || per_model[l].cols != out.cols)
      throw std::invalid_argument("model prediction shapes differ");
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += norm[l] * per_model[l].data[i];
  }
  return out;
}

}  // namespace albench
