#include "albench/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace albench {

namespace {

// Redraw centers until they are pairwise separated, relaxing the threshold if
// the space is too tight. Deterministic given the rng state.
std::vector<std::vector<double>> draw_centers(int num_classes, int dim, Rng& rng) {
  const double center_scale = 3.0;
  double min_gap = 2.0;
  std::vector<std::vector<double>> centers;
  for (int attempt = 0; static_cast<int>(centers.size()) < num_classes; ++attempt) {
    std::vector<double> c(dim);
    for (double& v : c) v = center_scale * rng.next_gaussian();
    bool ok = true;
    for (const auto& other : centers) {
      double d2 = 0.0;
      for (int j = 0; j < dim; ++j) d2 += (c[j] - other[j]) * (c[j] - other[j]);
      if (d2 < min_gap * min_gap) ok = false;
    }
    if (ok) centers.push_back(std::move(c));
    if (attempt > 0 && attempt % 100 == 0) min_gap *= 0.9;
  }
  return centers;
}

}  // namespace

BlobsDataset generate_blobs(const PoolSpec& spec) {
  if (spec.labeled < 0 || spec.pool < 0 || spec.test < 0)
    throw std::invalid_argument("negative split size");
  if (spec.num_classes < 2 || spec.dim < 1) throw std::invalid_argument("bad blob spec");
  const int total = spec.labeled + spec.pool + spec.test;
  Rng rng(derive_seed(spec.seed, "blobs"));
  auto centers = draw_centers(spec.num_classes, spec.dim, rng);

  // Class-balanced assignment, then a seeded shuffle decides the splits.
  std::vector<int> cls(total);
  for (int i = 0; i < total; ++i) cls[i] = i % spec.num_classes;
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  for (int i = total - 1; i > 0; --i) std::swap(order[i], order[rng.next_below(i + 1)]);

  BlobsDataset data;
  data.initial_labeled = spec.labeled;
  const int train_pool = spec.labeled + spec.pool;
  data.features = Matrix(train_pool, spec.dim);
  data.truth.resize(train_pool);
  data.test_features = Matrix(spec.test, spec.dim);
  data.test_truth.resize(spec.test);

  for (int pos = 0; pos < total; ++pos) {
    int k = cls[order[pos]];
    std::vector<double> point(spec.dim);
    for (int j = 0; j < spec.dim; ++j)
      point[j] = centers[k][j] + spec.spread * rng.next_gaussian();
    if (pos < train_pool) {
      std::copy(point.begin(), point.end(), data.features.row(pos).begin());
      data.truth[pos] = k;
    } else {
      int t = pos - train_pool;
      std::copy(point.begin(), point.end(), data.test_features.row(t).begin());
      data.test_truth[t] = k;
    }
  }
  return data;
}

ClassLabel simulate_annotator_label(double noise_rate, ClassLabel truth, int num_classes,
                                    Rng& rng) {
  if (rng.next_unit() >= noise_rate) return truth;
  int wrong = rng.next_below(num_classes - 1);
  return wrong >= truth ? wrong + 1 : wrong;
}

AnnotationTable initialize_pools(const PoolSpec& spec, const std::vector<int>& truth,
                                 std::span<const AnnotatorProfile> roster, Rng& rng) {
  if (roster.empty()) throw std::invalid_argument("empty annotator roster");
  const int m = static_cast<int>(roster.size());
  const double target = spec.density * m;  // expected annotations per labeled example
  if (target < 1.0 - 1e-9)
    throw std::invalid_argument("annotation density too low to keep one annotation per example");
  if (spec.density > 1.0 + 1e-9) throw std::invalid_argument("annotation density above 1");

  AnnotationTable table(spec.labeled + spec.pool, spec.num_classes);
  std::vector<int> pick(m);
  for (int e = 0; e < spec.labeled; ++e) {
    int count = static_cast<int>(std::floor(target));
    double frac = target - count;
    if (frac > 0.0 && rng.next_unit() < frac) count += 1;
    count = std::clamp(count, 1, m);
    // Partial Fisher-Yates: the first `count` entries are a uniform draw
    // without replacement.
    std::iota(pick.begin(), pick.end(), 0);
    for (int i = 0; i < count; ++i) std::swap(pick[i], pick[i + rng.next_below(m - i)]);
    std::sort(pick.begin(), pick.begin() + count);
    for (int i = 0; i < count; ++i) {
      const auto& profile = roster[pick[i]];
      table.add(e, profile.annotator_id,
                simulate_annotator_label(profile.noise_rate, truth[e], spec.num_classes, rng));
    }
  }
  return table;
}

void collect_batch_labels(AnnotationTable& table, std::span<const ExampleId> batch,
                          AnnotatorId fresh_annotator, double noise_rate,
                          const std::vector<int>& truth, Rng& rng) {
  if (fresh_annotator < table.num_annotators())
    throw std::invalid_argument("batch annotator must be a fresh id");
  for (ExampleId e : batch)
    table.add(e, fresh_annotator,
              simulate_annotator_label(noise_rate, truth[e], table.num_classes(), rng));
}

}  // namespace albench
