#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "albench/annotation_store.hpp"
#include "albench/rng.hpp"

namespace albench {

// Probability of replacing the true label with a uniformly drawn wrong class.
struct AnnotatorProfile {
  AnnotatorId annotator_id = 0;
  double noise_rate = 0.0;
};

struct PoolSpec {
  int labeled = 0;  // initial examples with at least one annotation
  int pool = 0;     // initially unannotated examples
  int test = 0;
  int num_classes = 2;
  int dim = 2;
  double spread = 1.0;  // isotropic cluster standard deviation
  // Expected annotations per initially-labeled example = density * roster size;
  // valid range [1/roster, 1] as a fraction of the roster.
  double density = 1.0;
  uint64_t seed = 0;
};

// Ground truth stays out of every estimation path; it feeds only annotator
// simulation and test evaluation.
struct BlobsDataset {
  Matrix features;          // labeled-then-pool examples, ids 0..labeled+pool-1
  std::vector<int> truth;   // per example above
  Matrix test_features;
  std::vector<int> test_truth;
  int initial_labeled = 0;  // ids < initial_labeled start annotated
};

// K seeded isotropic Gaussian clusters with well-separated centers; examples
// are class-balanced, shuffled, and split contiguously into labeled/pool/test.
BlobsDataset generate_blobs(const PoolSpec& spec);

ClassLabel simulate_annotator_label(double noise_rate, ClassLabel truth, int num_classes, Rng& rng);

// Annotates each initially-labeled example with floor(t) + Bernoulli(frac(t))
// roster members drawn without replacement, where t = density * roster size;
// every labeled example keeps at least one annotation. Pool examples get none.
AnnotationTable initialize_pools(const PoolSpec& spec, const std::vector<int>& truth,
                                 std::span<const AnnotatorProfile> roster, Rng& rng);

// One fresh annotator labels the whole batch once.
void collect_batch_labels(AnnotationTable& table, std::span<const ExampleId> batch,
                          AnnotatorId fresh_annotator, double noise_rate,
                          const std::vector<int>& truth, Rng& rng);

}  // namespace albench
