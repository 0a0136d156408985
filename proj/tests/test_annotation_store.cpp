#include <doctest.h>

#include <algorithm>
#include <array>

#include "albench/annotation_store.hpp"
#include "albench/rng.hpp"

using namespace albench;

TEST_CASE("add and membership") {
  AnnotationTable t(4, 3);
  CHECK(t.unlabeled_examples().size() == 4);
  t.add(0, 0, 2);
  CHECK(t.labeled_examples() == std::vector<ExampleId>{0});
  CHECK(t.annotation_count(0) == 1);
  CHECK(t.total_annotations() == 1);

  SUBCASE("duplicate pair rejected") {
    CHECK_THROWS(t.add(0, 0, 1));
  }
  SUBCASE("second annotator enters the multi-annotated subset") {
    CHECK(t.multi_annotated_subset().empty());
    t.add(0, 1, 1);
    CHECK(t.annotation_count(0) == 2);
    CHECK(t.multi_annotated_subset() == std::vector<ExampleId>{0});
  }
  SUBCASE("range checks") {
    CHECK_THROWS(t.add(9, 0, 0));
    CHECK_THROWS(t.add(1, 0, 3));
    CHECK_THROWS(t.add(1, 0, -1));
  }
}

TEST_CASE("multi annotated subset") {
  AnnotationTable t(4, 2);
  // counts {1, 2, 3, 0}
  t.add(0, 0, 0);
  t.add(1, 0, 0);
  t.add(1, 1, 1);
  t.add(2, 0, 0);
  t.add(2, 1, 1);
  t.add(2, 2, 0);
  CHECK(t.multi_annotated_subset() == std::vector<ExampleId>{1, 2});

  AnnotationTable single(3, 2);
  single.add(0, 0, 0);
  single.add(1, 1, 1);
  CHECK(single.multi_annotated_subset().empty());
  CHECK(AnnotationTable(3, 2).multi_annotated_subset().empty());
}

TEST_CASE("most labeled class") {
  AnnotationTable t(5, 2);
  int labels[] = {0, 1, 0, 0, 1};
  for (int i = 0; i < 5; ++i) t.add(i, 0, labels[i]);
  CHECK(t.most_labeled_class() == 0);

  AnnotationTable tie(2, 2);
  tie.add(0, 0, 0);
  tie.add(1, 0, 1);
  CHECK(tie.most_labeled_class() == 0);  // ties go to the smaller index

  AnnotationTable t3(3, 3);
  t3.add(0, 0, 2);
  t3.add(1, 0, 2);
  t3.add(2, 0, 1);
  CHECK(t3.most_labeled_class() == 2);

  CHECK_THROWS(AnnotationTable(2, 2).most_labeled_class());
}

TEST_CASE("empirical distribution") {
  AnnotationTable t(2, 2);
  t.add(0, 0, 1);
  t.add(0, 1, 1);
  t.add(0, 2, 0);
  auto probs = t.empirical_distribution(0);
  CHECK(probs[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(probs[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
  CHECK_THROWS(t.empirical_distribution(1));

  AnnotationTable t4(1, 4);
  t4.add(0, 0, 3);
  CHECK(t4.empirical_distribution(0) == std::vector<double>{0, 0, 0, 1});

  AnnotationTable t2(1, 2);
  t2.add(0, 0, 0);
  t2.add(0, 1, 1);
  CHECK(t2.empirical_distribution(0) == std::vector<double>{0.5, 0.5});
}

TEST_CASE("empirical distribution is permutation equivariant") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 3 + rng.next_below(3);
    AnnotationTable t(1, K), tp(1, K);
    std::vector<int> perm(K);
    for (int k = 0; k < K; ++k) perm[k] = k;
    for (int i = K - 1; i > 0; --i) std::swap(perm[i], perm[rng.next_below(i + 1)]);
    int annotators = 1 + rng.next_below(5);
    for (int a = 0; a < annotators; ++a) {
      int label = rng.next_below(K);
      t.add(0, a, label);
      tp.add(0, a, perm[label]);
    }
    auto p = t.empirical_distribution(0);
    auto pp = tp.empirical_distribution(0);
    for (int k = 0; k < K; ++k) CHECK(pp[perm[k]] == doctest::Approx(p[k]).epsilon(1e-12));
  }
}

TEST_CASE("majority vote consensus") {
  SUBCASE("strict plurality") {
    AnnotationTable t(1, 2);
    t.add(0, 0, 0);
    t.add(0, 1, 0);
    t.add(0, 2, 1);
    auto c = majority_vote_consensus(t);
    CHECK(c.labels[0] == 0);
    CHECK(c.probs.at(0, 0) == doctest::Approx(2.0 / 3));
  }
  SUBCASE("tie broken by model probability") {
    AnnotationTable t(1, 2);
    t.add(0, 0, 0);
    t.add(0, 1, 1);
    Matrix preds(1, 2);
    preds.at(0, 0) = 0.2;
    preds.at(0, 1) = 0.8;
    CHECK(majority_vote_consensus(t, preds).labels[0] == 1);
  }
  SUBCASE("full tie goes to the smallest class") {
    AnnotationTable t(1, 2);
    t.add(0, 0, 0);
    t.add(0, 1, 1);
    Matrix preds = uniform_rows(1, 2);
    CHECK(majority_vote_consensus(t, preds).labels[0] == 0);
  }
  SUBCASE("unlabeled examples are skipped") {
    AnnotationTable t(2, 2);
    t.add(0, 0, 1);
    auto c = majority_vote_consensus(t);
    CHECK(c.labels[1] == -1);
  }
}

TEST_CASE("entry counts match across views and vote order does not matter") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 4 + rng.next_below(12);
    const int m = 2 + rng.next_below(4);
    const int K = 2 + rng.next_below(3);
    AnnotationTable t(n, K);
    std::vector<std::array<int, 3>> entries;
    for (int e = 0; e < n; ++e)
      for (int a = 0; a < m; ++a)
        if (rng.next_unit() < 0.55) {
          int label = rng.next_below(K);
          t.add(e, a, label);
          entries.push_back({e, a, label});
        }

    long by_annotator = 0;
    for (int a = 0; a < m; ++a) by_annotator += static_cast<long>(t.examples_of(a).size());
    long by_example = 0;
    for (int e = 0; e < n; ++e) by_example += t.annotation_count(e);
    CHECK(by_annotator == t.total_annotations());
    CHECK(by_example == t.total_annotations());

    auto multi = t.multi_annotated_subset();
    auto labeled = t.labeled_examples();
    for (ExampleId e : multi)
      CHECK(std::find(labeled.begin(), labeled.end(), e) != labeled.end());

    // Re-inserting in a shuffled order yields the same consensus.
    for (int i = static_cast<int>(entries.size()) - 1; i > 0; --i)
      std::swap(entries[i], entries[rng.next_below(i + 1)]);
    AnnotationTable t2(n, K);
    for (const auto& [e, a, label] : entries) t2.add(e, a, label);
    CHECK(majority_vote_consensus(t).labels == majority_vote_consensus(t2).labels);
  }
}
