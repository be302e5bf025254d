// Copyright 2026 The pepper Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Train both base classifiers on a synthetic corpus, combine their votes on
// the dev split, and score the result.

#include <iostream>

#include "pepper/chunker/chunker.hpp"
#include "pepper/corpus/split.hpp"
#include "pepper/corpus/synthetic.hpp"
#include "pepper/docclf/model.hpp"
#include "pepper/ensemble/ensemble.hpp"
#include "pepper/eval/metrics.hpp"

using namespace pepper;

int main() {
  SyntheticSpec spec;
  spec.n_reviews = 500;
  spec.positive_rate = 0.1;
  spec.seed = 1;
  auto corpus = generate_synthetic_corpus(spec);
  for (auto& lr : corpus) annotate(lr.tokens);
  auto [train, dev] = apply_split(corpus, split_train_dev(corpus, 1));

  auto chunker = ChunkModel::train(train);
  auto doc = DocModel::train(train);

  std::vector<PredictionRecord> records;
  std::vector<bool> pred, gold;
  for (const auto& lr : dev) {
    auto rec = make_prediction(lr.review.review_id, any_chunk(chunker.decode(lr.tokens)), doc.predict(lr.tokens).label);
    pred.push_back(rec.ensemble1);
    gold.push_back(lr.doc_label);
    records.push_back(rec);
  }
  auto pc = paired_confusion(records);
  std::cout << "dev reviews        " << pc.total() << '\n'
            << "base disagreements " << pc.disagreements() << '\n';
  std::cout << metrics_table({{"ensemble-1", score(pred, gold)}});
  return 0;
}
