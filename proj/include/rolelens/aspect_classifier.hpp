#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolelens/aspect_miner.hpp"
#include "rolelens/embedder.hpp"

namespace rolelens {

inline constexpr const char* kNegativeLabel = "NEGATIVE";

// Seeded generator with platform-independent sampling (std distributions are not).
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

struct LabeledText {
  std::string text;
  std::string label;
  bool operator==(const LabeledText&) const = default;
};

struct TrainingSet {
  CategoryId role;
  std::vector<std::string> labels;  // aspects in schema order, then NEGATIVE
  std::vector<LabeledText> examples;
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;

  std::size_t count(const std::string& label) const;
};

// Stratified split with global sizes floor(0.8n) / floor(0.1n) / remainder. Each label gets
// floor(0.8c) / floor(0.1c) first; leftover slots go to labels with the largest fractional
// remainder (ties by label order). Membership inside a label is shuffled with `rng`.
void stratified_split(TrainingSet& ts, SeededRng& rng);

// Downsamples every aspect to the least frequent one and draws as many negatives from pages
// outside the role. Throws std::runtime_error("no negative pool") if no such page has a section.
TrainingSet build_training_set(const CategoryId& role, const RoleAspectSchema& schema,
                               const std::vector<PersonPage>& pages, std::span<const std::size_t> role_pages,
                               const ClusterIndex& clusters, std::uint64_t seed);

struct EvalReport {
  std::vector<std::string> classes;
  std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t total = 0;
};

// Macro metrics are unweighted class means; precision (recall) of a class with no
// predictions (no examples) is 0. Throws std::invalid_argument on empty input.
EvalReport evaluate_predictions(const std::vector<std::string>& classes,
                                std::span<const std::size_t> actual, std::span<const std::size_t> predicted);

struct TrainedAspectModel {
  CategoryId role;
  std::vector<std::string> classes;  // aspects, then NEGATIVE
  std::vector<Vector> centroids;
  double temperature = 1.0;
  EvalReport metrics;
  std::string provider;
  std::uint64_t seed = 0;
  std::size_t samples = 0;  // training-set size

  std::size_t negative_index() const { return classes.size() - 1; }
};

struct Classification {
  std::size_t label_index = 0;
  std::string label;
  std::vector<double> probabilities;  // aligned with model.classes

  double probability() const { return probabilities.at(label_index); }
};

inline const std::vector<double> kDefaultTauGrid{1.0, 5.0, 10.0, 50.0};

// Nearest-centroid training. The temperature is picked from tau_grid by validation macro
// precision (ties: smallest). Throws std::runtime_error("degenerate split") if a class has no
// train example.
TrainedAspectModel train(const TrainingSet& ts, const EmbeddingProvider& provider,
                         const std::vector<double>& tau_grid = kDefaultTauGrid,
                         const SentenceSplitter& splitter = default_splitter());

// softmax(tau * cosine(embedding, centroid_i)); argmax ties resolve to class order. A zero
// embedding yields NEGATIVE with a uniform distribution.
Classification classify_vector(const TrainedAspectModel& model, const Vector& embedding);
Classification classify(const TrainedAspectModel& model, std::string_view text,
                        const EmbeddingProvider& provider,
                        const SentenceSplitter& splitter = default_splitter());

EvalReport evaluate(const TrainedAspectModel& model, std::span<const LabeledText> labeled,
                    const EmbeddingProvider& provider,
                    const SentenceSplitter& splitter = default_splitter());

// "role | #aspects | #samples | precision | recall | f1 | accuracy"
std::string format_eval_row(const TrainedAspectModel& model);
std::string eval_table_header();

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrainedAspectModel& model);
TrainedAspectModel model_from_json(const nlohmann::json& j);

}  // namespace rolelens
