#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolelens/aspect_classifier.hpp"

namespace rolelens {

inline constexpr const char* kStoreVersion = "1";

struct BuildConfig {
  // Input files; relative paths resolve against `base_dir`.
  std::filesystem::path base_dir;
  std::string pages;
  std::string taxonomy;
  std::string profiles;
  std::string articles;
  std::string dictionary;
  std::string stoplist;        // optional, default reference-section stoplist
  std::string abbreviations;   // optional, default Dutch guard list
  std::string particles;       // optional, default name particles
  std::string familiar_words;  // optional, empty familiar-word list
  std::string embeddings;      // optional precomputed vectors; reference embedder otherwise

  double sim_threshold = 0.95;
  std::size_t min_title_freq = 100;
  std::size_t abs_support = 100;
  double rel_support = 0.05;
  std::size_t k = 20;
  std::size_t top_n = 5;
  std::size_t max_fragment = 160;
  std::size_t max_sentences = 12;
  double mmr_lambda = 0.7;
  std::size_t min_summary_snippets = 5;
  std::size_t embedding_dim = kDefaultDimension;
  std::vector<double> tau_grid = kDefaultTauGrid;
  std::uint64_t seed = 0;

  std::filesystem::path resolve(const std::string& p) const;
  // Settings recorded in the manifest (input paths as written, not resolved).
  nlohmann::json to_json() const;
};

BuildConfig build_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
BuildConfig load_build_config(const std::filesystem::path& path);

// A pipeline failure tagged with the stage that raised it.
class BuildError : public std::runtime_error {
 public:
  BuildError(std::string stage, const std::string& cause)
      : std::runtime_error("stage " + stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuildResult {
  nlohmann::json manifest;
  std::string manifest_digest;
};

// Runs the whole pipeline and writes the store into `out_dir`, which must not exist or be
// empty. On failure nothing is left behind.
BuildResult build_corpus(const BuildConfig& config, const std::filesystem::path& out_dir);

std::string sha256_hex(std::string_view bytes);

// File names for store entries: bytes outside [A-Za-z0-9._-] are percent-encoded.
std::string store_file_name(std::string_view id);

// Read-only view of a built store, verified against the manifest on load.
class CorpusStore {
 public:
  // Throws StoreError on missing files, digest mismatch or count mismatch.
  static CorpusStore load(const std::filesystem::path& dir);

  const nlohmann::json& manifest() const { return manifest_; }
  const std::string& manifest_digest() const { return manifest_digest_; }
  const std::map<std::string, nlohmann::json>& persons() const { return persons_; }
  const nlohmann::json* person(const std::string& id) const;
  const std::map<std::string, TrainedAspectModel>& models() const { return models_; }
  const nlohmann::json& clusters() const { return clusters_; }
  std::size_t reject_count() const { return reject_count_; }

  // Recounted from the loaded documents, in the manifest's "counts" vocabulary.
  nlohmann::json recount() const;

 private:
  nlohmann::json manifest_;
  std::string manifest_digest_;
  std::map<std::string, nlohmann::json> persons_;
  std::map<std::string, TrainedAspectModel> models_;
  nlohmann::json clusters_;
  std::size_t reject_count_ = 0;
};

}  // namespace rolelens
