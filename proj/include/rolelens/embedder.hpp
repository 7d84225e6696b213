#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rolelens {

using Vector = std::vector<double>;

inline constexpr std::size_t kDefaultDimension = 256;

// Cosine similarity; 0 when either vector has zero norm. Throws std::invalid_argument on
// dimension mismatch.
double cosine(const Vector& u, const Vector& v);
double dot(const Vector& u, const Vector& v);
double l2_norm(const Vector& v);
// Componentwise arithmetic mean. Requires a nonempty list of equal-dimension vectors.
Vector mean_vector(std::span<const Vector> vectors);

// Splits at '.', '!' or '?' (plus trailing quotes/brackets) followed by whitespace and an
// uppercase letter or digit. No break after a guarded abbreviation or a single-letter initial.
// Sentences are returned whitespace-normalized.
class SentenceSplitter {
 public:
  SentenceSplitter();  // Dutch abbreviation guard list
  explicit SentenceSplitter(std::set<std::string> guard_list);

  std::vector<std::string> split(std::string_view text) const;
  const std::set<std::string>& guard_list() const { return guard_; }

  static std::set<std::string> dutch_abbreviations();

 private:
  std::set<std::string> guard_;  // lowercased, with trailing '.'
};

const SentenceSplitter& default_splitter();

inline std::vector<std::string> split_sentences(std::string_view text) {
  return default_splitter().split(text);
}

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  // Must be deterministic and safe to call concurrently.
  virtual Vector embed_sentence(std::string_view sentence) const = 0;
};

// Hashed character-trigram counts, L2-normalized.
//
// The text is whitespace-normalized and lowercased; every window of three consecutive
// Unicode scalars (spaces included) is one token. Text shorter than three scalars is a
// single token. Tokens are hashed with 64-bit FNV-1a over their UTF-8 bytes and counted in
// bucket `hash % dimension`. Empty text yields the zero vector.
class ReferenceEmbedder final : public EmbeddingProvider {
 public:
  explicit ReferenceEmbedder(std::size_t dimension = kDefaultDimension);
  std::string name() const override;
  std::size_t dimension() const override { return dim_; }
  Vector embed_sentence(std::string_view sentence) const override;

  static std::uint64_t fnv1a64(std::string_view bytes);
  static std::vector<std::string> trigrams(std::string_view sentence);

 private:
  std::size_t dim_;
};

// Precomputed text → vector table (JSONL `{"text": ..., "vector": [...]}`). Lookup is exact
// after whitespace normalization. Unknown texts go to the fallback provider, or throw
// std::out_of_range without one.
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  FileEmbeddingProvider(const std::filesystem::path& path,
                        std::shared_ptr<const EmbeddingProvider> fallback = nullptr);
  static FileEmbeddingProvider from_string(const std::string& jsonl, std::string name,
                                           std::shared_ptr<const EmbeddingProvider> fallback = nullptr);

  std::string name() const override { return name_; }
  std::size_t dimension() const override { return dim_; }
  Vector embed_sentence(std::string_view sentence) const override;
  std::size_t size() const { return table_.size(); }

 private:
  FileEmbeddingProvider() = default;
  void load(const std::string& jsonl);

  std::string name_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Vector> table_;
  std::shared_ptr<const EmbeddingProvider> fallback_;
};

Vector embed_sentence(std::string_view sentence, const EmbeddingProvider& provider);

// Mean of the sentence vectors; zero vector for text without sentences.
Vector embed_section(std::string_view text, const EmbeddingProvider& provider,
                     const SentenceSplitter& splitter = default_splitter());

// Mean of embed_section over sections sharing one title. Throws std::invalid_argument
// ("empty title group") for an empty list.
Vector title_group_vector(std::span<const std::string> sections, const EmbeddingProvider& provider,
                          const SentenceSplitter& splitter = default_splitter());

}  // namespace rolelens
