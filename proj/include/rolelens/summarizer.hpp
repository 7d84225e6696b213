#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolelens/embedder.hpp"
#include "rolelens/news_pipeline.hpp"

namespace rolelens {

enum class Language { kEnglish, kDutch };

inline constexpr double kSecondsPerCharacter = 0.01469;

// Maximal vowel runs, at least 1. Dutch treats "ij" as a vowel nucleus. Throws
// std::invalid_argument unless `word` is nonempty and purely alphabetic.
int count_syllables(std::string_view word, Language language);

// English: 206.835 - 1.015 * words/sentences - 84.6 * syllables/words.
// Dutch (Flesch-Douma): 206.84 - 0.93 * words/sentences - 77 * syllables/words.
// Throws std::invalid_argument for text without words.
double flesch(std::string_view text, Language language);

// New Dale-Chall: 0.1579 * percent difficult + 0.0496 * words/sentences, plus 3.6365 when more
// than 5% of the words are difficult. A word is difficult if its lowercase form is not familiar.
double dale_chall(std::string_view text, const std::set<std::string>& familiar_words);

double reading_time(std::string_view text);

struct ReadabilityReport {
  double flesch_en = 0.0;
  double flesch_nl = 0.0;
  double dale_chall = 0.0;
  double reading_time_s = 0.0;
  std::size_t sentence_count = 0;
};

ReadabilityReport readability(std::string_view text, const std::set<std::string>& familiar_words);

struct SummarySentence {
  std::string text;
  std::string snippet_id;
};

struct AspectSummary {
  std::string person_id;
  CategoryId role;
  ClusterId aspect;
  std::vector<SummarySentence> sentences;
  ReadabilityReport metrics;
  std::size_t k_used = 0;

  std::string text() const;
};

struct SummarizerConfig {
  std::size_t k = 20;
  std::size_t max_sentences = 12;
  double lambda = 0.7;
  std::size_t min_snippets = 5;
};

// Extractive maximal-marginal-relevance summary over the k most probable snippets; nullopt
// below min_snippets. Selected sentences keep their candidate order.
std::optional<AspectSummary> summarize(const std::string& person_id, const CategoryId& role,
                                       const ClusterId& aspect, const std::vector<ClassifiedSnippet>& snippets,
                                       const EmbeddingProvider& provider,
                                       const std::set<std::string>& familiar_words,
                                       const SummarizerConfig& config = {},
                                       const SentenceSplitter& splitter = default_splitter());

std::string readability_table_header();
// "k | #sent | Flesch EN | Flesch NL | reading time | Dale-Chall", mean ± sample std.
std::string format_readability_row(std::size_t k, const std::vector<ReadabilityReport>& reports);

nlohmann::json to_json(const ReadabilityReport& r);
ReadabilityReport readability_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AspectSummary& s);

}  // namespace rolelens
