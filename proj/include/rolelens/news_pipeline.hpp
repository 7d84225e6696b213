#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rolelens/aspect_classifier.hpp"
#include "rolelens/embedder.hpp"
#include "rolelens/wiki_ingest.hpp"

namespace rolelens {

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;
  auto operator<=>(const Date&) const = default;
};

// Strict YYYY-MM-DD with calendar validation.
std::optional<Date> parse_iso_date(std::string_view s);

struct NewsArticle {
  std::string article_id;
  std::string title;
  std::string text;
  std::string date;  // ISO-8601 as given; validated by filter_article
  std::string newspaper;
  std::string external_url;
  std::string person_id;  // optional: restricts the article to one person
};

// One article per line. Throws ParseError on malformed records or duplicate ids.
std::vector<NewsArticle> parse_articles(std::istream& in);

std::set<std::string> default_name_particles();

// Name tokens minus particles and tokens shorter than two characters. Throws
// std::invalid_argument("unmatchable person") when nothing remains.
std::set<std::string> partial_names(const PersonProfile& profile,
                                    const std::set<std::string>& particles = default_name_particles());

enum class RejectReason { kNone, kOcr, kLifespan, kLength, kMentions, kBadDate };

std::string to_string(RejectReason reason);

struct FilterDecision {
  RejectReason reason = RejectReason::kNone;
  bool keep() const { return reason == RejectReason::kNone; }
};

struct ArticleFilterConfig {
  double min_dictionary_ratio = 0.90;
  std::size_t min_words_exclusive = 100;  // keep only if word count > this
  std::size_t min_mentions = 3;
};

struct ArticleStats {
  std::size_t alphabetic_tokens = 0;
  std::size_t dictionary_hits = 0;
  std::size_t words = 0;
  std::size_t mentions = 0;
};

// Case-sensitive occurrences of `name` delimited by non-word characters.
std::size_t count_name_occurrences(std::string_view text, std::string_view name);
ArticleStats article_stats(const NewsArticle& article, const std::set<std::string>& names,
                           const std::set<std::string>& dictionary);

// Rules in order: dictionary ratio, lifespan (date parse failure → bad date), word count,
// partial-name mentions. The first failing rule is reported.
FilterDecision filter_article(const NewsArticle& article, const PersonProfile& profile,
                              const std::set<std::string>& dictionary, const ArticleFilterConfig& config = {},
                              const std::set<std::string>& particles = default_name_particles());

struct Snippet {
  std::string article_id;
  // 1-based inclusive sentence indices in the article's sentence list.
  std::pair<std::size_t, std::size_t> sentence_span;
  std::size_t anchor = 0;  // 1-based index of the sentence holding the name
  std::string text;
  std::string matched_token;

  std::string id() const;
  std::size_t length() const { return sentence_span.second - sentence_span.first + 1; }
};

// Window (previous, anchor, next) around every sentence mentioning a partial name, clipped at
// the document edges. Windows under `min_chars` are dropped, duplicate texts keep the first.
std::vector<Snippet> extract_snippets(const NewsArticle& article, const std::set<std::string>& names,
                                      std::size_t min_chars = 50,
                                      const SentenceSplitter& splitter = default_splitter());

struct ClassifiedSnippet {
  Snippet snippet;
  CategoryId role;
  ClusterId aspect;
  double probability = 0.0;
};

// One entry per (snippet, role) whose argmax is an aspect. Roles without a model are skipped.
std::vector<ClassifiedSnippet> classify_snippets(const std::vector<Snippet>& snippets,
                                                 const std::set<CategoryId>& roles,
                                                 const std::map<CategoryId, TrainedAspectModel>& models,
                                                 const EmbeddingProvider& provider,
                                                 const SentenceSplitter& splitter = default_splitter());

using AspectKey = std::pair<CategoryId, ClusterId>;

// Orders by probability desc, then (article_id, sentence_span) asc.
bool ranks_before(const ClassifiedSnippet& a, const ClassifiedSnippet& b);

std::map<AspectKey, std::vector<ClassifiedSnippet>> rank_top(const std::vector<ClassifiedSnippet>& classified,
                                                              std::size_t n = 5);

inline constexpr const char* kEllipsis = "…";

// At most max_len scalars (ellipses included) around the first occurrence of the matched
// token, cut at word boundaries. Throws std::invalid_argument if the token is absent.
std::string make_fragment(const Snippet& snippet, std::size_t max_len = 160);

nlohmann::json to_json(const Snippet& s);

}  // namespace rolelens
