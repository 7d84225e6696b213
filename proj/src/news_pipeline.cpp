#include "rolelens/news_pipeline.hpp"

#include <algorithm>
#include <stdexcept>

#include "rolelens/text.hpp"

namespace rolelens {

using nlohmann::json;

std::optional<Date> parse_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto num = [&](std::size_t b, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = b; i < b + len; ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      v = v * 10 + (s[i] - '0');
    }
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d || *m < 1 || *m > 12 || *d < 1) return std::nullopt;
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int dim = kDays[*m - 1];
  const bool leap = (*y % 4 == 0 && *y % 100 != 0) || *y % 400 == 0;
  if (*m == 2 && leap) dim = 29;
  if (*d > dim) return std::nullopt;
  return Date{*y, *m, *d};
}

std::vector<NewsArticle> parse_articles(std::istream& in) {
  std::vector<NewsArticle> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      auto rec = json::parse(line);
      NewsArticle a;
      a.article_id = rec.at("article_id").get<std::string>();
      a.title = rec.value("title", "");
      a.text = rec.at("text").get<std::string>();
      a.date = rec.at("date").get<std::string>();
      a.newspaper = rec.value("newspaper", "");
      a.external_url = rec.value("external_url", "");
      a.person_id = rec.value("person_id", "");
      if (a.article_id.empty()) throw std::runtime_error("empty article_id");
      if (!ids.insert(a.article_id).second) throw std::runtime_error("duplicate article_id " + a.article_id);
      out.push_back(std::move(a));
    } catch (const std::exception& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return out;
}

std::set<std::string> default_name_particles() {
  return {"van", "de", "der", "den", "te", "ten", "ter", "het", "'t", "in", "op", "von", "zu",
          "du", "da", "di", "del", "la", "le", "of", "i", "ii", "iii", "iv", "v"};
}

std::set<std::string> partial_names(const PersonProfile& profile, const std::set<std::string>& particles) {
  if (text::trim(profile.full_name).empty()) throw std::invalid_argument("unmatchable person");
  std::set<std::string> stop;
  for (const auto& p : particles) stop.insert(text::to_lower(p));
  std::set<std::string> out;
  auto add = [&](const std::string& phrase) {
    for (const auto& tok : text::split_whitespace(phrase)) {
      auto t = text::strip_punctuation(tok);
      if (text::char_count(t) < 2 || stop.count(text::to_lower(t))) continue;
      out.insert(t);
    }
  };
  add(profile.full_name);
  for (const auto& s : profile.synonyms) add(s);
  if (out.empty()) throw std::invalid_argument("unmatchable person");
  return out;
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::kNone: return "keep";
    case RejectReason::kOcr: return "ocr";
    case RejectReason::kLifespan: return "lifespan";
    case RejectReason::kLength: return "length";
    case RejectReason::kMentions: return "mentions";
    case RejectReason::kBadDate: return "bad date";
  }
  return "unknown";
}

namespace {

// Scalar offsets of word-bounded occurrences of `needle` in `hay`.
std::vector<std::size_t> find_bounded(const std::u32string& hay, const std::u32string& needle) {
  std::vector<std::size_t> out;
  if (needle.empty() || needle.size() > hay.size()) return out;
  for (std::size_t pos = hay.find(needle); pos != std::u32string::npos; pos = hay.find(needle, pos + 1)) {
    const bool left = pos == 0 || !text::is_word_char(hay[pos - 1]);
    const std::size_t end = pos + needle.size();
    const bool right = end == hay.size() || !text::is_word_char(hay[end]);
    if (left && right) out.push_back(pos);
  }
  return out;
}

}  // namespace

std::size_t count_name_occurrences(std::string_view text_in, std::string_view name) {
  return find_bounded(text::decode_utf8(text_in), text::decode_utf8(name)).size();
}

ArticleStats article_stats(const NewsArticle& article, const std::set<std::string>& names,
                           const std::set<std::string>& dictionary) {
  ArticleStats st;
  for (const auto& tok : text::split_whitespace(article.text)) {
    auto w = text::strip_punctuation(tok);
    if (w.empty()) continue;
    ++st.words;
    if (!text::is_alphabetic(w)) continue;
    ++st.alphabetic_tokens;
    if (dictionary.count(text::to_lower(w))) ++st.dictionary_hits;
  }
  const auto hay = text::decode_utf8(article.text);
  for (const auto& n : names) st.mentions += find_bounded(hay, text::decode_utf8(n)).size();
  return st;
}

FilterDecision filter_article(const NewsArticle& article, const PersonProfile& profile,
                              const std::set<std::string>& dictionary, const ArticleFilterConfig& config,
                              const std::set<std::string>& particles) {
  const auto st = article_stats(article, partial_names(profile, particles), dictionary);
  // hits/total >= min without division; the epsilon keeps exact boundaries (9/10 at 0.90) inclusive
  const double hits = static_cast<double>(st.dictionary_hits);
  const double total = static_cast<double>(st.alphabetic_tokens);
  if (st.alphabetic_tokens == 0 || hits + 1e-9 < config.min_dictionary_ratio * total)
    return {RejectReason::kOcr};
  auto date = parse_iso_date(article.date);
  if (!date) return {RejectReason::kBadDate};
  if (date->year < profile.birth_year || date->year > profile.death_year) return {RejectReason::kLifespan};
  if (st.words <= config.min_words_exclusive) return {RejectReason::kLength};
  if (st.mentions < config.min_mentions) return {RejectReason::kMentions};
  return {};
}

std::string Snippet::id() const {
  return article_id + "#" + std::to_string(sentence_span.first) + "-" + std::to_string(sentence_span.second);
}

std::vector<Snippet> extract_snippets(const NewsArticle& article, const std::set<std::string>& names,
                                      std::size_t min_chars, const SentenceSplitter& splitter) {
  const auto sentences = splitter.split(article.text);
  std::vector<std::u32string> needles;
  for (const auto& n : names) needles.push_back(text::decode_utf8(n));

  std::vector<Snippet> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto hay = text::decode_utf8(sentences[i]);
    std::optional<std::size_t> best_pos;
    std::string token;
    for (std::size_t k = 0; k < needles.size(); ++k) {
      auto hits = find_bounded(hay, needles[k]);
      if (hits.empty()) continue;
      if (!best_pos || hits.front() < *best_pos ||
          (hits.front() == *best_pos && needles[k].size() > text::decode_utf8(token).size())) {
        best_pos = hits.front();
        token = text::encode_utf8(needles[k]);
      }
    }
    if (!best_pos) continue;
    const std::size_t b = i == 0 ? 0 : i - 1;
    const std::size_t e = std::min(sentences.size() - 1, i + 1);
    std::string joined;
    for (std::size_t k = b; k <= e; ++k) {
      if (!joined.empty()) joined.push_back(' ');
      joined += sentences[k];
    }
    if (text::char_count(joined) < min_chars) continue;
    if (!seen.insert(joined).second) continue;
    out.push_back({article.article_id, {b + 1, e + 1}, i + 1, std::move(joined), token});
  }
  return out;
}

std::vector<ClassifiedSnippet> classify_snippets(const std::vector<Snippet>& snippets,
                                                 const std::set<CategoryId>& roles,
                                                 const std::map<CategoryId, TrainedAspectModel>& models,
                                                 const EmbeddingProvider& provider,
                                                 const SentenceSplitter& splitter) {
  std::vector<const TrainedAspectModel*> active;
  for (const auto& r : roles) {
    auto it = models.find(r);
    if (it != models.end()) active.push_back(&it->second);
  }
  std::vector<ClassifiedSnippet> out;
  if (active.empty()) return out;
  for (const auto& s : snippets) {
    const auto v = embed_section(s.text, provider, splitter);
    for (const auto* m : active) {
      auto c = classify_vector(*m, v);
      if (c.label_index == m->negative_index()) continue;
      out.push_back({s, m->role, c.label, c.probability()});
    }
  }
  return out;
}

bool ranks_before(const ClassifiedSnippet& a, const ClassifiedSnippet& b) {
  if (a.probability != b.probability) return a.probability > b.probability;
  if (a.snippet.article_id != b.snippet.article_id) return a.snippet.article_id < b.snippet.article_id;
  return a.snippet.sentence_span < b.snippet.sentence_span;
}

std::map<AspectKey, std::vector<ClassifiedSnippet>> rank_top(const std::vector<ClassifiedSnippet>& classified,
                                                              std::size_t n) {
  std::map<AspectKey, std::vector<ClassifiedSnippet>> out;
  for (const auto& c : classified) out[{c.role, c.aspect}].push_back(c);
  for (auto& [key, list] : out) {
    std::stable_sort(list.begin(), list.end(), ranks_before);
    if (list.size() > n) list.resize(n);
  }
  return out;
}

std::string make_fragment(const Snippet& snippet, std::size_t max_len) {
  const auto cps = text::decode_utf8(snippet.text);
  const auto token = text::decode_utf8(snippet.matched_token);
  if (token.empty()) throw std::invalid_argument("empty matched token");
  auto bounded = find_bounded(cps, token);
  std::size_t p = bounded.empty() ? cps.find(token) : bounded.front();
  if (p == std::u32string::npos) throw std::invalid_argument("matched token not in snippet text");
  const std::size_t n = cps.size();
  if (n <= max_len) return snippet.text;
  if (max_len < 3 || token.size() > max_len - 2) throw std::invalid_argument("fragment too short for token");

  const std::size_t tl = token.size();
  const std::size_t avail = max_len - 2;
  const std::size_t center = p + tl / 2;
  std::size_t start = center > avail / 2 ? center - avail / 2 : 0;
  start = std::min(start, n - avail);
  if (start > p) start = p;
  if (start + avail < p + tl) start = p + tl - avail;
  std::size_t end = start + avail;

  if (start > 0 && !text::is_space(cps[start - 1]))
    while (start < p && !text::is_space(cps[start - 1])) ++start;
  if (end < n && !text::is_space(cps[end]))
    while (end > p + tl && !text::is_space(cps[end])) --end;
  while (start < p && text::is_space(cps[start])) ++start;
  while (end > p + tl && text::is_space(cps[end - 1])) --end;

  std::string out;
  if (start > 0) out += kEllipsis;
  out += text::encode_utf8(std::u32string_view(cps).substr(start, end - start));
  if (end < n) out += kEllipsis;
  return out;
}

json to_json(const Snippet& s) {
  return json{{"snippet_id", s.id()},
              {"article_id", s.article_id},
              {"sentence_span", {s.sentence_span.first, s.sentence_span.second}},
              {"anchor", s.anchor},
              {"text", s.text},
              {"matched_token", s.matched_token}};
}

}  // namespace rolelens
