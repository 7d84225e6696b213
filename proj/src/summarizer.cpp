#include "rolelens/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rolelens/text.hpp"

namespace rolelens {

using nlohmann::json;

namespace {

bool is_vowel(char32_t c) {
  switch (c) {
    case 'a': case 'e': case 'i': case 'o': case 'u': case 'y':
    case 0xE0: case 0xE1: case 0xE2: case 0xE4:  // à á â ä
    case 0xE8: case 0xE9: case 0xEA: case 0xEB:  // è é ê ë
    case 0xEC: case 0xED: case 0xEE: case 0xEF:  // ì í î ï
    case 0xF2: case 0xF3: case 0xF4: case 0xF6:  // ò ó ô ö
    case 0xF9: case 0xFA: case 0xFB: case 0xFC:  // ù ú û ü
      return true;
    default:
      return false;
  }
}

// Letter runs of a token; "Oranje-Nassau" → {"Oranje", "Nassau"}.
std::vector<std::string> letter_runs(std::string_view token) {
  std::vector<std::string> out;
  std::string cur;
  for (char32_t c : text::decode_utf8(token)) {
    if (text::is_letter(c)) {
      text::append_utf8(cur, c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

struct TextCounts {
  std::size_t words = 0;
  std::size_t sentences = 0;
  std::size_t syllables = 0;
};

TextCounts counts(std::string_view s, Language language) {
  TextCounts c;
  const auto ws = text::words(s);
  if (ws.empty()) throw std::invalid_argument("text has no words");
  c.words = ws.size();
  c.sentences = std::max<std::size_t>(1, split_sentences(s).size());
  for (const auto& w : ws)
    for (const auto& run : letter_runs(w)) c.syllables += static_cast<std::size_t>(count_syllables(run, language));
  return c;
}

}  // namespace

int count_syllables(std::string_view word, Language language) {
  if (!text::is_alphabetic(word)) throw std::invalid_argument("count_syllables needs an alphabetic word");
  const auto cps = text::decode_utf8(text::to_lower(word));
  int groups = 0;
  bool in_group = false;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    bool vowel = is_vowel(cps[i]);
    if (!vowel && language == Language::kDutch && cps[i] == 'j' && i > 0 && cps[i - 1] == 'i') vowel = true;
    if (vowel && !in_group) ++groups;
    in_group = vowel;
  }
  return std::max(groups, 1);
}

double flesch(std::string_view s, Language language) {
  const auto c = counts(s, language);
  const double wps = static_cast<double>(c.words) / static_cast<double>(c.sentences);
  const double spw = static_cast<double>(c.syllables) / static_cast<double>(c.words);
  if (language == Language::kEnglish) return 206.835 - 1.015 * wps - 84.6 * spw;
  return 206.84 - 0.93 * wps - 77.0 * spw;
}

double dale_chall(std::string_view s, const std::set<std::string>& familiar_words) {
  const auto ws = text::words(s);
  if (ws.empty()) throw std::invalid_argument("text has no words");
  const std::size_t sentences = std::max<std::size_t>(1, split_sentences(s).size());
  std::size_t difficult = 0;
  for (const auto& w : ws)
    if (!familiar_words.count(text::to_lower(w))) ++difficult;
  const double pct = 100.0 * static_cast<double>(difficult) / static_cast<double>(ws.size());
  double score = 0.1579 * pct + 0.0496 * static_cast<double>(ws.size()) / static_cast<double>(sentences);
  if (pct > 5.0) score += 3.6365;
  return score;
}

double reading_time(std::string_view s) { return static_cast<double>(text::char_count(s)) * kSecondsPerCharacter; }

ReadabilityReport readability(std::string_view s, const std::set<std::string>& familiar_words) {
  ReadabilityReport r;
  r.sentence_count = split_sentences(s).size();
  r.reading_time_s = reading_time(s);
  if (text::words(s).empty()) return r;
  r.flesch_en = flesch(s, Language::kEnglish);
  r.flesch_nl = flesch(s, Language::kDutch);
  r.dale_chall = dale_chall(s, familiar_words);
  return r;
}

std::string AspectSummary::text() const {
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s.text;
  }
  return out;
}

std::optional<AspectSummary> summarize(const std::string& person_id, const CategoryId& role,
                                       const ClusterId& aspect, const std::vector<ClassifiedSnippet>& snippets,
                                       const EmbeddingProvider& provider,
                                       const std::set<std::string>& familiar_words,
                                       const SummarizerConfig& config, const SentenceSplitter& splitter) {
  if (snippets.size() < config.min_snippets) return std::nullopt;

  std::vector<const ClassifiedSnippet*> ranked;
  for (const auto& s : snippets) ranked.push_back(&s);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const ClassifiedSnippet* a, const ClassifiedSnippet* b) { return ranks_before(*a, *b); });
  if (ranked.size() > config.k) ranked.resize(config.k);

  std::vector<SummarySentence> candidates;
  std::vector<Vector> vecs;
  std::set<std::string> seen;
  for (const auto* s : ranked) {
    for (auto& sentence : splitter.split(s->snippet.text)) {
      if (!seen.insert(sentence).second) continue;
      vecs.push_back(provider.embed_sentence(sentence));
      candidates.push_back({std::move(sentence), s->snippet.id()});
    }
  }

  AspectSummary out{person_id, role, aspect, {}, {}, ranked.size()};
  if (!candidates.empty()) {
    const Vector centroid = mean_vector(vecs);
    std::vector<double> relevance(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) relevance[i] = cosine(vecs[i], centroid);

    std::vector<std::size_t> selected;
    std::vector<double> max_sim(candidates.size(), 0.0);
    std::vector<bool> taken(candidates.size(), false);
    while (selected.size() < std::min(config.max_sentences, candidates.size())) {
      std::size_t best = candidates.size();
      double best_score = 0.0;
      for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (taken[i]) continue;
        const double score = config.lambda * relevance[i] - (1.0 - config.lambda) * max_sim[i];
        if (best == candidates.size() || score > best_score) {
          best = i;
          best_score = score;
        }
      }
      taken[best] = true;
      selected.push_back(best);
      for (std::size_t i = 0; i < candidates.size(); ++i)
        if (!taken[i]) max_sim[i] = std::max(max_sim[i], cosine(vecs[i], vecs[best]));
    }
    std::sort(selected.begin(), selected.end());
    for (std::size_t i : selected) out.sentences.push_back(candidates[i]);
  }
  out.metrics = readability(out.text(), familiar_words);
  return out;
}

std::string readability_table_header() {
  return "k   | #sent         | Flesch EN      | Flesch NL      | reading time   | Dale-Chall";
}

std::string format_readability_row(std::size_t k, const std::vector<ReadabilityReport>& reports) {
  auto stat = [&](auto get) {
    const double n = static_cast<double>(reports.size());
    if (reports.empty()) return std::pair{0.0, 0.0};
    double mean = 0.0;
    for (const auto& r : reports) mean += get(r);
    mean /= n;
    double var = 0.0;
    for (const auto& r : reports) var += (get(r) - mean) * (get(r) - mean);
    return std::pair{mean, reports.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0};
  };
  auto [s_m, s_s] = stat([](const ReadabilityReport& r) { return static_cast<double>(r.sentence_count); });
  auto [e_m, e_s] = stat([](const ReadabilityReport& r) { return r.flesch_en; });
  auto [n_m, n_s] = stat([](const ReadabilityReport& r) { return r.flesch_nl; });
  auto [t_m, t_s] = stat([](const ReadabilityReport& r) { return r.reading_time_s; });
  auto [d_m, d_s] = stat([](const ReadabilityReport& r) { return r.dale_chall; });
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-3zu | %5.1f ± %5.1f | %5.1f ± %6.1f | %5.1f ± %6.1f | %5.1f ± %6.1f | %4.1f ± %4.1f", k,
                s_m, s_s, e_m, e_s, n_m, n_s, t_m, t_s, d_m, d_s);
  return buf;
}

json to_json(const ReadabilityReport& r) {
  return json{{"flesch_en", r.flesch_en},
              {"flesch_nl", r.flesch_nl},
              {"dale_chall", r.dale_chall},
              {"reading_time_s", r.reading_time_s},
              {"sentence_count", r.sentence_count}};
}

ReadabilityReport readability_from_json(const json& j) {
  ReadabilityReport r;
  r.flesch_en = j.at("flesch_en").get<double>();
  r.flesch_nl = j.at("flesch_nl").get<double>();
  r.dale_chall = j.at("dale_chall").get<double>();
  r.reading_time_s = j.at("reading_time_s").get<double>();
  r.sentence_count = j.at("sentence_count").get<std::size_t>();
  return r;
}

json to_json(const AspectSummary& s) {
  json sentences = json::array();
  for (const auto& x : s.sentences) sentences.push_back({{"text", x.text}, {"snippet_id", x.snippet_id}});
  return json{{"person_id", s.person_id}, {"role", s.role},           {"aspect", s.aspect},
              {"sentences", sentences},   {"metrics", to_json(s.metrics)}, {"k_used", s.k_used}};
}

}  // namespace rolelens
