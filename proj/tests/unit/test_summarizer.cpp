#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "rolelens/summarizer.hpp"
#include "rolelens/text.hpp"

using namespace rolelens;

namespace {

ClassifiedSnippet snippet(const std::string& article, double p, const std::string& text) {
  ClassifiedSnippet c;
  c.snippet = {article, {1, 3}, 2, text, "Frank"};
  c.role = "r";
  c.aspect = "a";
  c.probability = p;
  return c;
}

std::vector<ClassifiedSnippet> numbered(std::size_t n) {
  std::vector<ClassifiedSnippet> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = std::to_string(i);
    out.push_back(snippet("a" + std::string(i < 10 ? "0" : "") + id, 0.5 + 0.01 * static_cast<double>(i),
                          "Frank opende brug " + id + ". De stad vierde feest " + id + ". Het regende " + id + "."));
  }
  return out;
}

}  // namespace

TEST_CASE("summaries need five snippets") {
  ReferenceEmbedder e;
  CHECK_FALSE(summarize("p", "r", "a", numbered(4), e, {}).has_value());
  auto s = summarize("p", "r", "a", numbered(5), e, {});
  REQUIRE(s.has_value());
  CHECK(s->k_used == 5);
  CHECK(s->sentences.size() == 12);
}

TEST_CASE("only the twenty most probable snippets are candidates") {
  ReferenceEmbedder e;
  auto in = numbered(25);
  SummarizerConfig cfg;
  cfg.max_sentences = 1000;
  auto s = summarize("p", "r", "a", in, e, {}, cfg);
  REQUIRE(s.has_value());
  CHECK(s->k_used == 20);
  std::set<std::string> used;
  for (const auto& x : s->sentences) used.insert(x.snippet_id.substr(0, 3));
  // The five least probable are a00..a04.
  for (int i = 0; i < 5; ++i) CHECK(used.count("a0" + std::to_string(i)) == 0);
  CHECK(s->sentences.size() == 60);
}

TEST_CASE("summary sentences are verbatim input sentences") {
  ReferenceEmbedder e;
  auto in = numbered(9);
  auto s = summarize("p", "r", "a", in, e, {});
  REQUIRE(s.has_value());
  for (const auto& x : s->sentences) {
    bool found = false;
    for (const auto& c : in) found = found || c.snippet.text.find(x.text) != std::string::npos;
    CHECK(found);
  }
}

TEST_CASE("selection equals a step-by-step greedy oracle") {
  ReferenceEmbedder e;
  std::vector<ClassifiedSnippet> in{
      snippet("a1", 0.91, "Frank werd minister van financiën. Hij hervormde de belastingen. Het parlement stemde in."),
      snippet("a2", 0.85, "De minister sprak in Den Haag. Frank verdedigde de begroting. De oppositie protesteerde."),
      snippet("a3", 0.80, "Frank trad af na een crisis. Het kabinet viel. Nieuwe verkiezingen volgden."),
      snippet("a4", 0.77, "In Utrecht opende Frank een school. De leerlingen zongen. Het was een feestelijke dag."),
      snippet("a5", 0.70, "Frank reisde naar Londen. Hij sprak met de Britse regering. De gesprekken duurden lang."),
      snippet("a6", 0.66, "Het parlement stemde in. Frank bedankte de kamer. De vergadering werd gesloten.")};
  SummarizerConfig cfg;
  cfg.max_sentences = 5;
  auto got = summarize("p", "r", "a", in, e, {}, cfg);
  REQUIRE(got.has_value());

  // Oracle: candidates in probability order, duplicates dropped; greedy MMR with lambda 0.7.
  std::vector<std::string> cand;
  for (const auto& c : in)
    for (const auto& s : split_sentences(c.snippet.text))
      if (std::find(cand.begin(), cand.end(), s) == cand.end()) cand.push_back(s);
  REQUIRE(cand.size() == 17);
  std::vector<Vector> v;
  for (const auto& s : cand) v.push_back(e.embed_sentence(s));
  Vector centroid(e.dimension(), 0.0);
  for (const auto& x : v)
    for (std::size_t d = 0; d < x.size(); ++d) centroid[d] += x[d];
  for (auto& c : centroid) c /= static_cast<double>(v.size());
  std::vector<std::size_t> chosen;
  while (chosen.size() < 5) {
    std::size_t best = cand.size();
    double best_score = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
      double red = 0;
      for (auto j : chosen) red = std::max(red, cosine(v[i], v[j]));
      const double score = 0.7 * cosine(v[i], centroid) - 0.3 * red;
      if (best == cand.size() || score > best_score) best = i, best_score = score;
    }
    chosen.push_back(best);
  }
  std::sort(chosen.begin(), chosen.end());
  REQUIRE(got->sentences.size() == chosen.size());
  for (std::size_t k = 0; k < chosen.size(); ++k) CHECK(got->sentences[k].text == cand[chosen[k]]);
}

TEST_CASE("syllables") {
  CHECK(count_syllables("cat", Language::kEnglish) == 1);
  CHECK(count_syllables("banana", Language::kEnglish) == 3);
  CHECK(count_syllables("huis", Language::kDutch) == 1);
  CHECK(count_syllables("bijzonder", Language::kDutch) == 3);
  CHECK(count_syllables("rhythm", Language::kEnglish) == 1);
  CHECK(count_syllables("x", Language::kEnglish) == 1);
  CHECK_THROWS_AS(count_syllables("", Language::kDutch), std::invalid_argument);
  CHECK_THROWS_AS(count_syllables("co-op", Language::kDutch), std::invalid_argument);
}

TEST_CASE("flesch") {
  CHECK(flesch("The cat sat on the mat.", Language::kEnglish) == doctest::Approx(116.145).epsilon(1e-9));
  const std::string t = "The quick brown fox jumps over the lazy dog. It was a sunny day.";
  CHECK(flesch(t + " " + t, Language::kEnglish) == doctest::Approx(flesch(t, Language::kEnglish)));
  // Hand count: wij(1) lo-pen(2) naar(1) de(1) ri-vier(2) / het(1) meis-je(2) eet(1) een(1) ap-pel(2)
  // = 14 syllables, 10 words, 2 sentences: 206.84 - 0.93 * 5 - 77 * 1.4.
  CHECK(flesch("Wij lopen naar de rivier. Het meisje eet een appel.", Language::kDutch) ==
        doctest::Approx(94.39).epsilon(1e-9));
  CHECK_THROWS(flesch("", Language::kEnglish));
}

TEST_CASE("dale-chall") {
  const std::string ten = "one two three four five six seven eight nine ten.";
  const std::set<std::string> familiar{"one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};
  CHECK(dale_chall(ten, familiar) == doctest::Approx(0.496).epsilon(1e-9));
  CHECK(dale_chall(ten, {}) == doctest::Approx(19.9225).epsilon(1e-9));
  CHECK(dale_chall("One two. Three four.", familiar) == doctest::Approx(0.0496 * 2));
}

TEST_CASE("reading time") {
  CHECK(reading_time(std::string(1000, 'a')) == doctest::Approx(14.69).epsilon(1e-12));
  CHECK(reading_time("") == 0.0);
  const std::string a = "Hij kwam.", b = " Zij ging, één keer.";
  CHECK(reading_time(a + b) == doctest::Approx(reading_time(a) + reading_time(b)));
}

TEST_CASE("readability table formatting") {
  ReadabilityReport r{60, 55, 8.5, 12.0, 10};
  auto row = format_readability_row(20, {r, r});
  CHECK(row.rfind("20", 0) == 0);
  CHECK(row.find("10.0") != std::string::npos);
  CHECK(readability_from_json(to_json(r)).dale_chall == 8.5);
}
