#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "rolelens/corpus_store.hpp"
#include "rolelens/text.hpp"

namespace testing {

namespace fs = std::filesystem;
using namespace rolelens;

fs::path fixtures_dir() { return ROLELENS_FIXTURES; }
fs::path bundle_dir() { return fixtures_dir() / "bundle"; }
fs::path golden_dir() { return ROLELENS_GOLDEN; }
fs::path oracles_dir() { return ROLELENS_ORACLES; }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(text::read_file(p)); }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("rolelens-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void build_fixture_store(const fs::path& out, std::uint64_t seed) {
  auto cfg = load_build_config(bundle_dir() / "config.json");
  cfg.seed = seed;
  build_corpus(cfg, out);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).generic_string()] = text::read_file(e.path());
  return files;
}

std::string random_word(SeededRng& rng, const std::string& alphabet, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(alphabet[rng.below(alphabet.size())]);
  return w;
}

std::vector<std::string> make_vocabulary(SeededRng& rng, const std::string& alphabet, std::size_t n) {
  std::set<std::string> words;
  while (words.size() < n) words.insert(random_word(rng, alphabet));
  return {words.begin(), words.end()};
}

std::string random_text(SeededRng& rng, const std::vector<std::string>& vocab, std::size_t sentences) {
  std::string out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const std::size_t n = 6 + rng.below(6);
    std::string sent;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) sent.push_back(' ');
      sent += vocab[rng.below(vocab.size())];
    }
    sent[0] = static_cast<char>(sent[0] - 'a' + 'A');
    if (!out.empty()) out.push_back(' ');
    out += sent + ".";
  }
  return out;
}

SyntheticCorpus make_synthetic_corpus(const std::vector<std::size_t>& counts, std::size_t outside_pages,
                                      std::uint64_t seed, bool disjoint_vocabularies) {
  static const std::vector<std::string> alphabets{"abcd", "efgh", "ijkl", "mnop", "qrst", "uvwx"};
  if (counts.size() + 1 > alphabets.size()) throw std::invalid_argument("too many aspects");
  SeededRng rng(seed);
  std::vector<std::vector<std::string>> vocab;
  for (std::size_t i = 0; i <= counts.size(); ++i)
    vocab.push_back(make_vocabulary(rng, disjoint_vocabularies ? alphabets[i] : "abcdefghijklmnopqrstuvwxyz", 40));

  SyntheticCorpus c;
  std::size_t role_size = 0;
  for (auto n : counts) role_size = std::max(role_size, n);
  for (std::size_t p = 0; p < role_size; ++p) {
    PersonPage page;
    page.page_id = "r" + std::to_string(p);
    page.occupations = {"Role"};
    for (std::size_t a = 0; a < counts.size(); ++a)
      if (p < counts[a]) page.sections.push_back({"aspect " + std::to_string(a), random_text(rng, vocab[a], 3)});
    c.role_pages.push_back(c.pages.size());
    c.pages.push_back(std::move(page));
  }
  for (std::size_t p = 0; p < outside_pages; ++p) {
    PersonPage page;
    page.page_id = "o" + std::to_string(p);
    page.occupations = {"Other"};
    page.sections.push_back({"other", random_text(rng, vocab.back(), 3)});
    c.pages.push_back(std::move(page));
  }
  c.schema.role = "Role";
  c.schema.persons_in_role = role_size;
  for (std::size_t a = 0; a < counts.size(); ++a) {
    const std::string title = "aspect " + std::to_string(a);
    c.clusters.push_back({title, {title}, {}, {title}});
    c.schema.aspects.push_back({title, counts[a], static_cast<double>(counts[a]) / static_cast<double>(role_size)});
  }
  c.clusters.push_back({"other", {"other"}, {}, {"other"}});
  c.index = ClusterIndex(c.clusters);
  return c;
}

std::set<std::set<std::string>> components_oracle(const std::map<std::string, Vector>& vectors, double threshold) {
  std::vector<std::string> names;
  for (const auto& [k, v] : vectors) names.push_back(k);
  std::vector<bool> seen(names.size(), false);
  std::set<std::set<std::string>> parts;
  for (std::size_t s = 0; s < names.size(); ++s) {
    if (seen[s]) continue;
    std::set<std::string> comp;
    std::deque<std::size_t> queue{s};
    seen[s] = true;
    while (!queue.empty()) {
      const auto i = queue.front();
      queue.pop_front();
      comp.insert(names[i]);
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (seen[j]) continue;
        // Plain cosine written out here rather than borrowed from the library.
        const auto& u = vectors.at(names[i]);
        const auto& v = vectors.at(names[j]);
        double uv = 0, uu = 0, vv = 0;
        for (std::size_t d = 0; d < u.size(); ++d) {
          uv += u[d] * v[d];
          uu += u[d] * u[d];
          vv += v[d] * v[d];
        }
        const double c = (uu == 0 || vv == 0) ? 0.0 : uv / (std::sqrt(uu) * std::sqrt(vv));
        if (c >= threshold) {
          seen[j] = true;
          queue.push_back(j);
        }
      }
    }
    parts.insert(comp);
  }
  return parts;
}

std::set<std::set<std::string>> partition_of(const std::vector<SectionTitleCluster>& clusters) {
  std::set<std::set<std::string>> parts;
  for (const auto& c : clusters) parts.insert(c.members);
  return parts;
}

}  // namespace testing
