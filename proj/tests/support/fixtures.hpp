#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rolelens/aspect_classifier.hpp"
#include "rolelens/canonicalizer.hpp"
#include "rolelens/wiki_ingest.hpp"

namespace testing {

std::filesystem::path fixtures_dir();
std::filesystem::path bundle_dir();
std::filesystem::path golden_dir();
std::filesystem::path oracles_dir();

nlohmann::json read_json(const std::filesystem::path& p);

class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Builds the fixture bundle into `out` (which must not exist yet).
void build_fixture_store(const std::filesystem::path& out, std::uint64_t seed = 7);

// Every regular file under `dir`, relative path → bytes.
std::map<std::string, std::string> snapshot(const std::filesystem::path& dir);

// Random lowercase "word" drawn from its own alphabet, so vocabularies built from disjoint
// alphabets never share a trigram.
std::string random_word(rolelens::SeededRng& rng, const std::string& alphabet, std::size_t min_len = 4,
                        std::size_t max_len = 9);
std::vector<std::string> make_vocabulary(rolelens::SeededRng& rng, const std::string& alphabet, std::size_t n);
// Sentences of vocabulary words, capitalized and terminated with '.'.
std::string random_text(rolelens::SeededRng& rng, const std::vector<std::string>& vocab, std::size_t sentences);

// A role whose pages carry one section per aspect title, with `counts[i]` pages having aspect i,
// plus `outside_pages` pages outside the role with unrelated sections.
struct SyntheticCorpus {
  std::vector<rolelens::PersonPage> pages;
  std::vector<std::size_t> role_pages;
  std::vector<rolelens::SectionTitleCluster> clusters;
  rolelens::ClusterIndex index;
  rolelens::RoleAspectSchema schema;
};
SyntheticCorpus make_synthetic_corpus(const std::vector<std::size_t>& counts, std::size_t outside_pages,
                                      std::uint64_t seed, bool disjoint_vocabularies);

// Connected components of the graph {(i,j) : cosine >= threshold}, by breadth-first search.
std::set<std::set<std::string>> components_oracle(const std::map<std::string, rolelens::Vector>& vectors,
                                                 double threshold);
std::set<std::set<std::string>> partition_of(const std::vector<rolelens::SectionTitleCluster>& clusters);

}  // namespace testing
