#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rolelens/embedder.hpp"
#include "rolelens/wiki_ingest.hpp"

namespace rolelens {

using ClusterId = std::string;

struct SectionTitleCluster {
  ClusterId cluster_id;  // smallest member title
  std::set<std::string> members;
  Vector centroid;                  // mean of member title-group vectors
  std::vector<std::string> labels;  // members by descending frequency, then title
};

// Titles are compared after lowercasing and whitespace normalization.
std::string normalize_title(std::string_view title);

// Union-find over all title pairs with cosine >= threshold. The result is sorted by
// cluster_id. `frequencies` orders each cluster's labels; missing titles count as 0.
std::vector<SectionTitleCluster> cluster_titles(const std::map<std::string, Vector>& title_vectors,
                                                double threshold = 0.95,
                                                const std::map<std::string, std::size_t>* frequencies = nullptr);

struct TitleGroup {
  std::vector<std::string> texts;
  std::size_t article_count = 0;  // pages having at least one section with this title
};

std::map<std::string, TitleGroup> collect_title_groups(const std::vector<PersonPage>& pages);

// Maps normalized section titles to their cluster.
class ClusterIndex {
 public:
  ClusterIndex() = default;
  explicit ClusterIndex(const std::vector<SectionTitleCluster>& clusters);

  std::optional<ClusterId> lookup(std::string_view title) const;
  std::size_t size() const { return by_title_.size(); }

 private:
  std::map<std::string, ClusterId> by_title_;
};

struct CanonicalizerConfig {
  double threshold = 0.95;
  std::size_t min_title_freq = 100;
};

struct CanonicalSections {
  std::vector<SectionTitleCluster> clusters;
  ClusterIndex index;
};

// Groups section texts by title, embeds frequent titles and clusters them.
CanonicalSections canonicalize_sections(const std::vector<PersonPage>& pages,
                                        const EmbeddingProvider& provider,
                                        const CanonicalizerConfig& config = {},
                                        const SentenceSplitter& splitter = default_splitter());

}  // namespace rolelens
