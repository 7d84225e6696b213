#include "rolelens/canonicalizer.hpp"

#include <algorithm>
#include <numeric>

#include "rolelens/text.hpp"

namespace rolelens {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

}  // namespace

std::string normalize_title(std::string_view title) {
  return text::to_lower(text::normalize_whitespace(title));
}

std::vector<SectionTitleCluster> cluster_titles(const std::map<std::string, Vector>& title_vectors,
                                                double threshold,
                                                const std::map<std::string, std::size_t>* frequencies) {
  std::vector<const std::string*> titles;
  std::vector<const Vector*> vecs;
  for (const auto& [t, v] : title_vectors) {
    titles.push_back(&t);
    vecs.push_back(&v);
  }
  const std::size_t n = titles.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cosine(*vecs[i], *vecs[j]) >= threshold) sets.unite(i, j);

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(i);

  auto freq = [&](const std::string& t) -> std::size_t {
    if (!frequencies) return 0;
    auto it = frequencies->find(t);
    return it == frequencies->end() ? 0 : it->second;
  };

  std::vector<SectionTitleCluster> out;
  out.reserve(groups.size());
  for (const auto& [root, idx] : groups) {
    SectionTitleCluster c;
    std::vector<Vector> member_vecs;
    for (std::size_t i : idx) {
      c.members.insert(*titles[i]);
      member_vecs.push_back(*vecs[i]);
    }
    c.cluster_id = *c.members.begin();
    c.centroid = mean_vector(member_vecs);
    c.labels.assign(c.members.begin(), c.members.end());
    std::stable_sort(c.labels.begin(), c.labels.end(),
                     [&](const std::string& a, const std::string& b) { return freq(a) > freq(b); });
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const SectionTitleCluster& a, const SectionTitleCluster& b) { return a.cluster_id < b.cluster_id; });
  return out;
}

std::map<std::string, TitleGroup> collect_title_groups(const std::vector<PersonPage>& pages) {
  std::map<std::string, TitleGroup> groups;
  for (const auto& page : pages) {
    std::set<std::string> seen;
    for (const auto& sec : page.sections) {
      auto key = normalize_title(sec.title);
      if (key.empty()) continue;
      auto& g = groups[key];
      g.texts.push_back(sec.text);
      if (seen.insert(key).second) ++g.article_count;
    }
  }
  return groups;
}

ClusterIndex::ClusterIndex(const std::vector<SectionTitleCluster>& clusters) {
  for (const auto& c : clusters)
    for (const auto& m : c.members) by_title_[normalize_title(m)] = c.cluster_id;
}

std::optional<ClusterId> ClusterIndex::lookup(std::string_view title) const {
  auto it = by_title_.find(normalize_title(title));
  if (it == by_title_.end()) return std::nullopt;
  return it->second;
}

CanonicalSections canonicalize_sections(const std::vector<PersonPage>& pages,
                                        const EmbeddingProvider& provider,
                                        const CanonicalizerConfig& config,
                                        const SentenceSplitter& splitter) {
  const auto groups = collect_title_groups(pages);
  std::map<std::string, Vector> vectors;
  std::map<std::string, std::size_t> freqs;
  for (const auto& [title, group] : groups) {
    if (group.article_count < config.min_title_freq) continue;
    vectors[title] = title_group_vector(group.texts, provider, splitter);
    freqs[title] = group.article_count;
  }
  CanonicalSections out;
  out.clusters = cluster_titles(vectors, config.threshold, &freqs);
  out.index = ClusterIndex(out.clusters);
  return out;
}

}  // namespace rolelens
