#include "rolelens/aspect_miner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "rolelens/text.hpp"

namespace rolelens {

bool RoleAspectSchema::has_aspect(const ClusterId& id) const {
  return std::any_of(aspects.begin(), aspects.end(),
                     [&](const MinedAspect& a) { return a.cluster_id == id; });
}

CategoryId strip_role_suffix(const CategoryId& role) {
  static const std::string kSuffixes[] = {"naar nationaliteit", "naar beroep"};
  auto cps = text::decode_utf8(text::normalize_whitespace(role));
  auto lowered = text::decode_utf8(text::to_lower(text::encode_utf8(cps)));
  for (const auto& suffix : kSuffixes) {
    const auto s = text::decode_utf8(suffix);
    if (lowered.size() <= s.size()) continue;
    if (lowered.compare(lowered.size() - s.size(), s.size(), s) != 0) continue;
    if (!text::is_space(lowered[lowered.size() - s.size() - 1])) continue;
    return text::trim(text::encode_utf8(std::u32string_view(cps).substr(0, cps.size() - s.size())));
  }
  return text::encode_utf8(cps);
}

std::optional<int> role_depth(const OccupationTaxonomy& taxonomy, const CategoryId& role) {
  std::optional<int> best;
  if (auto d = taxonomy.depth_of(role)) best = d;
  for (const auto& [cat, d] : taxonomy.depth) {
    if (cat == role || strip_role_suffix(cat) != role) continue;
    if (!best || d < *best) best = d;
  }
  return best;
}

RoleIndex build_role_index(const std::vector<PersonPage>& pages, const OccupationTaxonomy& taxonomy) {
  RoleIndex index;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    std::set<CategoryId> roles;
    for (const auto& r : expand_roles(pages[i].occupations, taxonomy)) roles.insert(strip_role_suffix(r));
    for (const auto& r : roles) index[r].push_back(i);
  }
  return index;
}

std::map<ClusterId, AspectSupport> count_supports(const std::vector<PersonPage>& pages,
                                                  std::span<const std::size_t> role_pages,
                                                  const ClusterIndex& clusters) {
  if (role_pages.empty()) throw std::invalid_argument("empty role");
  std::map<ClusterId, std::size_t> abs;
  std::map<ClusterId, std::size_t> persons;
  for (std::size_t idx : role_pages) {
    std::set<ClusterId> present;
    for (const auto& sec : pages.at(idx).sections) {
      auto c = clusters.lookup(sec.title);
      if (!c) continue;
      ++abs[*c];
      present.insert(*c);
    }
    for (const auto& c : present) ++persons[c];
  }
  std::map<ClusterId, AspectSupport> out;
  const double n = static_cast<double>(role_pages.size());
  for (const auto& [c, a] : abs) out[c] = {a, static_cast<double>(persons[c]) / n};
  return out;
}

std::map<ClusterId, AspectSupport> count_supports(const std::vector<PersonPage>& pages,
                                                  const ClusterIndex& clusters, const CategoryId& role,
                                                  const RoleIndex& roles) {
  auto it = roles.find(role);
  if (it == roles.end()) throw std::invalid_argument("empty role");
  return count_supports(pages, it->second, clusters);
}

RoleAspectSchema mine_aspects(const CategoryId& role, const std::map<ClusterId, AspectSupport>& supports,
                              std::size_t persons_in_role, const SupportThresholds& thresholds) {
  RoleAspectSchema schema{role, {}, persons_in_role};
  for (const auto& [c, s] : supports) {
    if (s.abs >= thresholds.abs_min && s.rel >= thresholds.rel_min)
      schema.aspects.push_back({c, s.abs, s.rel});
  }
  std::sort(schema.aspects.begin(), schema.aspects.end(), [](const MinedAspect& a, const MinedAspect& b) {
    if (a.rel_support != b.rel_support) return a.rel_support > b.rel_support;
    return a.cluster_id < b.cluster_id;
  });
  return schema;
}

std::vector<CategoryId> select_roles(const OccupationTaxonomy& taxonomy,
                                     const std::map<CategoryId, RoleAspectSchema>& schemas,
                                     const RoleSelection& selection) {
  std::set<CategoryId> out;
  for (const auto& [role, schema] : schemas) {
    if (schema.aspects.size() < selection.min_aspects) continue;
    const auto stripped = strip_role_suffix(role);
    auto depth = role_depth(taxonomy, stripped);
    if (!depth || *depth > selection.max_depth) continue;
    out.insert(stripped);
  }
  return {out.begin(), out.end()};
}

}  // namespace rolelens
