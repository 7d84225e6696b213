#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rolelens/canonicalizer.hpp"
#include "rolelens/wiki_ingest.hpp"

namespace rolelens {

struct AspectSupport {
  std::size_t abs = 0;  // section texts in the cluster across the role's pages
  double rel = 0.0;     // fraction of the role's persons with at least one such section
  bool operator==(const AspectSupport&) const = default;
};

struct MinedAspect {
  ClusterId cluster_id;
  std::size_t abs_support = 0;
  double rel_support = 0.0;
};

struct RoleAspectSchema {
  CategoryId role;
  std::vector<MinedAspect> aspects;
  std::size_t persons_in_role = 0;

  bool has_aspect(const ClusterId& id) const;
};

struct SupportThresholds {
  std::size_t abs_min = 100;
  double rel_min = 0.05;
};

// Removes a trailing "naar nationaliteit" / "naar beroep" (case-insensitive).
CategoryId strip_role_suffix(const CategoryId& role);

// Smallest taxonomy depth over categories whose stripped name equals `role`.
std::optional<int> role_depth(const OccupationTaxonomy& taxonomy, const CategoryId& role);

// Role → indices of the pages carrying it. Roles are the expanded occupations with suffixes
// stripped, so stripped duplicates share one page list.
using RoleIndex = std::map<CategoryId, std::vector<std::size_t>>;
RoleIndex build_role_index(const std::vector<PersonPage>& pages, const OccupationTaxonomy& taxonomy);

// Throws std::invalid_argument("empty role") when role_pages is empty.
std::map<ClusterId, AspectSupport> count_supports(const std::vector<PersonPage>& pages,
                                                  std::span<const std::size_t> role_pages,
                                                  const ClusterIndex& clusters);
std::map<ClusterId, AspectSupport> count_supports(const std::vector<PersonPage>& pages,
                                                  const ClusterIndex& clusters, const CategoryId& role,
                                                  const RoleIndex& roles);

// Keeps clusters meeting both thresholds (inclusive), sorted by rel desc then cluster_id.
RoleAspectSchema mine_aspects(const CategoryId& role, const std::map<ClusterId, AspectSupport>& supports,
                              std::size_t persons_in_role, const SupportThresholds& thresholds = {});

struct RoleSelection {
  std::size_t min_aspects = 3;
  int max_depth = 2;
};

// Roles with enough aspects within the top category levels; names suffix-stripped and
// deduplicated, sorted.
std::vector<CategoryId> select_roles(const OccupationTaxonomy& taxonomy,
                                     const std::map<CategoryId, RoleAspectSchema>& schemas,
                                     const RoleSelection& selection = {});

}  // namespace rolelens
