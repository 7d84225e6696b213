#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rolelens {

using CategoryId = std::string;

inline constexpr const char* kPersonRole = "person";

// Raised for malformed input records; carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct OccupationTaxonomy {
  std::set<CategoryId> categories;
  std::map<CategoryId, std::set<CategoryId>> parent_edges;
  std::set<CategoryId> roots;
  // Shortest distance from any root, roots at 1. Categories unreachable from a root have no entry.
  std::map<CategoryId, int> depth;
  std::vector<std::string> warnings;

  bool contains(const CategoryId& id) const { return categories.count(id) != 0; }
  std::optional<int> depth_of(const CategoryId& id) const;
  const std::set<CategoryId>& parents_of(const CategoryId& id) const;
  // All transitive parents, excluding id itself.
  std::set<CategoryId> ancestors(const CategoryId& id) const;
  // Case-insensitive lookup of a category name; nullopt when unknown.
  std::optional<CategoryId> resolve(const std::string& name) const;
};

struct Section {
  std::string title;
  std::string text;
  bool operator==(const Section&) const = default;
};

struct PersonPage {
  std::string page_id;
  std::string title;
  std::string summary;
  std::vector<Section> sections;
  std::set<CategoryId> occupations;
  bool operator==(const PersonPage&) const = default;
};

struct PersonProfile {
  std::string person_id;
  std::string full_name;
  std::vector<std::string> synonyms;
  int birth_year = 0;
  int death_year = 0;
  std::set<CategoryId> roles;
  // Optional link to a Wikipedia person page whose occupations seed the roles.
  std::string page_id;
};

struct PageParseReport {
  std::size_t pages_read = 0;
  std::size_t skipped_no_occupation = 0;
  std::size_t skipped_unparsable = 0;
  std::vector<std::string> diagnostics;
};

OccupationTaxonomy load_taxonomy(std::istream& in);

// Accepts the JSONL page format or a MediaWiki XML dump (detected from the first
// non-blank character).
std::vector<PersonPage> parse_pages(std::istream& in, const OccupationTaxonomy& taxonomy,
                                    PageParseReport* report = nullptr);

// Occupation categories linked from infobox values, in the form `[[target|label]]`
// or as plain comma/semicolon separated names.
std::set<CategoryId> resolve_occupations(const std::map<std::string, std::string>& infobox,
                                         const OccupationTaxonomy& taxonomy);

struct FilterThresholds {
  std::size_t min_summary_chars = 150;
  std::size_t min_section_chars = 100;
  std::size_t min_sections = 3;
};

std::set<std::string> default_reference_stoplist();

// Drops stoplisted and short sections, then pages with a short summary or too few sections.
// Character counts are Unicode scalars after whitespace normalization.
std::vector<PersonPage> filter_pages(const std::vector<PersonPage>& pages,
                                     const std::set<std::string>& ref_stoplist,
                                     const FilterThresholds& thresholds = {});

// assigned ∪ ancestors(assigned) ∪ {"person"}. Unknown ids are kept and reported in warnings.
std::set<CategoryId> expand_roles(const std::set<CategoryId>& assigned,
                                  const OccupationTaxonomy& taxonomy,
                                  std::vector<std::string>* warnings = nullptr);

std::vector<PersonProfile> parse_profiles(const std::string& json_text);

namespace detail {
// Exposed for tests of the XML adapter.
struct WikitextPage {
  std::string summary;
  std::vector<Section> sections;
  std::map<std::string, std::string> infobox;
};
WikitextPage parse_wikitext(const std::string& wikitext);
std::string strip_wiki_markup(const std::string& s);
}  // namespace detail

}  // namespace rolelens
