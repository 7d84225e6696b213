#include <sstream>

#include "doctest.h"
#include "rolelens/wiki_ingest.hpp"

using namespace rolelens;

namespace {

OccupationTaxonomy taxonomy_from(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return load_taxonomy(in);
}

const char* kTaxonomy =
    R"({"id":"Politicus","parents":[],"is_root":true}
{"id":"Minister","parents":["Politicus"],"is_root":false}
{"id":"Brits minister","parents":["Minister"],"is_root":false}
{"id":"Schrijver","parents":[],"is_root":true}
{"id":"Dichter","parents":["Schrijver"],"is_root":false}
{"id":"Dichter-politicus","parents":["Dichter","Politicus"],"is_root":false}
)";

std::string repeat(char c, std::size_t n) { return std::string(n, c); }

PersonPage page_with(std::size_t summary_chars, std::vector<Section> sections) {
  PersonPage p;
  p.page_id = "p";
  p.summary = repeat('s', summary_chars);
  p.sections = std::move(sections);
  p.occupations = {"Schrijver"};
  return p;
}

}  // namespace

TEST_CASE("taxonomy depths are breadth-first from the roots") {
  auto t = taxonomy_from(R"({"id":"a","parents":[],"is_root":true}
{"id":"b","parents":["a"],"is_root":false}
{"id":"c","parents":["b"],"is_root":false}
)");
  CHECK(t.depth_of("a") == 1);
  CHECK(t.depth_of("b") == 2);
  CHECK(t.depth_of("c") == 3);
  CHECK(t.depth_of(kPersonRole) == 1);
}

TEST_CASE("empty taxonomy stream holds only person") {
  auto t = taxonomy_from("");
  CHECK(t.categories == std::set<CategoryId>{kPersonRole});
  CHECK(t.roots.count(kPersonRole) == 1);
}

TEST_CASE("cycles terminate with shortest depths") {
  auto t = taxonomy_from(R"({"id":"x","parents":["y"],"is_root":true}
{"id":"y","parents":["x"],"is_root":false}
)");
  CHECK(t.depth_of("x") == 1);
  CHECK(t.depth_of("y") == 2);
  CHECK(t.ancestors("y") == std::set<CategoryId>{"x"});
}

TEST_CASE("categories unreachable from a root have no depth") {
  auto t = taxonomy_from(R"({"id":"orphan","parents":[],"is_root":false})");
  CHECK(t.contains("orphan"));
  CHECK_FALSE(t.depth_of("orphan").has_value());
}

TEST_CASE("malformed taxonomy lines report their line number") {
  try {
    taxonomy_from("{\"id\":\"a\",\"parents\":[],\"is_root\":true}\n{not json\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("dangling parents become warnings") {
  auto t = taxonomy_from(R"({"id":"a","parents":["ghost"],"is_root":true})");
  CHECK(t.parents_of("a").empty());
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("jsonl pages resolve occupations from the infobox") {
  auto tax = taxonomy_from(kTaxonomy);
  std::istringstream in(
      R"({"page_id":"1","title":"A","summary":"s","sections":[],"infobox":{"beroep":"[[Schrijver]]"}}
{"page_id":"2","title":"B","summary":"s","sections":[],"infobox":{"beroep":"[[Categorie:Dichter|dichter]], [[Minister]]"}}
{"page_id":"3","title":"C","summary":"s","sections":[]}
{"page_id":"4","title":"D","summary":"s","sections":[],"infobox":{"beroep":"schrijver; onbekend"}}
this is not json
)");
  PageParseReport report;
  auto pages = parse_pages(in, tax, &report);
  REQUIRE(pages.size() == 3);
  CHECK(pages[0].occupations == std::set<CategoryId>{"Schrijver"});
  CHECK(pages[1].occupations == std::set<CategoryId>{"Dichter", "Minister"});
  CHECK(pages[2].occupations == std::set<CategoryId>{"Schrijver"});
  CHECK(report.pages_read == 5);
  CHECK(report.skipped_no_occupation == 1);
  CHECK(report.skipped_unparsable == 1);
}

TEST_CASE("xml dump adapter") {
  auto tax = taxonomy_from(kTaxonomy);
  std::istringstream in(R"(<mediawiki>
<page>
  <title>Jan Jansen</title>
  <id>42</id>
  <revision><text xml:space="preserve">{{Infobox persoon
| naam = Jan Jansen
| beroep = [[Schrijver|schrijver]]&lt;br&gt;[[Dichter]]
}}
'''Jan Jansen''' was een [[Nederland|Nederlandse]] schrijver &amp; dichter.
== Jeugd ==
Hij werd geboren in [[Utrecht]].
=== School ===
Hij ging naar school.
== Werk ==
Zijn ''eerste'' roman verscheen in 1920.
</text></revision>
</page>
<page><title>Zonder box</title><id>43</id><revision><text>Geen infobox.</text></revision></page>
</mediawiki>)");
  PageParseReport report;
  auto pages = parse_pages(in, tax, &report);
  REQUIRE(pages.size() == 1);
  const auto& p = pages[0];
  CHECK(p.page_id == "42");
  CHECK(p.title == "Jan Jansen");
  CHECK(p.occupations == std::set<CategoryId>{"Schrijver", "Dichter"});
  CHECK(p.summary == "Jan Jansen was een Nederlandse schrijver & dichter.");
  REQUIRE(p.sections.size() == 2);
  CHECK(p.sections[0].title == "Jeugd");
  CHECK(p.sections[0].text == "Hij werd geboren in Utrecht. Hij ging naar school.");
  CHECK(p.sections[1].text == "Zijn eerste roman verscheen in 1920.");
  CHECK(report.skipped_no_occupation == 1);
}

TEST_CASE("person is never an occupation") {
  auto tax = taxonomy_from(kTaxonomy);
  CHECK(resolve_occupations({{"beroep", "person"}}, tax).empty());
}

TEST_CASE("page filter thresholds") {
  const auto stop = default_reference_stoplist();
  const Section long_a{"A", repeat('a', 100)};
  const Section long_b{"B", repeat('b', 100)};
  const Section long_c{"C", repeat('c', 100)};
  const Section short_d{"D", repeat('d', 99)};
  const Section short_e{"E", repeat('e', 99)};

  SUBCASE("summary of 149 characters is dropped, 150 kept") {
    CHECK(filter_pages({page_with(149, {long_a, long_b, long_c})}, stop).empty());
    CHECK(filter_pages({page_with(150, {long_a, long_b, long_c})}, stop).size() == 1);
  }
  SUBCASE("short sections are removed before counting") {
    CHECK(filter_pages({page_with(200, {long_a, long_b, short_d, short_e})}, stop).empty());
    auto kept = filter_pages({page_with(200, {long_a, long_b, long_c, short_d})}, stop);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].sections.size() == 3);
  }
  SUBCASE("stoplisted sections are removed") {
    const Section lit{"Literatuur", repeat('l', 300)};
    CHECK(filter_pages({page_with(200, {long_a, long_b, lit})}, stop).empty());
    const Section refs{"  Externe   Links ", repeat('r', 300)};
    CHECK(filter_pages({page_with(200, {long_a, long_b, refs})}, stop).empty());
  }
  SUBCASE("whitespace does not count towards length") {
    const Section padded{"P", repeat('p', 50) + "\n\n\n     " + repeat('p', 48)};
    CHECK(filter_pages({page_with(200, {long_a, long_b, padded})}, stop).empty());
  }
  SUBCASE("filtering is idempotent") {
    std::vector<PersonPage> pages{page_with(200, {long_a, long_b, long_c, short_d}),
                                  page_with(120, {long_a, long_b, long_c}),
                                  page_with(300, {long_a, long_b, long_c, {"Bronnen", repeat('x', 200)}})};
    auto once = filter_pages(pages, stop);
    CHECK(filter_pages(once, stop) == once);
    CHECK(once.size() == 2);
  }
}

TEST_CASE("role expansion") {
  auto tax = taxonomy_from(kTaxonomy);
  CHECK(expand_roles({"Brits minister"}, tax) ==
        std::set<CategoryId>{"Brits minister", "Minister", "Politicus", kPersonRole});
  CHECK(expand_roles({}, tax) == std::set<CategoryId>{kPersonRole});
  CHECK(expand_roles({"Dichter-politicus"}, tax) ==
        std::set<CategoryId>{"Dichter-politicus", "Dichter", "Schrijver", "Politicus", kPersonRole});

  std::vector<std::string> warnings;
  auto r = expand_roles({"Onbekend"}, tax, &warnings);
  CHECK(r == std::set<CategoryId>{"Onbekend", kPersonRole});
  CHECK(warnings.size() == 1);

  // Expansion is a closure: applying it twice changes nothing.
  for (const auto& c : tax.categories) {
    auto once = expand_roles({c}, tax);
    CHECK(expand_roles(once, tax) == once);
    CHECK(once.count(c) == 1);
  }
}

TEST_CASE("profiles") {
  auto ps = parse_profiles(R"([{"person_id":"a","full_name":"Anne Frank","synonyms":["Annelies"],
     "birth_year":1929,"death_year":1945,"roles":["Schrijver"]}])");
  REQUIRE(ps.size() == 1);
  CHECK(ps[0].synonyms == std::vector<std::string>{"Annelies"});
  CHECK_THROWS(parse_profiles(R"([{"person_id":"a","full_name":"X","birth_year":1950,"death_year":1940}])"));
  CHECK_THROWS(parse_profiles(R"([{"person_id":"a","full_name":"X","birth_year":1900,"death_year":1940},
                                  {"person_id":"a","full_name":"Y","birth_year":1900,"death_year":1940}])"));
}
