#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "rolelens/aspect_miner.hpp"

using namespace rolelens;

namespace {

ClusterIndex index_of(const std::vector<std::pair<std::string, std::set<std::string>>>& clusters) {
  std::vector<SectionTitleCluster> cl;
  for (const auto& [id, members] : clusters) cl.push_back({id, members, {}, {}});
  return ClusterIndex(cl);
}

}  // namespace

TEST_CASE("suffix stripping") {
  CHECK(strip_role_suffix("Politici naar nationaliteit") == "Politici");
  CHECK(strip_role_suffix("Schrijver naar beroep") == "Schrijver");
  CHECK(strip_role_suffix("Schrijver Naar Beroep") == "Schrijver");
  CHECK(strip_role_suffix("Schrijvernaar beroep") == "Schrijvernaar beroep");
  CHECK(strip_role_suffix("Schrijver") == "Schrijver");
}

TEST_CASE("single page support") {
  PersonPage p{"1", "", "", {{"Jeugd", "x"}}, {}};
  std::vector<PersonPage> pages{p};
  std::vector<std::size_t> role{0};
  auto s = count_supports(pages, role, index_of({{"jeugd", {"jeugd"}}}));
  CHECK(s.at("jeugd") == AspectSupport{1, 1.0});
  CHECK_THROWS_WITH_AS(count_supports(pages, std::vector<std::size_t>{}, index_of({})), "empty role",
                       std::invalid_argument);
}

TEST_CASE("relative support is the fraction of persons") {
  std::vector<PersonPage> pages;
  std::vector<std::size_t> role;
  for (int i = 0; i < 10; ++i) {
    PersonPage p{std::to_string(i), "", "", {{"Werk", "x"}}, {}};
    if (i < 2) p.sections.push_back({"Achtergrond", "y"});
    role.push_back(pages.size());
    pages.push_back(p);
  }
  auto s = count_supports(pages, role, index_of({{"achtergrond", {"achtergrond"}}, {"werk", {"werk"}}}));
  CHECK(s.at("achtergrond").rel == doctest::Approx(0.2));
  CHECK(s.at("werk").rel == 1.0);
}

TEST_CASE("supports match a nested-loop recount") {
  SeededRng rng(3);
  const std::vector<std::string> titles{"jeugd", "jonge jaren", "werk", "oeuvre", "stijl", "prijzen", "trivia"};
  auto idx = index_of({{"jeugd", {"jeugd", "jonge jaren"}}, {"oeuvre", {"werk", "oeuvre"}}, {"stijl", {"stijl"}}});
  std::vector<PersonPage> pages;
  std::vector<std::size_t> role;
  for (int i = 0; i < 80; ++i) {
    PersonPage p{std::to_string(i), "", "", {}, {}};
    const auto n = rng.below(6);
    for (std::size_t k = 0; k < n; ++k) p.sections.push_back({titles[rng.below(titles.size())], "t"});
    if (i % 8 < 5) role.push_back(pages.size());
    pages.push_back(p);
  }
  REQUIRE(role.size() == 50);
  auto got = count_supports(pages, role, idx);

  const std::map<std::string, std::string> cluster_of{
      {"jeugd", "jeugd"}, {"jonge jaren", "jeugd"}, {"werk", "oeuvre"}, {"oeuvre", "oeuvre"}, {"stijl", "stijl"}};
  std::map<std::string, std::size_t> abs, persons;
  for (auto pi : role) {
    std::set<std::string> present;
    for (const auto& s : pages[pi].sections) {
      auto it = cluster_of.find(s.title);
      if (it == cluster_of.end()) continue;
      ++abs[it->second];
      present.insert(it->second);
    }
    for (const auto& c : present) ++persons[c];
  }
  REQUIRE(got.size() == abs.size());
  for (const auto& [c, n] : abs) {
    CHECK(got.at(c).abs == n);
    CHECK(got.at(c).rel == doctest::Approx(static_cast<double>(persons[c]) / 50.0).epsilon(1e-15));
  }
}

TEST_CASE("mining thresholds are inclusive") {
  std::map<ClusterId, AspectSupport> s{{"a", {100, 0.05}}, {"b", {99, 0.9}}, {"c", {500, 0.049}}, {"d", {300, 0.5}}};
  auto schema = mine_aspects("r", s, 1000);
  REQUIRE(schema.aspects.size() == 2);
  CHECK(schema.aspects[0].cluster_id == "d");
  CHECK(schema.aspects[1].cluster_id == "a");
  CHECK(schema.has_aspect("a"));
  CHECK_FALSE(schema.has_aspect("b"));
  CHECK(schema.persons_in_role == 1000);
}

TEST_CASE("role selection") {
  std::istringstream in(R"({"id":"Politici","parents":[],"is_root":true}
{"id":"Politici naar nationaliteit","parents":["Politici"],"is_root":false}
{"id":"Schrijver","parents":[],"is_root":true}
{"id":"Brits schrijver","parents":["Engelstalig schrijver"],"is_root":false}
{"id":"Engelstalig schrijver","parents":["Schrijver"],"is_root":false}
{"id":"Sporter","parents":[],"is_root":true}
)");
  auto tax = load_taxonomy(in);
  CHECK(role_depth(tax, "Politici") == 1);
  CHECK(role_depth(tax, "Brits schrijver") == 3);

  auto schema = [](const std::string& role, std::size_t n) {
    RoleAspectSchema s;
    s.role = role;
    for (std::size_t i = 0; i < n; ++i) s.aspects.push_back({"a" + std::to_string(i), 100, 0.5});
    return s;
  };
  std::map<CategoryId, RoleAspectSchema> schemas{{"Politici", schema("Politici", 3)},
                                                 {"Politici naar nationaliteit", schema("Politici naar nationaliteit", 4)},
                                                 {"Brits schrijver", schema("Brits schrijver", 5)},
                                                 {"Engelstalig schrijver", schema("Engelstalig schrijver", 3)},
                                                 {"Sporter", schema("Sporter", 2)}};
  CHECK(select_roles(tax, schemas) == std::vector<CategoryId>{"Engelstalig schrijver", "Politici"});
}

TEST_CASE("role index merges stripped names") {
  std::istringstream in(R"({"id":"Politici","parents":[],"is_root":true}
{"id":"Politici naar nationaliteit","parents":["Politici"],"is_root":false}
)");
  auto tax = load_taxonomy(in);
  std::vector<PersonPage> pages{{"1", "", "", {}, {"Politici naar nationaliteit"}}, {"2", "", "", {}, {"Politici"}}};
  auto idx = build_role_index(pages, tax);
  CHECK(idx.at("Politici") == std::vector<std::size_t>{0, 1});
  CHECK(idx.count("Politici naar nationaliteit") == 0);
  CHECK(idx.at(kPersonRole).size() == 2);
}
