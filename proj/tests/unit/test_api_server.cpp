#include <condition_variable>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "rolelens/api_server.hpp"
#include "rolelens/text.hpp"

using namespace rolelens;

namespace {

const CorpusStore& fixture_store() {
  static testing::TempDir tmp("api");
  static CorpusStore store = [] {
    testing::build_fixture_store(tmp / "store");
    return CorpusStore::load(tmp / "store");
  }();
  return store;
}

}  // namespace

TEST_CASE("router endpoints") {
  ApiRouter api(fixture_store());

  auto persons = api.get("/api/persons");
  CHECK(persons.status == 200);
  REQUIRE(persons.body.size() == 3);
  CHECK(persons.body[0]["person_id"] == "hendrik-vermeulen");
  CHECK(persons.body[0]["lifespan"] == "1880-1950");

  auto person = api.get("/api/persons/johanna-de-wit");
  CHECK(person.status == 200);
  CHECK(person.body["synonyms"] == nlohmann::json::array({"Jo de Wit"}));

  auto role = api.get("/api/persons/johanna-de-wit/roles/Schrijver");
  CHECK(role.status == 200);
  CHECK(role.body["aspects"].size() == 3);

  auto aspect = api.get("/api/persons/hendrik-vermeulen/roles/Politicus/aspects/politieke carrière");
  CHECK(aspect.status == 200);
  CHECK(aspect.body["snippets"].size() == 5);
  CHECK(aspect.body.contains("summary"));
  CHECK(aspect.body["labels"] == nlohmann::json::array({"politieke loopbaan", "politieke carrière"}));

  auto health = api.get("/api/health");
  CHECK(health.body["status"] == "ok");
  CHECK(health.body["manifest_digest"] == fixture_store().manifest_digest());
}

TEST_CASE("not found") {
  ApiRouter api(fixture_store());
  auto check = [&](const std::string& path, const std::string& reason) {
    auto r = api.get(path);
    CHECK(r.status == 404);
    CHECK(r.body["error"] == "not_found");
    CHECK(r.body["reason"] == reason);
  };
  check("/api/persons/nobody", "unknown person");
  check("/api/persons/nobody/roles/Politicus", "unknown person");
  check("/api/persons/hendrik-vermeulen/roles/Schrijver", "unknown role");
  check("/api/persons/hendrik-vermeulen/roles/Politicus/aspects/stijl", "unknown aspect");
  check("/api/nothing", "unknown endpoint");
  check("/api/persons/a/b", "unknown endpoint");
  check("/", "unknown endpoint");
}

TEST_CASE("every served fragment fits the display bound") {
  ApiRouter api(fixture_store());
  std::size_t seen = 0;
  const auto persons = api.get("/api/persons").body;
  for (const auto& p : persons) {
    const auto pid = p["person_id"].get<std::string>();
    const auto roles = api.get("/api/persons/" + pid).body["roles"];
    for (const auto& r : roles) {
      const auto role = r["role"].get<std::string>();
      const auto aspects = api.get("/api/persons/" + pid + "/roles/" + role).body["aspects"];
      for (const auto& a : aspects) {
        auto body = api.get("/api/persons/" + pid + "/roles/" + role + "/aspects/" + a["aspect"].get<std::string>()).body;
        for (const auto& s : body["snippets"]) {
          CHECK(text::char_count(s["fragment"].get<std::string>()) <= 160);
          ++seen;
        }
      }
    }
  }
  CHECK(seen == 40);
}

TEST_CASE("http server") {
  const auto& store = fixture_store();
  std::function<void()> stop;
  int port = 0;
  std::mutex mu;
  std::condition_variable cv;
  std::thread server([&] {
    serve(store, {"127.0.0.1", 0, {}}, [&](std::function<void()> s, int p) {
      std::lock_guard lock(mu);
      stop = std::move(s);
      port = p;
      cv.notify_all();
    });
  });
  {
    std::unique_lock lock(mu);
    REQUIRE(cv.wait_for(lock, std::chrono::seconds(10), [&] { return port != 0; }));
  }

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/api/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(nlohmann::json::parse(health->body)["manifest_digest"] == store.manifest_digest());

  auto encoded = client.Get("/api/persons/hendrik-vermeulen/roles/Politicus/aspects/politieke%20carri%C3%A8re");
  REQUIRE(encoded);
  CHECK(encoded->status == 200);

  auto missing = client.Get("/api/persons/nobody");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(missing->get_header_value("Content-Type").rfind("application/json", 0) == 0);

  stop();
  server.join();
}
