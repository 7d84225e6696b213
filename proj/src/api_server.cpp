#include "rolelens/api_server.hpp"

#include <thread>

#include "httplib.h"

namespace rolelens {

using nlohmann::json;

namespace {

ApiResponse not_found(const std::string& reason) {
  return {404, json{{"error", "not_found"}, {"reason", reason}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

const json* find_role(const json& doc, const std::string& role) {
  for (const auto& r : doc.at("roles"))
    if (r.at("role").get<std::string>() == role) return &r;
  return nullptr;
}

const json* find_aspect(const json& role, const std::string& aspect) {
  for (const auto& a : role.at("aspects"))
    if (a.at("aspect").get<std::string>() == aspect) return &a;
  return nullptr;
}

std::size_t snippet_total(const json& role) {
  std::size_t n = 0;
  for (const auto& a : role.at("aspects")) n += a.at("snippets").size();
  return n;
}

}  // namespace

ApiResponse ApiRouter::get(const std::string& path) const {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return not_found("unknown endpoint");
  if (parts.size() == 2 && parts[1] == "health") return health();
  if (parts[1] != "persons") return not_found("unknown endpoint");
  switch (parts.size()) {
    case 2: return persons();
    case 3: return person(parts[2]);
    case 5:
      if (parts[3] == "roles") return role(parts[2], parts[4]);
      break;
    case 7:
      if (parts[3] == "roles" && parts[5] == "aspects") return aspect(parts[2], parts[4], parts[6]);
      break;
    default:
      break;
  }
  return not_found("unknown endpoint");
}

ApiResponse ApiRouter::persons() const {
  json out = json::array();
  for (const auto& [id, doc] : store_.persons()) {
    out.push_back({{"person_id", id},
                   {"full_name", doc.at("full_name")},
                   {"lifespan", doc.at("lifespan")},
                   {"role_count", doc.at("roles").size()}});
  }
  return {200, out};
}

ApiResponse ApiRouter::person(const std::string& id) const {
  const json* doc = store_.person(id);
  if (!doc) return not_found("unknown person");
  json roles = json::array();
  for (const auto& r : doc->at("roles")) {
    roles.push_back({{"role", r.at("role")},
                     {"trained", r.at("trained")},
                     {"aspect_count", r.at("aspects").size()},
                     {"snippet_count", snippet_total(r)}});
  }
  return {200, json{{"person_id", id},
                    {"full_name", doc->at("full_name")},
                    {"synonyms", doc->at("synonyms")},
                    {"birth_year", doc->at("birth_year")},
                    {"death_year", doc->at("death_year")},
                    {"lifespan", doc->at("lifespan")},
                    {"roles", roles}}};
}

ApiResponse ApiRouter::role(const std::string& id, const std::string& role_id) const {
  const json* doc = store_.person(id);
  if (!doc) return not_found("unknown person");
  const json* r = find_role(*doc, role_id);
  if (!r) return not_found("unknown role");
  json aspects = json::array();
  for (const auto& a : r->at("aspects")) {
    const auto& labels = a.at("labels");
    aspects.push_back({{"aspect", a.at("aspect")},
                       {"label", labels.empty() ? a.at("aspect") : labels.front()},
                       {"labels", labels},
                       {"snippet_count", a.at("snippets").size()},
                       {"classified_count", a.at("classified_count")},
                       {"has_summary", !a.at("summary").is_null()}});
  }
  return {200, json{{"person_id", id}, {"role", role_id}, {"trained", r->at("trained")}, {"aspects", aspects}}};
}

ApiResponse ApiRouter::aspect(const std::string& id, const std::string& role_id, const std::string& aspect_id) const {
  const json* doc = store_.person(id);
  if (!doc) return not_found("unknown person");
  const json* r = find_role(*doc, role_id);
  if (!r) return not_found("unknown role");
  const json* a = find_aspect(*r, aspect_id);
  if (!a) return not_found("unknown aspect");

  json snippets = json::array();
  for (const auto& s : a->at("snippets")) {
    snippets.push_back({{"fragment", s.at("fragment")},
                        {"probability", s.at("probability")},
                        {"article_id", s.at("article_id")},
                        {"date", s.at("date")},
                        {"newspaper", s.at("newspaper")},
                        {"external_url", s.at("external_url")}});
  }
  json out = {{"person_id", id},
              {"role", role_id},
              {"aspect", aspect_id},
              {"labels", a->at("labels")},
              {"classified_count", a->at("classified_count")},
              {"snippets", snippets}};
  const auto& summary = a->at("summary");
  if (!summary.is_null()) {
    std::string text;
    for (const auto& s : summary.at("sentences")) {
      if (!text.empty()) text.push_back(' ');
      text += s.at("text").get<std::string>();
    }
    out["summary"] = {{"text", text}, {"sentences", summary.at("sentences")}, {"k_used", summary.at("k_used")}};
    out["metrics"] = summary.at("metrics");
  }
  return {200, out};
}

ApiResponse ApiRouter::health() const {
  return {200, json{{"status", "ok"}, {"manifest_digest", store_.manifest_digest()}}};
}

int serve(const CorpusStore& store, const ServeOptions& options,
          const std::function<void(std::function<void()>, int)>& on_ready) {
  httplib::Server svr;
  ApiRouter router(store);

  svr.Get("/api/.*", [&router](const httplib::Request& req, httplib::Response& res) {
    auto r = router.get(req.path);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  });
  if (!options.static_dir.empty() && !svr.set_mount_point("/", options.static_dir.string()))
    throw std::runtime_error("static directory " + options.static_dir.string() + " is not servable");

  int port = options.port;
  if (port == 0) {
    port = svr.bind_to_any_port(options.host);
    if (port < 0) throw std::runtime_error("cannot bind " + options.host);
  } else if (!svr.bind_to_port(options.host, port)) {
    throw std::runtime_error("cannot bind " + options.host + ":" + std::to_string(port));
  }
  std::thread notifier;
  if (on_ready) {
    notifier = std::thread([&svr, &on_ready, port] {
      svr.wait_until_ready();
      on_ready([&svr] { svr.stop(); }, port);
    });
  }
  const bool ok = svr.listen_after_bind();
  if (notifier.joinable()) notifier.join();
  return ok ? 0 : 1;
}

}  // namespace rolelens
