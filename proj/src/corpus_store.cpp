#include "rolelens/corpus_store.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "rolelens/aspect_miner.hpp"
#include "rolelens/canonicalizer.hpp"
#include "rolelens/news_pipeline.hpp"
#include "rolelens/summarizer.hpp"
#include "rolelens/text.hpp"
#include "rolelens/wiki_ingest.hpp"

namespace rolelens {

namespace fs = std::filesystem;
using nlohmann::json;

std::filesystem::path BuildConfig::resolve(const std::string& p) const {
  fs::path path(p);
  return path.is_absolute() ? path : base_dir / path;
}

json BuildConfig::to_json() const {
  return json{{"inputs",
               {{"pages", pages},
                {"taxonomy", taxonomy},
                {"profiles", profiles},
                {"articles", articles},
                {"dictionary", dictionary},
                {"stoplist", stoplist},
                {"abbreviations", abbreviations},
                {"particles", particles},
                {"familiar_words", familiar_words},
                {"embeddings", embeddings}}},
              {"sim_threshold", sim_threshold},
              {"min_title_freq", min_title_freq},
              {"abs_support", abs_support},
              {"rel_support", rel_support},
              {"k", k},
              {"top_n", top_n},
              {"max_fragment", max_fragment},
              {"max_sentences", max_sentences},
              {"mmr_lambda", mmr_lambda},
              {"min_summary_snippets", min_summary_snippets},
              {"embedding_dim", embedding_dim},
              {"tau_grid", tau_grid},
              {"seed", seed}};
}

BuildConfig build_config_from_json(const json& j, const fs::path& base_dir) {
  BuildConfig c;
  c.base_dir = base_dir;
  const json& in = j.contains("inputs") ? j.at("inputs") : j;
  auto path_field = [&](const char* key, bool required) {
    if (!in.contains(key) || in.at(key).is_null()) {
      if (required) throw std::runtime_error(std::string("config is missing input path \"") + key + "\"");
      return std::string();
    }
    return in.at(key).get<std::string>();
  };
  c.pages = path_field("pages", true);
  c.taxonomy = path_field("taxonomy", true);
  c.profiles = path_field("profiles", true);
  c.articles = path_field("articles", true);
  c.dictionary = path_field("dictionary", true);
  c.stoplist = path_field("stoplist", false);
  c.abbreviations = path_field("abbreviations", false);
  c.particles = path_field("particles", false);
  c.familiar_words = path_field("familiar_words", false);
  c.embeddings = path_field("embeddings", false);

  c.sim_threshold = j.value("sim_threshold", c.sim_threshold);
  c.min_title_freq = j.value("min_title_freq", c.min_title_freq);
  c.abs_support = j.value("abs_support", c.abs_support);
  c.rel_support = j.value("rel_support", c.rel_support);
  c.k = j.value("k", c.k);
  c.top_n = j.value("top_n", c.top_n);
  c.max_fragment = j.value("max_fragment", c.max_fragment);
  c.max_sentences = j.value("max_sentences", c.max_sentences);
  c.mmr_lambda = j.value("mmr_lambda", c.mmr_lambda);
  c.min_summary_snippets = j.value("min_summary_snippets", c.min_summary_snippets);
  c.embedding_dim = j.value("embedding_dim", c.embedding_dim);
  c.tau_grid = j.value("tau_grid", c.tau_grid);
  c.seed = j.value("seed", c.seed);

  if (c.sim_threshold < 0.0 || c.sim_threshold > 1.0) throw std::runtime_error("sim_threshold must be in [0,1]");
  if (c.rel_support < 0.0 || c.rel_support > 1.0) throw std::runtime_error("rel_support must be in [0,1]");
  if (c.max_fragment < 3) throw std::runtime_error("max_fragment too small");
  if (c.tau_grid.empty()) throw std::runtime_error("tau_grid must not be empty");
  return c;
}

BuildConfig load_build_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + path.string() + ": " + e.what());
  }
  return build_config_from_json(j, path.parent_path());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[md[i] >> 4]);
    out.push_back(kHex[md[i] & 0xF]);
  }
  return out;
}

std::string store_file_name(std::string_view id) {
  static const char* kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  if (out.empty() || out == "." || out == "..") out = "%" + out;
  return out;
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const BuildError&) {
    throw;
  } catch (const std::exception& e) {
    throw BuildError(name, e.what());
  }
}

std::ifstream open_input(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  return in;
}

class StoreWriter {
 public:
  explicit StoreWriter(fs::path root) : root_(std::move(root)) {}

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + p.string());
    if (rel != "manifest.json") digests_[rel] = sha256_hex(content);
  }

  void write_json(const std::string& rel, const json& j) { write(rel, j.dump(2) + "\n"); }

  const std::map<std::string, std::string>& digests() const { return digests_; }

 private:
  fs::path root_;
  std::map<std::string, std::string> digests_;
};

std::string lifespan(const PersonProfile& p) {
  return std::to_string(p.birth_year) + "-" + std::to_string(p.death_year);
}

std::uint64_t role_seed(std::uint64_t seed, const CategoryId& role) {
  return seed ^ ReferenceEmbedder::fnv1a64(role);
}

}  // namespace

BuildResult build_corpus(const BuildConfig& cfg, const fs::path& out_dir) {
  if (fs::exists(out_dir) && !(fs::is_directory(out_dir) && fs::is_empty(out_dir)))
    throw BuildError("output", "output directory " + out_dir.string() + " already exists and is not empty");
  const fs::path tmp = out_dir.string() + ".partial";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  try {
    std::vector<std::string> warnings;

    // -- wiki_ingest ---------------------------------------------------------
    struct WikiData {
      OccupationTaxonomy taxonomy;
      std::vector<PersonPage> parsed;
      std::vector<PersonPage> pages;
      PageParseReport report;
      std::vector<PersonProfile> profiles;
    };
    auto wiki = stage("wiki_ingest", [&] {
      WikiData w;
      auto tin = open_input(cfg.resolve(cfg.taxonomy));
      w.taxonomy = load_taxonomy(tin);
      auto pin = open_input(cfg.resolve(cfg.pages));
      w.parsed = parse_pages(pin, w.taxonomy, &w.report);
      const auto stop = cfg.stoplist.empty() ? default_reference_stoplist()
                                             : text::load_word_list(cfg.resolve(cfg.stoplist), true);
      w.pages = filter_pages(w.parsed, stop);
      w.profiles = parse_profiles(text::read_file(cfg.resolve(cfg.profiles)));
      return w;
    });
    for (const auto& wmsg : wiki.taxonomy.warnings) warnings.push_back("taxonomy: " + wmsg);
    for (const auto& d : wiki.report.diagnostics) warnings.push_back("pages: " + d);

    // -- embedder ------------------------------------------------------------
    std::shared_ptr<const EmbeddingProvider> provider;
    SentenceSplitter splitter;
    stage("embedder", [&] {
      if (cfg.embeddings.empty())
        provider = std::make_shared<ReferenceEmbedder>(cfg.embedding_dim);
      else
        provider = std::make_shared<FileEmbeddingProvider>(cfg.resolve(cfg.embeddings));
      if (!cfg.abbreviations.empty())
        splitter = SentenceSplitter(text::load_word_list(cfg.resolve(cfg.abbreviations), true));
      return 0;
    });

    // -- canonicalizer -------------------------------------------------------
    auto canon = stage("canonicalizer", [&] {
      return canonicalize_sections(wiki.pages, *provider, {cfg.sim_threshold, cfg.min_title_freq}, splitter);
    });
    std::map<ClusterId, std::vector<std::string>> cluster_labels;
    for (const auto& c : canon.clusters) cluster_labels[c.cluster_id] = c.labels;

    // -- aspect_miner --------------------------------------------------------
    RoleIndex role_index;
    std::map<CategoryId, RoleAspectSchema> schemas;
    std::vector<CategoryId> selected;
    stage("aspect_miner", [&] {
      role_index = build_role_index(wiki.pages, wiki.taxonomy);
      for (const auto& [role, idx] : role_index) {
        auto supports = count_supports(wiki.pages, idx, canon.index);
        schemas[role] = mine_aspects(role, supports, idx.size(), {cfg.abs_support, cfg.rel_support});
      }
      selected = select_roles(wiki.taxonomy, schemas);
      return 0;
    });

    // -- aspect_classifier ---------------------------------------------------
    std::map<CategoryId, TrainedAspectModel> models;
    stage("aspect_classifier", [&] {
      std::vector<std::pair<CategoryId, std::future<std::optional<TrainedAspectModel>>>> jobs;
      for (const auto& role : selected) {
        jobs.emplace_back(role, std::async(std::launch::async, [&, role]() -> std::optional<TrainedAspectModel> {
                            TrainingSet ts;
                            try {
                              ts = build_training_set(role, schemas.at(role), wiki.pages, role_index.at(role),
                                                      canon.index, role_seed(cfg.seed, role));
                            } catch (const std::runtime_error& e) {
                              if (std::string(e.what()) == "no negative pool") return std::nullopt;
                              throw;
                            }
                            return train(ts, *provider, cfg.tau_grid, splitter);
                          }));
      }
      for (auto& [role, job] : jobs) {
        auto m = job.get();
        if (m) models.emplace(role, std::move(*m));
        else warnings.push_back("role '" + role + "' skipped: no negative pool");
      }
      return 0;
    });

    // -- news_pipeline + summarizer -----------------------------------------
    struct PersonResult {
      PersonProfile profile;
      std::set<CategoryId> roles;
      std::size_t considered = 0;
      std::size_t kept = 0;
      std::map<AspectKey, std::vector<ClassifiedSnippet>> classified;
      std::map<AspectKey, std::vector<ClassifiedSnippet>> top;
      std::map<AspectKey, AspectSummary> summaries;
    };
    std::vector<json> rejects;
    std::map<std::string, const NewsArticle*> article_by_id;
    std::vector<NewsArticle> articles;
    std::vector<PersonResult> people;
    stage("news_pipeline", [&] {
      auto ain = open_input(cfg.resolve(cfg.articles));
      articles = parse_articles(ain);
      for (const auto& a : articles) article_by_id[a.article_id] = &a;
      const auto dictionary = text::load_word_list(cfg.resolve(cfg.dictionary), true);
      const auto particles = cfg.particles.empty() ? default_name_particles()
                                                   : text::load_word_list(cfg.resolve(cfg.particles), true);
      std::map<std::string, const PersonPage*> page_by_id;
      for (const auto& p : wiki.parsed) page_by_id[p.page_id] = &p;

      for (const auto& profile : wiki.profiles) {
        PersonResult pr;
        pr.profile = profile;
        std::set<CategoryId> assigned = profile.roles;
        if (!profile.page_id.empty()) {
          if (auto it = page_by_id.find(profile.page_id); it != page_by_id.end())
            assigned.insert(it->second->occupations.begin(), it->second->occupations.end());
        }
        std::vector<std::string> role_warnings;
        for (const auto& r : expand_roles(assigned, wiki.taxonomy, &role_warnings)) pr.roles.insert(strip_role_suffix(r));
        for (const auto& w : role_warnings) warnings.push_back("person '" + profile.person_id + "': " + w);
        pr.profile.roles = pr.roles;

        const auto names = partial_names(profile, particles);
        std::vector<ClassifiedSnippet> all;
        for (const auto& a : articles) {
          if (!a.person_id.empty() && a.person_id != profile.person_id) continue;
          ++pr.considered;
          auto decision = filter_article(a, profile, dictionary, {}, particles);
          if (!decision.keep()) {
            rejects.push_back(json{{"article_id", a.article_id},
                                   {"person_id", profile.person_id},
                                   {"reason", to_string(decision.reason)}});
            continue;
          }
          ++pr.kept;
          auto snippets = extract_snippets(a, names, 50, splitter);
          auto cls = classify_snippets(snippets, pr.roles, models, *provider, splitter);
          all.insert(all.end(), cls.begin(), cls.end());
        }
        for (const auto& c : all) pr.classified[{c.role, c.aspect}].push_back(c);
        pr.top = rank_top(all, cfg.top_n);
        people.push_back(std::move(pr));
      }
      return 0;
    });

    stage("summarizer", [&] {
      const auto familiar = cfg.familiar_words.empty() ? std::set<std::string>{}
                                                       : text::load_word_list(cfg.resolve(cfg.familiar_words), true);
      SummarizerConfig sc{cfg.k, cfg.max_sentences, cfg.mmr_lambda, cfg.min_summary_snippets};
      for (auto& pr : people) {
        for (const auto& [key, list] : pr.classified) {
          auto s = summarize(pr.profile.person_id, key.first, key.second, list, *provider, familiar, sc, splitter);
          if (s) pr.summaries.emplace(key, std::move(*s));
        }
      }
      return 0;
    });

    // -- store ---------------------------------------------------------------
    json counts;
    stage("store", [&] {
      StoreWriter w(tmp);
      json clusters = json::array();
      for (const auto& c : canon.clusters)
        clusters.push_back({{"cluster_id", c.cluster_id}, {"members", c.members}, {"labels", c.labels}});
      w.write_json("clusters.json", clusters);

      json schema_dump = json::object();
      const std::set<CategoryId> selected_set(selected.begin(), selected.end());
      for (const auto& [role, s] : schemas) {
        json aspects = json::array();
        for (const auto& a : s.aspects)
          aspects.push_back({{"cluster_id", a.cluster_id}, {"abs_support", a.abs_support}, {"rel_support", a.rel_support}});
        schema_dump[role] = {{"persons_in_role", s.persons_in_role},
                             {"aspects", aspects},
                             {"selected", selected_set.count(role) > 0},
                             {"trained", models.count(role) > 0}};
      }
      w.write_json("schemas.json", schema_dump);

      for (const auto& [role, m] : models) w.write_json("models/" + store_file_name(role) + ".json", to_json(m));

      std::string reject_lines;
      for (const auto& r : rejects) reject_lines += r.dump() + "\n";
      w.write("rejects.jsonl", reject_lines);

      std::size_t served = 0, summaries = 0, classified_total = 0;
      for (const auto& pr : people) {
        json roles = json::array();
        for (const auto& role : pr.roles) {
          json aspects = json::array();
          auto model_it = models.find(role);
          if (model_it != models.end()) {
            for (const auto& a : schemas.at(role).aspects) {
              const AspectKey key{role, a.cluster_id};
              auto cit = pr.classified.find(key);
              if (cit == pr.classified.end()) continue;
              json snippets = json::array();
              for (const auto& cs : pr.top.at(key)) {
                const auto* art = article_by_id.at(cs.snippet.article_id);
                auto sj = to_json(cs.snippet);
                sj["fragment"] = make_fragment(cs.snippet, cfg.max_fragment);
                sj["probability"] = cs.probability;
                sj["date"] = art->date;
                sj["newspaper"] = art->newspaper;
                sj["external_url"] = art->external_url;
                snippets.push_back(std::move(sj));
                ++served;
              }
              json summary = nullptr;
              if (auto sit = pr.summaries.find(key); sit != pr.summaries.end()) {
                summary = to_json(sit->second);
                ++summaries;
              }
              classified_total += cit->second.size();
              aspects.push_back({{"aspect", a.cluster_id},
                                 {"labels", cluster_labels.at(a.cluster_id)},
                                 {"classified_count", cit->second.size()},
                                 {"snippets", std::move(snippets)},
                                 {"summary", std::move(summary)}});
            }
          }
          roles.push_back({{"role", role}, {"trained", model_it != models.end()}, {"aspects", std::move(aspects)}});
        }
        json doc = {{"person_id", pr.profile.person_id},
                    {"full_name", pr.profile.full_name},
                    {"synonyms", pr.profile.synonyms},
                    {"birth_year", pr.profile.birth_year},
                    {"death_year", pr.profile.death_year},
                    {"lifespan", lifespan(pr.profile)},
                    {"articles", {{"considered", pr.considered}, {"kept", pr.kept}}},
                    {"roles", std::move(roles)}};
        w.write_json("persons/" + store_file_name(pr.profile.person_id) + ".json", doc);
      }

      counts = {{"persons", people.size()},
                {"models", models.size()},
                {"clusters", canon.clusters.size()},
                {"rejects", rejects.size()},
                {"served_snippets", served},
                {"classified_snippets", classified_total},
                {"summaries", summaries}};
      std::size_t kept = 0;
      for (const auto& pr : people) kept += pr.kept;
      json pipeline = {{"pages_read", wiki.report.pages_read},
                       {"pages_parsed", wiki.parsed.size()},
                       {"pages_skipped_no_occupation", wiki.report.skipped_no_occupation},
                       {"pages_skipped_unparsable", wiki.report.skipped_unparsable},
                       {"pages_filtered", wiki.pages.size()},
                       {"roles_mined", schemas.size()},
                       {"roles_selected", selected.size()},
                       {"articles", articles.size()},
                       {"articles_kept", kept}};
      json manifest = {{"version", kStoreVersion},
                       {"provider", provider->name()},
                       {"config", cfg.to_json()},
                       {"seed", cfg.seed},
                       {"counts", counts},
                       {"pipeline", pipeline},
                       {"warnings", warnings},
                       {"files", w.digests()}};
      w.write_json("manifest.json", manifest);
      return 0;
    });

    if (fs::exists(out_dir)) fs::remove(out_dir);
    fs::create_directories(out_dir.parent_path().empty() ? fs::path(".") : out_dir.parent_path());
    fs::rename(tmp, out_dir);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(tmp, ec);
    throw;
  }

  BuildResult result;
  const auto manifest_text = text::read_file(out_dir / "manifest.json");
  result.manifest = json::parse(manifest_text);
  result.manifest_digest = sha256_hex(manifest_text);
  return result;
}

// ---------------------------------------------------------------------------

CorpusStore CorpusStore::load(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw StoreError("store directory " + dir.string() + " does not exist");
  CorpusStore s;
  std::string manifest_text;
  try {
    manifest_text = text::read_file(dir / "manifest.json");
    s.manifest_ = json::parse(manifest_text);
  } catch (const std::exception& e) {
    throw StoreError(std::string("cannot read manifest: ") + e.what());
  }
  s.manifest_digest_ = sha256_hex(manifest_text);
  if (s.manifest_.value("version", "") != kStoreVersion) throw StoreError("unsupported store version");

  for (const auto& item : s.manifest_.at("files").items()) {
    const std::string rel = item.key();
    const auto& digest = item.value();
    std::string content;
    try {
      content = text::read_file(dir / rel);
    } catch (const std::exception&) {
      throw StoreError("store file missing: " + rel);
    }
    if (sha256_hex(content) != digest.get<std::string>()) throw StoreError("digest mismatch for " + rel);
    if (rel.rfind("persons/", 0) == 0) {
      auto doc = json::parse(content);
      auto id = doc.at("person_id").get<std::string>();
      s.persons_[id] = std::move(doc);
    } else if (rel.rfind("models/", 0) == 0) {
      auto m = model_from_json(json::parse(content));
      s.models_.emplace(m.role, std::move(m));
    } else if (rel == "clusters.json") {
      s.clusters_ = json::parse(content);
    } else if (rel == "rejects.jsonl") {
      for (char c : content) s.reject_count_ += c == '\n';
    }
  }
  if (s.clusters_.is_null()) throw StoreError("store has no clusters.json");
  if (s.recount() != s.manifest_.at("counts")) throw StoreError("manifest counts differ from store contents");
  return s;
}

const json* CorpusStore::person(const std::string& id) const {
  auto it = persons_.find(id);
  return it == persons_.end() ? nullptr : &it->second;
}

json CorpusStore::recount() const {
  std::size_t served = 0, summaries = 0, classified = 0;
  for (const auto& [id, doc] : persons_) {
    for (const auto& role : doc.at("roles")) {
      for (const auto& a : role.at("aspects")) {
        served += a.at("snippets").size();
        classified += a.at("classified_count").get<std::size_t>();
        if (!a.at("summary").is_null()) ++summaries;
      }
    }
  }
  return json{{"persons", persons_.size()},
              {"models", models_.size()},
              {"clusters", clusters_.size()},
              {"rejects", reject_count_},
              {"served_snippets", served},
              {"classified_snippets", classified},
              {"summaries", summaries}};
}

}  // namespace rolelens
