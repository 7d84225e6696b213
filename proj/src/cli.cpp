#include "rolelens/cli.hpp"

#include <cstdlib>
#include <optional>

#include "CLI11.hpp"
#include "rolelens/api_server.hpp"
#include "rolelens/corpus_store.hpp"
#include "rolelens/summarizer.hpp"

namespace rolelens {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

int cmd_build(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed,
              std::ostream& out, std::ostream& err) {
  try {
    auto cfg = load_build_config(config_path);
    if (seed) cfg.seed = *seed;
    auto result = build_corpus(cfg, out_dir);
    out << "store written to " << out_dir << "\n";
    out << "manifest digest " << result.manifest_digest << "\n";
    out << "counts " << result.manifest.at("counts").dump() << "\n";
    for (const auto& w : result.manifest.at("warnings")) out << "warning: " << w.get<std::string>() << "\n";
    return 0;
  } catch (const BuildError& e) {
    err << "build failed in " << e.stage() << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "build failed: " << e.what() << "\n";
  }
  return 1;
}

int cmd_eval(const std::string& store_dir, std::ostream& out, std::ostream& err) {
  try {
    auto store = CorpusStore::load(store_dir);
    out << "# classifiers (test split, macro averaged)\n";
    out << eval_table_header() << "\n";
    for (const auto& [role, model] : store.models()) out << format_eval_row(model) << "\n";

    std::vector<ReadabilityReport> reports;
    for (const auto& [id, doc] : store.persons())
      for (const auto& role : doc.at("roles"))
        for (const auto& a : role.at("aspects"))
          if (!a.at("summary").is_null()) reports.push_back(readability_from_json(a.at("summary").at("metrics")));
    const auto k = store.manifest().at("config").at("k").get<std::size_t>();
    out << "# summaries (" << reports.size() << ")\n";
    out << readability_table_header() << "\n";
    out << format_readability_row(k, reports) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "eval failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_serve(const std::string& store_dir, int port, const std::string& host, const std::string& static_dir,
              std::ostream& out, std::ostream& err) {
  try {
    auto store = CorpusStore::load(store_dir);
    ServeOptions opts{host, port, static_dir};
    return serve(store, opts, [&](std::function<void()>, int bound) {
      out << "serving " << store_dir << " on http://" << host << ":" << bound << " (digest "
          << store.manifest_digest() << ")" << std::endl;
    });
  } catch (const std::exception& e) {
    err << "serve failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"rolelens - role and aspect structured news corpora", "rolelens"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  auto* build = app.add_subcommand("build", "run the pipeline and write a corpus store");
  build->add_option("--config", config_path, "build configuration (JSON)")->required();
  build->add_option("--out", out_dir, "output store directory")->required();
  build->add_option("--seed", seed, "override the configured seed");

  std::string store_dir = env_or("STORE", "");
  int port = std::atoi(env_or("PORT", "8080").c_str());
  std::string host = "0.0.0.0";
  std::string static_dir;
  auto* serve_cmd = app.add_subcommand("serve", "serve a store read-only over HTTP");
  auto* store_opt = serve_cmd->add_option("--store", store_dir, "store directory (default: $STORE)");
  serve_cmd->add_option("--port", port, "port (default: $PORT or 8080)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("--static", static_dir, "UI assets mounted at /");

  std::string eval_store;
  auto* eval = app.add_subcommand("eval", "print classifier and summary evaluation tables");
  eval->add_option("--store", eval_store, "store directory")->required();

  try {
    app.parse(argc, argv);
    if (serve_cmd->parsed() && store_dir.empty()) throw CLI::RequiredError(store_opt->get_name());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 2;
  }

  if (build->parsed()) return cmd_build(config_path, out_dir, seed, out, err);
  if (serve_cmd->parsed()) return cmd_serve(store_dir, port, host, static_dir, out, err);
  return cmd_eval(eval_store, out, err);
}

}  // namespace rolelens
