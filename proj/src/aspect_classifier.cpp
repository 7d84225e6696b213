#include "rolelens/aspect_classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace rolelens {

using nlohmann::json;

std::uint64_t SeededRng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SeededRng::below(0)");
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::size_t TrainingSet::count(const std::string& label) const {
  return static_cast<std::size_t>(std::count_if(examples.begin(), examples.end(),
                                                [&](const LabeledText& e) { return e.label == label; }));
}

namespace {

// Adds `extra` single slots to labels ordered by remainder (desc), then label order, never
// exceeding a label's capacity.
void distribute(std::vector<std::size_t>& alloc, std::size_t extra, const std::vector<std::size_t>& remainder,
                const std::vector<std::size_t>& capacity) {
  std::vector<std::size_t> order(alloc.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (extra > 0) {
    bool progressed = false;
    for (std::size_t i : order) {
      if (extra == 0) break;
      if (alloc[i] >= capacity[i]) continue;
      ++alloc[i];
      --extra;
      progressed = true;
    }
    if (!progressed) throw std::logic_error("stratified split ran out of capacity");
  }
}

}  // namespace

void stratified_split(TrainingSet& ts, SeededRng& rng) {
  const std::size_t n = ts.examples.size();
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_val = n / 10;
  const std::size_t L = ts.labels.size();

  std::vector<std::vector<std::size_t>> members(L);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::find(ts.labels.begin(), ts.labels.end(), ts.examples[i].label);
    if (it == ts.labels.end()) throw std::invalid_argument("example label not in label list");
    members[static_cast<std::size_t>(it - ts.labels.begin())].push_back(i);
  }

  std::vector<std::size_t> t(L), v(L), rt(L), rv(L), cap(L);
  std::size_t sum_t = 0;
  std::size_t sum_v = 0;
  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t c = members[l].size();
    t[l] = c * 8 / 10;
    v[l] = c / 10;
    rt[l] = (c * 8) % 10;
    rv[l] = c % 10;
    sum_t += t[l];
    sum_v += v[l];
  }
  for (std::size_t l = 0; l < L; ++l) cap[l] = members[l].size() - v[l];
  distribute(t, n_train - sum_t, rt, cap);
  for (std::size_t l = 0; l < L; ++l) cap[l] = members[l].size() - t[l];
  distribute(v, n_val - sum_v, rv, cap);

  ts.train.clear();
  ts.validation.clear();
  ts.test.clear();
  for (std::size_t l = 0; l < L; ++l) {
    auto idx = members[l];
    rng.shuffle(idx);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k < t[l]) ts.train.push_back(idx[k]);
      else if (k < t[l] + v[l]) ts.validation.push_back(idx[k]);
      else ts.test.push_back(idx[k]);
    }
  }
  std::sort(ts.train.begin(), ts.train.end());
  std::sort(ts.validation.begin(), ts.validation.end());
  std::sort(ts.test.begin(), ts.test.end());
}

TrainingSet build_training_set(const CategoryId& role, const RoleAspectSchema& schema,
                               const std::vector<PersonPage>& pages, std::span<const std::size_t> role_pages,
                               const ClusterIndex& clusters, std::uint64_t seed) {
  if (schema.aspects.empty()) throw std::invalid_argument("schema for '" + role + "' has no aspects");
  SeededRng rng(seed);
  TrainingSet ts;
  ts.role = role;
  ts.seed = seed;

  std::map<ClusterId, std::vector<const std::string*>> texts;
  for (const auto& a : schema.aspects) texts[a.cluster_id];
  const std::set<std::size_t> in_role(role_pages.begin(), role_pages.end());
  for (std::size_t idx : role_pages) {
    for (const auto& sec : pages.at(idx).sections) {
      auto c = clusters.lookup(sec.title);
      if (!c) continue;
      auto it = texts.find(*c);
      if (it != texts.end()) it->second.push_back(&sec.text);
    }
  }

  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& a : schema.aspects) m = std::min(m, texts[a.cluster_id].size());
  if (m == 0) throw std::invalid_argument("aspect without texts in role '" + role + "'");

  for (const auto& a : schema.aspects) {
    auto pool = texts[a.cluster_id];
    rng.shuffle(pool);
    pool.resize(m);
    ts.labels.push_back(a.cluster_id);
    for (const auto* t : pool) ts.examples.push_back({*t, a.cluster_id});
  }
  ts.labels.push_back(kNegativeLabel);

  std::vector<const std::string*> negatives;
  for (std::size_t i = 0; i < pages.size(); ++i) {
    if (in_role.count(i)) continue;
    for (const auto& sec : pages[i].sections) negatives.push_back(&sec.text);
  }
  if (negatives.empty()) throw std::runtime_error("no negative pool");
  const std::size_t need = m * schema.aspects.size();
  std::vector<const std::string*> drawn;
  while (drawn.size() < need) {
    auto round = negatives;
    rng.shuffle(round);
    const std::size_t take = std::min(need - drawn.size(), round.size());
    drawn.insert(drawn.end(), round.begin(), round.begin() + static_cast<std::ptrdiff_t>(take));
  }
  for (const auto* t : drawn) ts.examples.push_back({*t, kNegativeLabel});

  stratified_split(ts, rng);
  return ts;
}

// ---------------------------------------------------------------------------

EvalReport evaluate_predictions(const std::vector<std::string>& classes, std::span<const std::size_t> actual,
                                std::span<const std::size_t> predicted) {
  if (actual.empty()) throw std::invalid_argument("evaluation needs at least one example");
  if (actual.size() != predicted.size()) throw std::invalid_argument("label/prediction length mismatch");
  const std::size_t C = classes.size();
  EvalReport r;
  r.classes = classes;
  r.total = actual.size();
  r.confusion.assign(C, std::vector<std::size_t>(C, 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] >= C || predicted[i] >= C) throw std::out_of_range("class index out of range");
    ++r.confusion[actual[i]][predicted[i]];
  }
  std::size_t correct = 0;
  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    const std::size_t tp = r.confusion[c][c];
    correct += tp;
    std::size_t pred = 0, act = 0;
    for (std::size_t k = 0; k < C; ++k) {
      pred += r.confusion[k][c];
      act += r.confusion[c][k];
    }
    const double p = pred ? static_cast<double>(tp) / static_cast<double>(pred) : 0.0;
    const double rc = act ? static_cast<double>(tp) / static_cast<double>(act) : 0.0;
    const double f = (p + rc) > 0.0 ? 2.0 * p * rc / (p + rc) : 0.0;
    p_sum += p;
    r_sum += rc;
    f_sum += f;
  }
  const double cd = static_cast<double>(C);
  r.macro_precision = C ? p_sum / cd : 0.0;
  r.macro_recall = C ? r_sum / cd : 0.0;
  r.macro_f1 = C ? f_sum / cd : 0.0;
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);
  return r;
}

Classification classify_vector(const TrainedAspectModel& model, const Vector& embedding) {
  const std::size_t C = model.classes.size();
  Classification out;
  out.probabilities.assign(C, 1.0 / static_cast<double>(C));
  if (l2_norm(embedding) == 0.0) {
    out.label_index = model.negative_index();
    out.label = model.classes[out.label_index];
    return out;
  }
  std::vector<double> logits(C);
  for (std::size_t i = 0; i < C; ++i) logits[i] = model.temperature * cosine(embedding, model.centroids[i]);
  std::size_t best = 0;
  for (std::size_t i = 1; i < C; ++i)
    if (logits[i] > logits[best]) best = i;
  double z = 0.0;
  for (std::size_t i = 0; i < C; ++i) {
    out.probabilities[i] = std::exp(logits[i] - logits[best]);
    z += out.probabilities[i];
  }
  for (double& p : out.probabilities) p /= z;
  out.label_index = best;
  out.label = model.classes[best];
  return out;
}

Classification classify(const TrainedAspectModel& model, std::string_view text, const EmbeddingProvider& provider,
                        const SentenceSplitter& splitter) {
  return classify_vector(model, embed_section(text, provider, splitter));
}

namespace {

std::size_t label_index(const std::vector<std::string>& classes, const std::string& label) {
  auto it = std::find(classes.begin(), classes.end(), label);
  if (it == classes.end()) throw std::invalid_argument("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - classes.begin());
}

EvalReport evaluate_embedded(const TrainedAspectModel& model, const std::vector<Vector>& vecs,
                             const std::vector<std::size_t>& actual) {
  std::vector<std::size_t> predicted;
  predicted.reserve(vecs.size());
  for (const auto& v : vecs) predicted.push_back(classify_vector(model, v).label_index);
  return evaluate_predictions(model.classes, actual, predicted);
}

}  // namespace

TrainedAspectModel train(const TrainingSet& ts, const EmbeddingProvider& provider,
                         const std::vector<double>& tau_grid, const SentenceSplitter& splitter) {
  if (tau_grid.empty()) throw std::invalid_argument("empty temperature grid");
  for (double tau : tau_grid)
    if (!(tau > 0.0)) throw std::invalid_argument("temperatures must be positive");

  TrainedAspectModel model;
  model.role = ts.role;
  model.classes = ts.labels;
  model.provider = provider.name();
  model.seed = ts.seed;
  model.samples = ts.examples.size();

  std::vector<Vector> emb;
  emb.reserve(ts.examples.size());
  std::vector<std::size_t> labels;
  labels.reserve(ts.examples.size());
  for (const auto& ex : ts.examples) {
    emb.push_back(embed_section(ex.text, provider, splitter));
    labels.push_back(label_index(model.classes, ex.label));
  }

  std::vector<std::vector<Vector>> per_class(model.classes.size());
  for (std::size_t i : ts.train) per_class[labels[i]].push_back(emb[i]);
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    if (per_class[c].empty()) throw std::runtime_error("degenerate split");
    model.centroids.push_back(mean_vector(per_class[c]));
  }

  auto gather = [&](const std::vector<std::size_t>& idx, std::vector<Vector>& v, std::vector<std::size_t>& y) {
    for (std::size_t i : idx) {
      v.push_back(emb[i]);
      y.push_back(labels[i]);
    }
  };
  std::vector<Vector> val_v, test_v;
  std::vector<std::size_t> val_y, test_y;
  gather(ts.validation, val_v, val_y);
  gather(ts.test, test_v, test_y);

  auto grid = tau_grid;
  std::sort(grid.begin(), grid.end());
  double best_tau = grid.front();
  double best_precision = -1.0;
  for (double tau : grid) {
    model.temperature = tau;
    const double p = val_v.empty() ? 0.0 : evaluate_embedded(model, val_v, val_y).macro_precision;
    if (p > best_precision) {
      best_precision = p;
      best_tau = tau;
    }
  }
  model.temperature = best_tau;
  if (!test_v.empty()) {
    model.metrics = evaluate_embedded(model, test_v, test_y);
  } else {
    model.metrics.classes = model.classes;
    model.metrics.confusion.assign(model.classes.size(), std::vector<std::size_t>(model.classes.size(), 0));
  }
  return model;
}

EvalReport evaluate(const TrainedAspectModel& model, std::span<const LabeledText> labeled,
                    const EmbeddingProvider& provider, const SentenceSplitter& splitter) {
  std::vector<std::size_t> actual, predicted;
  for (const auto& ex : labeled) {
    actual.push_back(label_index(model.classes, ex.label));
    predicted.push_back(classify(model, ex.text, provider, splitter).label_index);
  }
  return evaluate_predictions(model.classes, actual, predicted);
}

std::string eval_table_header() {
  return "role                           | #aspects | #samples | precision | recall | f1     | accuracy";
}

std::string format_eval_row(const TrainedAspectModel& model) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-30s | %8zu | %8zu | %9.4f | %6.4f | %6.4f | %8.4f", model.role.c_str(),
                model.classes.size() - 1, model.samples, model.metrics.macro_precision, model.metrics.macro_recall,
                model.metrics.macro_f1, model.metrics.accuracy);
  return buf;
}

json to_json(const EvalReport& r) {
  return json{{"classes", r.classes},
              {"confusion", r.confusion},
              {"macro_precision", r.macro_precision},
              {"macro_recall", r.macro_recall},
              {"macro_f1", r.macro_f1},
              {"accuracy", r.accuracy},
              {"total", r.total}};
}

EvalReport eval_report_from_json(const json& j) {
  EvalReport r;
  r.classes = j.at("classes").get<std::vector<std::string>>();
  r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
  r.macro_precision = j.at("macro_precision").get<double>();
  r.macro_recall = j.at("macro_recall").get<double>();
  r.macro_f1 = j.at("macro_f1").get<double>();
  r.accuracy = j.at("accuracy").get<double>();
  r.total = j.at("total").get<std::size_t>();
  return r;
}

json to_json(const TrainedAspectModel& m) {
  return json{{"role", m.role},         {"classes", m.classes},  {"centroids", m.centroids},
              {"tau", m.temperature},   {"metrics", to_json(m.metrics)}, {"provider", m.provider},
              {"seed", m.seed},         {"samples", m.samples}};
}

TrainedAspectModel model_from_json(const json& j) {
  TrainedAspectModel m;
  m.role = j.at("role").get<std::string>();
  m.classes = j.at("classes").get<std::vector<std::string>>();
  m.centroids = j.at("centroids").get<std::vector<Vector>>();
  m.temperature = j.at("tau").get<double>();
  m.metrics = eval_report_from_json(j.at("metrics"));
  m.provider = j.at("provider").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.samples = j.at("samples").get<std::size_t>();
  if (m.classes.size() != m.centroids.size() || m.classes.empty())
    throw std::runtime_error("model '" + m.role + "': classes and centroids disagree");
  return m;
}

}  // namespace rolelens
