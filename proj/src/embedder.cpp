#include "rolelens/embedder.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rolelens/text.hpp"

namespace rolelens {

double dot(const Vector& u, const Vector& v) {
  if (u.size() != v.size())
    throw std::invalid_argument("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double l2_norm(const Vector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double cosine(const Vector& u, const Vector& v) {
  const double d = dot(u, v);
  const double nu = l2_norm(u);
  const double nv = l2_norm(v);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return d / (nu * nv);
}

Vector mean_vector(std::span<const Vector> vectors) {
  if (vectors.empty()) throw std::invalid_argument("mean of an empty vector list");
  Vector out(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    if (v.size() != out.size()) throw std::invalid_argument("dimension mismatch in mean");
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  const double n = static_cast<double>(vectors.size());
  for (double& x : out) x /= n;
  return out;
}

// ---------------------------------------------------------------------------

std::set<std::string> SentenceSplitter::dutch_abbreviations() {
  return {"dhr.", "mevr.", "mej.", "mr.", "dr.", "drs.", "ir.", "ing.", "prof.", "jhr.",
          "st.", "sr.", "jr.", "nr.", "no.", "blz.", "bl.", "bijv.", "bv.", "o.a.", "m.a.w.",
          "d.w.z.", "enz.", "etc.", "ca.", "jl.", "a.s.", "z.g.", "v.", "vs.", "gen.", "lt.",
          "kol.", "kapt.", "mgr.", "ds.", "pag.", "vgl.", "e.a.", "i.p.v.", "t.a.v.", "z.k.h.",
          "h.m.", "h.k.h.", "kon.", "min.", "resp.", "afd.", "jan.", "feb.", "aug.", "sept.",
          "okt.", "nov.", "dec.", "mrt."};
}

SentenceSplitter::SentenceSplitter() : SentenceSplitter(dutch_abbreviations()) {}

SentenceSplitter::SentenceSplitter(std::set<std::string> guard_list) {
  for (const auto& g : guard_list) {
    auto k = text::to_lower(text::trim(g));
    if (k.empty()) continue;
    if (k.back() != '.') k.push_back('.');
    guard_.insert(std::move(k));
  }
}

namespace {

bool is_closer(char32_t c) {
  return c == '"' || c == '\'' || c == ')' || c == ']' || c == 0xBB || c == 0x201D ||
         c == 0x2019;
}

bool is_opener(char32_t c) {
  return c == '"' || c == '\'' || c == '(' || c == '[' || c == 0xAB || c == 0x201C ||
         c == 0x201E || c == 0x2018;
}

bool is_terminator(char32_t c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::vector<std::string> SentenceSplitter::split(std::string_view input) const {
  const auto cps = text::decode_utf8(input);
  const std::size_t n = cps.size();
  std::vector<std::string> out;
  auto emit = [&](std::size_t b, std::size_t e) {
    auto s = text::normalize_whitespace(text::encode_utf8(std::u32string_view(cps).substr(b, e - b)));
    if (!s.empty()) out.push_back(std::move(s));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    if (!is_terminator(cps[i])) {
      ++i;
      continue;
    }
    const std::size_t mark = i;
    std::size_t end = i + 1;
    while (end < n && (is_terminator(cps[end]) || is_closer(cps[end]))) ++end;
    std::size_t next = end;
    while (next < n && text::is_space(cps[next])) ++next;
    if (next == end || next >= n) {
      i = end;
      continue;
    }
    std::size_t probe = next;
    while (probe < n && is_opener(cps[probe])) ++probe;
    if (probe >= n || !(text::is_upper(cps[probe]) || text::is_digit(cps[probe]))) {
      i = end;
      continue;
    }
    if (cps[mark] == '.') {
      std::size_t tok_begin = mark;
      while (tok_begin > start && !text::is_space(cps[tok_begin - 1])) --tok_begin;
      std::u32string tok(cps.begin() + static_cast<std::ptrdiff_t>(tok_begin),
                         cps.begin() + static_cast<std::ptrdiff_t>(mark + 1));
      while (!tok.empty() && is_opener(tok.front())) tok.erase(tok.begin());
      const auto key = text::to_lower(text::encode_utf8(tok));
      const bool initial = tok.size() == 2 && text::is_upper(tok[0]);
      if (guard_.count(key) || initial) {
        i = end;
        continue;
      }
    }
    emit(start, end);
    start = next;
    i = next;
  }
  emit(start, n);
  return out;
}

const SentenceSplitter& default_splitter() {
  static const SentenceSplitter splitter;
  return splitter;
}

// ---------------------------------------------------------------------------

ReferenceEmbedder::ReferenceEmbedder(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::string ReferenceEmbedder::name() const { return "reference-trigram-" + std::to_string(dim_); }

std::uint64_t ReferenceEmbedder::fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> ReferenceEmbedder::trigrams(std::string_view sentence) {
  const auto cps = text::decode_utf8(text::to_lower(text::normalize_whitespace(sentence)));
  std::vector<std::string> out;
  if (cps.empty()) return out;
  if (cps.size() < 3) {
    out.push_back(text::encode_utf8(cps));
    return out;
  }
  out.reserve(cps.size() - 2);
  for (std::size_t i = 0; i + 3 <= cps.size(); ++i)
    out.push_back(text::encode_utf8(std::u32string_view(cps).substr(i, 3)));
  return out;
}

Vector ReferenceEmbedder::embed_sentence(std::string_view sentence) const {
  Vector v(dim_, 0.0);
  for (const auto& tri : trigrams(sentence)) v[fnv1a64(tri) % dim_] += 1.0;
  const double n = l2_norm(v);
  if (n > 0.0)
    for (double& x : v) x /= n;
  return v;
}

// ---------------------------------------------------------------------------

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& path,
                                             std::shared_ptr<const EmbeddingProvider> fallback)
    : name_("file:" + path.filename().string()), fallback_(std::move(fallback)) {
  load(text::read_file(path));
}

FileEmbeddingProvider FileEmbeddingProvider::from_string(const std::string& jsonl, std::string name,
                                                         std::shared_ptr<const EmbeddingProvider> fallback) {
  FileEmbeddingProvider p;
  p.name_ = std::move(name);
  p.fallback_ = std::move(fallback);
  p.load(jsonl);
  return p;
}

void FileEmbeddingProvider::load(const std::string& jsonl) {
  std::istringstream in(jsonl);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
      auto key = text::normalize_whitespace(rec.at("text").get<std::string>());
      auto vec = rec.at("vector").get<Vector>();
      if (vec.empty()) throw std::runtime_error("empty vector");
      for (double x : vec)
        if (!std::isfinite(x)) throw std::runtime_error("non-finite component");
      if (dim_ == 0) dim_ = vec.size();
      if (vec.size() != dim_) throw std::runtime_error("inconsistent vector dimension");
      table_[std::move(key)] = std::move(vec);
    } catch (const std::exception& e) {
      throw std::runtime_error("embedding table line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (fallback_ && dim_ != 0 && fallback_->dimension() != dim_)
    throw std::runtime_error("fallback provider dimension differs from embedding table");
  if (dim_ == 0 && fallback_) dim_ = fallback_->dimension();
}

Vector FileEmbeddingProvider::embed_sentence(std::string_view sentence) const {
  const auto key = text::normalize_whitespace(sentence);
  if (key.empty()) return Vector(dim_, 0.0);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  if (fallback_) return fallback_->embed_sentence(key);
  throw std::out_of_range("no precomputed vector for: " + key);
}

// ---------------------------------------------------------------------------

Vector embed_sentence(std::string_view sentence, const EmbeddingProvider& provider) {
  return provider.embed_sentence(sentence);
}

Vector embed_section(std::string_view text, const EmbeddingProvider& provider,
                     const SentenceSplitter& splitter) {
  const auto sentences = splitter.split(text);
  if (sentences.empty()) return Vector(provider.dimension(), 0.0);
  std::vector<Vector> vecs;
  vecs.reserve(sentences.size());
  for (const auto& s : sentences) vecs.push_back(provider.embed_sentence(s));
  return mean_vector(vecs);
}

Vector title_group_vector(std::span<const std::string> sections, const EmbeddingProvider& provider,
                          const SentenceSplitter& splitter) {
  if (sections.empty()) throw std::invalid_argument("empty title group");
  std::vector<Vector> vecs;
  vecs.reserve(sections.size());
  for (const auto& s : sections) vecs.push_back(embed_section(s, provider, splitter));
  return mean_vector(vecs);
}

}  // namespace rolelens
