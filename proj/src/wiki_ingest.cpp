#include "rolelens/wiki_ingest.hpp"

#include <cctype>
#include <deque>
#include <sstream>

#include "json.hpp"
#include "rolelens/text.hpp"

namespace rolelens {

using nlohmann::json;

namespace {

const std::set<CategoryId> kNoParents;

std::string lower_key(const std::string& s) { return text::to_lower(text::normalize_whitespace(s)); }

void compute_depths(OccupationTaxonomy& tax) {
  std::map<CategoryId, std::set<CategoryId>> children;
  for (const auto& [child, parents] : tax.parent_edges)
    for (const auto& p : parents) children[p].insert(child);

  tax.depth.clear();
  std::deque<CategoryId> queue;
  for (const auto& r : tax.roots) {
    tax.depth[r] = 1;
    queue.push_back(r);
  }
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    const int d = tax.depth[cur];
    auto it = children.find(cur);
    if (it == children.end()) continue;
    for (const auto& c : it->second) {
      if (tax.depth.count(c)) continue;
      tax.depth[c] = d + 1;
      queue.push_back(c);
    }
  }
}

}  // namespace

std::optional<int> OccupationTaxonomy::depth_of(const CategoryId& id) const {
  auto it = depth.find(id);
  if (it == depth.end()) return std::nullopt;
  return it->second;
}

const std::set<CategoryId>& OccupationTaxonomy::parents_of(const CategoryId& id) const {
  auto it = parent_edges.find(id);
  return it == parent_edges.end() ? kNoParents : it->second;
}

std::set<CategoryId> OccupationTaxonomy::ancestors(const CategoryId& id) const {
  std::set<CategoryId> seen;
  std::deque<CategoryId> queue{id};
  while (!queue.empty()) {
    auto cur = queue.front();
    queue.pop_front();
    for (const auto& p : parents_of(cur)) {
      if (seen.insert(p).second) queue.push_back(p);
    }
  }
  seen.erase(id);
  return seen;
}

std::optional<CategoryId> OccupationTaxonomy::resolve(const std::string& name) const {
  const auto n = text::normalize_whitespace(name);
  if (n.empty()) return std::nullopt;
  if (categories.count(n)) return n;
  const auto key = text::to_lower(n);
  for (const auto& c : categories)
    if (text::to_lower(c) == key) return c;
  return std::nullopt;
}

OccupationTaxonomy load_taxonomy(std::istream& in) {
  OccupationTaxonomy tax;
  std::map<CategoryId, std::vector<std::pair<CategoryId, std::size_t>>> raw_parents;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(lineno, std::string("malformed taxonomy record: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("id") || !rec["id"].is_string())
      throw ParseError(lineno, "taxonomy record needs a string \"id\"");
    const auto id = text::normalize_whitespace(rec["id"].get<std::string>());
    if (id.empty()) throw ParseError(lineno, "empty category id");
    tax.categories.insert(id);
    tax.parent_edges[id];
    if (rec.contains("parents")) {
      if (!rec["parents"].is_array()) throw ParseError(lineno, "\"parents\" must be an array");
      for (const auto& p : rec["parents"]) {
        if (!p.is_string()) throw ParseError(lineno, "parent ids must be strings");
        raw_parents[id].emplace_back(text::normalize_whitespace(p.get<std::string>()), lineno);
      }
    }
    if (rec.contains("is_root")) {
      if (!rec["is_root"].is_boolean()) throw ParseError(lineno, "\"is_root\" must be a boolean");
      if (rec["is_root"].get<bool>()) tax.roots.insert(id);
    }
  }

  for (const auto& [child, parents] : raw_parents) {
    for (const auto& [p, at] : parents) {
      if (!tax.categories.count(p)) {
        tax.warnings.push_back("line " + std::to_string(at) + ": dangling parent '" + p +
                               "' of '" + child + "' dropped");
        continue;
      }
      if (p != child) tax.parent_edges[child].insert(p);
    }
  }

  tax.categories.insert(kPersonRole);
  tax.parent_edges[kPersonRole];
  tax.roots.insert(kPersonRole);
  compute_depths(tax);
  return tax;
}

// ---------------------------------------------------------------------------
// Wikitext (best-effort, lossy).

namespace detail {
namespace {

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

// Index one past the `}}` closing the template opened at `open`, or npos.
std::size_t match_template(const std::string& s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i + 1 < s.size(); ++i) {
    if (s[i] == '{' && s[i + 1] == '{') {
      ++depth;
      ++i;
    } else if (s[i] == '}' && s[i + 1] == '}') {
      --depth;
      ++i;
      if (depth == 0) return i + 1;
    }
  }
  return std::string::npos;
}

std::vector<std::string> split_top_level(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  int tdepth = 0;
  int ldepth = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    const char n = i + 1 < body.size() ? body[i + 1] : '\0';
    if (c == '{' && n == '{') {
      ++tdepth;
      cur += "{{";
      ++i;
    } else if (c == '}' && n == '}') {
      --tdepth;
      cur += "}}";
      ++i;
    } else if (c == '[' && n == '[') {
      ++ldepth;
      cur += "[[";
      ++i;
    } else if (c == ']' && n == ']') {
      --ldepth;
      cur += "]]";
      ++i;
    } else if (c == '|' && tdepth == 0 && ldepth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

std::string remove_between(const std::string& s, std::string_view open, std::string_view close) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto b = s.find(open, pos);
    if (b == std::string::npos) break;
    auto e = s.find(close, b + open.size());
    out.append(s, pos, b - pos);
    if (e == std::string::npos) {
      pos = s.size();
      break;
    }
    pos = e + close.size();
  }
  out.append(s, pos, std::string::npos);
  return out;
}

std::string remove_refs(const std::string& s) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto b = s.find("<ref", pos);
    if (b == std::string::npos) break;
    out.append(s, pos, b - pos);
    auto tag_end = s.find('>', b);
    if (tag_end == std::string::npos) {
      pos = s.size();
      break;
    }
    if (s[tag_end - 1] == '/') {
      pos = tag_end + 1;
      continue;
    }
    auto close = s.find("</ref>", tag_end);
    pos = close == std::string::npos ? s.size() : close + 6;
  }
  out.append(s, pos, std::string::npos);
  return out;
}

std::string remove_templates(const std::string& s) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto b = s.find("{{", pos);
    if (b == std::string::npos) break;
    out.append(s, pos, b - pos);
    auto e = match_template(s, b);
    pos = e == std::string::npos ? s.size() : e;
  }
  out.append(s, pos, std::string::npos);
  return out;
}

}  // namespace

std::string strip_wiki_markup(const std::string& input) {
  std::string s = remove_between(input, "<!--", "-->");
  s = remove_refs(s);
  s = remove_templates(s);

  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "[[") == 0) {
      auto e = s.find("]]", i + 2);
      if (e == std::string::npos) {
        out.append(s, i + 2, std::string::npos);
        break;
      }
      std::string inner = s.substr(i + 2, e - i - 2);
      i = e + 2;
      if (starts_with_ci(inner, 0, "file:") || starts_with_ci(inner, 0, "bestand:") ||
          starts_with_ci(inner, 0, "image:") || starts_with_ci(inner, 0, "afbeelding:") ||
          starts_with_ci(inner, 0, "categorie:") || starts_with_ci(inner, 0, "category:"))
        continue;
      auto bar = inner.rfind('|');
      out += bar == std::string::npos ? inner : inner.substr(bar + 1);
    } else if (s[i] == '[' && (s.compare(i + 1, 4, "http") == 0)) {
      auto e = s.find(']', i);
      if (e == std::string::npos) {
        i = s.size();
        break;
      }
      std::string inner = s.substr(i + 1, e - i - 1);
      auto sp = inner.find(' ');
      if (sp != std::string::npos) out += inner.substr(sp + 1);
      i = e + 1;
    } else if (s.compare(i, 2, "''") == 0) {
      while (i < s.size() && s[i] == '\'') ++i;
    } else if (s[i] == '<') {
      auto e = s.find('>', i);
      if (e == std::string::npos) {
        out.append(s, i, std::string::npos);
        break;
      }
      i = e + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return text::normalize_whitespace(out);
}

WikitextPage parse_wikitext(const std::string& wikitext) {
  WikitextPage page;

  for (std::size_t pos = wikitext.find("{{"); pos != std::string::npos;
       pos = wikitext.find("{{", pos + 2)) {
    std::size_t name_at = pos + 2;
    while (name_at < wikitext.size() && std::isspace(static_cast<unsigned char>(wikitext[name_at])))
      ++name_at;
    if (!starts_with_ci(wikitext, name_at, "infobox")) continue;
    auto end = match_template(wikitext, pos);
    if (end == std::string::npos) break;
    auto parts = split_top_level(wikitext.substr(pos + 2, end - pos - 4));
    for (std::size_t k = 1; k < parts.size(); ++k) {
      auto eq = parts[k].find('=');
      if (eq == std::string::npos) continue;
      auto key = text::trim(parts[k].substr(0, eq));
      auto value = text::trim(parts[k].substr(eq + 1));
      if (!key.empty()) page.infobox[key] = value;
    }
    break;
  }

  std::istringstream lines(wikitext);
  std::string line;
  std::string summary_raw;
  std::string current_raw;
  bool in_section = false;
  auto flush = [&]() {
    if (in_section) page.sections.back().text = strip_wiki_markup(current_raw);
    current_raw.clear();
  };
  while (std::getline(lines, line)) {
    auto t = text::trim(line);
    const bool level2 = t.size() > 4 && t.compare(0, 2, "==") == 0 && t[2] != '=' &&
                        t.compare(t.size() - 2, 2, "==") == 0 && t[t.size() - 3] != '=';
    if (level2) {
      if (!in_section) summary_raw = current_raw;
      flush();
      page.sections.push_back({text::trim(t.substr(2, t.size() - 4)), {}});
      in_section = true;
      current_raw.clear();
      continue;
    }
    if (t.size() > 2 && t.compare(0, 3, "===") == 0) continue;  // subsection headings fold into the parent
    current_raw += line;
    current_raw += '\n';
  }
  if (!in_section) summary_raw = current_raw;
  flush();
  page.summary = strip_wiki_markup(summary_raw);
  return page;
}

}  // namespace detail

namespace {

std::string xml_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 8) {
      out.push_back('&');
      continue;
    }
    auto ent = s.substr(i + 1, semi - i - 1);
    if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "amp") out.push_back('&');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      char32_t cp = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X')
                        ? static_cast<char32_t>(std::stoul(ent.substr(2), nullptr, 16))
                        : static_cast<char32_t>(std::stoul(ent.substr(1)));
      text::append_utf8(out, cp);
    } else {
      out.append(s, i, semi - i + 1);
    }
    i = semi;
  }
  return out;
}

std::optional<std::string> xml_element(const std::string& s, const std::string& tag) {
  auto open = s.find("<" + tag);
  while (open != std::string::npos) {
    const char after = open + tag.size() + 1 < s.size() ? s[open + tag.size() + 1] : '\0';
    if (after == '>' || after == ' ' || after == '/') break;
    open = s.find("<" + tag, open + 1);
  }
  if (open == std::string::npos) return std::nullopt;
  auto gt = s.find('>', open);
  if (gt == std::string::npos) return std::nullopt;
  if (s[gt - 1] == '/') return std::string();
  auto close = s.find("</" + tag + ">", gt);
  if (close == std::string::npos) return std::nullopt;
  return xml_unescape(s.substr(gt + 1, close - gt - 1));
}

std::vector<std::string> occupation_candidates(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  bool linked = false;
  while (true) {
    auto b = value.find("[[", pos);
    if (b == std::string::npos) break;
    auto e = value.find("]]", b + 2);
    if (e == std::string::npos) break;
    auto inner = value.substr(b + 2, e - b - 2);
    auto bar = inner.find('|');
    auto target = bar == std::string::npos ? inner : inner.substr(0, bar);
    for (std::string_view prefix : {"Categorie:", "Category:", ":Categorie:", ":Category:"}) {
      if (target.rfind(prefix, 0) == 0) target = target.substr(prefix.size());
    }
    out.push_back(text::trim(target));
    linked = true;
    pos = e + 2;
  }
  if (linked) return out;

  std::string v = value;
  for (std::string_view br : {"<br>", "<br/>", "<br />"}) {
    for (auto at = v.find(br); at != std::string::npos; at = v.find(br)) v.replace(at, br.size(), ",");
  }
  std::string cur;
  for (char c : v) {
    if (c == ',' || c == ';' || c == '\n') {
      out.push_back(text::trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(text::trim(cur));
  return out;
}

std::string json_string_field(const json& rec, const char* key) {
  if (!rec.contains(key)) return {};
  if (!rec[key].is_string()) throw std::runtime_error(std::string("field \"") + key + "\" must be a string");
  return rec[key].get<std::string>();
}

void emit_page(PersonPage page, const std::map<std::string, std::string>& infobox,
               const OccupationTaxonomy& taxonomy, std::vector<PersonPage>& out,
               PageParseReport& report) {
  page.occupations = resolve_occupations(infobox, taxonomy);
  if (page.occupations.empty()) {
    ++report.skipped_no_occupation;
    return;
  }
  out.push_back(std::move(page));
}

std::vector<PersonPage> parse_jsonl_pages(std::istream& in, const OccupationTaxonomy& taxonomy,
                                          PageParseReport& report) {
  std::vector<PersonPage> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    ++report.pages_read;
    try {
      auto rec = json::parse(line);
      if (!rec.is_object()) throw std::runtime_error("page record is not an object");
      PersonPage page;
      page.page_id = json_string_field(rec, "page_id");
      page.title = json_string_field(rec, "title");
      page.summary = json_string_field(rec, "summary");
      if (page.page_id.empty()) throw std::runtime_error("missing page_id");
      if (rec.contains("sections")) {
        for (const auto& s : rec.at("sections"))
          page.sections.push_back({s.at("title").get<std::string>(), s.at("text").get<std::string>()});
      }
      std::map<std::string, std::string> infobox;
      if (rec.contains("infobox") && rec["infobox"].is_object()) {
        for (const auto& [k, v] : rec["infobox"].items()) {
          if (v.is_string()) {
            infobox[k] = v.get<std::string>();
          } else if (v.is_array()) {
            std::string joined;
            for (const auto& e : v)
              if (e.is_string()) joined += (joined.empty() ? "" : ", ") + e.get<std::string>();
            infobox[k] = joined;
          }
        }
      }
      emit_page(std::move(page), infobox, taxonomy, out, report);
    } catch (const std::exception& e) {
      ++report.skipped_unparsable;
      report.diagnostics.push_back("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<PersonPage> parse_xml_pages(std::istream& in, const OccupationTaxonomy& taxonomy,
                                        PageParseReport& report) {
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string doc = ss.str();
  std::vector<PersonPage> out;
  std::size_t pos = 0;
  while (true) {
    auto b = doc.find("<page>", pos);
    if (b == std::string::npos) break;
    auto e = doc.find("</page>", b);
    if (e == std::string::npos) {
      ++report.pages_read;
      ++report.skipped_unparsable;
      report.diagnostics.push_back("unterminated <page> at offset " + std::to_string(b));
      break;
    }
    ++report.pages_read;
    const std::string body = doc.substr(b, e - b);
    pos = e + 7;
    auto title = xml_element(body, "title");
    auto id = xml_element(body, "id");
    auto wikitext = xml_element(body, "text");
    if (!title || !id || !wikitext) {
      ++report.skipped_unparsable;
      report.diagnostics.push_back("page at offset " + std::to_string(b) + " lacks title/id/text");
      continue;
    }
    auto parsed = detail::parse_wikitext(*wikitext);
    PersonPage page{*id, *title, parsed.summary, std::move(parsed.sections), {}};
    emit_page(std::move(page), parsed.infobox, taxonomy, out, report);
  }
  return out;
}

}  // namespace

std::set<CategoryId> resolve_occupations(const std::map<std::string, std::string>& infobox,
                                         const OccupationTaxonomy& taxonomy) {
  std::set<CategoryId> out;
  for (const auto& [key, value] : infobox) {
    for (const auto& cand : occupation_candidates(value)) {
      if (auto id = taxonomy.resolve(cand); id && *id != kPersonRole) out.insert(*id);
    }
  }
  return out;
}

std::vector<PersonPage> parse_pages(std::istream& in, const OccupationTaxonomy& taxonomy,
                                    PageParseReport* report) {
  PageParseReport local;
  PageParseReport& rep = report ? *report : local;
  int c = in.peek();
  while (c != EOF && std::isspace(c)) {
    in.get();
    c = in.peek();
  }
  if (c == '<') return parse_xml_pages(in, taxonomy, rep);
  return parse_jsonl_pages(in, taxonomy, rep);
}

std::set<std::string> default_reference_stoplist() {
  return {"referenties", "bronnen", "literatuur", "externe links", "noten", "zie ook"};
}

std::vector<PersonPage> filter_pages(const std::vector<PersonPage>& pages,
                                     const std::set<std::string>& ref_stoplist,
                                     const FilterThresholds& thresholds) {
  std::set<std::string> stop;
  for (const auto& s : ref_stoplist) stop.insert(lower_key(s));

  std::vector<PersonPage> out;
  for (const auto& page : pages) {
    PersonPage kept = page;
    kept.sections.clear();
    for (const auto& sec : page.sections) {
      if (stop.count(lower_key(sec.title))) continue;
      if (text::char_count(text::normalize_whitespace(sec.text)) < thresholds.min_section_chars) continue;
      kept.sections.push_back(sec);
    }
    if (text::char_count(text::normalize_whitespace(kept.summary)) < thresholds.min_summary_chars) continue;
    if (kept.sections.size() < thresholds.min_sections) continue;
    out.push_back(std::move(kept));
  }
  return out;
}

std::set<CategoryId> expand_roles(const std::set<CategoryId>& assigned,
                                  const OccupationTaxonomy& taxonomy,
                                  std::vector<std::string>* warnings) {
  std::set<CategoryId> out = assigned;
  for (const auto& id : assigned) {
    if (!taxonomy.contains(id)) {
      if (warnings) warnings->push_back("unknown category '" + id + "' kept without ancestors");
      continue;
    }
    auto anc = taxonomy.ancestors(id);
    out.insert(anc.begin(), anc.end());
  }
  out.insert(kPersonRole);
  return out;
}

std::vector<PersonProfile> parse_profiles(const std::string& json_text) {
  auto doc = json::parse(json_text);
  if (!doc.is_array()) throw std::runtime_error("profiles file must hold a JSON list");
  std::vector<PersonProfile> out;
  std::set<std::string> seen;
  for (const auto& rec : doc) {
    PersonProfile p;
    p.person_id = rec.at("person_id").get<std::string>();
    p.full_name = rec.at("full_name").get<std::string>();
    if (rec.contains("synonyms")) p.synonyms = rec["synonyms"].get<std::vector<std::string>>();
    p.birth_year = rec.at("birth_year").get<int>();
    p.death_year = rec.at("death_year").get<int>();
    if (rec.contains("roles"))
      for (const auto& r : rec["roles"]) p.roles.insert(r.get<std::string>());
    if (rec.contains("page_id")) p.page_id = rec["page_id"].get<std::string>();
    if (p.person_id.empty()) throw std::runtime_error("profile with empty person_id");
    if (p.birth_year > p.death_year)
      throw std::runtime_error("profile '" + p.person_id + "': birth_year after death_year");
    if (!seen.insert(p.person_id).second)
      throw std::runtime_error("duplicate person_id '" + p.person_id + "'");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rolelens
