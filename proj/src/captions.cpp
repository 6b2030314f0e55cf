#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "dgcomics/errors.hpp"
#include "dgcomics/narrative.hpp"

namespace dgc {

std::string_view to_string(Summary s) {
  switch (s) {
    case Summary::expanded: return "expanded";
    case Summary::contracted: return "contracted";
    case Summary::constant: return "constant";
  }
  return "constant";
}

std::string_view to_string(MajorChange m) {
  switch (m) {
    case MajorChange::added: return "added";
    case MajorChange::deleted: return "deleted";
    case MajorChange::preserved: return "preserved";
  }
  return "preserved";
}

std::string_view to_string(RelationChange r) {
  switch (r) {
    case RelationChange::obtained: return "obtained";
    case RelationChange::lost: return "lost";
    case RelationChange::strengthened: return "strengthened";
    case RelationChange::weakened: return "weakened";
    case RelationChange::maintained: return "maintained";
  }
  return "maintained";
}

namespace {

// Links incident to `main` carrying the maximum weight.
std::vector<const Link*> strongest_links(const Graph& g, const std::string& main) {
  std::vector<const Link*> out;
  double best = 0.0;
  for (const auto& [key, link] : g.links()) {
    if (key.source != main && key.target != main) continue;
    if (link.weight() > best) {
      best = link.weight();
      out.clear();
    }
    if (link.weight() == best) out.push_back(&link);
  }
  return out;
}

}  // namespace

CaptionClauses transition_clauses(const std::string& main, const Graph& before_ego, const Graph& after_ego) {
  const GraphDiff d = diff(before_ego, after_ego);
  const std::size_t added = d.added_nodes.size();
  const std::size_t deleted = d.deleted_nodes.size();
  const std::size_t preserved = d.preserved_nodes.size();

  CaptionClauses c;
  c.main = main;
  c.summary = added > deleted ? Summary::expanded : added < deleted ? Summary::contracted : Summary::constant;
  if (added >= deleted && added >= preserved) {
    c.major_change = MajorChange::added;
    c.major_count = added;
  } else if (deleted >= preserved) {
    c.major_change = MajorChange::deleted;
    c.major_count = deleted;
  } else {
    c.major_change = MajorChange::preserved;
    c.major_count = preserved;
  }

  std::vector<Relation> gained;
  for (const Link* link : strongest_links(after_ego, main)) {
    const Link* prev = before_ego.find_link(link->key);
    RelationChange change = RelationChange::obtained;
    if (prev) {
      change = link->weight() > prev->weight()   ? RelationChange::strengthened
               : link->weight() < prev->weight() ? RelationChange::weakened
                                                 : RelationChange::maintained;
    }
    gained.push_back({link->other(main), change});
  }
  std::vector<Relation> lost;
  for (const Link* link : strongest_links(before_ego, main)) {
    if (!after_ego.find_link(link->key)) lost.push_back({link->other(main), RelationChange::lost});
  }
  for (auto* list : {&gained, &lost}) {
    std::sort(list->begin(), list->end());
    list->erase(std::unique(list->begin(), list->end()), list->end());
    c.strongest_relation.insert(c.strongest_relation.end(), list->begin(), list->end());
  }
  return c;
}

CaptionClauses snapshot_clauses(const std::string& main, const Graph& ego) {
  CaptionClauses c;
  c.main = main;
  for (const Link* link : strongest_links(ego, main)) c.strongest_relation.push_back({link->other(main), std::nullopt});
  std::sort(c.strongest_relation.begin(), c.strongest_relation.end());
  c.strongest_relation.erase(std::unique(c.strongest_relation.begin(), c.strongest_relation.end()),
                             c.strongest_relation.end());
  return c;
}

std::string fill_template(const std::string& pattern, const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(pattern.size() + 32);
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      const auto close = pattern.find('}', i);
      if (close != std::string::npos) {
        auto it = slots.find(pattern.substr(i + 1, close - i - 1));
        if (it != slots.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += pattern[i++];
  }
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  if (names.empty()) return {};
  if (names.size() == 1) return names[0];
  std::string out;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out + " and " + names.back();
}

namespace {

// Groups subjects by clause content, preserving first-appearance order.
template <class Key>
struct SubjectGroups {
  std::vector<std::pair<Key, std::vector<std::string>>> groups;
  void add(const Key& key, const std::string& subject) {
    for (auto& [k, subjects] : groups) {
      if (k == key) {
        subjects.push_back(subject);
        return;
      }
    }
    groups.push_back({key, {subject}});
  }
};

std::string verb(const CaptionTemplates& t, std::string_view key) {
  auto it = t.verbs.find(std::string(key));
  return it == t.verbs.end() ? std::string(key) : it->second;
}

}  // namespace

Caption generate_caption(const PanelContext& ctx, const CaptionTemplates& templates) {
  Caption caption;
  for (const auto& main : ctx.mains) {
    const std::set<std::string> ego{main};
    const Graph after = ego_network(ctx.after, ego, ctx.level);
    if (ctx.before) {
      caption.clauses.push_back(transition_clauses(main, ego_network(*ctx.before, ego, ctx.level), after));
    } else {
      caption.clauses.push_back(snapshot_clauses(main, after));
    }
  }

  const std::string span = ctx.span_start == ctx.span_end ? ctx.span_start : ctx.span_start + "–" + ctx.span_end;
  std::map<std::string, std::string> base{{"span_start", ctx.span_start}, {"span_end", ctx.span_end}, {"span", span}};
  std::vector<std::string> sentences;
  // Clauses keep ids; sentences use display names.
  auto name = [&](const std::string& id) {
    if (const Node* n = ctx.after.find_node(id)) return n->label();
    if (ctx.before) {
      if (const Node* n = ctx.before->find_node(id)) return n->label();
    }
    return id;
  };
  auto names = [&](const std::vector<std::string>& ids) {
    std::vector<std::string> out;
    for (const auto& id : ids) out.push_back(name(id));
    return join_names(out);
  };

  if (ctx.before) {
    SubjectGroups<Summary> summaries;
    SubjectGroups<std::pair<MajorChange, std::size_t>> majors;
    for (const auto& c : caption.clauses) {
      summaries.add(*c.summary, c.main);
      majors.add({*c.major_change, c.major_count}, c.main);
    }
    for (const auto& [s, subjects] : summaries.groups) {
      auto slots = base;
      slots["main"] = names(subjects);
      slots["summary_verb"] = verb(templates, to_string(s));
      sentences.push_back(fill_template(templates.summary, slots));
    }
    for (const auto& [m, subjects] : majors.groups) {
      auto slots = base;
      slots["main"] = names(subjects);
      slots["count"] = std::to_string(m.second);
      slots["change_verb"] = verb(templates, to_string(m.first));
      sentences.push_back(fill_template(templates.major_change, slots));
    }
  }

  // Relation clauses: per main, partners sharing a verb form one clause; equal clauses across mains merge.
  SubjectGroups<std::pair<std::optional<RelationChange>, std::vector<std::string>>> relations;
  for (const auto& c : caption.clauses) {
    std::vector<std::pair<std::optional<RelationChange>, std::vector<std::string>>> per_change;
    for (const auto& r : c.strongest_relation) {
      auto it = std::find_if(per_change.begin(), per_change.end(), [&](const auto& p) { return p.first == r.change; });
      if (it == per_change.end()) {
        per_change.push_back({r.change, {r.partner}});
      } else {
        it->second.push_back(r.partner);
      }
    }
    for (const auto& key : per_change) relations.add(key, c.main);
  }
  for (const auto& [key, subjects] : relations.groups) {
    auto slots = base;
    slots["main"] = names(subjects);
    slots["partner"] = names(key.second);
    if (key.first) {
      slots["relation_verb"] = verb(templates, to_string(*key.first));
      sentences.push_back(fill_template(templates.relation, slots));
    } else {
      sentences.push_back(fill_template(templates.snapshot_relation, slots));
    }
  }

  for (const auto& s : sentences) {
    if (!caption.text.empty()) caption.text += ' ';
    caption.text += s;
  }
  return caption;
}

CaptionTemplates CaptionTemplates::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("", "caption templates must be a JSON object");
  CaptionTemplates t;
  for (const auto& [key, value] : j.items()) {
    if (key == "verbs") {
      if (!value.is_object()) throw SchemaError("/verbs", "expected an object");
      for (const auto& [vk, vv] : value.items()) {
        if (!vv.is_string()) throw SchemaError("/verbs/" + vk, "expected a string");
        t.verbs[vk] = vv.get<std::string>();
      }
      continue;
    }
    if (!value.is_string()) throw SchemaError("/" + key, "expected a string");
    if (key == "summary") {
      t.summary = value.get<std::string>();
    } else if (key == "major_change") {
      t.major_change = value.get<std::string>();
    } else if (key == "relation") {
      t.relation = value.get<std::string>();
    } else if (key == "snapshot_relation") {
      t.snapshot_relation = value.get<std::string>();
    } else {
      throw SchemaError("/" + key, "unknown caption template field");
    }
  }
  return t;
}

CaptionTemplates CaptionTemplates::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open caption templates '{}'", path));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
  return from_json(j);
}

nlohmann::ordered_json CaptionTemplates::to_json() const {
  nlohmann::ordered_json j;
  j["summary"] = summary;
  j["major_change"] = major_change;
  j["relation"] = relation;
  j["snapshot_relation"] = snapshot_relation;
  j["verbs"] = verbs;
  return j;
}

nlohmann::ordered_json to_json(const CaptionClauses& c) {
  nlohmann::ordered_json j;
  j["main"] = c.main;
  j["summary"] = c.summary ? nlohmann::ordered_json(to_string(*c.summary)) : nlohmann::ordered_json();
  j["major_change"] = c.major_change ? nlohmann::ordered_json(to_string(*c.major_change)) : nlohmann::ordered_json();
  j["major_count"] = c.major_count;
  j["strongest_relation"] = nlohmann::ordered_json::array();
  for (const auto& r : c.strongest_relation) {
    j["strongest_relation"].push_back(
        {{"partner", r.partner}, {"change", r.change ? nlohmann::ordered_json(to_string(*r.change)) : nlohmann::ordered_json()}});
  }
  return j;
}

namespace {

template <class Enum, std::size_t N>
Enum enum_from(const std::string& s, const std::array<Enum, N>& values, const char* what) {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError(fmt::format("unknown {} '{}'", what, s));
}

}  // namespace

CaptionClauses caption_clauses_from_json(const nlohmann::json& j) {
  CaptionClauses c;
  c.main = j.at("main").get<std::string>();
  if (!j.at("summary").is_null()) {
    c.summary = enum_from(j["summary"].get<std::string>(),
                          std::array{Summary::expanded, Summary::contracted, Summary::constant}, "summary");
  }
  if (!j.at("major_change").is_null()) {
    c.major_change = enum_from(j["major_change"].get<std::string>(),
                               std::array{MajorChange::added, MajorChange::deleted, MajorChange::preserved},
                               "major change");
  }
  c.major_count = j.at("major_count").get<std::size_t>();
  for (const auto& r : j.at("strongest_relation")) {
    Relation rel{r.at("partner").get<std::string>(), std::nullopt};
    if (!r.at("change").is_null()) {
      rel.change = enum_from(r["change"].get<std::string>(),
                             std::array{RelationChange::obtained, RelationChange::lost, RelationChange::strengthened,
                                        RelationChange::weakened, RelationChange::maintained},
                             "relation change");
    }
    c.strongest_relation.push_back(rel);
  }
  return c;
}

}  // namespace dgc
