#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dgcomics/clustering.hpp"
#include "dgcomics/graph.hpp"

namespace dgc {

struct CharacterScore {
  std::string id;
  double change_score = 0.0;
  double total_link_weight = 0.0;
};

struct CharacterOptions {
  Aggregation agg = Aggregation::sum;
  DistanceConfig distance;
  Exec exec = Exec::parallel;
};

// Top-k nodes by ego-network change between the cluster's two children; ties by
// higher total link weight in the cluster, then by id. Leaf clusters rank by weight only.
std::vector<CharacterScore> main_characters(const ClusterRef& cluster, const DynamicGraph& dg, EgoLevel level, int k,
                                            const CharacterOptions& opts = {});
// Same, on explicit child graphs (child_before may be null for a single-snapshot cluster).
std::vector<CharacterScore> rank_characters(const Graph* child_before, const Graph& child_after, EgoLevel level, int k,
                                            const CharacterOptions& opts = {});

struct Supporters {
  // Alters of the mains with their total link weight to any main, strongest first.
  std::vector<std::pair<std::string, double>> ranked;
  std::set<std::string> visible;      // includes the mains
  std::set<std::string> highlighted;  // subset of the ranked alters
};

// visible = top ceil(top% * count) alters, highlighted = top ceil(highlight% * count).
Supporters supporting_characters(const Graph& g, const std::set<std::string>& mains, double top_percent,
                                 double highlight_percent);

enum class Summary { expanded, contracted, constant };
enum class MajorChange { added, deleted, preserved };
enum class RelationChange { obtained, lost, strengthened, weakened, maintained };

std::string_view to_string(Summary s);
std::string_view to_string(MajorChange m);
std::string_view to_string(RelationChange r);

struct Relation {
  std::string partner;
  std::optional<RelationChange> change;  // nullopt on single-snapshot panels

  auto operator<=>(const Relation&) const = default;
  bool operator==(const Relation&) const = default;
};

struct CaptionClauses {
  std::string main;
  std::optional<Summary> summary;           // only for two-child panels
  std::optional<MajorChange> major_change;  // only for two-child panels
  std::size_t major_count = 0;
  std::vector<Relation> strongest_relation;
};

// Clauses for one main over its ego networks before/after.
CaptionClauses transition_clauses(const std::string& main, const Graph& before_ego, const Graph& after_ego);
// Single time point: only the strongest relationship.
CaptionClauses snapshot_clauses(const std::string& main, const Graph& ego);

// Sentence templates with {slot} placeholders. Slots: main, span_start, span_end, span,
// summary_verb, count, change_verb, partner, relation_verb.
struct CaptionTemplates {
  std::string summary = "From {span_start} to {span_end}, {main}'s network {summary_verb}.";
  std::string major_change = "Most change around {main} came from {count} {change_verb} node(s).";
  std::string relation = "{main} {relation_verb} a relationship with {partner}.";
  std::string snapshot_relation = "In {span}, {main}'s strongest relationship: {partner}.";
  std::map<std::string, std::string> verbs = {
      {"expanded", "expanded"},       {"contracted", "contracted"}, {"constant", "stayed constant"},
      {"added", "added"},             {"deleted", "deleted"},       {"preserved", "preserved"},
      {"obtained", "obtained"},       {"lost", "lost"},             {"strengthened", "strengthened"},
      {"weakened", "weakened"},       {"maintained", "maintained"},
  };

  // Reads a JSON file with any subset of the fields above.
  static CaptionTemplates load(const std::string& path);
  static CaptionTemplates from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
};

struct PanelContext {
  std::vector<std::string> mains;
  std::optional<Graph> before;  // absent for a single-time-point panel
  Graph after;
  EgoLevel level = EgoLevel::one_and_half;
  std::string span_start;
  std::string span_end;
};

struct Caption {
  std::vector<CaptionClauses> clauses;  // one per main, in main order
  std::string text;
};

// Per-main clauses on ego-restricted graphs; identical clauses from different
// mains are rendered once with a combined subject.
Caption generate_caption(const PanelContext& ctx, const CaptionTemplates& templates = {});

std::string fill_template(const std::string& pattern, const std::map<std::string, std::string>& slots);
// "A", "A and B", "A, B and C".
std::string join_names(const std::vector<std::string>& names);

nlohmann::ordered_json to_json(const CaptionClauses& c);
CaptionClauses caption_clauses_from_json(const nlohmann::json& j);

}  // namespace dgc
