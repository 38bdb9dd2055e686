#include "levels/io.hpp"

#include <map>

#include "levels/config.hpp"

namespace levels::io {

using logic::Bits;
using logic::EpsilonStructure;
using logic::KripkeStructure;
using logic::StageStructure;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError("json: " + msg);
}

std::vector<std::string> names(const json& j, const char* field) {
  require(j.contains(field) && j.at(field).is_array(), std::string("missing array \"") + field + "\"");
  std::vector<std::string> out;
  for (const json& x : j.at(field)) {
    require(x.is_string(), std::string("\"") + field + "\" must hold strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::map<std::string, std::size_t> index_of(const std::vector<std::string>& labels, const char* what) {
  std::map<std::string, std::size_t> ix;
  for (std::size_t i = 0; i < labels.size(); ++i)
    require(ix.emplace(labels[i], i).second, std::string("duplicate ") + what + " \"" + labels[i] + "\"");
  return ix;
}

std::size_t lookup(const std::map<std::string, std::size_t>& ix, const json& name, const char* what) {
  require(name.is_string(), std::string(what) + " names must be strings");
  auto it = ix.find(name.get<std::string>());
  require(it != ix.end(), std::string("unknown ") + what + " \"" + name.get<std::string>() + "\"");
  return it->second;
}

json label_list(const Bits& b, const std::vector<std::string>& labels) {
  json out = json::array();
  for (std::size_t i : logic::indices(b)) out.push_back(labels[i]);
  return out;
}

// rows[r] lists the column labels set in row r; empty rows are omitted.
json relation(const std::vector<Bits>& rows, const std::vector<std::string>& row_labels,
              const std::vector<std::string>& col_labels) {
  json out = json::object();
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (rows[r].any()) out[row_labels[r]] = label_list(rows[r], col_labels);
  return out;
}

std::vector<Bits> relation_from(const json& j, const char* field, const std::map<std::string, std::size_t>& rows,
                                const std::map<std::string, std::size_t>& cols, const char* what) {
  std::vector<Bits> out(rows.size(), Bits(cols.size()));
  if (!j.contains(field)) return out;
  require(j.at(field).is_object(), std::string("\"") + field + "\" must be an object");
  for (const auto& [k, v] : j.at(field).items()) {
    const std::size_t r = lookup(rows, json(k), what);
    require(v.is_array(), std::string("\"") + field + "\" entries must be arrays");
    for (const json& x : v) out[r].set(lookup(cols, x, what));
  }
  return out;
}

Bits subset_from(const json& j, const char* field, const std::map<std::string, std::size_t>& ix) {
  Bits b(ix.size());
  require(j.at(field).is_array(), std::string("\"") + field + "\" must be an array");
  for (const json& x : j.at(field)) b.set(lookup(ix, x, "element"));
  return b;
}

json epsilon_json(const EpsilonStructure& e) {
  json j{{"kind", "epsilon"}, {"elements", e.labels}, {"mem", relation(e.members, e.labels, e.labels)}};
  if (e.below) j["below"] = relation(*e.below, e.labels, e.labels);
  return j;
}

json stage_json(const StageStructure& s) {
  json j{{"kind", "stage"},
         {"sets", s.set_labels},
         {"stages", s.stage_labels},
         {"mem", relation(s.members, s.set_labels, s.set_labels)},
         {"before", relation(s.before, s.stage_labels, s.stage_labels)},
         {"at", relation(s.found_at, s.stage_labels, s.set_labels)}};
  if (s.low) j["low"] = label_list(*s.low, s.set_labels);
  if (s.high) j["high"] = label_list(*s.high, s.set_labels);
  return j;
}

json kripke_json(const KripkeStructure& k) {
  json acc = json::array();
  for (std::size_t w = 0; w < k.worlds(); ++w)
    for (std::size_t v : logic::indices(k.before[w])) acc.push_back({k.world_labels[v], k.world_labels[w]});
  std::sort(acc.begin(), acc.end());
  json domains = json::object(), mem = json::object();
  for (std::size_t w = 0; w < k.worlds(); ++w) {
    domains[k.world_labels[w]] = label_list(k.domain[w], k.labels);
    mem[k.world_labels[w]] = relation(k.members[w], k.labels, k.labels);
  }
  return json{{"kind", "kripke"}, {"worlds", k.world_labels}, {"acc", acc},   {"elements", k.labels},
              {"domains", domains}, {"mem", mem}};
}

}  // namespace

json to_json(HFSet a) {
  json out = json::array();
  for (HFSet x : a.members()) out.push_back(to_json(x));
  return out;
}

HFSet hf_from_json(const json& j) {
  require(j.is_array(), "a pure set is an array");
  std::vector<HFSet> kids;
  for (const json& x : j) kids.push_back(hf_from_json(x));
  return HFSet::of(std::move(kids));
}

json to_json(CHFSet a) {
  json kids = json::array();
  for (CHFSet x : a.children()) kids.push_back(to_json(x));
  return a.is_low() ? kids : json{{"co", kids}};
}

CHFSet chf_from_json(const json& j) {
  const bool high = j.is_object();
  require(j.is_array() || (high && j.size() == 1 && j.contains("co") && j.at("co").is_array()),
          "a complemented set is an array or {\"co\": array}");
  std::vector<CHFSet> kids;
  for (const json& x : high ? j.at("co") : j) kids.push_back(chf_from_json(x));
  return CHFSet::make(high ? Polarity::High : Polarity::Low, std::move(kids));
}

json to_json(const logic::Structure& s) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, EpsilonStructure>) return epsilon_json(x);
        else if constexpr (std::is_same_v<T, StageStructure>) return stage_json(x);
        else return kripke_json(x);
      },
      s);
}

logic::Structure structure_from_json(const json& j) {
  require(j.is_object() && j.contains("kind") && j.at("kind").is_string(), "structure needs a \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "epsilon") {
    EpsilonStructure e;
    e.labels = names(j, "elements");
    const auto ix = index_of(e.labels, "element");
    e.members = relation_from(j, "mem", ix, ix, "element");
    if (j.contains("below")) e.below = relation_from(j, "below", ix, ix, "element");
    logic::validate(e);
    return e;
  }
  if (kind == "stage") {
    StageStructure s;
    s.set_labels = names(j, "sets");
    s.stage_labels = names(j, "stages");
    const auto sx = index_of(s.set_labels, "set"), tx = index_of(s.stage_labels, "stage");
    s.members = relation_from(j, "mem", sx, sx, "set");
    s.before = relation_from(j, "before", tx, tx, "stage");
    // found_at is keyed by stage and lists sets.
    s.found_at = std::vector<Bits>(tx.size(), Bits(sx.size()));
    if (j.contains("at")) {
      require(j.at("at").is_object(), "\"at\" must be an object");
      for (const auto& [k, v] : j.at("at").items()) {
        const std::size_t t = lookup(tx, json(k), "stage");
        require(v.is_array(), "\"at\" entries must be arrays");
        for (const json& x : v) s.found_at[t].set(lookup(sx, x, "set"));
      }
    }
    if (j.contains("low")) s.low = subset_from(j, "low", sx);
    if (j.contains("high")) s.high = subset_from(j, "high", sx);
    logic::validate(s);
    return s;
  }
  if (kind == "kripke") {
    KripkeStructure k;
    k.world_labels = names(j, "worlds");
    k.labels = names(j, "elements");
    const auto wx = index_of(k.world_labels, "world"), ex = index_of(k.labels, "element");
    k.before = std::vector<Bits>(wx.size(), Bits(wx.size()));
    require(j.contains("acc") && j.at("acc").is_array(), "missing array \"acc\"");
    for (const json& p : j.at("acc")) {
      require(p.is_array() && p.size() == 2, "\"acc\" holds [earlier, later] pairs");
      k.before[lookup(wx, p[1], "world")].set(lookup(wx, p[0], "world"));
    }
    k.domain = relation_from(j, "domains", wx, ex, "world or element");
    k.members.assign(wx.size(), std::vector<Bits>(ex.size(), Bits(ex.size())));
    if (j.contains("mem")) {
      require(j.at("mem").is_object(), "\"mem\" must be an object");
      for (const auto& [w, rel] : j.at("mem").items()) {
        const std::size_t wi = lookup(wx, json(w), "world");
        k.members[wi] = relation_from(json{{"mem", rel}}, "mem", ex, ex, "element");
      }
    }
    logic::validate(k);
    return k;
  }
  throw DomainError("json: unknown structure kind \"" + kind + "\"");
}

json to_json(const models::CheckReport& r) {
  json verdicts = json::array();
  for (const models::Verdict& v : r.verdicts) {
    json jv{{"axiom", v.axiom}, {"holds", v.holds}};
    if (v.world) jv["world"] = *v.world;
    if (!v.detail.empty()) jv["witness"] = v.detail;
    verdicts.push_back(std::move(jv));
  }
  return json{{"suite", r.suite}, {"all_hold", r.all_hold()}, {"informative", r.informative}, {"verdicts", verdicts}};
}

}  // namespace levels::io
