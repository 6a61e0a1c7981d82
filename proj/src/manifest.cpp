#include "bss/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bss/error.hpp"
#include "bss/parser.hpp"
#include "bss/transform.hpp"

namespace bss {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::SyntaxError, "manifest: " + what); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t get_size(const json& j, const char* key, std::size_t dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number_unsigned()) bad(std::string(key) + " must be a nonnegative integer");
  return j[key].get<std::size_t>();
}

std::string value_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad("values are strings or integers");
}

StructurePtr finite_structure(const json& j) {
  if (!j.contains("universe") || !j["universe"].is_array()) bad("finite structure needs a universe list");
  std::vector<std::string> uni;
  for (const auto& u : j["universe"]) uni.push_back(value_text(u));
  auto index_of = [&](const json& v) -> std::uint32_t {
    std::string t = value_text(v);
    for (std::size_t i = 0; i < uni.size(); ++i)
      if (uni[i] == t) return static_cast<std::uint32_t>(i);
    bad("'" + t + "' is not in the universe");
  };
  std::vector<std::uint32_t> consts;
  for (const auto& c : j.value("constants", json::array())) consts.push_back(index_of(c));
  std::vector<FunctionTable> fns;
  for (const auto& f : j.value("functions", json::array())) {
    FunctionTable t;
    t.arity = get_size(f, "arity", 1);
    for (const auto& v : f.value("table", json::array())) t.table.push_back(index_of(v));
    fns.push_back(std::move(t));
  }
  std::vector<RelationTable> rels;
  for (const auto& r : j.value("relations", json::array())) {
    if (r.value("identity", false)) {
      rels.push_back(FiniteStructure::identity_table(uni.size()));
      continue;
    }
    RelationTable t;
    t.arity = get_size(r, "arity", 1);
    for (const auto& v : r.value("table", json::array())) {
      if (v.is_boolean())
        t.table.push_back(v.get<bool>());
      else if (v.is_number_integer())
        t.table.push_back(v.get<int>() != 0);
      else
        bad("relation tables hold 0/1 or booleans");
    }
    rels.push_back(std::move(t));
  }
  try {
    return std::make_shared<FiniteStructure>(j.value("name", std::string("finite")), std::move(uni),
                                             std::move(consts), std::move(fns), std::move(rels));
  } catch (const Error& e) {
    bad(e.what());
  }
}

MachineKind kind_from(const std::string& s) {
  if (s == "deterministic") return MachineKind::Deterministic;
  if (s == "nd") return MachineKind::ND;
  if (s == "nu") return MachineKind::NuOracle;
  if (s == "oracle") return MachineKind::OracleQuery;
  bad("unknown kind '" + s + "'");
}

MachinePtr oracle_program(const json& o, const StructurePtr& s, const std::filesystem::path& base) {
  std::string text;
  if (o.contains("program")) {
    text = o["program"].get<std::string>();
  } else if (o.contains("program_file")) {
    auto p = base / o["program_file"].get<std::string>();
    try {
      text = read_file(p);
    } catch (const Error&) {
      throw Error(ErrorKind::UnresolvedOracle, "oracle program " + p.string() + " not found");
    }
  } else {
    throw Error(ErrorKind::UnresolvedOracle, "oracle needs program or program_file");
  }
  try {
    return share(make_machine(load_program(text, *s), s));
  } catch (const Error& e) {
    throw Error(ErrorKind::UnresolvedOracle, std::string("oracle program: ") + e.what());
  }
}

OracleSpec oracle_from(const json& o, const StructurePtr& s, const std::filesystem::path& base) {
  if (!o.is_object() || !o.contains("type")) bad("oracle needs a type");
  std::string type = o["type"].get<std::string>();
  std::optional<std::size_t> arity;
  if (o.contains("arity")) arity = get_size(o, "arity", 0);
  if (type == "explicit") {
    ExplicitSet q;
    for (const auto& t : o.value("tuples", json::array())) {
      Tuple tup;
      for (const auto& v : t) tup.push_back(s->parse_value(value_text(v)));
      q.tuples.insert(std::move(tup));
    }
    return q;
  }
  if (type == "full") return FullUniverse{};
  if (type == "decider") {
    auto m = oracle_program(o, s, base);
    if (arity) return FixedArityDecider{m, *arity};
    return Decider{m};
  }
  if (type == "semidecider") {
    auto m = oracle_program(o, s, base);
    if (o.value("from_decider", false)) m = share(decider_to_semidecider(*m));
    return SemiDecider{m, arity};
  }
  bad("unknown oracle type '" + type + "'");
}

}  // namespace

StructurePtr structure_by_name(std::string_view name) {
  if (name == "rationals" || name == "Q") return rationals();
  throw Error(ErrorKind::InvalidArgument, "unknown structure '" + std::string(name) + "'");
}

Manifest default_manifest() {
  Manifest m;
  m.structure = rationals();
  return m;
}

Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  Manifest m = default_manifest();
  try {
    if (j.contains("structure")) {
      const auto& s = j["structure"];
      m.structure = s.is_string() ? structure_by_name(s.get<std::string>()) : finite_structure(s);
    }
    if (j.contains("kind")) m.kind = kind_from(j["kind"].get<std::string>());
    if (j.contains("oracle_name")) m.oracle_name = j["oracle_name"].get<std::string>();
    if (j.contains("oracle")) m.oracle = oracle_from(j["oracle"], m.structure, base_dir);
    m.tapes = static_cast<std::uint32_t>(get_size(j, "tapes", 0));
    for (const auto& k : j.value("kappa", json::array())) m.kappa.push_back(k.get<std::uint32_t>());
    if (j.contains("budget")) {
      const auto& b = j["budget"];
      m.budget.max_steps = get_size(b, "max_steps", m.budget.max_steps);
      m.budget.max_dovetail_s = get_size(b, "max_dovetail_s", m.budget.max_dovetail_s);
      m.budget.max_guess_index = get_size(b, "max_guess_index", m.budget.max_guess_index);
      m.budget.max_branch_width = get_size(b, "max_branch_width", m.budget.max_branch_width);
      m.budget.max_guess_len = get_size(b, "max_guess_len", m.budget.max_guess_len);
    }
    if (j.contains("guesses")) {
      const auto& g = j["guesses"];
      std::string src = g.value("source", std::string("dovetail"));
      if (src == "dovetail") {
        m.guesses = EnumeratorDovetail{get_size(g, "max_len", 2), get_size(g, "max_index", 8)};
      } else if (src == "on-demand") {
        m.guesses = OnDemand{get_size(g, "max_cells", 4), get_size(g, "max_index", 8)};
      } else if (src == "explicit") {
        ExplicitTuples e;
        for (const auto& t : g.value("tuples", json::array())) {
          Tuple tup;
          for (const auto& v : t) tup.push_back(m.structure->parse_value(value_text(v)));
          e.tuples.push_back(std::move(tup));
        }
        m.guesses = std::move(e);
      } else {
        bad("unknown guess source '" + src + "'");
      }
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  if (m.kind && (*m.kind == MachineKind::NuOracle || *m.kind == MachineKind::OracleQuery) && !m.oracle)
    throw Error(ErrorKind::UnresolvedOracle, "kind needs an oracle binding");
  return m;
}

Manifest load_manifest(const std::filesystem::path& file) {
  return parse_manifest(read_file(file), file.parent_path());
}

Program load_program(std::string_view text, const Structure& s) {
  ExtProgram ext = parse_program(text);
  if (ext.has_pseudo()) return expand_pseudo(ext, &s);
  return ext.core();
}

MachineSpec bind(const Manifest& m, Program p) {
  MachineKind kind = MachineKind::Deterministic;
  if (m.kind)
    kind = *m.kind;
  else if (uses_nu(p))
    kind = MachineKind::NuOracle;
  else if (uses_oracle_branch(p))
    kind = MachineKind::OracleQuery;
  MachineSpec spec = make_machine(std::move(p), m.structure, kind, m.oracle, m.tapes, m.kappa);
  spec.oracle_name = m.oracle_name;
  return spec;
}

}  // namespace bss
