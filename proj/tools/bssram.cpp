// bssram: command-line front end for the machine library.
//
// Exit codes: 0 success, 1 diagnostics or errors, 2 undecided (no halt within
// budget, Unknown verdict, incomplete equivalence), 64 usage.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bss/error.hpp"
#include "bss/manifest.hpp"
#include "bss/nondet.hpp"
#include "bss/nu.hpp"
#include "bss/parser.hpp"
#include "bss/report.hpp"
#include "bss/transform.hpp"

using namespace bss;
using nlohmann::json;

namespace {

constexpr int kUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string manifest;
  std::string structure;
  std::string format = "text";
  std::optional<std::size_t> max_steps, max_dovetail, max_guess_index, max_branch_width;
  std::optional<std::string> guesses;
  std::optional<std::size_t> max_len, max_index, max_cells;

  bool json_out() const { return format == "json"; }
};

void add_common(CLI::App* app, Common& c, bool guessing = true) {
  app->add_option("--manifest", c.manifest, ".machine.json with structure, oracle and budget")
      ->check(CLI::ExistingFile);
  app->add_option("--structure", c.structure, "structure name (rationals)");
  app->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app->add_option("--max-steps", c.max_steps, "steps per branch");
  app->add_option("--max-dovetail", c.max_dovetail, "largest s for semi-decider dovetailing");
  app->add_option("--max-guess-index", c.max_guess_index, "values a full-universe oracle offers");
  app->add_option("--max-branch-width", c.max_branch_width, "live branches kept");
  if (guessing) {
    app->add_option("--guesses", c.guesses, "guess source: dovetail, on-demand")
        ->check(CLI::IsMember({"dovetail", "on-demand"}));
    app->add_option("--max-len", c.max_len, "longest guess tuple (dovetail)");
    app->add_option("--max-index", c.max_index, "values per guess cell");
    app->add_option("--max-cells", c.max_cells, "guess cells branched on (on-demand)");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Manifest manifest_for(const Common& c, const std::string& path) {
  Manifest m = path.empty() ? default_manifest() : load_manifest(path);
  if (!c.structure.empty()) m.structure = structure_by_name(c.structure);
  if (c.max_steps) m.budget.max_steps = *c.max_steps;
  if (c.max_dovetail) m.budget.max_dovetail_s = *c.max_dovetail;
  if (c.max_guess_index) m.budget.max_guess_index = *c.max_guess_index;
  if (c.max_branch_width) m.budget.max_branch_width = *c.max_branch_width;
  if (c.guesses == "on-demand" || (!c.guesses && c.max_cells)) {
    OnDemand o = std::holds_alternative<OnDemand>(m.guesses) ? std::get<OnDemand>(m.guesses) : OnDemand{};
    if (c.max_cells) o.max_cells = *c.max_cells;
    if (c.max_index) o.max_index = *c.max_index;
    m.guesses = o;
  } else if (c.guesses == "dovetail" || c.max_len || c.max_index) {
    EnumeratorDovetail d = std::holds_alternative<EnumeratorDovetail>(m.guesses)
                               ? std::get<EnumeratorDovetail>(m.guesses)
                               : EnumeratorDovetail{};
    if (c.max_len) d.max_len = *c.max_len;
    if (c.max_index) d.max_index = *c.max_index;
    m.guesses = d;
  }
  return m;
}

Manifest manifest_for(const Common& c) { return manifest_for(c, c.manifest); }

// A given kind overrides the manifest's when force is set, else only fills it in.
MachineSpec load_machine(const Manifest& m, const std::string& path, std::optional<MachineKind> kind = {},
                         bool force = false) {
  Program p = load_program(read_file(path), *m.structure);
  Manifest mm = m;
  if (kind && (force || !mm.kind)) mm.kind = kind;
  return bind(mm, std::move(p));
}

Tuple parse_input(const Structure& s, const std::string& text) {
  try {
    return parse_tuple(s, text);
  } catch (const Error& e) {
    throw UsageError("input " + text + ": " + e.what());
  }
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back({{"kind", to_string(d.kind)}, {"label", d.label}, {"message", d.message}});
  return out;
}

// Programs without nu or oracle instructions are enumerated as ND machines;
// a deterministic program is an ND program that reads no guesses.
std::optional<MachineKind> nd_unless_oracle(const Manifest& m, const std::string& path) {
  Program p = load_program(read_file(path), *m.structure);
  if (uses_nu(p) || uses_oracle_branch(p)) return std::nullopt;
  return MachineKind::ND;
}

// ---------------------------------------------------------------------------

int cmd_validate(const Common& c, const std::string& path) {
  Manifest m = manifest_for(c);
  MachineSpec spec;
  try {
    spec = load_machine(m, path);
  } catch (const ParseError& e) {
    if (c.json_out())
      print_json({{"valid", false}, {"error", e.what()}});
    else
      std::cout << path << ": " << e.what() << "\n";
    return 1;
  }
  auto ds = validate(spec);
  if (c.json_out()) {
    print_json({{"valid", ds.empty()},
                {"kind", to_string(spec.kind)},
                {"tapes", spec.tapes},
                {"instructions", spec.program.size()},
                {"diagnostics", diagnostics_json(ds)}});
  } else if (ds.empty()) {
    std::cout << "ok: " << to_string(spec.kind) << ", " << spec.tapes << " tape(s), " << spec.program.size()
              << " instructions\n";
  } else {
    std::cout << format_diagnostics(ds);
  }
  return ds.empty() ? 0 : 1;
}

int cmd_run(const Common& c, const std::string& path, const std::string& input, const std::string& guesses) {
  Manifest m = manifest_for(c);
  MachineSpec spec = load_machine(m, path);
  Tuple in = parse_input(*m.structure, input);
  RunResult r;
  if (!guesses.empty()) {
    r = run_with_guesses(spec, in, parse_input(*m.structure, guesses), m.budget);
  } else {
    std::unique_ptr<NuEvaluator> nu;
    if (spec.oracle) nu = make_evaluator(spec, m.budget);
    r = run(spec, in, m.budget, nu.get());
  }
  if (c.json_out()) {
    print_json(to_json(*m.structure, r));
  } else if (r.status == RunStatus::Halted) {
    std::cout << format_tuple(*m.structure, r.output) << "\n";
  } else {
    std::cout << to_string(r.status) << " after " << r.steps << " steps\n";
  }
  return r.status == RunStatus::Halted ? 0 : 2;
}

int cmd_trace(const Common& c, const std::string& path, const std::string& input, std::size_t limit) {
  Manifest m = manifest_for(c);
  MachineSpec spec = load_machine(m, path);
  std::unique_ptr<NuEvaluator> nu;
  if (spec.oracle) nu = make_evaluator(spec, m.budget);
  RunOptions o;
  o.capture_trace = true;
  o.trace_cap = limit;
  auto r = run(spec, parse_input(*m.structure, input), m.budget, nu.get(), o);
  if (c.json_out()) {
    json steps = json::array();
    for (const auto& cfg : r.trace) steps.push_back(to_json(*m.structure, cfg));
    print_json({{"trace", steps}, {"status", to_string(r.status)}});
  } else {
    for (const auto& cfg : r.trace) std::cout << format_configuration(*m.structure, cfg) << "\n";
    std::cout << to_string(r.status) << "\n";
  }
  return r.status == RunStatus::Halted ? 0 : 2;
}

int cmd_enumerate(const Common& c, const std::string& path, const std::string& input, bool semi) {
  Manifest m = manifest_for(c);
  MachineSpec spec = load_machine(m, path, nd_unless_oracle(m, path), true);
  Tuple in = parse_input(*m.structure, input);
  if (semi) {
    Verdict v = semidecides(spec, in, m.guesses, m.budget);
    if (c.json_out())
      print_json({{"verdict", to_string(v)}});
    else
      std::cout << to_string(v) << "\n";
    return v == Verdict::Accepted ? 0 : 2;
  }
  auto rs = enumerate_results(spec, in, m.guesses, m.budget);
  if (c.json_out()) {
    print_json(to_json(*m.structure, rs));
  } else {
    std::cout << format_outputs(*m.structure, rs) << "\n";
    std::cout << (rs.complete ? "complete" : "incomplete") << "; halted " << rs.halted << ", diverged "
              << rs.diverged << ", loop-certified " << rs.loop_certified << ", pruned " << rs.pruned << "\n";
  }
  return 0;
}

int cmd_nu_eval(const Common& c, const std::string& prefix) {
  Manifest m = manifest_for(c);
  if (!m.oracle) throw UsageError("nu-eval needs a manifest with an oracle");
  auto nu = make_evaluator(*m.oracle, m.structure, m.budget);
  auto choice = nu->choose(parse_input(*m.structure, prefix));
  std::set<Tuple> as_tuples;
  for (const auto& v : choice.candidates) as_tuples.insert(Tuple{v});
  if (c.json_out()) {
    json cand = json::array();
    for (const auto& v : choice.candidates) cand.push_back(m.structure->format_value(v));
    print_json({{"candidates", cand}, {"complete", choice.complete}});
  } else {
    std::cout << "{";
    for (std::size_t i = 0; i < choice.candidates.size(); ++i)
      std::cout << (i ? ", " : "") << m.structure->format_value(choice.candidates[i]);
    std::cout << "} (" << (choice.complete ? "complete" : "incomplete") << ")\n";
  }
  return 0;
}

struct CompileMode {
  bool nu_to_nd = false, nd_to_nu = false, flatten = false;
  std::string special;
};

int cmd_compile(const Common& c, const std::string& path, const CompileMode& mode, const std::string& out) {
  int chosen = mode.nu_to_nd + mode.nd_to_nu + mode.flatten + !mode.special.empty();
  if (chosen != 1) throw UsageError("compile needs exactly one of --nu-to-nd, --nd-to-nu, --special, --flatten");
  Manifest m = manifest_for(c);
  MachineSpec result;
  if (mode.nu_to_nd) {
    result = compile_nu_to_nd(load_machine(m, path));
  } else if (mode.nd_to_nu) {
    result = compile_nd_to_nu(load_machine(m, path, MachineKind::ND));
  } else if (mode.flatten) {
    result = flatten_tapes(load_machine(m, path, nd_unless_oracle(m, path)));
  } else {
    SpecialCase sc = mode.special == "a1" ? SpecialCase::A1 : mode.special == "a2" ? SpecialCase::A2 : SpecialCase::A3;
    result = compile_special(load_machine(m, path), sc);
  }
  std::string text = render_program(result.program) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + out);
    f << text;
    std::cerr << "wrote " << out << ": " << to_string(result.kind) << ", " << result.tapes << " tape(s), "
              << result.program.size() << " instructions\n";
  }
  return 0;
}

std::vector<Tuple> load_corpus(const Structure& s, const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  const json& list = j.is_object() ? j.at("inputs") : j;
  std::vector<Tuple> out;
  for (const auto& t : list) {
    if (t.is_string())
      out.push_back(parse_input(s, t.get<std::string>()));
    else
      out.push_back(tuple_from_json(s, t));
  }
  return out;
}

// Equivalent when every input yields the same outputs. The verdict is complete
// when the first machine's result sets are.
int cmd_check_equiv(const Common& c, const std::string& a, const std::string& b, const std::string& corpus,
                    const std::string& manifest_b) {
  Manifest ma = manifest_for(c);
  Manifest mb = manifest_for(c, manifest_b.empty() ? c.manifest : manifest_b);
  MachineSpec sa = load_machine(ma, a, nd_unless_oracle(ma, a), true);
  MachineSpec sb = load_machine(mb, b, nd_unless_oracle(mb, b), true);
  auto inputs = load_corpus(*ma.structure, corpus);
  bool equal = true, complete = true;
  json rows = json::array();
  for (const auto& in : inputs) {
    auto ra = enumerate_results(sa, in, ma.guesses, ma.budget);
    auto rb = enumerate_results(sb, in, mb.guesses, mb.budget);
    bool same = ra.outputs == rb.outputs;
    equal = equal && same;
    complete = complete && ra.complete;
    if (c.json_out()) {
      rows.push_back({{"input", tuple_to_json(*ma.structure, in)},
                      {"a", to_json(*ma.structure, ra)},
                      {"b", to_json(*mb.structure, rb)},
                      {"equal", same}});
    } else {
      std::cout << format_tuple(*ma.structure, in) << ": " << format_outputs(*ma.structure, ra)
                << (same ? " == " : " != ") << format_outputs(*mb.structure, rb) << "\n";
    }
  }
  std::string verdict = !equal ? "not equivalent" : complete ? "equivalent (complete)" : "equivalent (incomplete)";
  if (c.json_out())
    print_json({{"verdict", verdict}, {"inputs", rows}});
  else
    std::cout << verdict << "\n";
  return !equal ? 1 : complete ? 0 : 2;
}

int cmd_pair(const Common& c, const std::vector<std::uint64_t>& args, bool decode, bool plus) {
  json out;
  std::string text;
  if (decode) {
    if (args.size() != 1) throw UsageError("pair --decode takes one number");
    auto [m, s0] = plus ? cantor_decode_plus(args[0]) : cantor_decode(args[0]);
    out = {{"m", m}, {"s0", s0}};
    text = "(" + std::to_string(m) + ", " + std::to_string(s0) + ")";
  } else {
    if (args.size() != 2) throw UsageError("pair takes m and s0");
    auto s = cantor_encode(args[0], args[1]);
    out = {{"s", s}};
    text = std::to_string(s);
  }
  if (c.json_out())
    print_json(out);
  else
    std::cout << text << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BSS RAM machines: run, enumerate, evaluate nu, compile and cross-check"};
  app.require_subcommand(1);
  Common c;
  std::string program, program_b, input, guesses, prefix, out, corpus, manifest_b;
  std::size_t limit = 1000;
  bool semi = false, decode = false, plus = false;
  CompileMode mode;
  std::vector<std::uint64_t> numbers;

  auto* validate_cmd = app.add_subcommand("validate", "parse and validate a program");
  validate_cmd->add_option("program", program)->required()->check(CLI::ExistingFile);
  add_common(validate_cmd, c, false);

  auto* run_cmd = app.add_subcommand("run", "run deterministically (nu: first candidate)");
  run_cmd->add_option("program", program)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--input", input)->required();
  run_cmd->add_option("--with-guesses", guesses, "guess tuple for an ND machine");
  add_common(run_cmd, c, false);

  auto* trace_cmd = app.add_subcommand("trace", "print every configuration of a run");
  trace_cmd->add_option("program", program)->required()->check(CLI::ExistingFile);
  trace_cmd->add_option("--input", input)->required();
  trace_cmd->add_option("--limit", limit, "configurations kept");
  add_common(trace_cmd, c, false);

  auto* enum_cmd = app.add_subcommand("enumerate", "result set over the guess space");
  enum_cmd->add_option("program", program)->required()->check(CLI::ExistingFile);
  enum_cmd->add_option("--input", input)->required();
  enum_cmd->add_flag("--semidecide", semi, "only report whether some branch halts");
  add_common(enum_cmd, c);

  auto* nu_cmd = app.add_subcommand("nu-eval", "evaluate nu of the manifest's oracle on a prefix");
  nu_cmd->add_option("--prefix", prefix)->required();
  add_common(nu_cmd, c, false);

  auto* compile_cmd = app.add_subcommand("compile", "transform a machine");
  compile_cmd->add_option("program", program)->required()->check(CLI::ExistingFile);
  compile_cmd->add_flag("--nu-to-nd", mode.nu_to_nd, "nu machine with a semi-decider -> 3-tape ND machine");
  compile_cmd->add_flag("--nd-to-nu", mode.nd_to_nu, "ND machine -> nu machine over the full universe");
  compile_cmd->add_option("--special", mode.special, "special oracle case")->check(CLI::IsMember({"a1", "a2", "a3"}));
  compile_cmd->add_flag("--flatten", mode.flatten, "d tapes -> 1 tape");
  compile_cmd->add_option("-o,--output", out, "write the program here");
  add_common(compile_cmd, c, false);

  auto* eq_cmd = app.add_subcommand("check-equiv", "compare result sets of two machines");
  eq_cmd->add_option("a", program)->required()->check(CLI::ExistingFile);
  eq_cmd->add_option("b", program_b)->required()->check(CLI::ExistingFile);
  eq_cmd->add_option("--inputs", corpus, "corpus.json: list of input tuples")->required()->check(CLI::ExistingFile);
  eq_cmd->add_option("--manifest-b", manifest_b, "manifest for the second machine")->check(CLI::ExistingFile);
  add_common(eq_cmd, c);

  auto* pair_cmd = app.add_subcommand("pair", "pairing function: encode m s0, or --decode s");
  pair_cmd->add_option("numbers", numbers)->required();
  pair_cmd->add_flag("--decode", decode);
  pair_cmd->add_flag("--plus", plus, "with --decode: zero components give (1, 1)");
  add_common(pair_cmd, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    if (*validate_cmd) return cmd_validate(c, program);
    if (*run_cmd) return cmd_run(c, program, input, guesses);
    if (*trace_cmd) return cmd_trace(c, program, input, limit);
    if (*enum_cmd) return cmd_enumerate(c, program, input, semi);
    if (*nu_cmd) return cmd_nu_eval(c, prefix);
    if (*compile_cmd) return cmd_compile(c, program, mode, out);
    if (*eq_cmd) return cmd_check_equiv(c, program, program_b, corpus, manifest_b);
    if (*pair_cmd) return cmd_pair(c, numbers, decode, plus);
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return 1;
  }
  return kUsage;
}
