#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bss/builder.hpp"
#include "bss/parser.hpp"

namespace bss::testing {

const char* const kProg1 = "1: Z1 := f3^2(Z1,Z1); 2: stop.";
const char* const kChiQ1 =
    "1: Z3 := f3^2(Z2,Z2); 2: Z2 := Z1; 3: Z1 := c2^0; 4: I2 := I2 + 1;"
    " 5: if I1 = I2 then goto 6 else goto 8; 6: if r1^2(Z2,Z3) then goto 7 else goto 8;"
    " 7: Z1 := c1^0; 8: I1 := 1; 9: stop.";
const char* const kQ2Decider =
    "1: Z4 := f3^2(Z3,Z3); 2: Z3 := f3^2(Z2,Z2); 3: Z5 := Z1; 4: Z1 := c2^0; 5: I2 := I2 + 1;"
    " 6: I2 := I2 + 1; 7: if I1 = I2 then goto 8 else goto 11; 8: if r1^2(Z5,Z3) then goto 9 else goto 11;"
    " 9: if r1^2(Z2,Z4) then goto 10 else goto 11; 10: Z1 := c1^0; 11: I1 := 1; 12: stop.";
const char* const kNdRoot4 =
    "1: if I1 = I2 then goto 2 else goto 1; 2: Z3 := f3^2(Z2,Z2); 3: if r1^2(Z1,Z3) then goto 4 else goto 3;"
    " 4: Z3 := f3^2(Z4,Z4); 5: if r1^2(Z2,Z3) then goto 6 else goto 5; 6: Z1 := Z2; 7: stop.";
const char* const kNdRoot =
    "1: if I1 = I2 then goto 2 else goto 1; 2: Z3 := f3^2(Z2,Z2); 3: if r1^2(Z1,Z3) then goto 4 else goto 3;"
    " 4: Z1 := Z2; 5: stop.";
const char* const kProg2 = "1: if I1 = I2 then goto 2 else goto 1; 2: Z1 := nu[O](Z1,...,Z[I1]); 3: stop.";
const char* const kMPrime = "1: Z1 := nu[O](Z1,...,Z[I1]); 2: stop.";

MachineSpec machine(const char* text, StructurePtr s, MachineKind kind, std::optional<OracleSpec> oracle) {
  return make_machine(parse_core(text), std::move(s), kind, std::move(oracle));
}

std::vector<Rational> grid(int k) {
  std::set<Rational> seen;
  for (int q = 1; q <= k; ++q)
    for (int p = -k; p <= k; ++p) seen.insert(Rational(p, q));
  return {seen.begin(), seen.end()};
}

namespace {
std::optional<std::int64_t> isqrt(std::int64_t v) {
  if (v < 0) return std::nullopt;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = std::max<std::int64_t>(0, r - 2); c <= r + 2; ++c)
    if (c * c == v) return c;
  return std::nullopt;
}
}  // namespace

std::optional<Rational> exact_sqrt(const Rational& r) {
  auto n = isqrt(r.num());
  auto d = isqrt(r.den());
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

std::set<Tuple> q2_table(const std::vector<Rational>& g) {
  std::set<Tuple> q;
  for (const auto& y : g) {
    Rational y2 = y * y;
    q.insert(Tuple{Value(y2 * y2), Value(y2), Value(y)});
  }
  return q;
}

std::set<Value> nu_brute(const std::set<Tuple>& q, const Tuple& prefix) {
  std::set<Value> out;
  for (const auto& t : q) {
    if (t.size() <= prefix.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < prefix.size() && match; ++i) match = t[i] == prefix[i];
    if (match) out.insert(t[prefix.size()]);
  }
  return out;
}

std::pair<std::uint64_t, std::uint64_t> pairing_brute(std::uint64_t s) {
  for (std::uint64_t m = 0;; ++m)
    for (std::uint64_t s0 = 0; s0 <= s; ++s0) {
      std::uint64_t v = ((m + s0) * (m + s0) + 3 * s0 + m) / 2;
      if (v == s) return {m, s0};
      if (m > s) return {0, 0};
    }
}

StructurePtr random_finite(Rng& rng, std::size_t u) {
  std::vector<std::string> names;
  std::vector<std::uint32_t> consts;
  for (std::size_t i = 0; i < u; ++i) {
    names.push_back("e" + std::to_string(i));
    consts.push_back(static_cast<std::uint32_t>(i));
  }
  std::uniform_int_distribution<std::uint32_t> el(0, static_cast<std::uint32_t>(u - 1));
  FunctionTable f1{2, {}}, f2{1, {}};
  for (std::size_t i = 0; i < u * u; ++i) f1.table.push_back(el(rng));
  for (std::size_t i = 0; i < u; ++i) f2.table.push_back(el(rng));
  RelationTable r2{1, {}, false};
  for (std::size_t i = 0; i < u; ++i) r2.table.push_back(static_cast<char>(rng() % 2));
  return std::make_shared<FiniteStructure>("fin" + std::to_string(u), names, consts,
                                           std::vector<FunctionTable>{f1, f2},
                                           std::vector<RelationTable>{FiniteStructure::identity_table(u), r2});
}

namespace {

struct Trie {
  bool terminal = false;
  std::vector<std::pair<Value, std::size_t>> kids;
};

// Walks a trie of Q: a node at depth p compares Z_{p+1} against its children.
MachineSpec table_machine(StructurePtr s, const std::set<Tuple>& q, bool decide) {
  std::vector<Trie> t(1);
  std::size_t depth = 0;
  for (const auto& tup : q) {
    std::size_t node = 0;
    for (const auto& v : tup) {
      auto it = std::find_if(t[node].kids.begin(), t[node].kids.end(), [&](auto& k) { return k.first == v; });
      if (it == t[node].kids.end()) {
        t.push_back({});
        t[node].kids.emplace_back(v, t.size() - 1);
        node = t.size() - 1;
      } else {
        node = it->second;
      }
    }
    t[node].terminal = true;
    depth = std::max(depth, tup.size());
  }
  const std::uint32_t tmp = static_cast<std::uint32_t>(depth + 2);
  const std::size_t id = *s->identity_relation();
  Builder b;
  Builder::Sym accept = b.label(), reject = b.label();
  std::vector<Builder::Sym> at(t.size());
  std::vector<std::size_t> level(t.size(), 0);
  for (auto& a : at) a = b.label();
  for (std::size_t node = 0; node < t.size(); ++node) {
    for (auto [v, kid] : t[node].kids) level[kid] = level[node] + 1;
    b.bind(at[node]);
    // The query is exhausted when I1 = level.
    Builder::Sym go = b.label();
    if (level[node] == 0) {
      // Inputs are nonempty.
      b.jump(go);
    } else {
      b.emit(IndexReset{IReg{1, 3}});
      for (std::size_t k = 1; k < level[node]; ++k) b.emit(IndexIncr{IReg{1, 3}});
      b.branch_eq(IReg{1, 1}, IReg{1, 3}, t[node].terminal ? accept : reject, go);
    }
    b.bind(go);
    const std::uint32_t z = static_cast<std::uint32_t>(level[node] + 1);
    for (auto [v, kid] : t[node].kids) {
      Builder::Sym next = b.label();
      b.emit(SetConst{v.element().index + 1, ZReg{1, tmp}});
      b.emit(RelBranch{id, {ZReg{1, z}, ZReg{1, tmp}}, at[kid], next});
      b.bind(next);
    }
    b.jump(reject);
  }
  if (decide) {
    Builder::Sym out = b.label();
    b.bind(accept);
    b.emit(SetConst{1, ZReg{1, 1}});
    b.jump(out);
    b.bind(reject);
    b.emit(SetConst{2, ZReg{1, 1}});
    b.bind(out);
    b.reset(IReg{1, 1});
    b.stop();
  } else {
    b.bind(reject);
    b.jump(reject);
    b.bind(accept);
    b.stop();
  }
  return make_machine(b.finish(), std::move(s));
}

}  // namespace

MachineSpec table_decider(StructurePtr s, const std::set<Tuple>& q) { return table_machine(std::move(s), q, true); }
MachineSpec table_semidecider(StructurePtr s, const std::set<Tuple>& q) {
  return table_machine(std::move(s), q, false);
}

std::set<Tuple> random_table(Rng& rng, const Structure& s, std::size_t min_len, std::size_t max_len,
                             std::size_t count) {
  const std::size_t u = *s.universe_size();
  std::set<Tuple> q;
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  for (std::size_t k = 0; k < count; ++k) {
    Tuple t;
    std::size_t l = len(rng);
    for (std::size_t i = 0; i < l; ++i) t.push_back(*s.enumerate(rng() % u));
    q.insert(std::move(t));
  }
  return q;
}

Tuple random_input(Rng& rng, const Structure& s, std::size_t len) {
  const std::size_t u = *s.universe_size();
  Tuple t;
  for (std::size_t i = 0; i < len; ++i) t.push_back(*s.enumerate(rng() % u));
  return t;
}

namespace {

Instruction random_plain(Rng& rng, const Structure& s, Label here, Label last, std::uint32_t zmax) {
  auto z = [&] { return ZReg{1, static_cast<std::uint32_t>(1 + rng() % zmax)}; };
  auto fwd = [&] { return static_cast<Label>(here + 1 + rng() % (last - here)); };
  const auto& sig = s.signature();
  switch (rng() % 5) {
    case 0: {
      std::size_t fn = 1 + rng() % sig.function_arities.size();
      Compute c{fn, z(), {}};
      for (std::size_t a = 0; a < sig.function_arities[fn - 1]; ++a) c.args.push_back(z());
      return c;
    }
    case 1: return SetConst{1 + rng() % sig.constants, z()};
    case 2: return Copy{ZAddr::direct(z()), ZAddr::direct(z())};
    default: {
      std::size_t r = 1 + rng() % sig.relation_arities.size();
      RelBranch b{r, {}, fwd(), fwd()};
      for (std::size_t a = 0; a < sig.relation_arities[r - 1]; ++a) b.args.push_back(z());
      return b;
    }
  }
}

}  // namespace

Program random_nu_program(Rng& rng, const Structure& s, const RandomNuOptions& o) {
  const std::size_t len = o.body + o.nu_count + 1;
  std::vector<bool> is_nu(len - 1, false);
  for (std::size_t k = 0; k < o.nu_count; ++k) {
    std::size_t at;
    do at = rng() % (len - 1);
    while (is_nu[at]);
    is_nu[at] = true;
  }
  Program p;
  for (std::size_t i = 0; i + 1 < len; ++i) {
    const Label here = static_cast<Label>(i + 1);
    if (is_nu[i])
      p.code.push_back(NuAssign{ZReg{1, static_cast<std::uint32_t>(1 + rng() % 3)}, 1, "O"});
    else
      p.code.push_back(random_plain(rng, s, here, static_cast<Label>(len), 3));
  }
  p.code.push_back(Stop{});
  return p;
}

Program random_nd_program(Rng& rng, const Structure& s, std::size_t body) {
  const Label len = static_cast<Label>(body + 1);
  Program p;
  for (Label here = 1; here < len; ++here) {
    switch (rng() % 6) {
      case 0: p.code.push_back(IndexIncr{IReg{1, 2}}); break;
      case 1: p.code.push_back(Copy{ZAddr::direct(ZReg{1, static_cast<std::uint32_t>(1 + rng() % 2)}), ZAddr::via(IReg{1, 2})}); break;
      case 2: {
        // Guess check with a spin on failure.
        ZReg a{1, static_cast<std::uint32_t>(1 + rng() % 4)};
        ZReg c{1, static_cast<std::uint32_t>(1 + rng() % 4)};
        p.code.push_back(RelBranch{1, {a, c}, static_cast<Label>(here + 1), here});
        break;
      }
      default: p.code.push_back(random_plain(rng, s, here, len, 4));
    }
  }
  p.code.push_back(Stop{});
  return p;
}

}  // namespace bss::testing

#include "bss/nu.hpp"
#include "bss/transform.hpp"

namespace bss::testing {

const char* to_string(MacroForm f) {
  switch (f) {
    case MacroForm::Goto: return "goto";
    case MacroForm::Copy: return "copy";
    case MacroForm::Dispatch: return "dispatch";
    case MacroForm::ForBounded: return "for-bounded";
    case MacroForm::ForUnbounded: return "for-unbounded";
    case MacroForm::Ca1: return "ca1";
    case MacroForm::Ca2: return "ca2";
    case MacroForm::Ca1Plus: return "ca1plus";
    case MacroForm::Ca2Plus: return "ca2plus";
    case MacroForm::Add: return "add";
    case MacroForm::ISet: return "iset";
    case MacroForm::Init: return "init";
    case MacroForm::InitGuess: return "initguess";
    case MacroForm::Guard: return "guard";
    case MacroForm::IfConst: return "if-const";
    case MacroForm::Nu: return "nu";
  }
  return "?";
}

MacroContext macro_context(Rng& rng, MacroForm form) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); };
  auto I = [](std::uint32_t t, std::uint32_t j) { return IReg{t, j}; };
  MacroContext c;
  const bool two_tapes = form == MacroForm::Copy || form == MacroForm::Init;
  std::vector<ExtInstruction> setup;
  // Registers I1.2..I1.6 (and I2.2, I2.3) start at random small values.
  const std::uint64_t big = (form >= MacroForm::Ca1 && form <= MacroForm::Ca2Plus) ? 40 : 5;
  for (std::uint32_t j = 2; j <= 6; ++j)
    for (std::uint64_t k = pick(0, big); k > 0; --k) setup.push_back(Instruction{IndexIncr{I(1, j)}});
  if (two_tapes)
    for (std::uint32_t j = 2; j <= 3; ++j)
      for (std::uint64_t k = pick(0, 3); k > 0; --k) setup.push_back(Instruction{IndexIncr{I(2, j)}});
  const std::size_t nz = pick(0, 3);
  for (std::size_t k = 0; k < nz; ++k) {
    ZReg z{1, static_cast<std::uint32_t>(pick(1, 5))};
    if (rng() % 2)
      setup.push_back(Instruction{SetConst{pick(1, 2), z}});
    else
      setup.push_back(Instruction{Compute{pick(1, 3), z, {ZReg{1, 1}, ZReg{1, static_cast<std::uint32_t>(pick(1, 3))}}}});
  }
  const Label here = static_cast<Label>(setup.size() + 1);
  const std::size_t post = 3;
  const Label last = static_cast<Label>(here + post + 1);
  auto fwd = [&] { return static_cast<Label>(pick(here + 1, last)); };

  Pseudo ps = PGoto{};
  switch (form) {
    case MacroForm::Goto: ps = PGoto{fwd()}; break;
    case MacroForm::Copy: {
      std::uint32_t dt = static_cast<std::uint32_t>(pick(1, 2));
      IReg dst = dt == 1 ? I(1, 5) : I(2, static_cast<std::uint32_t>(pick(2, 3)));
      ps = PCopy{dt, dst, 1, rng() % 2 ? I(1, 1) : I(1, 3), I(1, 4)};
      break;
    }
    case MacroForm::Dispatch: {
      PDispatch d;
      d.sel = I(1, 2);
      d.aux = I(1, 6);
      for (std::uint64_t key = 1; key <= 6; ++key)
        if (rng() % 2) d.cases.emplace_back(key, fwd());
      d.otherwise = fwd();
      ps = d;
      break;
    }
    case MacroForm::ForBounded:
    case MacroForm::ForUnbounded: {
      PFor f;
      f.counter = I(1, 5);
      if (form == MacroForm::ForBounded) f.bound = I(1, 6);
      std::size_t nb = pick(1, 3);
      for (std::size_t k = 0; k < nb; ++k) {
        switch (rng() % 4) {
          case 0: f.body.push_back(IndexIncr{I(1, static_cast<std::uint32_t>(pick(2, 3)))}); break;
          case 1: f.body.push_back(SetConst{pick(1, 2), ZReg{1, static_cast<std::uint32_t>(pick(1, 4))}}); break;
          case 2:
            f.body.push_back(Compute{pick(1, 3), ZReg{1, 2}, {ZReg{1, 2}, ZReg{1, 1}}});
            break;
          default:
            f.body.push_back(RelBranch{1, {ZReg{1, 1}, ZReg{1, 2}}, rng() % 3 ? kContinue : kNextLine,
                                       rng() % 4 ? kContinue : fwd()});
        }
      }
      if (form == MacroForm::ForUnbounded)
        f.body.push_back(IndexBranch{I(1, 5), I(1, 6), kNextLine, kContinue});
      ps = f;
      break;
    }
    case MacroForm::Ca1:
    case MacroForm::Ca2:
    case MacroForm::Ca1Plus:
    case MacroForm::Ca2Plus: {
      bool plus = form == MacroForm::Ca1Plus || form == MacroForm::Ca2Plus;
      int which = (form == MacroForm::Ca1 || form == MacroForm::Ca1Plus) ? 1 : 2;
      ps = PCa{which, plus, I(1, static_cast<std::uint32_t>(pick(2, 4))), I(1, static_cast<std::uint32_t>(pick(2, 5)))};
      break;
    }
    case MacroForm::Add:
      ps = PAdd{I(1, static_cast<std::uint32_t>(pick(2, 4))), I(1, static_cast<std::uint32_t>(pick(1, 4))),
                I(1, static_cast<std::uint32_t>(pick(1, 4)))};
      break;
    case MacroForm::ISet:
      if (rng() % 2)
        ps = PISet{I(1, static_cast<std::uint32_t>(pick(2, 4))), I(1, static_cast<std::uint32_t>(pick(1, 6)))};
      else
        ps = PISet{I(1, static_cast<std::uint32_t>(pick(2, 4))), std::uint64_t{pick(1, 7)}};
      break;
    case MacroForm::Init: {
      std::uint32_t t = static_cast<std::uint32_t>(pick(1, 2));
      ps = PInit{t, I(t, 2), I(t, 3)};
      break;
    }
    case MacroForm::InitGuess: ps = PInitGuess{I(1, 2), I(1, 3), I(1, 4), "O"}; break;
    case MacroForm::Guard: ps = PGuard{I(1, 2), I(1, 3), fwd()}; break;
    case MacroForm::IfConst:
      ps = PIfConst{ZReg{1, static_cast<std::uint32_t>(pick(1, 3))}, pick(1, 2), fwd(), fwd()};
      break;
    case MacroForm::Nu:
      ps = PNu{ZReg{1, static_cast<std::uint32_t>(pick(1, 3))}, static_cast<std::uint32_t>(pick(1, 3)), "O"};
      break;
  }
  if (form == MacroForm::InitGuess || form == MacroForm::Nu) {
    c.kind = MachineKind::NuOracle;
    if (rng() % 2) {
      c.oracle = FullUniverse{};
    } else {
      ExplicitSet q;
      for (int k = 0; k < 6; ++k) {
        Tuple t;
        for (std::size_t i = pick(1, 4); i > 0; --i) t.push_back(Rational(static_cast<std::int64_t>(pick(0, 3))));
        q.tuples.insert(t);
      }
      c.oracle = q;
    }
  }

  for (auto& s : setup) c.program.lines.push_back({std::move(s), 0, 0});
  c.program.lines.push_back({ps, 0, 0});
  for (std::size_t k = 0; k < post; ++k) {
    Label l = static_cast<Label>(here + 1 + k);
    Instruction ins;
    switch (rng() % 3) {
      case 0: ins = IndexIncr{I(1, static_cast<std::uint32_t>(pick(2, 4)))}; break;
      case 1: ins = SetConst{pick(1, 2), ZReg{1, static_cast<std::uint32_t>(pick(1, 3))}}; break;
      default: ins = IndexBranch{I(1, 2), I(1, 3), static_cast<Label>(pick(l + 1, last)), static_cast<Label>(pick(l + 1, last))};
    }
    c.program.lines.push_back({ins, 0, 0});
  }
  c.program.lines.push_back({Instruction{Stop{}}, 0, 0});
  const std::size_t n = pick(1, 3);
  for (std::size_t k = 0; k < n; ++k)
    c.input.push_back(Rational(static_cast<std::int64_t>(pick(0, 6)) - 3, static_cast<std::int64_t>(pick(1, 2))));
  return c;
}

std::string check_macro(const MacroContext& c, std::size_t max_steps) {
  auto q = rationals();
  MachineSpec host = reference_machine(c.program, q, c.kind, c.oracle);
  Expansion e = expand_pseudo_map(c.program, q.get());
  MachineSpec flat = make_machine(e.program, q, c.kind, c.oracle, host.tapes);
  auto diags = validate(flat);
  if (!diags.empty()) return "expanded program invalid: " + format_diagnostics(diags);
  Budget b;
  b.max_guess_index = 4;
  std::unique_ptr<NuEvaluator> nu;
  if (c.oracle) nu = make_evaluator(*c.oracle, q, b);
  auto ref = run_reference(c.program, host, input_config(host, c.input), max_steps, nu.get());
  auto exp = run_expanded(e, flat, input_config(flat, c.input), max_steps * 64, nu.get());
  auto settled = [](RunStatus s) { return s == RunStatus::Halted; };
  if (settled(ref.status) != settled(exp.status))
    return std::string("status ") + bss::to_string(ref.status) + " vs " + bss::to_string(exp.status);
  if (ref.status == RunStatus::Halted) {
    // The @if scratch cell is not a host cell, even inside the output window.
    Tuple a = ref.output, b2 = exp.output;
    std::uint32_t zs = e.z_scratch.empty() ? 0 : e.z_scratch[0];
    if (zs && zs <= a.size() && zs <= b2.size()) a[zs - 1] = b2[zs - 1];
    if (a != b2) return "outputs differ";
  }
  std::size_t n = std::min(ref.entries.size(), exp.entries.size());
  if (ref.status == RunStatus::Halted && ref.entries.size() != exp.entries.size())
    return "entry counts " + std::to_string(ref.entries.size()) + " vs " + std::to_string(exp.entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto a = project(ref.entries[i], ref.entries[i].label, e.host_kappa, e.z_scratch);
    auto b2 = project(exp.entries[i], exp.entries[i].label, e.host_kappa, e.z_scratch);
    if (!(a == b2)) return "entry " + std::to_string(i) + " differs at host label " + std::to_string(a.label);
  }
  return {};
}

}  // namespace bss::testing
