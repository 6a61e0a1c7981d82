// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

#include "bss/error.hpp"
#include "bss/nu.hpp"
#include "bss/parser.hpp"
#include "bss/transform.hpp"
#include "oracles.hpp"

using namespace bss;
using namespace bss::testing;

namespace {

struct Check {
  bool ok = true;
  std::string why;
  std::size_t cases = 0;
  std::size_t positives = 0;  // cases with at least one halting branch

  void expect(bool cond, const std::string& what) {
    ++cases;
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

Tuple Qt(const char* s) { return parse_tuple(*rationals(), s); }
std::string show(const Tuple& t) { return format_tuple(*rationals(), t); }

std::set<Value> heads(const std::set<Tuple>& outs) {
  std::set<Value> h;
  for (const auto& t : outs)
    if (!t.empty()) h.insert(t.front());
  return h;
}

// Branches that never halt: certified loops or budget exhaustion.
bool no_halts(const ResultSet& r) { return r.halted == 0 && r.outputs.empty(); }

// ---------------------------------------------------------------------------

Check criterion1() {
  Check c;
  auto q = rationals();
  auto p1 = machine(kProg1, q);
  c.expect(run(p1, Qt("(3)"), Budget{}, nullptr).output == Qt("(9)"), "prog1 on 3");
  c.expect(run(p1, Qt("(7/2)"), Budget{}, nullptr).output == Qt("(49/4)"), "prog1 on 7/2");

  auto g = grid();
  auto chi = machine(kChiQ1, q);
  const Value one = Rational(1), zero = Rational(0);
  for (const auto& a : g)
    for (const auto& b : g) {
      auto r = run(chi, Tuple{a, b}, Budget{}, nullptr);
      Value want = a == b * b ? one : zero;
      c.expect(r.status == RunStatus::Halted && r.output == Tuple{want},
               "chi_Q1 on " + show(Tuple{a, b}));
    }

  auto dec = machine(kQ2Decider, q);
  for (const auto& a : g)
    for (const auto& b : g)
      for (const auto& d : g) {
        auto r = run(dec, Tuple{a, b, d}, Budget{}, nullptr);
        Rational d2 = d * d;
        Value want = (b == d2 && a == d2 * d2) ? one : zero;
        c.expect(r.status == RunStatus::Halted && r.output == Tuple{want}, "Q2 decider on " + show(Tuple{a, b, d}));
      }
  return c;
}

Check criterion2() {
  Check c;
  auto g = grid();
  auto table = q2_table(g);
  ExplicitSet q2{table};
  auto as_set = [](const NuChoice& ch) { return std::set<Value>(ch.candidates.begin(), ch.candidates.end()); };
  std::set<Value> in_grid(g.begin(), g.end());
  for (const auto& x : g) {
    Tuple p{x};
    auto got = nu_explicit(q2, p);
    c.expect(as_set(got) == nu_brute(table, p), "nu on " + show(p));
    // sqrt(x1) whenever x1 has a fourth root on the grid.
    auto r2 = exact_sqrt(x);
    auto r4 = r2 ? exact_sqrt(*r2) : std::nullopt;
    std::set<Value> want;
    if (r4 && (in_grid.count(*r4) || in_grid.count(Value(-*r4)))) want.insert(*r2);
    c.expect(as_set(got) == want, "sqrt pattern on " + show(p));
    c.expect(got.complete, "completeness on " + show(p));
  }
  for (const auto& a : g)
    for (const auto& b : g) {
      Tuple p{a, b};
      auto got = as_set(nu_explicit(q2, p));
      c.expect(got == nu_brute(table, p), "nu on " + show(p));
      std::set<Value> want;
      auto r = exact_sqrt(b);
      if (r && b * b == a)
        for (Value y : {Value(*r), Value(-*r)})
          if (in_grid.count(y)) want.insert(y);
      c.expect(got == want, "+-sqrt pattern on " + show(p));
    }
  for (const auto& a : g)
    for (const auto& b : g)
      for (const auto& d : g) {
        Tuple p{a, b, d};
        auto got = nu_explicit(q2, p);
        c.expect(got.candidates.empty() && got.complete, "empty on " + show(p));
      }
  return c;
}

Check criterion3() {
  Check c;
  auto q = rationals();
  auto g = grid();
  auto table = q2_table(g);
  auto prog2 = machine(kProg2, q, MachineKind::NuOracle, ExplicitSet{table});
  auto mp = machine(kMPrime, q, MachineKind::NuOracle, ExplicitSet{table});
  const GuessSource none = EnumeratorDovetail{0, 1};
  Budget b;
  for (const auto& x : g) {
    Tuple in{x};
    std::set<Value> want = nu_brute(table, in);
    for (const auto* m : {&prog2, &mp}) {
      auto rs = enumerate_results(*m, in, none, b);
      c.expect(rs.complete && heads(rs.outputs) == want, "res on " + show(in));
      for (const auto& t : rs.outputs) c.expect(t.size() == 1, "output length on " + show(in));
    }
  }
  // Perfect squares: pairs (y^4, y^2) and their neighbours.
  for (const auto& y : g) {
    Rational y2 = y * y;
    for (const auto& a : {y2 * y2, y2 * y2 + Rational(1)}) {
      Tuple in{a, y2};
      std::set<Value> want;
      if (a == y2 * y2) want = {Value(y), Value(-y)};
      auto rs = enumerate_results(mp, in, none, b);
      c.expect(rs.complete && heads(rs.outputs) == want, "M' on " + show(in));
      auto r2 = enumerate_results(prog2, in, none, b);
      c.expect(r2.complete && r2.outputs.empty(), "prog2 on " + show(in));
    }
  }
  auto rs = enumerate_results(mp, Qt("(16,4)"), none, b);
  c.expect(heads(rs.outputs) == std::set<Value>{Rational(2), Rational(-2)}, "M' on (16,4)");
  for (const char* t : {"(16,4,2)", "(1,1,1)", "(0,0,0)"}) {
    auto r3 = enumerate_results(mp, Qt(t), none, b);
    c.expect(r3.complete && r3.outputs.empty() && r3.loop_certified > 0, std::string("M' on ") + t);
  }
  return c;
}

Check criterion4() {
  Check c;
  std::map<std::uint64_t, std::pair<std::uint64_t, std::uint64_t>> inverse;
  for (std::uint64_t m = 0; m < 150; ++m)
    for (std::uint64_t s0 = 0; m + s0 < 150; ++s0) {
      auto s = cantor_encode(m, s0);
      c.expect(inverse.emplace(s, std::pair{m, s0}).second, "encode collision at " + std::to_string(s));
    }
  for (std::uint64_t s = 0; s < 10000; ++s) {
    auto it = inverse.find(s);
    c.expect(it != inverse.end(), "encode misses " + std::to_string(s));
    if (it == inverse.end()) continue;
    auto d = cantor_decode(s);
    c.expect(d == it->second, "decode " + std::to_string(s));
    auto p = cantor_decode_plus(s);
    bool zero = d.first == 0 || d.second == 0;
    c.expect(p == (zero ? std::pair<std::uint64_t, std::uint64_t>{1, 1} : d), "decode_plus " + std::to_string(s));
  }
  for (std::uint64_t m = 0; m < 100; ++m)
    for (std::uint64_t s0 = 0; s0 < 100; ++s0)
      c.expect(cantor_decode(cantor_encode(m, s0)) == std::pair{m, s0}, "round trip");
  return c;
}

Check criterion5() {
  Check c;
  Rng rng(20260101);
  for (auto form : kAllMacroForms)
    for (int k = 0; k < 200; ++k) {
      auto ctx = macro_context(rng, form);
      auto msg = check_macro(ctx);
      c.expect(msg.empty(), std::string(to_string(form)) + " context " + std::to_string(k) + ": " + msg);
    }
  return c;
}

// Random nu machines over finite structures, shared by criteria 6 and 10.
struct NuCase {
  MachineSpec source;    // explicit oracle
  MachineSpec compiled;  // from the semi-decider
  std::vector<Tuple> inputs;
  std::size_t guess_len = 0;
  std::size_t universe = 0;
};

std::vector<NuCase> random_nu_cases(std::size_t count) {
  Rng rng(777);
  std::vector<NuCase> out;
  while (out.size() < count) {
    std::size_t u = 2 + rng() % 2;
    auto s = random_finite(rng, u);
    auto table = random_table(rng, *s, 1, 3, 2 + rng() % 4);
    auto prog = random_nu_program(rng, *s);
    NuCase nc;
    nc.source = make_machine(prog, s, MachineKind::NuOracle, ExplicitSet{table});
    auto semi =
        make_machine(prog, s, MachineKind::NuOracle, SemiDecider{share(table_semidecider(s, table)), std::nullopt});
    nc.compiled = compile_nu_to_nd(semi);
    for (std::uint32_t e = 0; e < u; ++e) nc.inputs.push_back(Tuple{Element{e}});
    nc.guess_len = 2;
    nc.universe = u;
    out.push_back(std::move(nc));
  }
  return out;
}

const Budget& compiled_budget() {
  static Budget b = [] {
    Budget x;
    x.max_steps = 400000;
    return x;
  }();
  return b;
}

Check criterion6(const std::vector<NuCase>& cases) {
  Check c;
  auto q = rationals();
  auto dec = machine(kQ2Decider, q);
  auto mp = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{share(decider_to_semidecider(dec)), std::nullopt});
  auto truth = machine(kMPrime, q, MachineKind::NuOracle, ExplicitSet{q2_table(grid())});
  auto cm = compile_nu_to_nd(mp);
  const GuessSource guesses = EnumeratorDovetail{1, 12};
  for (const char* in : {"(16,4)", "(1,1)", "(16,5)"}) {
    auto want = enumerate_results(truth, Qt(in), EnumeratorDovetail{0, 1}, Budget{});
    auto got = enumerate_results(cm, Qt(in), guesses, compiled_budget());
    c.expect(got.outputs == want.outputs, std::string("compiled M' outputs on ") + in);
    c.expect(semidecides(cm, Qt(in), guesses, compiled_budget()) ==
                 (want.halted ? Verdict::Accepted : Verdict::Unknown),
             std::string("compiled M' semidecides on ") + in);
  }
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& nc = cases[k];
    GuessSource gs = EnumeratorDovetail{nc.guess_len, nc.universe};
    for (const auto& in : nc.inputs) {
      auto want = enumerate_results(nc.source, in, EnumeratorDovetail{0, 1}, Budget{});
      c.expect(want.complete, "source result set incomplete, machine " + std::to_string(k));
      auto got = enumerate_results(nc.compiled, in, gs, compiled_budget());
      c.positives += want.halted > 0;
      c.expect(got.outputs == want.outputs, "outputs differ, machine " + std::to_string(k));
      c.expect((got.halted > 0) == (want.halted > 0), "halting differs, machine " + std::to_string(k));
    }
  }
  return c;
}

Check criterion7() {
  Check c;
  auto q = rationals();
  Budget b;
  b.max_steps = 20000;
  b.max_guess_index = 13;
  for (const char* text : {kNdRoot4, kNdRoot}) {
    auto nd = machine(text, q, MachineKind::ND);
    auto nu = compile_nd_to_nu(nd);
    std::size_t guess_cells = direct_z_used(nd.program).at(0) - 1;
    for (const char* in : {"(16)", "(1)", "(1/4)", "(0)", "(-1)", "(2)"}) {
      auto a = enumerate_results(nd, Qt(in), EnumeratorDovetail{guess_cells, 13}, b);
      auto r = enumerate_results(nu, Qt(in), EnumeratorDovetail{0, 1}, b);
      c.expect(a.outputs == r.outputs, std::string("Example 2 outputs on ") + in);
      c.expect((a.halted > 0) == (r.halted > 0), std::string("Example 2 halting on ") + in);
    }
  }
  {
    auto nd = machine(kNdRoot, q, MachineKind::ND);
    auto r = enumerate_results(compile_nd_to_nu(nd), Qt("(16)"), EnumeratorDovetail{0, 1}, b);
    c.expect(r.outputs == std::set<Tuple>{Qt("(4)"), Qt("(-4)")}, "+-sqrt of 16");
  }

  Rng rng(4242);
  for (int k = 0; k < 60; ++k) {
    std::size_t u = 2 + rng() % 2;
    auto s = random_finite(rng, u);
    auto nd = make_machine(random_nd_program(rng, *s), s, MachineKind::ND);
    auto nu = compile_nd_to_nu(nd);
    Budget fb;
    fb.max_steps = 5000;
    fb.max_guess_index = u;
    for (std::uint32_t e = 0; e < u; ++e) {
      Tuple in{Element{e}};
      auto a = enumerate_results(nd, in, OnDemand{12, u}, fb);
      auto r = enumerate_results(nu, in, EnumeratorDovetail{0, 1}, fb);
      std::string tag = "random ND " + std::to_string(k);
      c.positives += a.halted > 0;
      c.expect(a.complete && r.complete, tag + " incomplete");
      c.expect(a.outputs == r.outputs, tag + " outputs");
      c.expect((a.halted > 0) == (r.halted > 0), tag + " halting");
    }
  }
  return c;
}

Check criterion8() {
  Check c;
  Rng rng(99);
  const std::size_t nq = 3;
  for (int k = 0; k < 12; ++k) {
    std::size_t u = 2 + rng() % 2;
    auto s = random_finite(rng, u);
    auto fixed = random_table(rng, *s, nq, nq, 3 + rng() % 4);
    auto any = random_table(rng, *s, 1, 3, 3 + rng() % 4);
    auto prog = parse_core("1: Z2 := nu[O]@I1; 2: Z1 := Z2; 3: stop.");
    struct Run {
      SpecialCase sc;
      OracleSpec oracle;
      std::set<Tuple> table;
    };
    std::vector<Run> runs = {
        {SpecialCase::A1, FixedArityDecider{share(table_decider(s, fixed)), nq}, fixed},
        {SpecialCase::A2, SemiDecider{share(table_semidecider(s, fixed)), nq}, fixed},
        {SpecialCase::A3, Decider{share(table_decider(s, any))}, any},
    };
    for (const auto& rn : runs) {
      auto source = make_machine(prog, s, MachineKind::NuOracle, ExplicitSet{rn.table});
      auto compiled = compile_special(make_machine(prog, s, MachineKind::NuOracle, rn.oracle), rn.sc);
      std::string tag = std::string(to_string(rn.sc)) + " case " + std::to_string(k);
      for (std::size_t len = 1; len <= nq; ++len) {
        for (int trial = 0; trial < 3; ++trial) {
          Tuple in = random_input(rng, *s, len);
          if (trial == 0 && !rn.table.empty()) in.assign(rn.table.begin()->begin(), rn.table.begin()->begin() + std::min(len, rn.table.begin()->size()));
          auto want = enumerate_results(source, in, EnumeratorDovetail{0, 1}, Budget{});
          Budget b;
          b.max_steps = 100000;
          auto got = enumerate_results(compiled, in, EnumeratorDovetail{nq, u}, b);
          c.positives += want.halted > 0;
          c.expect(got.outputs == want.outputs, tag + " outputs on length " + std::to_string(len));
          if (len >= nq && rn.sc != SpecialCase::A3) c.expect(no_halts(got), tag + " must spin");
          if (want.halted == 0) c.expect(no_halts(got), tag + " halts on an empty choice");
        }
      }
    }
  }
  return c;
}

Check criterion9() {
  Check c;
  auto q = rationals();
  auto table = q2_table(grid());
  auto exact = machine(kMPrime, q, MachineKind::NuOracle, ExplicitSet{table});
  auto dec = machine(kQ2Decider, q);
  auto semi = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{share(decider_to_semidecider(dec)), std::nullopt});
  Budget b;
  b.max_steps = 20000;
  b.max_dovetail_s = 300;
  for (const char* in : {"(1,2,3)", "(16,4,2)", "(5,5)", "(-1)"}) {
    auto e = run(exact, Qt(in), b, make_evaluator(exact, b).get());
    c.expect(e.status == RunStatus::LoopCertified, std::string("explicit oracle on ") + in);
    auto s = run(semi, Qt(in), b, make_evaluator(semi, b).get());
    c.expect(s.status == RunStatus::Diverged, std::string("semi-decider oracle on ") + in);
    auto rs = enumerate_results(semi, Qt(in), EnumeratorDovetail{0, 1}, b);
    c.expect(rs.outputs.empty() && !rs.complete, std::string("semi-decider result set on ") + in);
  }
  // A satisfiable query is never answered wrongly.
  auto rs = enumerate_results(semi, Qt("(16,4)"), EnumeratorDovetail{0, 1}, b);
  for (const auto& t : rs.outputs) c.expect(t.front() == Value(Rational(2)) || t.front() == Value(Rational(-2)), "wrong answer");
  return c;
}

// Per guess tuple, the flattened machine halts with the same output or not at
// all. Flat runs take at least as many steps, so a branch the source does not
// finish within the budget must not finish in the flat machine either.
void compare_flat(Check& c, const MachineSpec& m, const MachineSpec& flat, const Tuple& in,
                  const std::vector<Tuple>& guess_space, std::size_t budget, const std::string& tag) {
  Budget b;
  b.max_steps = budget;
  Budget fb;
  fb.max_steps = budget * 40;
  for (const auto& gs : guess_space) {
    auto a = run_with_guesses(m, in, gs, b);
    auto fg = flatten_guesses(m, in, gs);
    if (a.status == RunStatus::Halted) {
      ++c.positives;
      auto f = run_with_guesses(flat, in, fg, fb);
      c.expect(f.status == RunStatus::Halted && f.output == a.output, tag + " halting branch");
    } else {
      auto f = run_with_guesses(flat, in, fg, b);
      c.expect(f.status != RunStatus::Halted, tag + " non-halting branch");
    }
  }
}

std::vector<Tuple> all_tuples(const Structure& s, std::size_t max_len, std::size_t max_index) {
  std::vector<Tuple> out{Tuple{}};
  std::vector<Tuple> layer{Tuple{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Tuple> next;
    for (const auto& t : layer)
      for (std::size_t i = 0; i < max_index; ++i) {
        Tuple x = t;
        x.push_back(*s.enumerate(i));
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

Check criterion10(const std::vector<NuCase>& cases) {
  Check c;
  auto q = rationals();
  auto dec = machine(kQ2Decider, q);
  auto mp = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{share(decider_to_semidecider(dec)), std::nullopt});
  auto cm = compile_nu_to_nd(mp);
  auto flat = flatten_tapes(cm);
  c.expect(flat.tapes == 1 && validate(flat).empty(), "flattened M' invalid");
  std::vector<Tuple> gs;
  for (const char* g : {"(2)", "(-2)", "(1)", "(-1)", "(3)"}) gs.push_back(Qt(g));
  for (const char* in : {"(16,4)", "(1,1)", "(16,5)"})
    compare_flat(c, cm, flat, Qt(in), gs, 200000, std::string("M' on ") + in);
  for (std::size_t k = 0; k < cases.size() && k < 10; ++k) {
    const auto& nc = cases[k];
    auto f = flatten_tapes(nc.compiled);
    c.expect(validate(f).empty(), "flattened machine invalid");
    auto space = all_tuples(*nc.compiled.structure, nc.guess_len, nc.universe);
    for (const auto& in : nc.inputs)
      compare_flat(c, nc.compiled, f, in, space, compiled_budget().max_steps, "random machine " + std::to_string(k));
  }
  return c;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  std::vector<NuCase> cases;
  struct Entry {
    int n;
    double limit;
    std::function<Check()> run;
  };
  std::vector<Entry> entries = {
      {1, 5, criterion1},
      {2, 2, criterion2},
      {3, 10, criterion3},
      {4, 1, criterion4},
      {5, 30, criterion5},
      {6, 120,
       [&] {
         cases = random_nu_cases(50);
         return criterion6(cases);
       }},
      {7, 120, criterion7},
      {8, 60, criterion8},
      {9, 5, criterion9},
      {10, 120, [&] { return criterion10(cases); }},
  };
  int failed = 0;
  for (const auto& e : entries) {
    auto t0 = clock::now();
    Check c;
    try {
      c = e.run();
    } catch (const std::exception& ex) {
      c.ok = false;
      c.why = std::string("exception: ") + ex.what();
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (c.ok && secs > e.limit) {
      c.ok = false;
      c.why = "took " + std::to_string(secs) + " s, limit " + std::to_string(e.limit) + " s";
    }
    std::string extra = c.positives ? ", " + std::to_string(c.positives) + " halting cases" : "";
    std::printf("criterion %d: %s (%zu checks%s, %.2f s)%s%s\n", e.n, c.ok ? "PASS" : "FAIL", c.cases,
                extra.c_str(), secs, c.ok ? "" : " ", c.why.c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
