#include <doctest.h>

#include "bss/error.hpp"
#include "bss/nu.hpp"
#include "bss/parser.hpp"
#include "bss/transform.hpp"
#include "oracles.hpp"

using namespace bss;
using namespace bss::testing;

namespace {
Tuple Qt(const char* s) { return parse_tuple(*rationals(), s); }
Value R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }
IReg I(std::uint32_t t, std::uint32_t j) { return IReg{t, j}; }

ExtProgram ext(std::vector<ExtInstruction> lines) {
  ExtProgram p;
  for (auto& l : lines) p.lines.push_back({std::move(l), 0, 0});
  return p;
}

RunResult run_expansion(const ExtProgram& p, const Tuple& input) {
  auto q = rationals();
  MachineSpec host = reference_machine(p, q);
  MachineSpec spec = make_machine(expand_pseudo(p, q.get()), q, MachineKind::Deterministic, std::nullopt, host.tapes);
  REQUIRE(validate(spec).empty());
  return run_from(spec, input_config(spec, input), 100000, nullptr);
}
}  // namespace

TEST_CASE("goto expands to a self-comparison") {
  auto p = expand_pseudo(parse_program("1: @goto 3; 2: Z1 := c1; 3: stop."));
  REQUIRE(p.size() == 3);
  CHECK(p.code[0] == Instruction{IndexBranch{I(1, 1), I(1, 1), 3, 3}});
}

TEST_CASE("tuple copy of length 3") {
  auto p = ext({Pseudo{PCopy{2, I(2, 2), 1, I(1, 1), I(1, 2)}}, Instruction{Stop{}}});
  auto r = run_expansion(p, Qt("(5,6,7)"));
  REQUIRE(r.status == RunStatus::Halted);
  CHECK(r.last.ireg(I(2, 2)) == 3);
  CHECK(r.last.ireg(I(1, 2)) == 3);
  for (std::size_t i = 1; i <= 3; ++i) CHECK(r.last.tape(2).get(i) == r.last.tape(1).get(i));
}

TEST_CASE("ca plus macros match the pairing") {
  for (std::uint64_t c = 1; c <= 30; ++c) {
    auto p = ext({Pseudo{PISet{I(1, 3), std::uint64_t{c}}}, Pseudo{PCa{1, true, I(1, 4), I(1, 3)}},
                  Pseudo{PCa{2, true, I(1, 5), I(1, 3)}}, Instruction{Stop{}}});
    auto r = run_expansion(p, Qt("(0)"));
    REQUIRE(r.status == RunStatus::Halted);
    auto [m, s0] = cantor_decode_plus(c);
    CHECK(r.last.ireg(I(1, 4)) == m);
    CHECK(r.last.ireg(I(1, 5)) == s0);
    if (c == 4) {
      CHECK(m == 1);
      CHECK(s0 == 1);
    }
  }
}

TEST_CASE("ca without plus spins on a zero component") {
  // 3 decodes to (2, 0)
  auto p = ext({Pseudo{PISet{I(1, 3), std::uint64_t{3}}}, Pseudo{PCa{2, false, I(1, 4), I(1, 3)}},
                Instruction{Stop{}}});
  CHECK(run_expansion(p, Qt("(0)")).status != RunStatus::Halted);
}

TEST_CASE("macro soundness on random contexts") {
  Rng rng(11);
  for (auto form : kAllMacroForms) {
    CAPTURE(to_string(form));
    for (int k = 0; k < 40; ++k) {
      auto c = macro_context(rng, form);
      auto msg = check_macro(c);
      CAPTURE(render_ext(c.program));
      CHECK(msg == "");
    }
  }
}

TEST_CASE("expanded programs keep host labels in order") {
  Rng rng(5);
  for (auto form : kAllMacroForms) {
    auto c = macro_context(rng, form);
    auto e = expand_pseudo_map(c.program, rationals().get());
    REQUIRE(e.entry.size() == c.program.size());
    for (std::size_t i = 1; i < e.entry.size(); ++i) CHECK(e.entry[i - 1] < e.entry[i]);
    CHECK(e.entry.back() <= e.program.size());
  }
}

TEST_CASE("unknown pseudo in core programs") {
  CHECK_THROWS_AS(parse_program("1: @goto 2; 2: stop.").core(), Error);
}

TEST_CASE("register ledger at the designated labels") {
  auto q = rationals();
  // Accepts every tuple at once.
  auto nq = share(machine("1: stop.", q));
  auto m = machine("1: Z2 := nu[O]@I1; 2: Z3 := nu[O]@I1; 3: I1 := I1 + 1; 4: I1 := I1 + 1; 5: stop.", q,
                   MachineKind::NuOracle, SemiDecider{nq, std::nullopt});
  auto map = compile_nu_to_nd_map(m);
  const auto& c = map.machine;
  REQUIRE(validate(c).empty());
  RunOptions o;
  o.capture_trace = true;
  Tuple input = Qt("(5)");
  Tuple guesses = Qt("(7,8,9,10,11,12,13,14)");
  auto r = run_from(c, nd_input_config(c, input, guesses), 200000, nullptr, o);
  REQUIRE(r.status == RunStatus::Halted);
  std::uint64_t sum = input.size();
  std::size_t at_star = 0, at_tilde2 = 0;
  for (const auto& cfg : r.trace) {
    if (cfg.label == map.star1) {
      CHECK(cfg.ireg(I(1, 1)) == sum);
      ++at_star;
    }
    if (cfg.label == map.tilde2) {
      std::uint64_t n0 = cfg.ireg(I(2, 1));
      CHECK(cfg.tape(3).get(n0 + 1) == cfg.tape(1).get(cfg.ireg(I(1, 1)) + 1));
      ++at_tilde2;
    }
    if (cfg.label == map.tilde3) sum += cfg.ireg(I(1, 4));
  }
  CHECK(at_star == 2);
  CHECK(at_tilde2 == 2);
  // Both nu answers are the first guess of their block.
  REQUIRE(r.output.size() == 3);
  CHECK(r.output[0] == R(5));
  CHECK(r.output[1] == R(7));
}

TEST_CASE("compile nu to nd rejects other oracles") {
  auto q = rationals();
  auto m = machine(kMPrime, q, MachineKind::NuOracle, ExplicitSet{q2_table(grid())});
  CHECK_THROWS_AS(compile_nu_to_nd(m), Error);
  auto nd = machine(kNdRoot, q, MachineKind::ND);
  auto bad = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{share(nd), std::nullopt});
  try {
    compile_nu_to_nd(bad);
    FAIL("expected KindMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KindMismatch);
  }
}

TEST_CASE("compiled M' on (16,4)") {
  auto q = rationals();
  auto dec = machine(kQ2Decider, q);
  auto m = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{share(decider_to_semidecider(dec)), std::nullopt});
  auto c = compile_nu_to_nd(m);
  CHECK(validate(c).empty());
  CHECK(c.tapes == 3);
  CHECK(c.kind == MachineKind::ND);
}

TEST_CASE("nd to nu on the fourth-root program") {
  auto q = rationals();
  auto nd = machine(kNdRoot4, q, MachineKind::ND);
  auto nu = compile_nd_to_nu(nd);
  CHECK(validate(nu).empty());
  CHECK(nu.kind == MachineKind::NuOracle);
  Budget b;
  b.max_steps = 200000;
  b.max_guess_index = 12;
  auto rs = enumerate_results(nu, Qt("(16)"), EnumeratorDovetail{0, 1}, b);
  CHECK(rs.outputs.count(Qt("(4)")) == 1);
  for (const auto& t : rs.outputs) CHECK(t == Qt("(4)"));
}

TEST_CASE("nd to nu without guess sites only adds register setup") {
  auto q = rationals();
  auto nd = machine(kProg1, q, MachineKind::ND);
  auto nu = compile_nd_to_nu(nd);
  CHECK(validate(nu).empty());
  std::size_t stops = 0;
  for (const auto& ins : nu.program.code) stops += std::holds_alternative<Stop>(ins);
  CHECK(stops == 1);
  auto r = run(nu, Qt("(3)"), Budget{}, make_evaluator(nu, Budget{}).get());
  CHECK(r.status == RunStatus::Halted);
  CHECK(r.output == Qt("(9)"));
}

TEST_CASE("special cases") {
  auto q = rationals();
  auto dec = share(machine(kQ2Decider, q));
  SUBCASE("a1 on (16)") {
    auto m = machine(kMPrime, q, MachineKind::NuOracle, FixedArityDecider{dec, 3});
    auto c = compile_special(m, SpecialCase::A1);
    CHECK(validate(c).empty());
  }
  SUBCASE("a1 wrong oracle") {
    auto m = machine(kMPrime, q, MachineKind::NuOracle, SemiDecider{dec, std::nullopt});
    try {
      compile_special(m, SpecialCase::A1);
      FAIL("expected CaseMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CaseMismatch);
    }
  }
  Rng rng(3);
  SUBCASE("a1 spins when the prefix is too long") {
    auto s = random_finite(rng, 3);
    std::set<Tuple> table{{Element{0}, Element{1}}, {Element{1}, Element{2}}};
    auto d = share(table_decider(s, table));
    auto m = machine("1: Z2 := nu[O]@I1; 2: stop.", s, MachineKind::NuOracle, FixedArityDecider{d, 2});
    auto c = compile_special(m, SpecialCase::A1);
    Budget b;
    b.max_steps = 20000;
    auto rs = enumerate_results(c, Tuple{Element{0}, Element{1}}, EnumeratorDovetail{3, 3}, b);
    CHECK(rs.outputs.empty());
    CHECK(rs.halted == 0);
  }
}

TEST_CASE("track addresses") {
  CHECK(track_address(3, 2, 3) == 8);
  CHECK(track_address(4, 1, 1) == 1);
  std::set<std::size_t> seen;
  for (std::uint32_t t = 1; t <= 4; ++t)
    for (std::size_t i = 1; i <= 50; ++i) CHECK(seen.insert(track_address(4, t, i)).second);
}

TEST_CASE("flatten a one-tape machine is the identity") {
  auto q = rationals();
  auto m = machine(kChiQ1, q);
  auto f = flatten_tapes(m);
  CHECK(f.program == m.program);
}

TEST_CASE("flatten a two-tape machine") {
  auto q = rationals();
  auto m = machine("1: Z2.1 := Z1.1; 2: Z2.2 := f3(Z2.1,Z1.1); 3: Z1.1 := Z2.2; 4: stop.", q);
  auto f = flatten_tapes(m);
  CHECK(f.tapes == 1);
  CHECK(validate(f).empty());
  auto a = run(m, Qt("(3,1)"), Budget{}, nullptr);
  auto b = run(f, Qt("(3,1)"), Budget{}, nullptr);
  REQUIRE(a.status == RunStatus::Halted);
  REQUIRE(b.status == RunStatus::Halted);
  CHECK(a.output == b.output);
  CHECK(a.output == Qt("(9,1)"));
}

TEST_CASE("flatten rejects nu machines") {
  auto q = rationals();
  auto m = machine("1: Z1.2 := nu[O]@I1.1; 2: Z2.1 := Z1.2; 3: stop.", q, MachineKind::NuOracle, FullUniverse{});
  CHECK_THROWS_AS(flatten_tapes(m), Error);
}

TEST_CASE("decider to semidecider") {
  auto q = rationals();
  auto semi = decider_to_semidecider(machine(kChiQ1, q));
  Budget b;
  b.max_steps = 5000;
  CHECK(run(semi, Qt("(4,2)"), b, nullptr).status == RunStatus::Halted);
  CHECK(run(semi, Qt("(4,3)"), b, nullptr).status != RunStatus::Halted);
}

TEST_CASE("compiled programs revalidate") {
  Rng rng(2);
  auto s = random_finite(rng, 3);
  for (int k = 0; k < 10; ++k) {
    auto table = random_table(rng, *s, 1, 3, 4);
    auto m = make_machine(random_nu_program(rng, *s), s, MachineKind::NuOracle,
                          SemiDecider{share(table_semidecider(s, table)), std::nullopt});
    CHECK(validate(compile_nu_to_nd(m)).empty());
    auto nd = make_machine(random_nd_program(rng, *s), s, MachineKind::ND);
    auto nu = compile_nd_to_nu(nd);
    CHECK(validate(nu).empty());
    CHECK(validate(flatten_tapes(compile_nu_to_nd(m))).empty());
  }
}
