#pragma once

#include <set>
#include <variant>
#include <vector>

#include "bss/machine.hpp"
#include "bss/vm.hpp"

namespace bss {

// A fixed list of guess tuples; the guess space is exactly this list.
struct ExplicitTuples {
  std::vector<Tuple> tuples;
};

// Every tuple of length 0..max_len over the first max_index enumerated
// values, in length-then-index order.
struct EnumeratorDovetail {
  std::size_t max_len = 2;
  std::size_t max_index = 8;
};

// Guess cells are branched on when first read: the first max_cells distinct
// cells a branch reads fan out over the first max_index values; later cells
// read as x_n.
struct OnDemand {
  std::size_t max_cells = 4;
  std::size_t max_index = 8;
};

using GuessSource = std::variant<ExplicitTuples, EnumeratorDovetail, OnDemand>;

struct ResultSet {
  std::set<Tuple> outputs;
  std::size_t halted = 0;
  std::size_t diverged = 0;
  std::size_t loop_certified = 0;
  std::size_t pruned = 0;
  bool complete = false;

  friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

// Deterministic run from nd_input_config(input, guesses).
RunResult run_with_guesses(const MachineSpec& spec, const Tuple& input, const Tuple& guesses,
                           const Budget& budget);

// Res_M(input) under the given guess space and budget. Nu machines branch on
// the candidate sets of their evaluator (the machine's own oracle when nu is
// null). Throws NoEnumerator when guesses are drawn from a structure without
// an enumerator.
ResultSet enumerate_results(const MachineSpec& spec, const Tuple& input, const GuessSource& source,
                            const Budget& budget, const NuEvaluator* nu = nullptr);

enum class Verdict { Accepted, Unknown };
const char* to_string(Verdict v);

// Accepted as soon as some branch halts.
Verdict semidecides(const MachineSpec& spec, const Tuple& input, const GuessSource& source,
                    const Budget& budget, const NuEvaluator* nu = nullptr);

}  // namespace bss
