#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "bss/machine.hpp"
#include "bss/vm.hpp"

namespace bss {

// s = ((m + s0)^2 + 3 s0 + m) / 2, i.e. triangle(m + s0) + s0.
std::uint64_t cantor_encode(std::uint64_t m, std::uint64_t s0);
// (m, s0) with cantor_encode(m, s0) = s.
std::pair<std::uint64_t, std::uint64_t> cantor_decode(std::uint64_t s);
// As cantor_decode, with any zero component replaced by (1, 1).
std::pair<std::uint64_t, std::uint64_t> cantor_decode_plus(std::uint64_t s);

// Values a native evaluator guesses from: the whole universe when finite and
// within max_guess_index, else the first max_guess_index enumerated values.
struct GuessValues {
  std::vector<Value> values;
  bool exhaustive = false;
};
GuessValues guess_values(const Structure& s, std::size_t max_index);

// All y1 with prefix.y1... in q.
NuChoice nu_explicit(const ExplicitSet& q, const Tuple& prefix);

struct NuWitness {
  Tuple guesses;
  std::size_t steps = 0;  // steps of the oracle machine until it stopped
};

struct NuEmission {
  Value value;
  NuWitness witness;
};

struct NuStream {
  std::vector<NuEmission> emissions;  // in emission order
  bool complete = false;              // true only when every guess tuple was settled
};

// Dovetails the semi-decider over (guess tuple, step) pairs in Cantor order and
// emits the head of each guess tuple whose run stops. Tuples have length
// arity - |prefix| when the arity is known, else 1..budget.max_guess_len.
// Each tuple gets at most budget.max_dovetail_s steps.
NuStream nu_semidecider_stream(const SemiDecider& q, const Tuple& prefix, const Budget& budget);

// One literal pass of the s-loop for a fixed guess sequence y. Starting at
// m0 = 0, each time the oracle machine stops the stream emits y_{m0+1} and
// advances m0 by m. Runs s = 1..budget.max_dovetail_s.
struct Algo1Emission {
  Value value;
  std::uint64_t s = 0;
  std::uint64_t m = 0;
  std::uint64_t s0 = 0;
};
std::vector<Algo1Emission> nu_algo1(const SemiDecider& q, const Tuple& prefix, const Tuple& guesses,
                                    const Budget& budget, std::size_t max_emissions = 1);

// Certified empty when |prefix| >= arity; otherwise tests every guess tuple of
// length arity - |prefix| with the decider.
NuChoice nu_fixed_arity(const FixedArityDecider& q, const Tuple& prefix, const Budget& budget);

// Guesses are read in pairs: odd positions carry the payload, even positions
// delimit it. The payload length m is the first m with y_{2m} != y_{2m-2}
// (y_0 is the last prefix component). The oracle runs once on prefix plus the
// payload; on stop the payload head is emitted.
struct RunLength {
  std::optional<Value> value;
  std::size_t m = 0;        // payload length, 0 when no delimiter change was found
  bool launched = false;
};
RunLength nu_identity_runlength(const SemiDecider& q, const Tuple& prefix, const Tuple& paired,
                                const Budget& budget);

// Every universe element is a candidate.
NuChoice nu_full_universe(const Structure& s, const Budget& budget);

// Evaluator for the machine's oracle. Throws UnresolvedOracle when it has none.
std::unique_ptr<NuEvaluator> make_evaluator(const MachineSpec& spec, const Budget& budget);
std::unique_ptr<NuEvaluator> make_evaluator(const OracleSpec& oracle, StructurePtr s, const Budget& budget);

// Accepts when the output head is c1.
bool decider_accepts(const MachineSpec& decider, const Tuple& input, const Budget& budget, bool* settled);

}  // namespace bss
