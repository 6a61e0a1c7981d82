#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "bss/configuration.hpp"
#include "bss/machine.hpp"

namespace bss {

// Candidate set of one nu query. complete=false means more candidates may
// exist than were found; an empty incomplete set is not a certificate.
struct NuChoice {
  std::vector<Value> candidates;
  bool complete = true;
};

class NuEvaluator {
 public:
  virtual ~NuEvaluator() = default;
  virtual NuChoice choose(std::span<const Value> prefix) const = 0;
  // Membership for type-9 queries; nullopt when it cannot be settled.
  virtual std::optional<bool> member(std::span<const Value> prefix) const = 0;
};

enum class StepKind { Next, Branch, Halted, SelfLoop, NeedGuess, Undetermined };

struct StepInfo {
  StepKind kind = StepKind::Next;
  NuChoice choice;          // Branch / SelfLoop
  std::uint32_t tape = 0;   // NeedGuess
  std::size_t cell = 0;     // NeedGuess
};

// Executes one instruction in place. For Branch, SelfLoop, NeedGuess,
// Undetermined and Halted the configuration is left untouched; use apply_nu
// to take a Branch candidate.
StepInfo step_in_place(const MachineSpec& spec, Configuration& cfg, const NuEvaluator* nu);
void apply_nu(const MachineSpec& spec, Configuration& cfg, const Value& y);

struct StepNext { Configuration cfg; };
struct StepBranch { std::vector<Configuration> cfgs; NuChoice cause; };
struct StepHalted { Configuration cfg; };
struct StepSelfLoop { Configuration cfg; };
struct StepNeedGuess { std::uint32_t tape; std::size_t cell; };
using StepOutcome = std::variant<StepNext, StepBranch, StepHalted, StepSelfLoop, StepNeedGuess>;

// Throws EvaluatorCannotCertify when the evaluator cannot settle the step.
StepOutcome step(const MachineSpec& spec, const Configuration& cfg, const NuEvaluator* nu = nullptr);

enum class RunStatus { Halted, Diverged, LoopCertified };
const char* to_string(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::Diverged;
  Tuple output;
  std::size_t steps = 0;
  Configuration last;
  std::vector<Configuration> trace;
  bool evaluator_gap = false;  // Diverged because an oracle could not be settled
};

struct RunOptions {
  bool capture_trace = false;
  std::size_t trace_cap = 1'000'000;
  // A repeated configuration of a deterministic run certifies non-termination.
  bool detect_cycles = true;
};

// Deterministic executor that can be suspended and resumed.
class Runner {
 public:
  enum class Event { Running, Halted, LoopCertified, Stuck, Branch, NeedGuess, OutOfSteps };

  Runner(const MachineSpec& spec, Configuration start, const NuEvaluator* nu, bool detect_cycles = true,
         std::size_t steps = 0);

  // Runs at most `slice` steps, never past `max_steps` in total. Branch and
  // NeedGuess leave the configuration before the instruction.
  Event advance(std::size_t slice, std::size_t max_steps);

  Configuration& config() { return cfg_; }
  const Configuration& config() const { return cfg_; }
  std::size_t steps() const { return steps_; }
  const StepInfo& info() const { return info_; }
  // Resets cycle detection after the configuration was changed externally.
  void reset_cycle_check();

 private:
  const MachineSpec* spec_;
  const NuEvaluator* nu_;
  Configuration cfg_;
  Configuration snapshot_;
  bool detect_;
  std::size_t steps_;
  std::size_t power_ = 1;
  std::size_t lam_ = 0;
  StepInfo info_;
};

// Follows the first candidate at every nu step.
RunResult run_from(const MachineSpec& spec, Configuration start, std::size_t max_steps,
                   const NuEvaluator* nu = nullptr, const RunOptions& opts = {});
RunResult run(const MachineSpec& spec, const Tuple& input, const Budget& budget,
              const NuEvaluator* nu = nullptr, const RunOptions& opts = {});
std::vector<Configuration> trace(const MachineSpec& spec, const Tuple& input, const Budget& budget,
                                 const NuEvaluator* nu = nullptr);

}  // namespace bss
