#pragma once

#include <cstdint>
#include <vector>

#include "bss/configuration.hpp"
#include "bss/machine.hpp"
#include "bss/pseudo.hpp"
#include "bss/vm.hpp"

namespace bss {

struct Expansion {
  Program program;
  std::vector<Label> entry;                 // host label l -> first expanded label, entry[l-1]
  std::vector<std::uint32_t> host_kappa;    // registers at or below are host registers
  std::vector<std::uint32_t> z_scratch;     // per tape, first scratch Z index (0 = none)
};

// Replaces every pseudo line by genuine instructions. The structure is needed
// only for "@if Zj = ci" (identity relation). Scratch registers start past
// the highest register any line references.
Expansion expand_pseudo_map(const ExtProgram& p, const Structure* s = nullptr);
Program expand_pseudo(const ExtProgram& p, const Structure* s = nullptr);

// Host machine for an extended program: pseudo lines become placeholders and
// kappa covers every register the pseudo lines name.
MachineSpec reference_machine(const ExtProgram& p, StructurePtr s, MachineKind kind = MachineKind::Deterministic,
                              std::optional<OracleSpec> oracle = std::nullopt);

struct ReferenceRun {
  RunStatus status = RunStatus::Diverged;
  Tuple output;
  std::size_t steps = 0;                 // host-level steps (for bodies count per instruction)
  std::vector<Configuration> entries;    // configuration at each arrival at a host line
};

// Executes an extended program with pseudo lines as atomic steps.
ReferenceRun run_reference(const ExtProgram& p, const MachineSpec& host, Configuration start,
                           std::size_t max_steps, const NuEvaluator* nu = nullptr);

// Configuration restricted to host registers and non-scratch Z cells.
struct Projection {
  Label label = 0;
  std::vector<std::vector<std::uint64_t>> iregs;
  std::vector<Value> fills;
  std::vector<std::vector<Value>> cells;  // trailing cells equal to the fill trimmed
  friend bool operator==(const Projection&, const Projection&) = default;
};
Projection project(const Configuration& c, Label label, const std::vector<std::uint32_t>& kappa,
                   const std::vector<std::uint32_t>& z_scratch);

// Runs the expanded program and records the configuration each time it enters
// the first instruction of a host line; labels are mapped back to host labels.
ReferenceRun run_expanded(const Expansion& e, const MachineSpec& spec, Configuration start, std::size_t max_steps,
                          const NuEvaluator* nu = nullptr);

// Layout of the nu -> ND simulation.
struct NuToNd {
  MachineSpec machine;
  Label star1 = 0;        // copy of the query onto tape 3
  Label tilde2 = 0;       // N_Q reached its stop label
  Label tilde3 = 0;
  Label m_start = 0;      // first label of the simulated program
  std::vector<Label> m_map;  // label of M -> label of its simulation
};

// 3-tape ND machine simulating a 1-tape nu machine whose oracle is a
// SemiDecider (or, for compile_special, the case's oracle machine).
NuToNd compile_nu_to_nd_map(const MachineSpec& m);
MachineSpec compile_nu_to_nd(const MachineSpec& m);

// 1-tape nu machine over the full universe simulating a 1-tape ND machine.
MachineSpec compile_nd_to_nu(const MachineSpec& m);

enum class SpecialCase { A1, A2, A3 };
const char* to_string(SpecialCase c);
NuToNd compile_special_map(const MachineSpec& m, SpecialCase c);
MachineSpec compile_special(const MachineSpec& m, SpecialCase c);

// Cell (track, row) of a stride-interleaved tape: stride*(row-1) + track.
std::size_t track_address(std::uint32_t stride, std::uint32_t track, std::size_t row);

// 1-tape machine keeping tape t in track t of a (d+1)-interleaved tape; the
// spare track holds x_n.
MachineSpec flatten_tapes(const MachineSpec& m);

// Guess tuple for flatten_tapes(m) that places guess k where the flattened
// machine keeps tape-1 cell n+k; other cells hold x_n.
Tuple flatten_guesses(const MachineSpec& m, const Tuple& input, const Tuple& guesses);

// Halts exactly when the decider outputs c1 (spins otherwise).
MachineSpec decider_to_semidecider(const MachineSpec& decider);

}  // namespace bss
