#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bss/program.hpp"
#include "bss/structures.hpp"

namespace bss {

struct MachineSpec;
using MachinePtr = std::shared_ptr<const MachineSpec>;

struct ExplicitSet {
  std::set<Tuple> tuples;
};

// Decider for a subset of U^arity; outputs c1 for members.
struct FixedArityDecider {
  MachinePtr machine;
  std::size_t arity = 1;
};

// Decider over all of U^infinity; outputs c1 for members.
struct Decider {
  MachinePtr machine;
};

// Halting set = Q. The arity, when known, restricts Q to U^arity.
struct SemiDecider {
  MachinePtr machine;
  std::optional<std::size_t> arity;
};

struct FullUniverse {};

using OracleSpec = std::variant<ExplicitSet, FixedArityDecider, Decider, SemiDecider, FullUniverse>;

enum class MachineKind { Deterministic, ND, NuOracle, OracleQuery };

const char* to_string(MachineKind k);

struct MachineSpec {
  Program program;
  StructurePtr structure;
  MachineKind kind = MachineKind::Deterministic;
  std::optional<OracleSpec> oracle;
  std::string oracle_name = "O";
  std::uint32_t tapes = 1;
  std::vector<std::uint32_t> index_registers;  // kappa_d, vector index = tape-1
};

struct Budget {
  std::size_t max_steps = 100000;
  std::size_t max_dovetail_s = 1000;
  std::size_t max_guess_index = 16;
  std::size_t max_branch_width = 1 << 16;
  // Longest guess tuple a native nu evaluator tries.
  std::size_t max_guess_len = 3;
};

enum class DiagKind {
  EmptyProgram,
  MissingStop,
  BadLabel,
  UnknownSymbol,
  ArityMismatch,
  TapeOutOfRange,
  IndexRegisterOutOfRange,
  KindMismatch,
  MixedTapeIndirect,
  BadRegister,
};

const char* to_string(DiagKind k);

struct Diagnostic {
  DiagKind kind;
  Label label = 0;  // 0 when not tied to a line
  std::string message;
};

std::vector<Diagnostic> validate_program(const Program& p, const Signature& sig, const MachineSpec& spec);
inline std::vector<Diagnostic> validate(const MachineSpec& spec) {
  return validate_program(spec.program, spec.structure->signature(), spec);
}
std::string format_diagnostics(const std::vector<Diagnostic>& ds);

// Builds a spec with tape count and kappa inferred from the program, raised to
// the given overrides. Throws KindMismatch when the program's instructions do
// not fit the kind.
MachineSpec make_machine(Program p, StructurePtr s, MachineKind kind = MachineKind::Deterministic,
                         std::optional<OracleSpec> oracle = std::nullopt, std::uint32_t tapes = 0,
                         std::vector<std::uint32_t> kappa = {});

MachinePtr share(MachineSpec m);

}  // namespace bss
