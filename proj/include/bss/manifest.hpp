#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bss/machine.hpp"
#include "bss/nondet.hpp"
#include "bss/pseudo.hpp"
#include "bss/structures.hpp"

namespace bss {

// A .machine.json document, resolved. Schema:
//   structure: "rationals" | {name, universe: [..], constants: [..],
//              functions: [{arity, table: [..]}], relations: [{arity, table: [0|1..]} | {identity: true}]}
//   kind: "deterministic" | "nd" | "nu" | "oracle"
//   oracle: {type: "explicit", tuples: [[..]..]}
//         | {type: "decider", program | program_file, arity?}   (arity makes it fixed-arity)
//         | {type: "semidecider", program | program_file, arity?, from_decider?}
//         | {type: "full"}
//   oracle_name, tapes, kappa: [..], budget: {max_steps, ...},
//   guesses: {source: "dovetail" | "on-demand" | "explicit", max_len, max_index, max_cells, tuples}
struct Manifest {
  StructurePtr structure;
  std::optional<MachineKind> kind;
  std::optional<OracleSpec> oracle;
  std::string oracle_name = "O";
  std::uint32_t tapes = 0;
  std::vector<std::uint32_t> kappa;
  Budget budget;
  GuessSource guesses = EnumeratorDovetail{};
};

// Throws SyntaxError for malformed documents, UnresolvedOracle when an oracle
// program cannot be found or parsed.
Manifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& file);

// Manifest with the rationals, inferred kind and no oracle.
Manifest default_manifest();

// "rationals" or a registered finite structure name.
StructurePtr structure_by_name(std::string_view name);

// Program text with pseudo lines expanded.
Program load_program(std::string_view text, const Structure& s);

// Binds a program to a manifest. Without an explicit kind it is inferred from
// the instructions (nu, oracle query, else deterministic). Throws KindMismatch
// when the declared kind does not fit, UnresolvedOracle when one is needed.
MachineSpec bind(const Manifest& m, Program p);

}  // namespace bss
