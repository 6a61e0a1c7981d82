#include "bss/machine.hpp"

#include <algorithm>

#include "bss/error.hpp"

namespace bss {

const char* to_string(MachineKind k) {
  switch (k) {
    case MachineKind::Deterministic: return "deterministic";
    case MachineKind::ND: return "nd";
    case MachineKind::NuOracle: return "nu";
    case MachineKind::OracleQuery: return "oracle";
  }
  return "?";
}

const char* to_string(DiagKind k) {
  switch (k) {
    case DiagKind::EmptyProgram: return "EmptyProgram";
    case DiagKind::MissingStop: return "MissingStop";
    case DiagKind::BadLabel: return "BadLabel";
    case DiagKind::UnknownSymbol: return "UnknownSymbol";
    case DiagKind::ArityMismatch: return "ArityMismatch";
    case DiagKind::TapeOutOfRange: return "TapeOutOfRange";
    case DiagKind::IndexRegisterOutOfRange: return "IndexRegisterOutOfRange";
    case DiagKind::KindMismatch: return "KindMismatch";
    case DiagKind::MixedTapeIndirect: return "MixedTapeIndirect";
    case DiagKind::BadRegister: return "BadRegister";
  }
  return "?";
}

std::string format_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    out += to_string(d.kind);
    if (d.label) out += " at " + std::to_string(d.label);
    out += ": " + d.message + "\n";
  }
  return out;
}

std::vector<Diagnostic> validate_program(const Program& p, const Signature& sig, const MachineSpec& spec) {
  std::vector<Diagnostic> out;
  if (p.code.empty()) {
    out.push_back({DiagKind::EmptyProgram, 0, "program has no instructions"});
    return out;
  }
  if (!std::holds_alternative<Stop>(p.code.back()))
    out.push_back({DiagKind::MissingStop, static_cast<Label>(p.size()), "last instruction must be stop"});

  const Label last = static_cast<Label>(p.size());
  auto kappa = [&](std::uint32_t tape) -> std::uint32_t {
    return tape >= 1 && tape <= spec.index_registers.size() ? spec.index_registers[tape - 1] : 0;
  };

  for (Label l = 1; l <= last; ++l) {
    const auto& ins = p.at(l);
    auto diag = [&](DiagKind k, std::string msg) { out.push_back({k, l, std::move(msg)}); };
    auto tape_ok = [&](std::uint32_t t) {
      if (t < 1 || t > spec.tapes) {
        diag(DiagKind::TapeOutOfRange, "tape " + std::to_string(t) + " not in 1.." + std::to_string(spec.tapes));
        return false;
      }
      return true;
    };
    auto z = [&](ZReg r) {
      if (r.index < 1) diag(DiagKind::BadRegister, "Z index must be positive");
      tape_ok(r.tape);
    };
    auto i = [&](IReg r) {
      if (r.index < 1) diag(DiagKind::BadRegister, "I index must be positive");
      if (tape_ok(r.tape) && r.index > kappa(r.tape))
        diag(DiagKind::IndexRegisterOutOfRange,
             "I" + std::to_string(r.tape) + "." + std::to_string(r.index) + " exceeds kappa");
    };
    auto a = [&](ZAddr r) {
      if (r.indirect)
        i(IReg{r.tape, r.index});
      else
        z(ZReg{r.tape, r.index});
    };
    for (Label t : targets(ins))
      if (t < 1 || t > last)
        diag(DiagKind::BadLabel, "goto target " + std::to_string(t) + " outside 1.." + std::to_string(last));

    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Compute>) {
            if (x.fn < 1 || x.fn > sig.function_arities.size())
              diag(DiagKind::UnknownSymbol, "unknown function f" + std::to_string(x.fn));
            else if (sig.function_arities[x.fn - 1] != x.args.size())
              diag(DiagKind::ArityMismatch, "f" + std::to_string(x.fn) + " has arity " +
                                                std::to_string(sig.function_arities[x.fn - 1]));
            z(x.dest);
            for (auto r : x.args) z(r);
          } else if constexpr (std::is_same_v<T, SetConst>) {
            if (x.constant < 1 || x.constant > sig.constants)
              diag(DiagKind::UnknownSymbol, "unknown constant c" + std::to_string(x.constant));
            z(x.dest);
          } else if constexpr (std::is_same_v<T, Copy>) {
            a(x.dest);
            a(x.src);
          } else if constexpr (std::is_same_v<T, RelBranch>) {
            if (x.rel < 1 || x.rel > sig.relation_arities.size())
              diag(DiagKind::UnknownSymbol, "unknown relation r" + std::to_string(x.rel));
            else if (sig.relation_arities[x.rel - 1] != x.args.size())
              diag(DiagKind::ArityMismatch, "r" + std::to_string(x.rel) + " has arity " +
                                                std::to_string(sig.relation_arities[x.rel - 1]));
            for (auto r : x.args) z(r);
          } else if constexpr (std::is_same_v<T, IndexBranch>) {
            i(x.lhs);
            i(x.rhs);
          } else if constexpr (std::is_same_v<T, IndexReset> || std::is_same_v<T, IndexIncr>) {
            i(x.reg);
          } else if constexpr (std::is_same_v<T, OracleBranch>) {
            if (spec.kind != MachineKind::OracleQuery)
              diag(DiagKind::KindMismatch, "oracle query in a " + std::string(to_string(spec.kind)) + " machine");
            if (tape_ok(x.tape)) i(IReg{x.tape, 1});
          } else if constexpr (std::is_same_v<T, NuAssign>) {
            if (spec.kind != MachineKind::NuOracle)
              diag(DiagKind::KindMismatch, "nu instruction in a " + std::string(to_string(spec.kind)) + " machine");
            z(x.dest);
            if (tape_ok(x.query_tape)) i(IReg{x.query_tape, 1});
          }
        },
        ins);
  }
  return out;
}

MachineSpec make_machine(Program p, StructurePtr s, MachineKind kind, std::optional<OracleSpec> oracle,
                         std::uint32_t tapes, std::vector<std::uint32_t> kappa) {
  if ((kind == MachineKind::NuOracle || kind == MachineKind::OracleQuery) && !oracle)
    throw Error(ErrorKind::UnresolvedOracle, std::string(to_string(kind)) + " machine needs an oracle");
  if (uses_nu(p) && kind != MachineKind::NuOracle)
    throw Error(ErrorKind::KindMismatch, std::string("program uses nu but kind is ") + to_string(kind));
  if (uses_oracle_branch(p) && kind != MachineKind::OracleQuery)
    throw Error(ErrorKind::KindMismatch, std::string("program queries an oracle but kind is ") + to_string(kind));
  MachineSpec m;
  m.structure = std::move(s);
  m.kind = kind;
  m.oracle = std::move(oracle);
  m.tapes = std::max(tapes_used(p), tapes);
  auto used = index_registers_used(p);
  used.resize(m.tapes, 0);
  for (std::size_t t = 0; t < used.size(); ++t) {
    used[t] = std::max<std::uint32_t>(used[t], 1);
    if (t < kappa.size()) used[t] = std::max(used[t], kappa[t]);
  }
  m.index_registers = std::move(used);
  m.program = std::move(p);
  return m;
}

MachinePtr share(MachineSpec m) { return std::make_shared<const MachineSpec>(std::move(m)); }

}  // namespace bss
