#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace bss {

struct Signature {
  std::size_t constants = 0;
  std::vector<std::size_t> function_arities;
  std::vector<std::size_t> relation_arities;
  friend bool operator==(const Signature&, const Signature&) = default;
};

using Label = std::uint32_t;

struct IReg {
  std::uint32_t tape = 1;
  std::uint32_t index = 1;
  friend auto operator<=>(const IReg&, const IReg&) = default;
};

struct ZReg {
  std::uint32_t tape = 1;
  std::uint32_t index = 1;
  friend auto operator<=>(const ZReg&, const ZReg&) = default;
};

// Operand of a type-3 copy: Z_{tape,index} or Z_{tape,c(I_{tape,index})}.
struct ZAddr {
  std::uint32_t tape = 1;
  std::uint32_t index = 1;
  bool indirect = false;

  static ZAddr direct(ZReg z) { return {z.tape, z.index, false}; }
  static ZAddr via(IReg i) { return {i.tape, i.index, true}; }
  friend auto operator<=>(const ZAddr&, const ZAddr&) = default;
};

// (1) Zj := fi(Zj1,...,Zjm)
struct Compute {
  std::size_t fn = 1;
  ZReg dest;
  std::vector<ZReg> args;
  friend bool operator==(const Compute&, const Compute&) = default;
};

// (2) Zj := ci
struct SetConst {
  std::size_t constant = 1;
  ZReg dest;
  friend bool operator==(const SetConst&, const SetConst&) = default;
};

// (3) Z[Ij] := Z[Ik], also the direct forms Zj := Zk
struct Copy {
  ZAddr dest;
  ZAddr src;
  friend bool operator==(const Copy&, const Copy&) = default;
};

// (4) if ri(Zj1,...) then goto l1 else goto l2
struct RelBranch {
  std::size_t rel = 1;
  std::vector<ZReg> args;
  Label then_label = 1;
  Label else_label = 1;
  friend bool operator==(const RelBranch&, const RelBranch&) = default;
};

// (5) if Ij = Ik then goto l1 else goto l2
struct IndexBranch {
  IReg lhs;
  IReg rhs;
  Label then_label = 1;
  Label else_label = 1;
  friend bool operator==(const IndexBranch&, const IndexBranch&) = default;
};

// (6) Ij := 1
struct IndexReset {
  IReg reg;
  friend bool operator==(const IndexReset&, const IndexReset&) = default;
};

// (7) Ij := Ij + 1
struct IndexIncr {
  IReg reg;
  friend bool operator==(const IndexIncr&, const IndexIncr&) = default;
};

// (8) stop
struct Stop {
  friend bool operator==(const Stop&, const Stop&) = default;
};

// (9) if (Z_{t,1},...,Z_{t,c(I_{t,1})}) in O then goto l1 else goto l2
struct OracleBranch {
  std::uint32_t tape = 1;
  Label then_label = 1;
  Label else_label = 1;
  std::string oracle = "O";
  friend bool operator==(const OracleBranch&, const OracleBranch&) = default;
};

// (10) Z_{d1,j} := nu[O](Z_{d2,1},...,Z_{d2,c(I_{d2,1})})
struct NuAssign {
  ZReg dest;
  std::uint32_t query_tape = 1;
  std::string oracle = "O";
  friend bool operator==(const NuAssign&, const NuAssign&) = default;
};

using Instruction = std::variant<Compute, SetConst, Copy, RelBranch, IndexBranch, IndexReset,
                                 IndexIncr, Stop, OracleBranch, NuAssign>;

// Paper numbering 1..10.
inline int instruction_type(const Instruction& ins) { return static_cast<int>(ins.index()) + 1; }

// Label l is code[l-1].
struct Program {
  std::vector<Instruction> code;

  std::size_t size() const { return code.size(); }
  const Instruction& at(Label l) const { return code[l - 1]; }
  friend bool operator==(const Program&, const Program&) = default;
};

// Branch targets of an instruction (empty for fall-through forms).
std::vector<Label> targets(const Instruction& ins);

// Rewrites every branch target through f.
template <class F>
void remap_targets(Instruction& ins, F&& f) {
  std::visit(
      [&](auto& i) {
        if constexpr (requires { i.then_label; }) {
          i.then_label = f(i.then_label);
          i.else_label = f(i.else_label);
        }
      },
      ins);
}

// Number of tapes referenced (at least 1).
std::uint32_t tapes_used(const Program& p);
// Highest I-register index referenced per tape (vector index = tape-1).
std::vector<std::uint32_t> index_registers_used(const Program& p);
// Highest directly addressed Z index per tape.
std::vector<std::uint32_t> direct_z_used(const Program& p);
bool uses_nu(const Program& p);
bool uses_oracle_branch(const Program& p);

}  // namespace bss
