#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bss/program.hpp"

namespace bss {

// Branch targets inside a for-loop body may leave the loop to the line after
// it, or continue with the next body instruction.
inline constexpr Label kNextLine = 0xFFFFFFFFu;
inline constexpr Label kContinue = 0xFFFFFFFEu;

// goto l
struct PGoto {
  Label target = 1;
  friend bool operator==(const PGoto&, const PGoto&) = default;
};

// (Zd.1,...,Zd.[dst_ptr]) := (Ze.1,...,Ze.[src_len]) via src_ptr
// Copies c(src_len) cells; afterwards dst_ptr and src_ptr hold that count.
struct PCopy {
  std::uint32_t dst_tape = 2;
  IReg dst_ptr;
  std::uint32_t src_tape = 1;
  IReg src_len;
  IReg src_ptr;
  friend bool operator==(const PCopy&, const PCopy&) = default;
};

// if sel = key then goto label, for keys in increasing order, via an
// incrementing auxiliary register; otherwise goto otherwise.
struct PDispatch {
  IReg sel;
  std::vector<std::pair<std::uint64_t, Label>> cases;
  Label otherwise = 1;
  IReg aux;
  friend bool operator==(const PDispatch&, const PDispatch&) = default;
};

// for counter := 1,2,...[,bound] do { body }
struct PFor {
  IReg counter;
  std::optional<IReg> bound;
  std::vector<Instruction> body;
  friend bool operator==(const PFor&, const PFor&) = default;
};

// dst := ca_which[+](src)
struct PCa {
  int which = 1;
  bool plus = false;
  IReg dst;
  IReg src;
  friend bool operator==(const PCa&, const PCa&) = default;
};

// dst := lhs + rhs
struct PAdd {
  IReg dst;
  IReg lhs;
  IReg rhs;
  friend bool operator==(const PAdd&, const PAdd&) = default;
};

// dst := src (register or positive constant)
struct PISet {
  IReg dst;
  std::variant<IReg, std::uint64_t> src;
  friend bool operator==(const PISet&, const PISet&) = default;
};

// init(Zd.[dst_ptr]) from Zd.[src_ptr]: dst_ptr++; copy; src_ptr++
struct PInit {
  std::uint32_t tape = 1;
  IReg dst_ptr;
  IReg src_ptr;
  friend bool operator==(const PInit&, const PInit&) = default;
};

// initguess(Z[ptr]) with helpers aux2, aux3
struct PInitGuess {
  IReg ptr;
  IReg aux2;
  IReg aux3;
  std::string oracle = "O";
  friend bool operator==(const PInitGuess&, const PInitGuess&) = default;
};

// if lhs = rhs then goto target else lhs := lhs + 1
struct PGuard {
  IReg lhs;
  IReg rhs;
  Label target = 1;
  friend bool operator==(const PGuard&, const PGuard&) = default;
};

// if Zj = c_i then goto then_label else goto else_label
struct PIfConst {
  ZReg z;
  std::size_t constant = 1;
  Label then_label = 1;
  Label else_label = 1;
  friend bool operator==(const PIfConst&, const PIfConst&) = default;
};

// dest := nu[O](Z1,...,Z_upto) on the query tape
struct PNu {
  ZReg dest;
  std::uint32_t upto = 1;
  std::string oracle = "O";
  friend bool operator==(const PNu&, const PNu&) = default;
};

using Pseudo = std::variant<PGoto, PCopy, PDispatch, PFor, PCa, PAdd, PISet, PInit, PInitGuess, PGuard,
                            PIfConst, PNu>;

const char* pseudo_name(const Pseudo& p);

using ExtInstruction = std::variant<Instruction, Pseudo>;

struct ExtLine {
  ExtInstruction ins;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct ExtProgram {
  std::vector<ExtLine> lines;

  std::size_t size() const { return lines.size(); }
  bool has_pseudo() const;
  // Throws UnknownPseudo naming the first pseudo line when there is one.
  Program core() const;
};

}  // namespace bss
