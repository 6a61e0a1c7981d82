#pragma once

#include <cstdint>
#include <vector>

#include "bss/program.hpp"

namespace bss {

// Emits instructions with symbolic labels; finish() resolves them to 1-based
// positions. Macro emitters use only genuine instruction types.
class Builder {
 public:
  using Sym = Label;

  Sym label();
  void bind(Sym s);
  Sym here();
  bool bound(Sym s) const { return s < pos_.size() && pos_[s] != 0; }
  // 1-based position of a bound symbol.
  Label position(Sym s) const { return pos_.at(s); }
  std::size_t size() const { return code_.size(); }

  // Branch targets in `ins` are symbols.
  void emit(Instruction ins);
  Program finish() const;

  void jump(Sym target);
  void branch_eq(IReg a, IReg b, Sym then_s, Sym else_s);
  void reset(IReg r) { emit(IndexReset{r}); }
  void incr(IReg r) { emit(IndexIncr{r}); }
  void stop() { emit(Stop{}); }

  // r := k (k >= 1)
  void iconst(IReg r, std::uint64_t k);
  // dst := src
  void icopy(IReg dst, IReg src);
  // dst := lhs + rhs with scratch t (and u when dst aliases rhs)
  void add(IReg dst, IReg lhs, IReg rhs, IReg t, IReg u);
  // (Zd.1..Zd.[dst_ptr]) := (Zs.1..Zs.[len]) with src_ptr walking the source
  void copy_prefix(std::uint32_t dst_tape, IReg dst_ptr, std::uint32_t src_tape, IReg len, IReg src_ptr);
  // dst := ca_which(src) with the (1,1) rule when plus; spins on a zero
  // component otherwise. k, s, c, tmp are scratch.
  void ca(int which, bool plus, IReg dst, IReg src, IReg k, IReg s, IReg c, IReg tmp);
  // Chain "if sel = key then goto label" for increasing keys.
  void dispatch(IReg sel, const std::vector<std::pair<std::uint64_t, Sym>>& cases, Sym otherwise, IReg aux);
  // dst_ptr++; Z[dst_ptr] := Z[src_ptr]; src_ptr++
  void init(std::uint32_t tape, IReg dst_ptr, IReg src_ptr);
  // Materializes a nu[O] answer in Z[ptr] after ptr++.
  void initguess(IReg ptr, IReg aux2, IReg aux3, const std::string& oracle);
  // if lhs = rhs then goto target else lhs++
  void guard(IReg lhs, IReg rhs, Sym target);

 private:
  std::vector<Instruction> code_;
  std::vector<std::uint32_t> pos_{0};  // symbol -> 1-based position, 0 unbound; symbol 0 unused
};

}  // namespace bss
