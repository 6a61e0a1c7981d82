#include "bss/builder.hpp"

#include "bss/error.hpp"

namespace bss {

Builder::Sym Builder::label() {
  pos_.push_back(0);
  return static_cast<Sym>(pos_.size() - 1);
}

void Builder::bind(Sym s) {
  if (bound(s)) throw Error(ErrorKind::InvalidArgument, "label bound twice");
  pos_.at(s) = static_cast<std::uint32_t>(code_.size() + 1);
}

Builder::Sym Builder::here() {
  Sym s = label();
  bind(s);
  return s;
}

void Builder::emit(Instruction ins) { code_.push_back(std::move(ins)); }

Program Builder::finish() const {
  Program p{code_};
  for (auto& ins : p.code)
    remap_targets(ins, [&](Label s) {
      if (!bound(s)) throw Error(ErrorKind::InvalidArgument, "unbound label in builder output");
      if (pos_[s] > code_.size()) throw Error(ErrorKind::InvalidArgument, "label bound past the last instruction");
      return pos_[s];
    });
  return p;
}

void Builder::jump(Sym target) { emit(IndexBranch{IReg{1, 1}, IReg{1, 1}, target, target}); }

void Builder::branch_eq(IReg a, IReg b, Sym then_s, Sym else_s) { emit(IndexBranch{a, b, then_s, else_s}); }

void Builder::iconst(IReg r, std::uint64_t k) {
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "index registers hold positive integers");
  reset(r);
  for (std::uint64_t i = 1; i < k; ++i) incr(r);
}

void Builder::icopy(IReg dst, IReg src) {
  if (dst == src) return;
  Sym loop = label(), step = label(), done = label();
  reset(dst);
  bind(loop);
  branch_eq(dst, src, done, step);
  bind(step);
  incr(dst);
  jump(loop);
  bind(done);
}

void Builder::add(IReg dst, IReg lhs, IReg rhs, IReg t, IReg u) {
  IReg r = rhs;
  if (dst == rhs) {
    icopy(u, rhs);
    r = u;
  }
  icopy(dst, lhs);
  Sym loop = label(), step = label(), done = label();
  reset(t);
  bind(loop);
  incr(dst);
  branch_eq(t, r, done, step);
  bind(step);
  incr(t);
  jump(loop);
  bind(done);
}

void Builder::copy_prefix(std::uint32_t dst_tape, IReg dst_ptr, std::uint32_t src_tape, IReg len, IReg src_ptr) {
  Sym loop = label(), step = label(), done = label();
  reset(dst_ptr);
  reset(src_ptr);
  bind(loop);
  emit(Copy{ZAddr{dst_tape, dst_ptr.index, true}, ZAddr{src_tape, src_ptr.index, true}});
  branch_eq(len, src_ptr, done, step);
  bind(step);
  incr(src_ptr);
  incr(dst_ptr);
  jump(loop);
  bind(done);
}

void Builder::ca(int which, bool plus, IReg dst, IReg src, IReg k, IReg s, IReg c, IReg tmp) {
  // Walk the Cantor diagonals: after c(src) moves, m = K - S and s0 = S - 1.
  Sym walk = label(), same = label(), other = label(), check = label(), more = label(), walked = label();
  Sym nz1 = label(), compute = label(), zero = label(), done = label();
  reset(k);
  reset(s);
  reset(c);
  bind(walk);
  branch_eq(s, k, same, other);
  bind(same);
  incr(k);
  reset(s);
  jump(check);
  bind(other);
  incr(s);
  bind(check);
  branch_eq(c, src, walked, more);
  bind(more);
  incr(c);
  jump(walk);
  bind(walked);
  // m = 0 iff K = S; s0 = 0 iff S = 1 (c is reused as the constant 1).
  reset(c);
  if (plus || which == 1) {
    branch_eq(k, s, zero, nz1);
  } else {
    jump(nz1);
  }
  bind(nz1);
  if (plus || which == 2) {
    branch_eq(s, c, zero, compute);
  } else {
    jump(compute);
  }
  bind(compute);
  Sym loop = label(), step = label();
  reset(dst);
  if (which == 1)
    icopy(tmp, s);
  else
    reset(tmp);
  bind(loop);
  incr(tmp);
  branch_eq(tmp, which == 1 ? k : s, done, step);
  bind(step);
  incr(dst);
  jump(loop);
  bind(zero);
  if (plus) {
    reset(dst);
    jump(done);
  } else {
    jump(zero);
  }
  bind(done);
}

void Builder::dispatch(IReg sel, const std::vector<std::pair<std::uint64_t, Sym>>& cases, Sym otherwise,
                       IReg aux) {
  reset(aux);
  std::uint64_t at = 1;
  for (const auto& [key, target] : cases) {
    if (key < at) throw Error(ErrorKind::InvalidArgument, "dispatch keys must increase");
    for (; at < key; ++at) incr(aux);
    Sym next = label();
    branch_eq(sel, aux, target, next);
    bind(next);
  }
  jump(otherwise);
}

void Builder::init(std::uint32_t tape, IReg dst_ptr, IReg src_ptr) {
  incr(dst_ptr);
  emit(Copy{ZAddr{tape, dst_ptr.index, true}, ZAddr{tape, src_ptr.index, true}});
  incr(src_ptr);
}

void Builder::initguess(IReg ptr, IReg aux2, IReg aux3, const std::string& oracle) {
  incr(ptr);
  icopy(aux2, ptr);
  incr(aux2);
  reset(aux3);
  emit(Copy{ZAddr::via(aux2), ZAddr::via(aux3)});
  emit(NuAssign{ZReg{1, 1}, 1, oracle});
  emit(Copy{ZAddr::via(ptr), ZAddr::via(aux3)});
  emit(Copy{ZAddr::via(aux3), ZAddr::via(aux2)});
}

void Builder::guard(IReg lhs, IReg rhs, Sym target) {
  Sym step = label();
  branch_eq(lhs, rhs, target, step);
  bind(step);
  incr(lhs);
}

}  // namespace bss
