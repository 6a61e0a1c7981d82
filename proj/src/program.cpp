#include "bss/program.hpp"

#include <algorithm>

namespace bss {
namespace {

struct Usage {
  std::vector<std::uint32_t> iregs;
  std::vector<std::uint32_t> zdirect;
  std::uint32_t tapes = 1;

  void tape(std::uint32_t t) {
    tapes = std::max(tapes, t);
    if (iregs.size() < t) iregs.resize(t, 0);
    if (zdirect.size() < t) zdirect.resize(t, 0);
  }
  void i(IReg r) {
    tape(r.tape);
    iregs[r.tape - 1] = std::max(iregs[r.tape - 1], r.index);
  }
  void z(ZReg r) {
    tape(r.tape);
    zdirect[r.tape - 1] = std::max(zdirect[r.tape - 1], r.index);
  }
  void a(ZAddr r) {
    if (r.indirect)
      i(IReg{r.tape, r.index});
    else
      z(ZReg{r.tape, r.index});
  }
};

Usage usage(const Program& p) {
  Usage u;
  u.tape(1);
  u.i(IReg{1, 1});
  for (const auto& ins : p.code) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Compute>) {
            u.z(x.dest);
            for (auto r : x.args) u.z(r);
          } else if constexpr (std::is_same_v<T, SetConst>) {
            u.z(x.dest);
          } else if constexpr (std::is_same_v<T, Copy>) {
            u.a(x.dest);
            u.a(x.src);
          } else if constexpr (std::is_same_v<T, RelBranch>) {
            for (auto r : x.args) u.z(r);
          } else if constexpr (std::is_same_v<T, IndexBranch>) {
            u.i(x.lhs);
            u.i(x.rhs);
          } else if constexpr (std::is_same_v<T, IndexReset> || std::is_same_v<T, IndexIncr>) {
            u.i(x.reg);
          } else if constexpr (std::is_same_v<T, OracleBranch>) {
            u.i(IReg{x.tape, 1});
          } else if constexpr (std::is_same_v<T, NuAssign>) {
            u.z(x.dest);
            u.i(IReg{x.query_tape, 1});
          }
        },
        ins);
  }
  return u;
}

}  // namespace

std::vector<Label> targets(const Instruction& ins) {
  return std::visit(
      [](const auto& i) -> std::vector<Label> {
        if constexpr (requires { i.then_label; })
          return {i.then_label, i.else_label};
        else
          return {};
      },
      ins);
}

std::uint32_t tapes_used(const Program& p) { return usage(p).tapes; }

std::vector<std::uint32_t> index_registers_used(const Program& p) { return usage(p).iregs; }

std::vector<std::uint32_t> direct_z_used(const Program& p) { return usage(p).zdirect; }

bool uses_nu(const Program& p) {
  return std::any_of(p.code.begin(), p.code.end(),
                     [](const Instruction& i) { return std::holds_alternative<NuAssign>(i); });
}

bool uses_oracle_branch(const Program& p) {
  return std::any_of(p.code.begin(), p.code.end(),
                     [](const Instruction& i) { return std::holds_alternative<OracleBranch>(i); });
}

}  // namespace bss
