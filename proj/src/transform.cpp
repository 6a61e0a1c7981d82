#include "bss/transform.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bss/builder.hpp"
#include "bss/error.hpp"
#include "bss/nu.hpp"

namespace bss {

namespace {

struct Operands {
  std::vector<std::uint32_t> imax;
  std::vector<std::uint32_t> zmax;

  void tape(std::uint32_t t) {
    if (imax.size() < t) imax.resize(t, 0);
    if (zmax.size() < t) zmax.resize(t, 0);
  }
  void i(IReg r) {
    tape(r.tape);
    imax[r.tape - 1] = std::max(imax[r.tape - 1], r.index);
  }
  void z(ZReg r) {
    tape(r.tape);
    zmax[r.tape - 1] = std::max(zmax[r.tape - 1], r.index);
  }
  void core(const Program& p) {
    auto ii = index_registers_used(p);
    auto zz = direct_z_used(p);
    for (std::uint32_t t = 1; t <= ii.size(); ++t)
      if (ii[t - 1]) i(IReg{t, ii[t - 1]});
    for (std::uint32_t t = 1; t <= zz.size(); ++t) {
      tape(t);
      zmax[t - 1] = std::max(zmax[t - 1], zz[t - 1]);
    }
  }
  void pseudo(const Pseudo& ps) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PCopy>) {
            tape(x.dst_tape);
            tape(x.src_tape);
            i(x.dst_ptr);
            i(x.src_len);
            i(x.src_ptr);
          } else if constexpr (std::is_same_v<T, PDispatch>) {
            i(x.sel);
            i(x.aux);
          } else if constexpr (std::is_same_v<T, PFor>) {
            i(x.counter);
            if (x.bound) i(*x.bound);
            core(Program{x.body});
          } else if constexpr (std::is_same_v<T, PCa>) {
            i(x.dst);
            i(x.src);
          } else if constexpr (std::is_same_v<T, PAdd>) {
            i(x.dst);
            i(x.lhs);
            i(x.rhs);
          } else if constexpr (std::is_same_v<T, PISet>) {
            i(x.dst);
            if (const auto* r = std::get_if<IReg>(&x.src)) i(*r);
          } else if constexpr (std::is_same_v<T, PInit>) {
            tape(x.tape);
            i(x.dst_ptr);
            i(x.src_ptr);
          } else if constexpr (std::is_same_v<T, PInitGuess>) {
            i(x.ptr);
            i(x.aux2);
            i(x.aux3);
            z(ZReg{1, 1});
          } else if constexpr (std::is_same_v<T, PGuard>) {
            i(x.lhs);
            i(x.rhs);
          } else if constexpr (std::is_same_v<T, PIfConst>) {
            z(x.z);
          } else if constexpr (std::is_same_v<T, PNu>) {
            z(x.dest);
            z(ZReg{x.dest.tape, x.upto});
            i(IReg{x.dest.tape, 1});
          }
        },
        ps);
  }
};

Operands operands(const ExtProgram& p) {
  Operands o;
  o.i(IReg{1, 1});
  Program core;
  for (const auto& l : p.lines) {
    if (const auto* ins = std::get_if<Instruction>(&l.ins))
      core.code.push_back(*ins);
    else
      o.pseudo(std::get<Pseudo>(l.ins));
  }
  o.core(core);
  for (auto& k : o.imax) k = std::max<std::uint32_t>(k, 1);
  return o;
}

[[noreturn]] void collision(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::RegisterCollision, "label " + std::to_string(line) + ": " + what);
}

bool has_ifconst(const ExtProgram& p, std::uint32_t tape) {
  for (const auto& l : p.lines)
    if (const auto* ps = std::get_if<Pseudo>(&l.ins))
      if (const auto* x = std::get_if<PIfConst>(ps))
        if (x->z.tape == tape) return true;
  return false;
}

}  // namespace

Expansion expand_pseudo_map(const ExtProgram& p, const Structure* s) {
  if (p.lines.empty()) throw Error(ErrorKind::InvalidArgument, "empty program");
  Operands ops = operands(p);
  const std::uint32_t tapes = static_cast<std::uint32_t>(ops.imax.size());
  Expansion e;
  e.host_kappa = ops.imax;
  e.z_scratch.assign(tapes, 0);
  for (std::uint32_t t = 1; t <= tapes; ++t)
    if (has_ifconst(p, t)) e.z_scratch[t - 1] = ops.zmax[t - 1] + 1;
  auto scratch = [&](std::uint32_t slot) { return IReg{1, ops.imax[0] + 1 + slot}; };

  Builder b;
  std::vector<Builder::Sym> host(p.size());
  for (auto& h : host) h = b.label();
  auto sym = [&](Label l) -> Builder::Sym {
    if (l < 1 || l > host.size()) throw Error(ErrorKind::InvalidArgument, "goto target " + std::to_string(l) + " out of range");
    return host[l - 1];
  };

  for (std::size_t k = 0; k < p.size(); ++k) {
    const std::size_t line = k + 1;
    b.bind(host[k]);
    const std::size_t before = b.size();
    const auto& li = p.lines[k].ins;
    if (const auto* ins0 = std::get_if<Instruction>(&li)) {
      Instruction ins = *ins0;
      remap_targets(ins, sym);
      b.emit(std::move(ins));
      continue;
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PGoto>) {
            b.jump(sym(x.target));
          } else if constexpr (std::is_same_v<T, PCopy>) {
            if (x.dst_ptr.tape != x.dst_tape || x.src_ptr.tape != x.src_tape || x.src_len.tape != x.src_tape)
              throw Error(ErrorKind::InvalidArgument, "copy pointers must live on the tape they address");
            if (x.dst_ptr == x.src_ptr || x.dst_ptr == x.src_len || x.src_ptr == x.src_len)
              collision(line, "copy needs three distinct registers");
            b.copy_prefix(x.dst_tape, x.dst_ptr, x.src_tape, x.src_len, x.src_ptr);
          } else if constexpr (std::is_same_v<T, PDispatch>) {
            if (x.sel == x.aux) collision(line, "dispatch selector and auxiliary coincide");
            std::vector<std::pair<std::uint64_t, Builder::Sym>> cases;
            for (const auto& [key, target] : x.cases) cases.emplace_back(key, sym(target));
            b.dispatch(x.sel, cases, sym(x.otherwise), x.aux);
          } else if constexpr (std::is_same_v<T, PFor>) {
            if (x.bound && *x.bound == x.counter) collision(line, "loop counter is its own bound");
            Builder::Sym top = b.label(), tail = b.label(), exit = b.label();
            std::vector<Builder::Sym> at(x.body.size());
            for (auto& a : at) a = b.label();
            b.reset(x.counter);
            b.bind(top);
            for (std::size_t i = 0; i < x.body.size(); ++i) {
              b.bind(at[i]);
              Builder::Sym cont = i + 1 < x.body.size() ? at[i + 1] : tail;
              Instruction ins = x.body[i];
              remap_targets(ins, [&](Label t) -> Label {
                if (t == kNextLine) return exit;
                if (t == kContinue) return cont;
                return sym(t);
              });
              if (std::holds_alternative<Stop>(ins)) throw Error(ErrorKind::InvalidArgument, "stop inside a loop body");
              b.emit(std::move(ins));
            }
            b.bind(tail);
            if (x.bound) {
              Builder::Sym more = b.label();
              b.branch_eq(x.counter, *x.bound, exit, more);
              b.bind(more);
            }
            b.incr(x.counter);
            b.jump(top);
            b.bind(exit);
            if (line == p.size()) throw Error(ErrorKind::InvalidArgument, "last line must be stop");
          } else if constexpr (std::is_same_v<T, PCa>) {
            b.ca(x.which, x.plus, x.dst, x.src, scratch(0), scratch(1), scratch(2), scratch(3));
          } else if constexpr (std::is_same_v<T, PAdd>) {
            b.add(x.dst, x.lhs, x.rhs, scratch(0), scratch(1));
          } else if constexpr (std::is_same_v<T, PISet>) {
            if (const auto* r = std::get_if<IReg>(&x.src))
              b.icopy(x.dst, *r);
            else
              b.iconst(x.dst, std::get<std::uint64_t>(x.src));
          } else if constexpr (std::is_same_v<T, PInit>) {
            if (x.dst_ptr.tape != x.tape || x.src_ptr.tape != x.tape)
              throw Error(ErrorKind::InvalidArgument, "init pointers must live on the tape they address");
            if (x.dst_ptr == x.src_ptr) collision(line, "init pointers coincide");
            b.init(x.tape, x.dst_ptr, x.src_ptr);
          } else if constexpr (std::is_same_v<T, PInitGuess>) {
            if (x.ptr.tape != 1 || x.aux2.tape != 1 || x.aux3.tape != 1)
              throw Error(ErrorKind::InvalidArgument, "initguess works on tape 1");
            if (x.ptr == x.aux2 || x.ptr == x.aux3 || x.aux2 == x.aux3 || x.aux3 == IReg{1, 1} ||
                x.aux2 == IReg{1, 1})
              collision(line, "initguess needs distinct auxiliary registers other than I1");
            b.initguess(x.ptr, x.aux2, x.aux3, x.oracle);
          } else if constexpr (std::is_same_v<T, PGuard>) {
            b.guard(x.lhs, x.rhs, sym(x.target));
          } else if constexpr (std::is_same_v<T, PIfConst>) {
            if (!s || !s->identity_available())
              throw Error(ErrorKind::IdentityUnavailable, "@if needs a structure with an identity relation");
            ZReg tmp{x.z.tape, e.z_scratch[x.z.tape - 1]};
            b.emit(SetConst{x.constant, tmp});
            b.emit(RelBranch{*s->identity_relation(), {x.z, tmp}, sym(x.then_label), sym(x.else_label)});
          } else if constexpr (std::is_same_v<T, PNu>) {
            IReg len{x.dest.tape, 1};
            IReg save = scratch(0);
            b.icopy(save, len);
            b.iconst(len, x.upto);
            b.emit(NuAssign{x.dest, x.dest.tape, x.oracle});
            b.icopy(len, save);
          }
        },
        std::get<Pseudo>(li));
    // Every host line keeps a distinct first instruction.
    if (b.size() == before) {
      if (line < p.size())
        b.jump(host[line]);
      else
        throw Error(ErrorKind::InvalidArgument, "last line must be stop");
    }
  }
  e.program = b.finish();
  e.entry.reserve(p.size());
  for (auto h : host) e.entry.push_back(b.position(h));
  return e;
}

Program expand_pseudo(const ExtProgram& p, const Structure* s) { return expand_pseudo_map(p, s).program; }

MachineSpec reference_machine(const ExtProgram& p, StructurePtr s, MachineKind kind, std::optional<OracleSpec> oracle) {
  Operands ops = operands(p);
  Program core;
  for (const auto& l : p.lines) {
    if (const auto* ins = std::get_if<Instruction>(&l.ins))
      core.code.push_back(*ins);
    else
      core.code.push_back(Stop{});
  }
  bool needs_nu = false;
  for (const auto& l : p.lines)
    if (const auto* ps = std::get_if<Pseudo>(&l.ins))
      needs_nu |= std::holds_alternative<PNu>(*ps) || std::holds_alternative<PInitGuess>(*ps);
  if (needs_nu && kind != MachineKind::NuOracle)
    throw Error(ErrorKind::KindMismatch, "nu pseudo instruction in a " + std::string(to_string(kind)) + " machine");
  return make_machine(std::move(core), std::move(s), kind, std::move(oracle),
                      static_cast<std::uint32_t>(ops.imax.size()), ops.imax);
}

namespace {

// One instruction executed against a host spec, with raw branch targets.
class BodyExec {
 public:
  BodyExec(const MachineSpec& host, const Instruction& ins) : spec_(host) {
    spec_.program.code = {ins, Stop{}};
    branches_ = !targets(ins).empty();
  }
  // Returns the raw target for branches, 0 for fall-through; sets *stuck when
  // the step cannot proceed.
  Label run(Configuration& cfg, const NuEvaluator* nu, StepKind* kind) {
    Label saved = cfg.label;
    cfg.label = 1;
    StepInfo info = step_in_place(spec_, cfg, nu);
    if (info.kind == StepKind::Branch) {
      apply_nu(spec_, cfg, info.choice.candidates.front());
      info.kind = StepKind::Next;
    }
    *kind = info.kind;
    Label out = branches_ ? cfg.label : 0;
    cfg.label = saved;
    return out;
  }

 private:
  MachineSpec spec_;
  bool branches_ = false;
};

}  // namespace

ReferenceRun run_reference(const ExtProgram& p, const MachineSpec& host, Configuration cfg, std::size_t max_steps,
                           const NuEvaluator* nu) {
  ReferenceRun r;
  r.entries.push_back(cfg);
  const Structure& st = *host.structure;
  auto first_nu = [&](std::span<const Value> prefix, bool* ok, RunStatus* why) -> Value {
    if (!nu) throw Error(ErrorKind::UnresolvedOracle, "nu pseudo instruction without an evaluator");
    NuChoice c = nu->choose(prefix);
    if (c.candidates.empty()) {
      *ok = false;
      *why = c.complete ? RunStatus::LoopCertified : RunStatus::Diverged;
      return Value{};
    }
    *ok = true;
    return c.candidates.front();
  };
  std::map<std::size_t, std::vector<BodyExec>> bodies;

  while (r.steps < max_steps) {
    const auto& li = p.lines.at(cfg.label - 1);
    if (std::holds_alternative<Instruction>(li.ins)) {
      StepInfo info = step_in_place(host, cfg, nu);
      switch (info.kind) {
        case StepKind::Halted:
          r.status = RunStatus::Halted;
          r.output = output_of(cfg);
          return r;
        case StepKind::SelfLoop:
          r.status = RunStatus::LoopCertified;
          return r;
        case StepKind::Branch:
          apply_nu(host, cfg, info.choice.candidates.front());
          break;
        case StepKind::Next:
          break;
        default:
          r.status = RunStatus::Diverged;
          return r;
      }
      ++r.steps;
      r.entries.push_back(cfg);
      continue;
    }
    const Label next = cfg.label + 1;
    bool stop_run = false;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PGoto>) {
            cfg.label = x.target;
          } else if constexpr (std::is_same_v<T, PCopy>) {
            std::uint64_t n = cfg.ireg(x.src_len);
            for (std::uint64_t i = 1; i <= n; ++i) cfg.tape(x.dst_tape).set(i, cfg.tape(x.src_tape).get(i));
            cfg.ireg(x.dst_ptr) = n;
            cfg.ireg(x.src_ptr) = n;
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PDispatch>) {
            std::uint64_t sel = cfg.ireg(x.sel);
            std::uint64_t aux = 1;
            Label to = x.otherwise;
            for (const auto& [key, target] : x.cases) {
              aux = key;
              if (sel == key) {
                to = target;
                break;
              }
            }
            cfg.ireg(x.aux) = aux;
            cfg.label = to;
          } else if constexpr (std::is_same_v<T, PFor>) {
            auto& ex = bodies[cfg.label];
            if (ex.empty())
              for (const auto& ins : x.body) ex.emplace_back(host, ins);
            cfg.ireg(x.counter) = 1;
            for (;;) {
              bool left = false;
              for (std::size_t i = 0; i < ex.size();) {
                if (r.steps >= max_steps) {
                  stop_run = true;
                  return;
                }
                StepKind kind;
                Label t = ex[i].run(cfg, nu, &kind);
                ++r.steps;
                if (kind == StepKind::SelfLoop) {
                  r.status = RunStatus::LoopCertified;
                  stop_run = true;
                  return;
                }
                if (kind != StepKind::Next) {
                  stop_run = true;
                  return;
                }
                if (t == 0 || t == kContinue) {
                  ++i;
                } else if (t == kNextLine) {
                  cfg.label = next;
                  left = true;
                  break;
                } else {
                  cfg.label = t;
                  left = true;
                  break;
                }
              }
              if (left) return;
              if (x.bound && cfg.ireg(x.counter) == cfg.ireg(*x.bound)) {
                cfg.label = next;
                return;
              }
              ++cfg.ireg(x.counter);
            }
          } else if constexpr (std::is_same_v<T, PCa>) {
            auto [m, s0] = cantor_decode(cfg.ireg(x.src));
            std::uint64_t v = x.which == 1 ? m : s0;
            bool zero = x.plus ? (m == 0 || s0 == 0) : v == 0;
            if (zero && !x.plus) {
              r.status = RunStatus::LoopCertified;
              stop_run = true;
              return;
            }
            cfg.ireg(x.dst) = zero ? 1 : v;
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PAdd>) {
            cfg.ireg(x.dst) = cfg.ireg(x.lhs) + cfg.ireg(x.rhs);
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PISet>) {
            if (const auto* reg = std::get_if<IReg>(&x.src))
              cfg.ireg(x.dst) = cfg.ireg(*reg);
            else
              cfg.ireg(x.dst) = std::get<std::uint64_t>(x.src);
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PInit>) {
            Tape& tp = cfg.tape(x.tape);
            ++cfg.ireg(x.dst_ptr);
            tp.set(cfg.ireg(x.dst_ptr), tp.get(cfg.ireg(x.src_ptr)));
            ++cfg.ireg(x.src_ptr);
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PInitGuess>) {
            Tape& tp = cfg.tape(1);
            ++cfg.ireg(x.ptr);
            cfg.ireg(x.aux2) = cfg.ireg(x.ptr) + 1;
            cfg.ireg(x.aux3) = 1;
            Value z1 = tp.get(1);
            tp.set(cfg.ireg(x.aux2), z1);
            Tuple prefix;
            for (std::uint64_t i = 1; i <= cfg.ireg(IReg{1, 1}); ++i) prefix.push_back(tp.get(i));
            bool ok;
            RunStatus why;
            Value y = first_nu(prefix, &ok, &why);
            if (!ok) {
              r.status = why;
              stop_run = true;
              return;
            }
            tp.set(cfg.ireg(x.ptr), y);
            tp.set(1, z1);
            cfg.label = next;
          } else if constexpr (std::is_same_v<T, PGuard>) {
            if (cfg.ireg(x.lhs) == cfg.ireg(x.rhs)) {
              cfg.label = x.target;
            } else {
              ++cfg.ireg(x.lhs);
              cfg.label = next;
            }
          } else if constexpr (std::is_same_v<T, PIfConst>) {
            bool eq = st.equal(cfg.tape(x.z.tape).get(x.z.index), st.constant(x.constant));
            cfg.label = eq ? x.then_label : x.else_label;
          } else if constexpr (std::is_same_v<T, PNu>) {
            Tuple prefix;
            for (std::uint32_t i = 1; i <= x.upto; ++i) prefix.push_back(cfg.tape(x.dest.tape).get(i));
            bool ok;
            RunStatus why;
            Value y = first_nu(prefix, &ok, &why);
            if (!ok) {
              r.status = why;
              stop_run = true;
              return;
            }
            cfg.tape(x.dest.tape).set(x.dest.index, y);
            cfg.label = next;
          }
        },
        std::get<Pseudo>(li.ins));
    if (stop_run) return r;
    if (!std::holds_alternative<PFor>(std::get<Pseudo>(li.ins))) ++r.steps;
    r.entries.push_back(cfg);
  }
  r.status = RunStatus::Diverged;
  return r;
}

Projection project(const Configuration& c, Label label, const std::vector<std::uint32_t>& kappa,
                   const std::vector<std::uint32_t>& z_scratch) {
  Projection p;
  p.label = label;
  for (std::size_t t = 0; t < kappa.size(); ++t) {
    std::vector<std::uint64_t> regs(kappa[t], 1);
    for (std::size_t j = 0; j < kappa[t] && t < c.iregs.size() && j < c.iregs[t].size(); ++j) regs[j] = c.iregs[t][j];
    p.iregs.push_back(std::move(regs));
    const Tape& tp = c.tapes.at(t);
    std::size_t limit = tp.support();
    if (t < z_scratch.size() && z_scratch[t]) limit = std::min<std::size_t>(limit, z_scratch[t] - 1);
    std::vector<Value> cells;
    for (std::size_t i = 1; i <= limit; ++i) cells.push_back(tp.get(i));
    while (!cells.empty() && cells.back() == tp.fill()) cells.pop_back();
    p.fills.push_back(tp.fill());
    p.cells.push_back(std::move(cells));
  }
  return p;
}

ReferenceRun run_expanded(const Expansion& e, const MachineSpec& spec, Configuration start, std::size_t max_steps,
                          const NuEvaluator* nu) {
  std::map<Label, Label> back;
  for (std::size_t i = 0; i < e.entry.size(); ++i) back.emplace(e.entry[i], static_cast<Label>(i + 1));
  ReferenceRun r;
  Runner run(spec, std::move(start), nu, true);
  {
    Configuration c = run.config();
    c.label = back.at(c.label);
    r.entries.push_back(std::move(c));
  }
  for (;;) {
    auto ev = run.advance(1, max_steps);
    if (ev == Runner::Event::Branch) {
      apply_nu(spec, run.config(), run.info().choice.candidates.front());
      run.reset_cycle_check();
    } else if (ev == Runner::Event::Halted) {
      r.status = RunStatus::Halted;
      r.output = output_of(run.config());
      break;
    } else if (ev == Runner::Event::LoopCertified) {
      r.status = RunStatus::LoopCertified;
      break;
    } else if (ev != Runner::Event::Running) {
      r.status = RunStatus::Diverged;
      break;
    }
    auto it = back.find(run.config().label);
    if (it != back.end()) {
      Configuration c = run.config();
      c.label = it->second;
      r.entries.push_back(std::move(c));
    }
  }
  r.steps = run.steps();
  return r;
}

}  // namespace bss
