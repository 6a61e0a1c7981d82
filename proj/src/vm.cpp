#include "bss/vm.hpp"

#include "bss/error.hpp"

namespace bss {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "halted";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::LoopCertified: return "loop-certified";
  }
  return "?";
}

namespace {

std::size_t cell_of(const Configuration& cfg, const ZAddr& a) {
  return a.indirect ? static_cast<std::size_t>(cfg.ireg(IReg{a.tape, a.index})) : a.index;
}

bool pending_any(const Configuration& cfg, std::uint32_t tape, std::size_t from, std::size_t to,
                 StepInfo& info) {
  const Tape& t = cfg.tape(tape);
  if (!t.lazy()) return false;
  for (std::size_t i = from; i <= to; ++i)
    if (t.pending(i)) {
      info.kind = StepKind::NeedGuess;
      info.tape = tape;
      info.cell = i;
      return true;
    }
  return false;
}

bool pending_z(const Configuration& cfg, ZReg r, StepInfo& info) {
  return pending_any(cfg, r.tape, r.index, r.index, info);
}

Tuple prefix_of(const Configuration& cfg, std::uint32_t tape) {
  Tuple q;
  std::uint64_t n = cfg.ireg(IReg{tape, 1});
  q.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) q.push_back(cfg.tape(tape).get(i));
  return q;
}

}  // namespace

StepInfo step_in_place(const MachineSpec& spec, Configuration& cfg, const NuEvaluator* nu) {
  StepInfo info;
  const Instruction& ins = spec.program.at(cfg.label);
  const Structure& s = *spec.structure;
  switch (ins.index()) {
    case 0: {
      const auto& x = std::get<Compute>(ins);
      Value args[8];
      std::vector<Value> big;
      Value* a = args;
      if (x.args.size() > 8) {
        big.resize(x.args.size());
        a = big.data();
      }
      for (std::size_t k = 0; k < x.args.size(); ++k) {
        if (pending_z(cfg, x.args[k], info)) return info;
        a[k] = cfg.tape(x.args[k].tape).get(x.args[k].index);
      }
      Value r = s.eval_function(x.fn, std::span<const Value>(a, x.args.size()));
      cfg.tape(x.dest.tape).set(x.dest.index, r);
      ++cfg.label;
      return info;
    }
    case 1: {
      const auto& x = std::get<SetConst>(ins);
      cfg.tape(x.dest.tape).set(x.dest.index, s.constant(x.constant));
      ++cfg.label;
      return info;
    }
    case 2: {
      const auto& x = std::get<Copy>(ins);
      std::size_t from = cell_of(cfg, x.src);
      if (pending_any(cfg, x.src.tape, from, from, info)) return info;
      Value v = cfg.tape(x.src.tape).get(from);
      cfg.tape(x.dest.tape).set(cell_of(cfg, x.dest), v);
      ++cfg.label;
      return info;
    }
    case 3: {
      const auto& x = std::get<RelBranch>(ins);
      Value args[8];
      std::vector<Value> big;
      Value* a = args;
      if (x.args.size() > 8) {
        big.resize(x.args.size());
        a = big.data();
      }
      for (std::size_t k = 0; k < x.args.size(); ++k) {
        if (pending_z(cfg, x.args[k], info)) return info;
        a[k] = cfg.tape(x.args[k].tape).get(x.args[k].index);
      }
      cfg.label = s.eval_relation(x.rel, std::span<const Value>(a, x.args.size())) ? x.then_label : x.else_label;
      return info;
    }
    case 4: {
      const auto& x = std::get<IndexBranch>(ins);
      cfg.label = cfg.ireg(x.lhs) == cfg.ireg(x.rhs) ? x.then_label : x.else_label;
      return info;
    }
    case 5:
      cfg.ireg(std::get<IndexReset>(ins).reg) = 1;
      ++cfg.label;
      return info;
    case 6:
      ++cfg.ireg(std::get<IndexIncr>(ins).reg);
      ++cfg.label;
      return info;
    case 7: {
      if (pending_any(cfg, 1, 1, cfg.iregs[0][0], info)) return info;
      info.kind = StepKind::Halted;
      return info;
    }
    case 8: {
      const auto& x = std::get<OracleBranch>(ins);
      if (pending_any(cfg, x.tape, 1, cfg.ireg(IReg{x.tape, 1}), info)) return info;
      if (!nu) throw Error(ErrorKind::UnresolvedOracle, "oracle query without an evaluator");
      Tuple q = prefix_of(cfg, x.tape);
      auto m = nu->member(q);
      if (!m) {
        info.kind = StepKind::Undetermined;
        return info;
      }
      cfg.label = *m ? x.then_label : x.else_label;
      return info;
    }
    default: {
      const auto& x = std::get<NuAssign>(ins);
      if (pending_any(cfg, x.query_tape, 1, cfg.ireg(IReg{x.query_tape, 1}), info)) return info;
      if (!nu) throw Error(ErrorKind::UnresolvedOracle, "nu instruction without an evaluator");
      Tuple q = prefix_of(cfg, x.query_tape);
      info.choice = nu->choose(q);
      if (!info.choice.candidates.empty())
        info.kind = StepKind::Branch;
      else if (info.choice.complete)
        info.kind = StepKind::SelfLoop;
      else
        info.kind = StepKind::Undetermined;
      return info;
    }
  }
}

void apply_nu(const MachineSpec& spec, Configuration& cfg, const Value& y) {
  const auto& x = std::get<NuAssign>(spec.program.at(cfg.label));
  cfg.tape(x.dest.tape).set(x.dest.index, y);
  ++cfg.label;
}

StepOutcome step(const MachineSpec& spec, const Configuration& cfg, const NuEvaluator* nu) {
  Configuration c = cfg;
  StepInfo info = step_in_place(spec, c, nu);
  switch (info.kind) {
    case StepKind::Next: return StepNext{std::move(c)};
    case StepKind::Halted: return StepHalted{std::move(c)};
    case StepKind::SelfLoop: return StepSelfLoop{std::move(c)};
    case StepKind::NeedGuess: return StepNeedGuess{info.tape, info.cell};
    case StepKind::Undetermined:
      throw Error(ErrorKind::EvaluatorCannotCertify, "oracle could not settle the query at label " +
                                                         std::to_string(cfg.label));
    case StepKind::Branch: {
      StepBranch b;
      for (const auto& y : info.choice.candidates) {
        Configuration n = cfg;
        apply_nu(spec, n, y);
        b.cfgs.push_back(std::move(n));
      }
      b.cause = std::move(info.choice);
      return b;
    }
  }
  return StepNext{std::move(c)};
}

Runner::Runner(const MachineSpec& spec, Configuration start, const NuEvaluator* nu, bool detect_cycles,
               std::size_t steps)
    : spec_(&spec), nu_(nu), cfg_(std::move(start)), detect_(detect_cycles), steps_(steps) {
  if (detect_) snapshot_ = cfg_;
}

void Runner::reset_cycle_check() {
  power_ = 1;
  lam_ = 0;
  if (detect_) snapshot_ = cfg_;
}

Runner::Event Runner::advance(std::size_t slice, std::size_t max_steps) {
  for (std::size_t k = 0; k < slice; ++k) {
    if (steps_ >= max_steps) {
      // The stop instruction is recognized without consuming a step.
      if (std::holds_alternative<Stop>(spec_->program.at(cfg_.label))) {
        info_ = step_in_place(*spec_, cfg_, nu_);
        if (info_.kind == StepKind::Halted) return Event::Halted;
        if (info_.kind == StepKind::NeedGuess) return Event::NeedGuess;
      }
      return Event::OutOfSteps;
    }
    info_ = step_in_place(*spec_, cfg_, nu_);
    switch (info_.kind) {
      case StepKind::Next: break;
      case StepKind::Halted: return Event::Halted;
      case StepKind::SelfLoop: return Event::LoopCertified;
      case StepKind::NeedGuess: return Event::NeedGuess;
      case StepKind::Undetermined: return Event::Stuck;
      case StepKind::Branch: return Event::Branch;
    }
    ++steps_;
    if (detect_) {
      if (cfg_.label == snapshot_.label && cfg_ == snapshot_) return Event::LoopCertified;
      if (++lam_ == power_) {
        snapshot_ = cfg_;
        power_ *= 2;
        lam_ = 0;
      }
    }
  }
  return Event::Running;
}

RunResult run_from(const MachineSpec& spec, Configuration start, std::size_t max_steps, const NuEvaluator* nu,
                   const RunOptions& opts) {
  RunResult r;
  Runner runner(spec, std::move(start), nu, opts.detect_cycles && !opts.capture_trace);
  if (opts.capture_trace) r.trace.push_back(runner.config());
  const std::size_t slice = opts.capture_trace ? 1 : 4096;
  while (true) {
    auto ev = runner.advance(slice, max_steps);
    if (opts.capture_trace && ev == Runner::Event::Running && r.trace.size() < opts.trace_cap)
      r.trace.push_back(runner.config());
    if (ev == Runner::Event::Running) continue;
    if (ev == Runner::Event::Branch) {
      apply_nu(spec, runner.config(), runner.info().choice.candidates.front());
      if (opts.capture_trace && r.trace.size() < opts.trace_cap) r.trace.push_back(runner.config());
      // Taking the first candidate is a step of its own.
      Configuration c = runner.config();
      std::size_t used = runner.steps() + 1;
      runner = Runner(spec, std::move(c), nu, opts.detect_cycles && !opts.capture_trace, used);
      if (used > max_steps) {
        r.status = RunStatus::Diverged;
        break;
      }
      continue;
    }
    if (ev == Runner::Event::NeedGuess) {
      // Outside nondeterministic enumeration an unresolved guess takes the fill value.
      auto& t = runner.config().tape(runner.info().tape);
      t.set(runner.info().cell, t.fill());
      continue;
    }
    switch (ev) {
      case Runner::Event::Halted:
        r.status = RunStatus::Halted;
        r.output = output_of(runner.config());
        break;
      case Runner::Event::LoopCertified: r.status = RunStatus::LoopCertified; break;
      case Runner::Event::Stuck:
        r.status = RunStatus::Diverged;
        r.evaluator_gap = true;
        break;
      default: r.status = RunStatus::Diverged; break;
    }
    break;
  }
  r.steps = runner.steps();
  r.last = runner.config();
  return r;
}

RunResult run(const MachineSpec& spec, const Tuple& input, const Budget& budget, const NuEvaluator* nu,
              const RunOptions& opts) {
  return run_from(spec, input_config(spec, input), budget.max_steps, nu, opts);
}

std::vector<Configuration> trace(const MachineSpec& spec, const Tuple& input, const Budget& budget,
                                 const NuEvaluator* nu) {
  RunOptions o;
  o.capture_trace = true;
  return run(spec, input, budget, nu, o).trace;
}

}  // namespace bss
