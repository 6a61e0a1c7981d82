#include "bss/nondet.hpp"

#include <memory>

#include "bss/configuration.hpp"
#include "bss/error.hpp"
#include "bss/nu.hpp"

namespace bss {

const char* to_string(Verdict v) { return v == Verdict::Accepted ? "accepted" : "unknown"; }

RunResult run_with_guesses(const MachineSpec& spec, const Tuple& input, const Tuple& guesses,
                           const Budget& budget) {
  if (spec.kind == MachineKind::NuOracle || spec.kind == MachineKind::OracleQuery)
    throw Error(ErrorKind::KindMismatch, "run_with_guesses needs an nd machine");
  return run_from(spec, nd_input_config(spec, input, guesses), budget.max_steps);
}

namespace {

constexpr std::size_t kSlice = 1024;

struct Branch {
  Runner runner;
  std::size_t guessed = 0;
};

class Explorer {
 public:
  Explorer(const MachineSpec& spec, const Tuple& input, const GuessSource& source, const Budget& budget,
           const NuEvaluator* nu, bool stop_at_first)
      : spec_(spec), input_(input), source_(source), budget_(budget), nu_(nu), first_(stop_at_first) {
    if (input.empty()) throw Error(ErrorKind::EmptyInput, "input tuple must have length >= 1");
    if ((spec.kind == MachineKind::NuOracle || spec.kind == MachineKind::OracleQuery) && !nu_) {
      owned_ = make_evaluator(spec, budget);
      nu_ = owned_.get();
    }
    seed();
  }

  ResultSet run() {
    std::vector<std::size_t> alive;
    std::size_t next_rank = 0;
    for (std::size_t k = 0;; ++k) {
      // Diagonal k admits rank k and gives every admitted rank one slice.
      if (next_rank < total()) alive.push_back(next_rank++);
      if (alive.empty()) break;
      std::vector<std::size_t> keep;
      keep.reserve(alive.size());
      for (std::size_t r : alive) {
        if (advance(r)) keep.push_back(r);
        if (stop_) return finish();
      }
      alive = std::move(keep);
    }
    return finish();
  }

 private:
  std::size_t total() const { return roots_.size() + spawned_.size(); }

  Branch& at(std::size_t r) {
    if (r < roots_.size()) {
      if (!roots_[r]) roots_[r] = make_root(r);
      return *roots_[r];
    }
    return *spawned_[r - roots_.size()];
  }

  void seed() {
    const Structure& s = *spec_.structure;
    if (spec_.kind != MachineKind::ND) {
      roots_.resize(1);
      return;
    }
    std::visit(
        [&](const auto& src) {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, ExplicitTuples>) {
            tuples_ = src.tuples;
          } else {
            if (!s.enumerate(0)) throw Error(ErrorKind::NoEnumerator, s.name() + " has no enumerator");
            if constexpr (std::is_same_v<T, EnumeratorDovetail>) {
              values_ = guess_values(s, src.max_index);
              if (!values_.exhaustive) exhausted_ = false;
              for (std::size_t len = 0; len <= src.max_len; ++len) {
                std::vector<std::size_t> d(len, 0);
                if (len > 0 && values_.values.empty()) break;
                while (true) {
                  Tuple t;
                  for (auto i : d) t.push_back(values_.values[i]);
                  tuples_.push_back(std::move(t));
                  std::size_t i = len;
                  while (i > 0 && ++d[i - 1] == values_.values.size()) d[--i] = 0;
                  if (i == 0) break;
                }
              }
            } else {
              values_ = guess_values(s, src.max_index);
              tuples_.push_back({});
            }
          }
        },
        source_);
    roots_.resize(tuples_.size());
  }

  std::unique_ptr<Branch> make_root(std::size_t r) {
    if (spec_.kind != MachineKind::ND)
      return std::make_unique<Branch>(Branch{Runner(spec_, input_config(spec_, input_), nu_)});
    Configuration c = nd_input_config(spec_, input_, tuples_[r]);
    // Reads past the guess region are resolved (as x_n) by the NeedGuess path.
    if (const auto* ed = std::get_if<EnumeratorDovetail>(&source_))
      c.tape(1).make_lazy(input_.size() + ed->max_len);
    else if (std::holds_alternative<OnDemand>(source_))
      c.tape(1).make_lazy(input_.size());
    return std::make_unique<Branch>(Branch{Runner(spec_, std::move(c), nu_)});
  }

  void spawn(Configuration c, std::size_t steps, std::size_t guessed) {
    if (total() >= budget_.max_branch_width) {
      ++rs_.pruned;
      exhausted_ = false;
      return;
    }
    spawned_.push_back(std::make_unique<Branch>(Branch{Runner(spec_, std::move(c), nu_, true, steps), guessed}));
  }

  void drop(std::size_t r) {
    if (r < roots_.size())
      roots_[r].reset();
    else
      spawned_[r - roots_.size()].reset();
  }

  // Returns whether the branch stays alive.
  bool advance(std::size_t r) {
    Branch& b = at(r);
    while (true) {
      auto ev = b.runner.advance(kSlice, budget_.max_steps);
      switch (ev) {
        case Runner::Event::Running: return true;
        case Runner::Event::Halted:
          ++rs_.halted;
          rs_.outputs.insert(output_of(b.runner.config()));
          if (first_) stop_ = true;
          drop(r);
          return false;
        case Runner::Event::LoopCertified:
          ++rs_.loop_certified;
          drop(r);
          return false;
        case Runner::Event::Stuck:
        case Runner::Event::OutOfSteps:
          ++rs_.diverged;
          exhausted_ = false;
          drop(r);
          return false;
        case Runner::Event::Branch: {
          const NuChoice& ch = b.runner.info().choice;
          if (!ch.complete) exhausted_ = false;
          std::size_t steps = b.runner.steps() + 1;
          for (const auto& y : ch.candidates) {
            Configuration c = b.runner.config();
            apply_nu(spec_, c, y);
            spawn(std::move(c), steps, b.guessed);
          }
          drop(r);
          return false;
        }
        case Runner::Event::NeedGuess: {
          auto& tape = b.runner.config().tape(b.runner.info().tape);
          std::size_t cell = b.runner.info().cell;
          if (const auto* od = std::get_if<OnDemand>(&source_); od && b.guessed < od->max_cells) {
            if (!values_.exhaustive) exhausted_ = false;
            for (const auto& v : values_.values) {
              Configuration c = b.runner.config();
              c.tape(1).set(cell, v);
              spawn(std::move(c), b.runner.steps(), b.guessed + 1);
            }
            drop(r);
            return false;
          }
          // Out of guesses: the cell reads as x_n, and longer guess
          // sequences might have produced other runs.
          exhausted_ = false;
          tape.set(cell, tape.fill());
          b.runner.reset_cycle_check();
          continue;
        }
      }
    }
  }

  ResultSet finish() {
    rs_.complete = !stop_ && exhausted_;
    return std::move(rs_);
  }

  const MachineSpec& spec_;
  const Tuple& input_;
  const GuessSource& source_;
  Budget budget_;
  const NuEvaluator* nu_;
  std::unique_ptr<NuEvaluator> owned_;
  bool first_;
  bool stop_ = false;
  bool exhausted_ = true;
  GuessValues values_;
  std::vector<Tuple> tuples_;
  std::vector<std::unique_ptr<Branch>> roots_;
  std::vector<std::unique_ptr<Branch>> spawned_;
  ResultSet rs_;
};

}  // namespace

ResultSet enumerate_results(const MachineSpec& spec, const Tuple& input, const GuessSource& source,
                            const Budget& budget, const NuEvaluator* nu) {
  return Explorer(spec, input, source, budget, nu, false).run();
}

Verdict semidecides(const MachineSpec& spec, const Tuple& input, const GuessSource& source, const Budget& budget,
                    const NuEvaluator* nu) {
  auto rs = Explorer(spec, input, source, budget, nu, true).run();
  return rs.halted > 0 ? Verdict::Accepted : Verdict::Unknown;
}

}  // namespace bss
