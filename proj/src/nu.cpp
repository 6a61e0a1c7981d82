#include "bss/nu.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bss/error.hpp"

namespace bss {

std::uint64_t cantor_encode(std::uint64_t m, std::uint64_t s0) {
  std::uint64_t k = m + s0;
  return k * (k + 1) / 2 + s0;
}

std::pair<std::uint64_t, std::uint64_t> cantor_decode(std::uint64_t s) {
  auto k = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(s) + 1.0) - 1.0) / 2.0);
  while (k * (k + 1) / 2 > s) --k;
  while ((k + 1) * (k + 2) / 2 <= s) ++k;
  std::uint64_t s0 = s - k * (k + 1) / 2;
  return {k - s0, s0};
}

std::pair<std::uint64_t, std::uint64_t> cantor_decode_plus(std::uint64_t s) {
  auto [m, s0] = cantor_decode(s);
  if (m == 0 || s0 == 0) return {1, 1};
  return {m, s0};
}

GuessValues guess_values(const Structure& s, std::size_t max_index) {
  GuessValues g;
  auto size = s.universe_size();
  std::size_t n = size ? std::min(*size, max_index) : max_index;
  g.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) g.values.push_back(*s.enumerate(k));
  g.exhaustive = size && *size <= max_index;
  return g;
}

namespace {

bool has_prefix(const Tuple& t, const Tuple& p) {
  return t.size() >= p.size() && std::equal(p.begin(), p.end(), t.begin());
}

// Mixed-radix walk over all tuples of one length.
class TupleCounter {
 public:
  TupleCounter(std::size_t len, std::size_t base) : digits_(len, 0), base_(base), done_(base == 0 && len > 0) {}
  bool done() const { return done_; }
  const std::vector<std::size_t>& digits() const { return digits_; }
  void next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (++digits_[i] < base_) return;
      digits_[i] = 0;
    }
    done_ = true;
  }

 private:
  std::vector<std::size_t> digits_;
  std::size_t base_;
  bool done_;
};

// Guess tuples in length-then-index order.
std::vector<Tuple> guess_tuples(const std::vector<Value>& values, std::size_t min_len, std::size_t max_len) {
  std::vector<Tuple> out;
  for (std::size_t len = min_len; len <= max_len; ++len)
    for (TupleCounter c(len, values.size()); !c.done(); c.next()) {
      Tuple t;
      t.reserve(len);
      for (auto d : c.digits()) t.push_back(values[d]);
      out.push_back(std::move(t));
    }
  return out;
}

Tuple concat(const Tuple& a, const Tuple& b) {
  Tuple t = a;
  t.insert(t.end(), b.begin(), b.end());
  return t;
}

NuChoice sorted_choice(std::set<Value> vals, bool complete) {
  return NuChoice{std::vector<Value>(vals.begin(), vals.end()), complete};
}

class ExplicitEvaluator final : public NuEvaluator {
 public:
  explicit ExplicitEvaluator(ExplicitSet q) : q_(std::move(q)) {}
  NuChoice choose(std::span<const Value> prefix) const override {
    return nu_explicit(q_, Tuple(prefix.begin(), prefix.end()));
  }
  std::optional<bool> member(std::span<const Value> prefix) const override {
    return q_.tuples.count(Tuple(prefix.begin(), prefix.end())) > 0;
  }

 private:
  ExplicitSet q_;
};

class FixedArityEvaluator final : public NuEvaluator {
 public:
  FixedArityEvaluator(FixedArityDecider q, Budget b) : q_(std::move(q)), b_(b) {}
  NuChoice choose(std::span<const Value> prefix) const override {
    return nu_fixed_arity(q_, Tuple(prefix.begin(), prefix.end()), b_);
  }
  std::optional<bool> member(std::span<const Value> prefix) const override {
    if (prefix.size() != q_.arity) return false;
    bool settled = false;
    bool yes = decider_accepts(*q_.machine, Tuple(prefix.begin(), prefix.end()), b_, &settled);
    if (!settled) return std::nullopt;
    return yes;
  }

 private:
  FixedArityDecider q_;
  Budget b_;
};

class DeciderEvaluator final : public NuEvaluator {
 public:
  DeciderEvaluator(Decider q, Budget b) : q_(std::move(q)), b_(b) {}
  NuChoice choose(std::span<const Value> prefix) const override {
    Tuple p(prefix.begin(), prefix.end());
    auto gv = guess_values(*q_.machine->structure, b_.max_guess_index);
    std::set<Value> found;
    for (const auto& g : guess_tuples(gv.values, 1, b_.max_guess_len)) {
      if (found.count(g.front())) continue;
      bool settled = false;
      if (decider_accepts(*q_.machine, concat(p, g), b_, &settled)) found.insert(g.front());
    }
    // Longer extensions always remain untested.
    return sorted_choice(std::move(found), false);
  }
  std::optional<bool> member(std::span<const Value> prefix) const override {
    bool settled = false;
    bool yes = decider_accepts(*q_.machine, Tuple(prefix.begin(), prefix.end()), b_, &settled);
    if (!settled) return std::nullopt;
    return yes;
  }

 private:
  Decider q_;
  Budget b_;
};

class SemiDeciderEvaluator final : public NuEvaluator {
 public:
  SemiDeciderEvaluator(SemiDecider q, Budget b) : q_(std::move(q)), b_(b) {}
  NuChoice choose(std::span<const Value> prefix) const override {
    auto st = nu_semidecider_stream(q_, Tuple(prefix.begin(), prefix.end()), b_);
    std::set<Value> vals;
    for (auto& e : st.emissions) vals.insert(e.value);
    return sorted_choice(std::move(vals), st.complete);
  }
  std::optional<bool> member(std::span<const Value> prefix) const override {
    if (q_.arity && prefix.size() != *q_.arity) return false;
    auto r = run(*q_.machine, Tuple(prefix.begin(), prefix.end()), b_);
    if (r.status == RunStatus::Halted) return true;
    if (r.status == RunStatus::LoopCertified) return false;
    return std::nullopt;
  }

 private:
  SemiDecider q_;
  Budget b_;
};

class FullUniverseEvaluator final : public NuEvaluator {
 public:
  FullUniverseEvaluator(StructurePtr s, Budget b) : s_(std::move(s)), b_(b) {}
  NuChoice choose(std::span<const Value>) const override { return nu_full_universe(*s_, b_); }
  std::optional<bool> member(std::span<const Value>) const override { return true; }

 private:
  StructurePtr s_;
  Budget b_;
};

}  // namespace

NuChoice nu_explicit(const ExplicitSet& q, const Tuple& prefix) {
  std::set<Value> vals;
  for (auto it = q.tuples.lower_bound(prefix); it != q.tuples.end() && has_prefix(*it, prefix); ++it)
    if (it->size() > prefix.size()) vals.insert((*it)[prefix.size()]);
  return sorted_choice(std::move(vals), true);
}

bool decider_accepts(const MachineSpec& decider, const Tuple& input, const Budget& budget, bool* settled) {
  auto r = run(decider, input, budget);
  if (settled) *settled = r.status != RunStatus::Diverged;
  return r.status == RunStatus::Halted && !r.output.empty() &&
         r.output.front() == decider.structure->constant(1);
}

NuStream nu_semidecider_stream(const SemiDecider& q, const Tuple& prefix, const Budget& budget) {
  NuStream out;
  if (prefix.empty()) throw Error(ErrorKind::EmptyInput, "nu query on an empty prefix");
  const MachineSpec& n = *q.machine;
  std::size_t lo = 1, hi = budget.max_guess_len;
  if (q.arity) {
    if (prefix.size() >= *q.arity) {
      // Q holds no tuple extending the prefix.
      out.complete = true;
      return out;
    }
    lo = hi = *q.arity - prefix.size();
  }
  auto gv = guess_values(*n.structure, budget.max_guess_index);
  auto tuples = guess_tuples(gv.values, lo, hi);

  struct Slot {
    std::optional<Runner> runner;
    bool done = false;
  };
  std::vector<Slot> slots(tuples.size());
  std::set<Value> emitted;
  std::size_t live = tuples.size();
  bool all_settled = true;
  const std::size_t cap = budget.max_dovetail_s;
  const std::size_t slice = 64;
  // Diagonal k gives each tuple r <= k one more slice.
  for (std::size_t k = 0; live > 0; ++k) {
    std::size_t top = std::min(k, tuples.size() - 1);
    for (std::size_t r = 0; r <= top; ++r) {
      Slot& sl = slots[r];
      if (sl.done) continue;
      if (emitted.count(tuples[r].front())) {
        sl.done = true;
        sl.runner.reset();
        --live;
        continue;
      }
      if (!sl.runner) sl.runner.emplace(n, input_config(n, concat(prefix, tuples[r])), nullptr);
      auto ev = sl.runner->advance(slice, cap);
      if (ev == Runner::Event::Running) continue;
      if (ev == Runner::Event::Halted) {
        emitted.insert(tuples[r].front());
        out.emissions.push_back({tuples[r].front(), {tuples[r], sl.runner->steps()}});
      } else if (ev != Runner::Event::LoopCertified) {
        all_settled = false;
      }
      sl.done = true;
      sl.runner.reset();
      --live;
    }
  }
  out.complete = q.arity.has_value() && gv.exhaustive && all_settled;
  return out;
}

std::vector<Algo1Emission> nu_algo1(const SemiDecider& q, const Tuple& prefix, const Tuple& guesses,
                                    const Budget& budget, std::size_t max_emissions) {
  std::vector<Algo1Emission> out;
  if (prefix.empty()) throw Error(ErrorKind::EmptyInput, "nu query on an empty prefix");
  // Guesses past the supplied ones read as the last prefix component.
  auto y = [&](std::size_t i) -> const Value& { return i <= guesses.size() ? guesses[i - 1] : prefix.back(); };
  std::size_t m0 = 0;
  for (std::uint64_t s = 1; s <= budget.max_dovetail_s && out.size() < max_emissions; ++s) {
    auto [m, s0] = cantor_decode_plus(s);
    Tuple in = prefix;
    for (std::size_t i = 1; i <= m; ++i) in.push_back(y(m0 + i));
    auto r = run(*q.machine, in, Budget{.max_steps = s0});
    if (r.status == RunStatus::Halted) {
      out.push_back({y(m0 + 1), s, m, s0});
      m0 += m;
    }
  }
  return out;
}

NuChoice nu_fixed_arity(const FixedArityDecider& q, const Tuple& prefix, const Budget& budget) {
  if (prefix.size() >= q.arity) return NuChoice{{}, true};
  auto gv = guess_values(*q.machine->structure, budget.max_guess_index);
  std::set<Value> found;
  bool settled_all = true;
  std::size_t m = q.arity - prefix.size();
  for (TupleCounter c(m, gv.values.size()); !c.done(); c.next()) {
    const Value& head = gv.values[c.digits().front()];
    if (found.count(head)) continue;
    Tuple in = prefix;
    for (auto d : c.digits()) in.push_back(gv.values[d]);
    bool settled = false;
    if (decider_accepts(*q.machine, in, budget, &settled)) found.insert(head);
    settled_all = settled_all && settled;
  }
  return sorted_choice(std::move(found), gv.exhaustive && settled_all);
}

RunLength nu_identity_runlength(const SemiDecider& q, const Tuple& prefix, const Tuple& paired,
                                const Budget& budget) {
  const Structure& s = *q.machine->structure;
  if (!s.identity_available())
    throw Error(ErrorKind::IdentityUnavailable, s.name() + " has no identity relation");
  if (prefix.empty()) throw Error(ErrorKind::EmptyInput, "nu query on an empty prefix");
  RunLength out;
  auto y = [&](std::size_t i) -> const Value& { return i == 0 ? prefix.back() : paired[i - 1]; };
  for (std::size_t m = 1; 2 * m <= paired.size(); ++m) {
    if (s.equal(y(2 * m), y(2 * m - 2))) continue;
    out.m = m;
    out.launched = true;
    Tuple in = prefix;
    for (std::size_t i = 1; i <= m; ++i) in.push_back(y(2 * i - 1));
    auto r = run(*q.machine, in, budget);
    if (r.status == RunStatus::Halted) out.value = y(1);
    return out;
  }
  return out;
}

NuChoice nu_full_universe(const Structure& s, const Budget& budget) {
  auto gv = guess_values(s, budget.max_guess_index);
  return NuChoice{std::move(gv.values), gv.exhaustive};
}

std::unique_ptr<NuEvaluator> make_evaluator(const OracleSpec& oracle, StructurePtr s, const Budget& budget) {
  return std::visit(
      [&](const auto& q) -> std::unique_ptr<NuEvaluator> {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, ExplicitSet>) {
          return std::make_unique<ExplicitEvaluator>(q);
        } else if constexpr (std::is_same_v<T, FixedArityDecider>) {
          return std::make_unique<FixedArityEvaluator>(q, budget);
        } else if constexpr (std::is_same_v<T, Decider>) {
          return std::make_unique<DeciderEvaluator>(q, budget);
        } else if constexpr (std::is_same_v<T, SemiDecider>) {
          return std::make_unique<SemiDeciderEvaluator>(q, budget);
        } else {
          return std::make_unique<FullUniverseEvaluator>(s, budget);
        }
      },
      oracle);
}

std::unique_ptr<NuEvaluator> make_evaluator(const MachineSpec& spec, const Budget& budget) {
  if (!spec.oracle) throw Error(ErrorKind::UnresolvedOracle, "machine has no oracle bound");
  return make_evaluator(*spec.oracle, spec.structure, budget);
}

}  // namespace bss
