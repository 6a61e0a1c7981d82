#include "bss/configuration.hpp"

#include <algorithm>

#include "bss/error.hpp"

namespace bss {

void Tape::set(std::size_t i, Value v) {
  if (i > cells_.size()) {
    cells_.resize(i, fill_);
    if (lazy_) known_.resize(i, 0);
  }
  cells_[i - 1] = std::move(v);
  if (lazy_) known_[i - 1] = 1;
}

void Tape::make_lazy(std::size_t from) {
  lazy_ = true;
  lazy_from_ = from;
  known_.assign(cells_.size(), 0);
  for (std::size_t i = 0; i < std::min(from, cells_.size()); ++i) known_[i] = 1;
}

bool operator==(const Tape& a, const Tape& b) {
  if (!(a.fill_ == b.fill_) || a.lazy_ != b.lazy_) return false;
  std::size_t n = std::max(a.cells_.size(), b.cells_.size());
  for (std::size_t i = 1; i <= n; ++i) {
    if (a.pending(i) != b.pending(i)) return false;
    if (!a.pending(i) && !(a.get(i) == b.get(i))) return false;
  }
  return true;
}

Configuration input_config(const MachineSpec& spec, const Tuple& input) {
  if (input.empty()) throw Error(ErrorKind::EmptyInput, "input tuple must have length >= 1");
  Configuration c;
  c.label = 1;
  c.iregs.resize(spec.tapes);
  for (std::uint32_t t = 0; t < spec.tapes; ++t) {
    std::uint32_t k = t < spec.index_registers.size() ? spec.index_registers[t] : 1;
    c.iregs[t].assign(std::max<std::uint32_t>(k, 1), 1);
  }
  c.iregs[0][0] = input.size();
  const Value& last = input.back();
  c.tapes.assign(spec.tapes, Tape(last));
  for (std::size_t i = 0; i < input.size(); ++i) c.tapes[0].set(i + 1, input[i]);
  return c;
}

Configuration nd_input_config(const MachineSpec& spec, const Tuple& input, const Tuple& guesses) {
  Configuration c = input_config(spec, input);
  for (std::size_t i = 0; i < guesses.size(); ++i) c.tapes[0].set(input.size() + i + 1, guesses[i]);
  return c;
}

Configuration lazy_input_config(const MachineSpec& spec, const Tuple& input) {
  Configuration c = input_config(spec, input);
  c.tapes[0].make_lazy(input.size());
  return c;
}

Tuple output_of(const Configuration& cfg) {
  Tuple out;
  std::uint64_t n = cfg.iregs[0][0];
  out.reserve(n);
  for (std::uint64_t i = 1; i <= n; ++i) out.push_back(cfg.tapes[0].get(i));
  return out;
}

}  // namespace bss
