#pragma once

#include <cstdint>
#include <vector>

#include "bss/machine.hpp"
#include "bss/value.hpp"

namespace bss {

// Infinite register tape: cells 1..support() stored, every later cell holds
// fill(). In lazy mode, cells past lazy_from() that were never written are
// unresolved guesses and report pending().
class Tape {
 public:
  Tape() = default;
  explicit Tape(Value fill) : fill_(fill) {}

  const Value& get(std::size_t i) const { return i <= cells_.size() ? cells_[i - 1] : fill_; }
  void set(std::size_t i, Value v);
  const Value& fill() const { return fill_; }
  std::size_t support() const { return cells_.size(); }

  void make_lazy(std::size_t from);
  bool lazy() const { return lazy_; }
  std::size_t lazy_from() const { return lazy_from_; }
  bool pending(std::size_t i) const {
    return lazy_ && i > lazy_from_ && (i > cells_.size() || !known_[i - 1]);
  }

  friend bool operator==(const Tape& a, const Tape& b);

 private:
  std::vector<Value> cells_;
  std::vector<char> known_;
  Value fill_;
  bool lazy_ = false;
  std::size_t lazy_from_ = 0;
};

struct Configuration {
  Label label = 1;
  std::vector<std::vector<std::uint64_t>> iregs;  // [tape-1][index-1]
  std::vector<Tape> tapes;

  std::uint64_t& ireg(IReg r) { return iregs[r.tape - 1][r.index - 1]; }
  std::uint64_t ireg(IReg r) const { return iregs[r.tape - 1][r.index - 1]; }
  Tape& tape(std::uint32_t t) { return tapes[t - 1]; }
  const Tape& tape(std::uint32_t t) const { return tapes[t - 1]; }

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// (1 . (n,1,...,1) . (x1,...,xn,xn,...)); further tapes filled with xn.
Configuration input_config(const MachineSpec& spec, const Tuple& input);

// As input_config with guesses y1..ym stored after the input on tape 1.
Configuration nd_input_config(const MachineSpec& spec, const Tuple& input, const Tuple& guesses);

// As input_config with tape-1 cells past the input left as pending guesses.
Configuration lazy_input_config(const MachineSpec& spec, const Tuple& input);

// First c(I_{1,1}) cells of tape 1.
Tuple output_of(const Configuration& cfg);

}  // namespace bss
