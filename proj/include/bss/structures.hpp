#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bss/program.hpp"
#include "bss/value.hpp"

namespace bss {

class Structure {
 public:
  virtual ~Structure() = default;

  virtual std::string name() const = 0;
  virtual const Signature& signature() const = 0;

  // 1-based symbol indices; UnknownSymbol / ArityMismatch on misuse.
  virtual Value constant(std::size_t i) const = 0;
  virtual Value eval_function(std::size_t i, std::span<const Value> args) const = 0;
  virtual bool eval_relation(std::size_t i, std::span<const Value> args) const = 0;

  // Index of a relation that is equality, if any.
  virtual std::optional<std::size_t> identity_relation() const = 0;
  bool identity_available() const { return identity_relation().has_value(); }

  // k-th element of the canonical enumeration; nullopt past a finite universe.
  virtual std::optional<Value> enumerate(std::size_t k) const = 0;
  virtual std::optional<std::size_t> universe_size() const = 0;
  virtual bool contains(const Value& v) const = 0;

  virtual Value parse_value(std::string_view text) const = 0;
  virtual std::string format_value(const Value& v) const = 0;

  bool equal(const Value& a, const Value& b) const;
};

using StructurePtr = std::shared_ptr<const Structure>;

// (Q; 1, 0; +, -, *; =)
StructurePtr rationals();

struct FunctionTable {
  std::size_t arity = 1;
  std::vector<std::uint32_t> table;  // row-major over arguments, first argument most significant
};

struct RelationTable {
  std::size_t arity = 1;
  std::vector<char> table;  // same layout as FunctionTable
  bool identity = false;
};

class FiniteStructure : public Structure {
 public:
  FiniteStructure(std::string name, std::vector<std::string> universe,
                  std::vector<std::uint32_t> constants, std::vector<FunctionTable> functions,
                  std::vector<RelationTable> relations);

  std::string name() const override { return name_; }
  const Signature& signature() const override { return sig_; }
  Value constant(std::size_t i) const override;
  Value eval_function(std::size_t i, std::span<const Value> args) const override;
  bool eval_relation(std::size_t i, std::span<const Value> args) const override;
  std::optional<std::size_t> identity_relation() const override { return identity_; }
  std::optional<Value> enumerate(std::size_t k) const override;
  std::optional<std::size_t> universe_size() const override { return universe_.size(); }
  bool contains(const Value& v) const override;
  Value parse_value(std::string_view text) const override;
  std::string format_value(const Value& v) const override;

  const std::vector<std::string>& universe() const { return universe_; }

  // Relation whose table is the identity on the universe.
  static RelationTable identity_table(std::size_t universe_size);

 private:
  std::size_t offset(std::size_t arity, std::span<const Value> args) const;

  std::string name_;
  std::vector<std::string> universe_;
  std::vector<std::uint32_t> constants_;
  std::vector<FunctionTable> functions_;
  std::vector<RelationTable> relations_;
  Signature sig_;
  std::optional<std::size_t> identity_;
};

// Tuple literal "(a,b,...)" in the structure's value syntax.
Tuple parse_tuple(const Structure& s, std::string_view text);
std::string format_tuple(const Structure& s, const Tuple& t);

}  // namespace bss
