#include "bss/structures.hpp"

#include <algorithm>
#include <cctype>

#include "bss/error.hpp"

namespace bss {

bool Structure::equal(const Value& a, const Value& b) const {
  auto id = identity_relation();
  if (!id) throw Error(ErrorKind::IdentityUnavailable, name() + " has no identity relation");
  const Value args[2] = {a, b};
  return eval_relation(*id, args);
}

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

void check_arity(const char* what, std::size_t i, std::size_t want, std::size_t got) {
  if (want != got)
    throw Error(ErrorKind::ArityMismatch, std::string(what) + std::to_string(i) + " expects " +
                                              std::to_string(want) + " arguments, got " +
                                              std::to_string(got));
}

class RationalStructure final : public Structure {
 public:
  RationalStructure() {
    sig_.constants = 2;
    sig_.function_arities = {2, 2, 2};
    sig_.relation_arities = {2};
  }

  std::string name() const override { return "rationals"; }
  const Signature& signature() const override { return sig_; }

  Value constant(std::size_t i) const override {
    if (i == 1) return Rational(1);
    if (i == 2) return Rational(0);
    throw Error(ErrorKind::UnknownSymbol, "c" + std::to_string(i));
  }

  Value eval_function(std::size_t i, std::span<const Value> args) const override {
    if (i < 1 || i > 3) throw Error(ErrorKind::UnknownSymbol, "f" + std::to_string(i));
    check_arity("f", i, 2, args.size());
    const Rational& a = args[0].rational();
    const Rational& b = args[1].rational();
    switch (i) {
      case 1: return a + b;
      case 2: return a - b;
      default: return a * b;
    }
  }

  bool eval_relation(std::size_t i, std::span<const Value> args) const override {
    if (i != 1) throw Error(ErrorKind::UnknownSymbol, "r" + std::to_string(i));
    check_arity("r", i, 2, args.size());
    return args[0] == args[1];
  }

  std::optional<std::size_t> identity_relation() const override { return 1; }
  std::optional<Value> enumerate(std::size_t k) const override { return Value(rational_at(k)); }
  std::optional<std::size_t> universe_size() const override { return std::nullopt; }
  bool contains(const Value& v) const override { return v.is_rational(); }
  Value parse_value(std::string_view text) const override { return Rational::parse(trim(text)); }
  std::string format_value(const Value& v) const override { return v.rational().str(); }

 private:
  Signature sig_;
};

}  // namespace

StructurePtr rationals() {
  static const StructurePtr q = std::make_shared<RationalStructure>();
  return q;
}

FiniteStructure::FiniteStructure(std::string name, std::vector<std::string> universe,
                                 std::vector<std::uint32_t> constants,
                                 std::vector<FunctionTable> functions,
                                 std::vector<RelationTable> relations)
    : name_(std::move(name)),
      universe_(std::move(universe)),
      constants_(std::move(constants)),
      functions_(std::move(functions)),
      relations_(std::move(relations)) {
  if (universe_.empty()) throw Error(ErrorKind::InvalidArgument, "empty universe");
  auto cells = [&](std::size_t arity) {
    std::size_t n = 1;
    for (std::size_t k = 0; k < arity; ++k) n *= universe_.size();
    return n;
  };
  for (auto c : constants_)
    if (c >= universe_.size()) throw Error(ErrorKind::InvalidArgument, "constant outside universe");
  sig_.constants = constants_.size();
  for (const auto& f : functions_) {
    if (f.arity < 1 || f.table.size() != cells(f.arity))
      throw Error(ErrorKind::InvalidArgument, "function table is not total");
    for (auto v : f.table)
      if (v >= universe_.size()) throw Error(ErrorKind::InvalidArgument, "function leaves universe");
    sig_.function_arities.push_back(f.arity);
  }
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto& r = relations_[i];
    if (r.arity < 1 || r.table.size() != cells(r.arity))
      throw Error(ErrorKind::InvalidArgument, "relation table has wrong size");
    sig_.relation_arities.push_back(r.arity);
    if (r.identity && !identity_) identity_ = i + 1;
  }
}

RelationTable FiniteStructure::identity_table(std::size_t n) {
  RelationTable r;
  r.arity = 2;
  r.identity = true;
  r.table.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) r.table[i * n + i] = 1;
  return r;
}

std::size_t FiniteStructure::offset(std::size_t arity, std::span<const Value> args) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < arity; ++k) off = off * universe_.size() + args[k].element().index;
  return off;
}

Value FiniteStructure::constant(std::size_t i) const {
  if (i < 1 || i > constants_.size()) throw Error(ErrorKind::UnknownSymbol, "c" + std::to_string(i));
  return Element{constants_[i - 1]};
}

Value FiniteStructure::eval_function(std::size_t i, std::span<const Value> args) const {
  if (i < 1 || i > functions_.size()) throw Error(ErrorKind::UnknownSymbol, "f" + std::to_string(i));
  const auto& f = functions_[i - 1];
  check_arity("f", i, f.arity, args.size());
  return Element{f.table[offset(f.arity, args)]};
}

bool FiniteStructure::eval_relation(std::size_t i, std::span<const Value> args) const {
  if (i < 1 || i > relations_.size()) throw Error(ErrorKind::UnknownSymbol, "r" + std::to_string(i));
  const auto& r = relations_[i - 1];
  check_arity("r", i, r.arity, args.size());
  return r.table[offset(r.arity, args)] != 0;
}

std::optional<Value> FiniteStructure::enumerate(std::size_t k) const {
  if (k >= universe_.size()) return std::nullopt;
  return Value(Element{static_cast<std::uint32_t>(k)});
}

bool FiniteStructure::contains(const Value& v) const {
  return !v.is_rational() && v.element().index < universe_.size();
}

Value FiniteStructure::parse_value(std::string_view text) const {
  std::string t = trim(text);
  auto it = std::find(universe_.begin(), universe_.end(), t);
  if (it == universe_.end()) throw Error(ErrorKind::UnknownSymbol, "'" + t + "' not in universe of " + name_);
  return Element{static_cast<std::uint32_t>(it - universe_.begin())};
}

std::string FiniteStructure::format_value(const Value& v) const {
  return universe_.at(v.element().index);
}

Tuple parse_tuple(const Structure& s, std::string_view text) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error(ErrorKind::SyntaxError, "tuple literal must look like (a,b,...)");
  std::string_view body(t);
  body = body.substr(1, body.size() - 2);
  Tuple out;
  if (trim(body).empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto comma = body.find(',', start);
    out.push_back(s.parse_value(body.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_tuple(const Structure& s, const Tuple& t) {
  std::string out = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ", ";
    out += s.format_value(t[i]);
  }
  return out + ")";
}

}  // namespace bss
