#include "bss/parser.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "bss/error.hpp"

namespace bss {

const char* pseudo_name(const Pseudo& p) {
  static const char* names[] = {"goto", "copy", "dispatch", "for", "ca", "add",
                                "iset", "init", "initguess", "guard", "if", "nu"};
  return names[p.index()];
}

bool ExtProgram::has_pseudo() const {
  for (const auto& l : lines)
    if (std::holds_alternative<Pseudo>(l.ins)) return true;
  return false;
}

Program ExtProgram::core() const {
  Program p;
  p.code.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (const auto* ps = std::get_if<Pseudo>(&lines[i].ins))
      throw Error(ErrorKind::UnknownPseudo, "pseudo instruction @" + std::string(pseudo_name(*ps)) +
                                                " at label " + std::to_string(i + 1) + " needs expansion");
    p.code.push_back(std::get<Instruction>(lines[i].ins));
  }
  return p;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExtProgram program() {
    ExtProgram out;
    skip();
    while (!eof()) {
      std::size_t line = line_, col = col_;
      std::uint64_t label = number();
      if (label != out.lines.size() + 1)
        fail(line, col, "expected label " + std::to_string(out.lines.size() + 1) + ", found " +
                            std::to_string(label));
      expect(':');
      skip();
      std::size_t il = line_, ic = col_;
      ExtLine el{statement(), il, ic};
      out.lines.push_back(std::move(el));
      skip();
      if (peek() == ';' || peek() == '.') {
        ++pos_;
        ++col_;
      }
      skip();
    }
    if (out.lines.empty()) fail(line_, col_, "empty program");
    const auto& last = out.lines.back();
    if (!std::holds_alternative<Instruction>(last.ins) || !std::holds_alternative<Stop>(std::get<Instruction>(last.ins)))
      fail(last.line, last.column, "final instruction must be stop");
    return out;
  }

 private:
  [[noreturn]] void fail(std::size_t line, std::size_t col, const std::string& msg,
                         ErrorKind k = ErrorKind::SyntaxError) const {
    throw ParseError(k, line, col, msg);
  }
  [[noreturn]] void fail(const std::string& msg, ErrorKind k = ErrorKind::SyntaxError) const {
    fail(line_, col_, msg, k);
  }

  bool eof() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool accept(std::string_view tok) {
    skip();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    // Keywords must not run into an identifier character.
    if (std::isalpha(static_cast<unsigned char>(tok.back())) &&
        std::isalnum(static_cast<unsigned char>(peek(tok.size()))))
      return false;
    for (std::size_t i = 0; i < tok.size(); ++i) advance();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
  }
  void expect(char c) { expect(std::string_view(&c, 1)); }

  std::uint64_t number() {
    skip();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    std::uint64_t v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + static_cast<std::uint64_t>(peek() - '0');
      if (v > 0xFFFFFFFFull) fail("number too large");
      advance();
    }
    return v;
  }

  std::uint32_t positive() {
    std::size_t l = line_, c = col_;
    auto v = number();
    if (v == 0) fail(l, c, "index must be positive");
    return static_cast<std::uint32_t>(v);
  }

  // After a register letter: digits, optionally ".digits" or ".[".
  // Returns (tape, index) for the direct form; sets *indirect for Zd.[Id.j].
  bool at_register(char letter) {
    skip();
    return peek() == letter && (std::isdigit(static_cast<unsigned char>(peek(1))) || (letter == 'Z' && peek(1) == '['));
  }

  IReg ireg() {
    skip();
    if (peek() != 'I' || !std::isdigit(static_cast<unsigned char>(peek(1)))) fail("expected an index register");
    advance();
    std::uint32_t a = positive();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      return IReg{a, positive()};
    }
    return IReg{1, a};
  }

  ZAddr zaddr() {
    skip();
    if (peek() != 'Z') fail("expected a Z register");
    advance();
    if (peek() == '[') {
      advance();
      IReg r = ireg();
      expect(']');
      return ZAddr{r.tape, r.index, true};
    }
    std::uint32_t a = positive();
    if (peek() == '.' && peek(1) == '[') {
      advance();
      advance();
      IReg r = ireg();
      expect(']');
      if (r.tape != a) fail("indirect address must use an index register of the same tape");
      return ZAddr{a, r.index, true};
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      advance();
      return ZAddr{a, positive(), false};
    }
    return ZAddr{1, a, false};
  }

  ZReg zreg() {
    std::size_t l = line_, c = col_;
    ZAddr a = zaddr();
    if (a.indirect) fail(l, c, "indirect register not allowed here");
    return ZReg{a.tape, a.index};
  }

  // Symbol like f3, f3^2, c2^0, r1^2. Returns index; arity (if written) in *arity.
  std::size_t symbol(char letter, std::optional<std::size_t>* arity) {
    skip();
    if (peek() != letter || !std::isdigit(static_cast<unsigned char>(peek(1))))
      fail(std::string("expected ") + letter + "<index>");
    advance();
    std::size_t i = positive();
    if (peek() == '^') {
      advance();
      auto a = number();
      if (arity) *arity = a;
    }
    return i;
  }

  Label label_ref() { return static_cast<Label>(positive()); }

  // "then [goto] L else [goto] L"
  std::pair<Label, Label> branches() {
    expect("then");
    accept("goto");
    Label a = label_ref();
    expect("else");
    accept("goto");
    Label b = label_ref();
    return {a, b};
  }

  // "(Zd.1,...,Zd.[Id.1])" -> tape d
  std::uint32_t query_tuple() {
    expect('(');
    std::size_t l = line_, c = col_;
    ZReg first = zreg();
    if (first.index != 1) fail(l, c, "query tuple must start at Z1");
    expect(',');
    expect("...");
    expect(',');
    l = line_, c = col_;
    ZAddr last = zaddr();
    if (!last.indirect || last.index != 1 || last.tape != first.tape)
      fail(l, c, "query tuple must end at Z[I1] of the same tape");
    expect(')');
    return first.tape;
  }

  ExtInstruction statement() {
    skip();
    if (peek() == '@') {
      advance();
      return pseudo();
    }
    if (accept("stop")) return Instruction{Stop{}};
    if (accept("goto")) return Pseudo{PGoto{label_ref()}};
    if (accept("if")) return if_statement();
    if (at_register('I')) {
      IReg r = ireg();
      if (!accept(":=")) expect('=');
      skip();
      if (at_register('I')) {
        IReg rhs = ireg();
        expect('+');
        std::size_t l = line_, c = col_;
        if (number() != 1) fail(l, c, "only +1 is an index operation", ErrorKind::UnknownInstructionForm);
        if (!(rhs == r)) fail(l, c, "increment must name the same register", ErrorKind::UnknownInstructionForm);
        return Instruction{IndexIncr{r}};
      }
      std::size_t l = line_, c = col_;
      if (number() != 1) fail(l, c, "index registers can only be reset to 1", ErrorKind::UnknownInstructionForm);
      return Instruction{IndexReset{r}};
    }
    if (at_register('Z')) {
      std::size_t l = line_, c = col_;
      ZAddr dest = zaddr();
      expect(":=");
      skip();
      if (peek() == 'n' && accept("nu")) {
        if (dest.indirect) fail(l, c, "nu needs a direct destination");
        std::string o = oracle_name();
        std::uint32_t tape;
        skip();
        if (peek() == '@') {
          advance();
          IReg r = ireg();
          if (r.index != 1) fail("short nu form reads I1");
          tape = r.tape;
        } else {
          tape = query_tuple();
        }
        return Instruction{NuAssign{ZReg{dest.tape, dest.index}, tape, o}};
      }
      if (peek() == 'f' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        if (dest.indirect) fail(l, c, "function results need a direct destination");
        std::optional<std::size_t> arity;
        std::size_t fn = symbol('f', &arity);
        Compute x{fn, ZReg{dest.tape, dest.index}, args()};
        if (arity && *arity != x.args.size()) fail(l, c, "written arity does not match the arguments");
        return Instruction{std::move(x)};
      }
      if (peek() == 'c' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        if (dest.indirect) fail(l, c, "constants need a direct destination");
        std::optional<std::size_t> arity;
        std::size_t ci = symbol('c', &arity);
        if (arity && *arity != 0) fail(l, c, "constants have arity 0");
        return Instruction{SetConst{ci, ZReg{dest.tape, dest.index}}};
      }
      if (at_register('Z')) return Instruction{Copy{dest, zaddr()}};
      fail("unknown right-hand side", ErrorKind::UnknownInstructionForm);
    }
    fail("unknown instruction", ErrorKind::UnknownInstructionForm);
  }

  std::string oracle_name() {
    expect('[');
    skip();
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      name += peek();
      advance();
    }
    if (name.empty()) fail("expected an oracle name");
    expect(']');
    return name;
  }

  std::vector<ZReg> args() {
    std::vector<ZReg> out;
    expect('(');
    out.push_back(zreg());
    while (accept(",")) out.push_back(zreg());
    expect(')');
    return out;
  }

  ExtInstruction if_statement() {
    skip();
    if (peek() == '(') {
      std::uint32_t tape = query_tuple();
      expect("in");
      std::string o;
      skip();
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        o += peek();
        advance();
      }
      if (o.empty()) fail("expected an oracle name");
      auto [a, b] = branches();
      return Instruction{OracleBranch{tape, a, b, o}};
    }
    if (peek() == 'r' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      std::size_t l = line_, c = col_;
      std::optional<std::size_t> arity;
      std::size_t ri = symbol('r', &arity);
      auto as = args();
      if (arity && *arity != as.size()) fail(l, c, "written arity does not match the arguments");
      auto [a, b] = branches();
      return Instruction{RelBranch{ri, std::move(as), a, b}};
    }
    if (at_register('I')) {
      IReg lhs = ireg();
      if (!accept("==")) expect('=');
      IReg rhs = ireg();
      auto [a, b] = branches();
      return Instruction{IndexBranch{lhs, rhs, a, b}};
    }
    if (at_register('Z')) {
      // if Zj = ci then ... (pseudo, needs identity)
      ZReg z = zreg();
      if (!accept("==")) expect('=');
      std::optional<std::size_t> arity;
      std::size_t ci = symbol('c', &arity);
      auto [a, b] = branches();
      return Pseudo{PIfConst{z, ci, a, b}};
    }
    fail("unknown condition", ErrorKind::UnknownInstructionForm);
  }

  // Body instruction of a for loop: like statement(), but branch targets may
  // be "next", and a missing else continues with the body.
  Instruction body_instruction() {
    skip();
    if (accept("goto")) {
      Label t = body_target();
      return IndexBranch{IReg{1, 1}, IReg{1, 1}, t, t};
    }
    if (accept("if")) {
      skip();
      std::optional<RelBranch> rb;
      std::optional<IndexBranch> ib;
      if (peek() == 'r') {
        std::optional<std::size_t> arity;
        std::size_t ri = symbol('r', &arity);
        rb = RelBranch{ri, args(), 0, 0};
      } else {
        IReg lhs = ireg();
        if (!accept("==")) expect('=');
        ib = IndexBranch{lhs, ireg(), 0, 0};
      }
      expect("then");
      accept("goto");
      Label a = body_target();
      Label b = kContinue;
      if (accept("else")) {
        accept("goto");
        b = body_target();
      }
      if (rb) {
        rb->then_label = a;
        rb->else_label = b;
        return *rb;
      }
      ib->then_label = a;
      ib->else_label = b;
      return *ib;
    }
    std::size_t l = line_, c = col_;
    ExtInstruction e = statement();
    if (!std::holds_alternative<Instruction>(e)) fail(l, c, "pseudo instructions are not allowed in a loop body");
    return std::get<Instruction>(e);
  }

  Label body_target() {
    if (accept("next")) return kNextLine;
    return label_ref();
  }

  Pseudo pseudo() {
    std::size_t l = line_, c = col_;
    std::string name;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      name += peek();
      advance();
    }
    if (name == "goto") return PGoto{label_ref()};
    if (name == "copy") {
      PCopy p;
      expect('(');
      ZReg d1 = zreg();
      if (d1.index != 1) fail("copy target must start at Z1");
      expect(',');
      expect("...");
      expect(',');
      ZAddr dl = zaddr();
      if (!dl.indirect || dl.tape != d1.tape) fail("copy target must end at an indirect register");
      expect(')');
      expect(":=");
      expect('(');
      ZReg s1 = zreg();
      if (s1.index != 1) fail("copy source must start at Z1");
      expect(',');
      expect("...");
      expect(',');
      ZAddr sl = zaddr();
      if (!sl.indirect || sl.tape != s1.tape) fail("copy source must end at an indirect register");
      expect(')');
      expect("via");
      p.dst_tape = d1.tape;
      p.dst_ptr = IReg{dl.tape, dl.index};
      p.src_tape = s1.tape;
      p.src_len = IReg{sl.tape, sl.index};
      p.src_ptr = ireg();
      return p;
    }
    if (name == "dispatch") {
      PDispatch p;
      p.sel = ireg();
      expect('{');
      if (!accept("}")) {
        do {
          auto k = number();
          expect(':');
          p.cases.emplace_back(k, label_ref());
        } while (accept(","));
        expect('}');
      }
      expect("else");
      p.otherwise = label_ref();
      expect("via");
      p.aux = ireg();
      return p;
    }
    if (name == "for") {
      PFor p;
      p.counter = ireg();
      expect(":=");
      expect('1');
      expect(',');
      if (accept("2")) {
        expect(',');
        expect("...");
      } else {
        expect("...");
        expect(',');
        p.bound = ireg();
      }
      expect("do");
      expect('{');
      if (!accept("}")) {
        do {
          p.body.push_back(body_instruction());
        } while (accept(";"));
        expect('}');
      }
      return p;
    }
    if (name == "ca1" || name == "ca2" || name == "ca1plus" || name == "ca2plus") {
      PCa p;
      p.which = name[2] - '0';
      p.plus = name.size() > 3;
      p.dst = ireg();
      expect(":=");
      p.src = ireg();
      return p;
    }
    if (name == "add") {
      PAdd p;
      p.dst = ireg();
      expect(":=");
      p.lhs = ireg();
      expect('+');
      p.rhs = ireg();
      return p;
    }
    if (name == "iset") {
      PISet p;
      p.dst = ireg();
      expect(":=");
      if (at_register('I'))
        p.src = ireg();
      else
        p.src = static_cast<std::uint64_t>(positive());
      return p;
    }
    if (name == "init") {
      PInit p;
      ZAddr d = zaddr();
      expect("from");
      ZAddr s = zaddr();
      if (!d.indirect || !s.indirect || d.tape != s.tape) fail("init takes two indirect registers of one tape");
      p.tape = d.tape;
      p.dst_ptr = IReg{d.tape, d.index};
      p.src_ptr = IReg{s.tape, s.index};
      return p;
    }
    if (name == "initguess") {
      PInitGuess p;
      ZAddr d = zaddr();
      if (!d.indirect || d.tape != 1) fail("initguess takes an indirect register of tape 1");
      p.ptr = IReg{1, d.index};
      expect("via");
      p.aux2 = ireg();
      expect(',');
      p.aux3 = ireg();
      if (accept("oracle")) {
        skip();
        std::string o;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
          o += peek();
          advance();
        }
        p.oracle = o;
      }
      return p;
    }
    if (name == "guard") {
      PGuard p;
      p.lhs = ireg();
      if (!accept("==")) expect('=');
      p.rhs = ireg();
      expect("then");
      expect("goto");
      p.target = label_ref();
      return p;
    }
    if (name == "if") {
      PIfConst p;
      p.z = zreg();
      if (!accept("==")) expect('=');
      std::optional<std::size_t> arity;
      p.constant = symbol('c', &arity);
      auto [a, b] = branches();
      p.then_label = a;
      p.else_label = b;
      return p;
    }
    if (name == "nu") {
      PNu p;
      p.dest = zreg();
      expect(":=");
      expect("nu");
      p.oracle = oracle_name();
      expect('(');
      ZReg z = zreg();
      expect(')');
      if (z.tape != p.dest.tape) fail("nu prefix and destination must share a tape");
      p.upto = z.index;
      return p;
    }
    fail(l, c, "unknown pseudo instruction @" + name, ErrorKind::UnknownPseudo);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

std::string ireg_str(IReg r, bool q) {
  return q ? "I" + std::to_string(r.tape) + "." + std::to_string(r.index) : "I" + std::to_string(r.index);
}

std::string zreg_str(ZReg r, bool q) {
  return q ? "Z" + std::to_string(r.tape) + "." + std::to_string(r.index) : "Z" + std::to_string(r.index);
}

std::string zaddr_str(ZAddr a, bool q) {
  if (!a.indirect) return zreg_str(ZReg{a.tape, a.index}, q);
  if (q) return "Z" + std::to_string(a.tape) + ".[" + ireg_str(IReg{a.tape, a.index}, true) + "]";
  return "Z[" + ireg_str(IReg{a.tape, a.index}, false) + "]";
}

std::string tuple_str(std::uint32_t tape, bool q) {
  return "(" + zreg_str(ZReg{tape, 1}, q) + ",...," + zaddr_str(ZAddr{tape, 1, true}, q) + ")";
}

std::string target_str(Label l) {
  if (l == kNextLine) return "next";
  return std::to_string(l);
}

std::string args_str(const std::vector<ZReg>& as, bool q) {
  std::string s = "(";
  for (std::size_t i = 0; i < as.size(); ++i) s += (i ? "," : "") + zreg_str(as[i], q);
  return s + ")";
}

std::uint32_t ext_tapes(const ExtProgram& p) {
  std::uint32_t t = 1;
  auto i = [&](IReg r) { t = std::max(t, r.tape); };
  auto z = [&](ZReg r) { t = std::max(t, r.tape); };
  Program core;
  for (const auto& l : p.lines) {
    if (const auto* ins = std::get_if<Instruction>(&l.ins)) {
      core.code.push_back(*ins);
      continue;
    }
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PCopy>) {
            t = std::max({t, x.dst_tape, x.src_tape});
            i(x.src_ptr);
          } else if constexpr (std::is_same_v<T, PDispatch>) {
            i(x.sel);
            i(x.aux);
          } else if constexpr (std::is_same_v<T, PFor>) {
            i(x.counter);
            if (x.bound) i(*x.bound);
            Program b{x.body};
            t = std::max(t, tapes_used(b));
          } else if constexpr (std::is_same_v<T, PCa> || std::is_same_v<T, PAdd> || std::is_same_v<T, PISet>) {
            i(x.dst);
          } else if constexpr (std::is_same_v<T, PInit>) {
            t = std::max(t, x.tape);
          } else if constexpr (std::is_same_v<T, PGuard>) {
            i(x.lhs);
            i(x.rhs);
          } else if constexpr (std::is_same_v<T, PIfConst>) {
            z(x.z);
          } else if constexpr (std::is_same_v<T, PNu>) {
            z(x.dest);
          }
        },
        std::get<Pseudo>(l.ins));
  }
  return std::max(t, tapes_used(core));
}

std::string pseudo_str(const Pseudo& ps, bool q) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PGoto>) {
          return "@goto " + std::to_string(x.target);
        } else if constexpr (std::is_same_v<T, PCopy>) {
          return "@copy (" + zreg_str(ZReg{x.dst_tape, 1}, q) + ",...," +
                 zaddr_str(ZAddr::via(x.dst_ptr), q) + ") := (" + zreg_str(ZReg{x.src_tape, 1}, q) + ",...," +
                 zaddr_str(ZAddr::via(x.src_len), q) + ") via " + ireg_str(x.src_ptr, q);
        } else if constexpr (std::is_same_v<T, PDispatch>) {
          std::string s = "@dispatch " + ireg_str(x.sel, q) + " {";
          for (std::size_t i = 0; i < x.cases.size(); ++i)
            s += (i ? ", " : "") + std::to_string(x.cases[i].first) + ": " + std::to_string(x.cases[i].second);
          return s + "} else " + std::to_string(x.otherwise) + " via " + ireg_str(x.aux, q);
        } else if constexpr (std::is_same_v<T, PFor>) {
          std::string s = "@for " + ireg_str(x.counter, q) + " := 1," +
                          (x.bound ? "...," + ireg_str(*x.bound, q) : std::string("2,...")) + " do { ";
          for (std::size_t i = 0; i < x.body.size(); ++i) {
            if (i) s += "; ";
            const auto& b = x.body[i];
            auto branch = [&](const std::string& cond, Label a, Label e) {
              std::string r = "if " + cond + " then goto " + target_str(a);
              if (e != kContinue) r += " else goto " + target_str(e);
              return r;
            };
            if (const auto* ib = std::get_if<IndexBranch>(&b)) {
              if (ib->lhs == IReg{1, 1} && ib->rhs == IReg{1, 1} && ib->then_label == ib->else_label)
                s += "goto " + target_str(ib->then_label);
              else
                s += branch(ireg_str(ib->lhs, q) + " = " + ireg_str(ib->rhs, q), ib->then_label, ib->else_label);
            } else if (const auto* rb = std::get_if<RelBranch>(&b)) {
              s += branch("r" + std::to_string(rb->rel) + args_str(rb->args, q), rb->then_label, rb->else_label);
            } else {
              s += render_instruction(b, q);
            }
          }
          return s + " }";
        } else if constexpr (std::is_same_v<T, PCa>) {
          return "@ca" + std::to_string(x.which) + (x.plus ? "plus " : " ") + ireg_str(x.dst, q) +
                 " := " + ireg_str(x.src, q);
        } else if constexpr (std::is_same_v<T, PAdd>) {
          return "@add " + ireg_str(x.dst, q) + " := " + ireg_str(x.lhs, q) + " + " + ireg_str(x.rhs, q);
        } else if constexpr (std::is_same_v<T, PISet>) {
          std::string rhs = std::holds_alternative<IReg>(x.src) ? ireg_str(std::get<IReg>(x.src), q)
                                                                : std::to_string(std::get<std::uint64_t>(x.src));
          return "@iset " + ireg_str(x.dst, q) + " := " + rhs;
        } else if constexpr (std::is_same_v<T, PInit>) {
          return "@init " + zaddr_str(ZAddr::via(x.dst_ptr), q) + " from " + zaddr_str(ZAddr::via(x.src_ptr), q);
        } else if constexpr (std::is_same_v<T, PInitGuess>) {
          std::string s = "@initguess " + zaddr_str(ZAddr::via(x.ptr), q) + " via " + ireg_str(x.aux2, q) +
                          ", " + ireg_str(x.aux3, q);
          if (x.oracle != "O") s += " oracle " + x.oracle;
          return s;
        } else if constexpr (std::is_same_v<T, PGuard>) {
          return "@guard " + ireg_str(x.lhs, q) + " = " + ireg_str(x.rhs, q) + " then goto " +
                 std::to_string(x.target);
        } else if constexpr (std::is_same_v<T, PIfConst>) {
          return "@if " + zreg_str(x.z, q) + " = c" + std::to_string(x.constant) + " then goto " +
                 std::to_string(x.then_label) + " else goto " + std::to_string(x.else_label);
        } else {
          return "@nu " + zreg_str(x.dest, q) + " := nu[" + x.oracle + "](" +
                 zreg_str(ZReg{x.dest.tape, x.upto}, q) + ")";
        }
      },
      ps);
}

std::string join_lines(const std::vector<std::string>& body) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    out += std::to_string(i + 1) + ": " + body[i];
    out += i + 1 == body.size() ? ".\n" : ";\n";
  }
  return out;
}

}  // namespace

std::string render_instruction(const Instruction& ins, bool q) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Compute>) {
          return zreg_str(x.dest, q) + " := f" + std::to_string(x.fn) + "^" + std::to_string(x.args.size()) +
                 args_str(x.args, q);
        } else if constexpr (std::is_same_v<T, SetConst>) {
          return zreg_str(x.dest, q) + " := c" + std::to_string(x.constant) + "^0";
        } else if constexpr (std::is_same_v<T, Copy>) {
          return zaddr_str(x.dest, q) + " := " + zaddr_str(x.src, q);
        } else if constexpr (std::is_same_v<T, RelBranch>) {
          return "if r" + std::to_string(x.rel) + "^" + std::to_string(x.args.size()) + args_str(x.args, q) +
                 " then goto " + std::to_string(x.then_label) + " else goto " + std::to_string(x.else_label);
        } else if constexpr (std::is_same_v<T, IndexBranch>) {
          return "if " + ireg_str(x.lhs, q) + " = " + ireg_str(x.rhs, q) + " then goto " +
                 std::to_string(x.then_label) + " else goto " + std::to_string(x.else_label);
        } else if constexpr (std::is_same_v<T, IndexReset>) {
          return ireg_str(x.reg, q) + " := 1";
        } else if constexpr (std::is_same_v<T, IndexIncr>) {
          return ireg_str(x.reg, q) + " := " + ireg_str(x.reg, q) + " + 1";
        } else if constexpr (std::is_same_v<T, Stop>) {
          return "stop";
        } else if constexpr (std::is_same_v<T, OracleBranch>) {
          return "if " + tuple_str(x.tape, q) + " in " + x.oracle + " then goto " + std::to_string(x.then_label) +
                 " else goto " + std::to_string(x.else_label);
        } else {
          return zreg_str(x.dest, q) + " := nu[" + x.oracle + "]" + tuple_str(x.query_tape, q);
        }
      },
      ins);
}

ExtProgram parse_program(std::string_view text) { return Parser(text).program(); }

Program parse_core(std::string_view text) { return parse_program(text).core(); }

std::string render_program(const Program& p) {
  bool q = tapes_used(p) > 1;
  std::vector<std::string> body;
  body.reserve(p.size());
  for (const auto& ins : p.code) body.push_back(render_instruction(ins, q));
  return join_lines(body);
}

std::string render_ext(const ExtProgram& p) {
  bool q = ext_tapes(p) > 1;
  std::vector<std::string> body;
  body.reserve(p.size());
  for (const auto& l : p.lines) {
    if (const auto* ins = std::get_if<Instruction>(&l.ins))
      body.push_back(render_instruction(*ins, q));
    else
      body.push_back(pseudo_str(std::get<Pseudo>(l.ins), q));
  }
  return join_lines(body);
}

}  // namespace bss
