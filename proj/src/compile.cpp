#include <algorithm>

#include "bss/builder.hpp"
#include "bss/error.hpp"
#include "bss/transform.hpp"

namespace bss {

const char* to_string(SpecialCase c) {
  switch (c) {
    case SpecialCase::A1: return "a1";
    case SpecialCase::A2: return "a2";
    case SpecialCase::A3: return "a3";
  }
  return "?";
}

std::size_t track_address(std::uint32_t stride, std::uint32_t track, std::size_t row) {
  return static_cast<std::size_t>(stride) * (row - 1) + track;
}

namespace {

// Moves every register of a 1-tape instruction onto tape t.
Instruction on_tape(Instruction ins, std::uint32_t t) {
  auto z = [&](ZReg& r) { r.tape = t; };
  auto i = [&](IReg& r) { r.tape = t; };
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Compute>) {
          z(x.dest);
          for (auto& a : x.args) z(a);
        } else if constexpr (std::is_same_v<T, SetConst>) {
          z(x.dest);
        } else if constexpr (std::is_same_v<T, Copy>) {
          x.dest.tape = t;
          x.src.tape = t;
        } else if constexpr (std::is_same_v<T, RelBranch>) {
          for (auto& a : x.args) z(a);
        } else if constexpr (std::is_same_v<T, IndexBranch>) {
          i(x.lhs);
          i(x.rhs);
        } else if constexpr (std::is_same_v<T, IndexReset> || std::is_same_v<T, IndexIncr>) {
          i(x.reg);
        } else if constexpr (std::is_same_v<T, OracleBranch>) {
          x.tape = t;
        } else if constexpr (std::is_same_v<T, NuAssign>) {
          z(x.dest);
          x.query_tape = t;
        }
      },
      ins);
  return ins;
}

const MachineSpec& oracle_machine(const MachineSpec& m, SpecialCase* which, bool general) {
  if (m.kind != MachineKind::NuOracle || !m.oracle)
    throw Error(ErrorKind::KindMismatch, "source must be a nu-oracle machine");
  if (m.tapes != 1) throw Error(ErrorKind::InvalidArgument, "source machine must use one tape");
  const MachinePtr* q = nullptr;
  if (general) {
    const auto* sd = std::get_if<SemiDecider>(&*m.oracle);
    if (!sd) throw Error(ErrorKind::CaseMismatch, "nu -> ND compilation needs a semi-deciding oracle machine");
    q = &sd->machine;
  } else if (*which == SpecialCase::A1) {
    const auto* fd = std::get_if<FixedArityDecider>(&*m.oracle);
    if (!fd) throw Error(ErrorKind::CaseMismatch, "case a1 needs a fixed-arity decider");
    q = &fd->machine;
  } else if (*which == SpecialCase::A2) {
    const auto* sd = std::get_if<SemiDecider>(&*m.oracle);
    if (!sd || !sd->arity) throw Error(ErrorKind::CaseMismatch, "case a2 needs a semi-decider of known arity");
    q = &sd->machine;
  } else {
    const auto* d = std::get_if<Decider>(&*m.oracle);
    if (!d) throw Error(ErrorKind::CaseMismatch, "case a3 needs a decider");
    q = &d->machine;
  }
  if (!*q) throw Error(ErrorKind::UnresolvedOracle, "oracle machine missing");
  const MachineSpec& nq = **q;
  if (nq.tapes != 1) throw Error(ErrorKind::InvalidArgument, "oracle machine must use one tape");
  if (nq.kind != MachineKind::Deterministic || uses_nu(nq.program) || uses_oracle_branch(nq.program))
    throw Error(ErrorKind::KindMismatch, "oracle machine must be deterministic");
  return nq;
}

std::size_t oracle_arity(const MachineSpec& m, SpecialCase c) {
  if (c == SpecialCase::A1) return std::get<FixedArityDecider>(*m.oracle).arity;
  if (c == SpecialCase::A2) return *std::get<SemiDecider>(*m.oracle).arity;
  return 0;
}

enum class Mode { General, A1, A2, A3 };

NuToNd simulate(const MachineSpec& m, const MachineSpec& nq, Mode mode, std::size_t n_q) {
  const Structure& st = *m.structure;
  const bool decides = mode == Mode::A1 || mode == Mode::A3;
  if (decides) {
    if (!st.identity_available()) throw Error(ErrorKind::CaseMismatch, "deciding c1 needs an identity relation");
    if (st.signature().constants < 2) throw Error(ErrorKind::CaseMismatch, "structure needs constants c1 and c2");
  }
  if (mode == Mode::A1 || mode == Mode::A2) {
    if (n_q < 1) throw Error(ErrorKind::CaseMismatch, "oracle arity must be positive");
  }

  auto r1 = [](std::uint32_t j) { return IReg{1, j}; };
  const std::uint32_t km = m.index_registers.at(0);
  const std::uint32_t kq = nq.index_registers.at(0);
  const IReg J{2, km + 1}, P2{2, km + 2};
  const IReg K1{3, kq + 1}, K2{3, kq + 2};
  const IReg caK = r1(10), caS = r1(11), caC = r1(12), caT = r1(13), addr = r1(14), t0 = r1(15), t1 = r1(16),
             nqr = r1(17);
  const std::uint32_t dq = direct_z_used(nq.program).at(0);

  Builder b;
  std::vector<Builder::Sym> ms(m.program.size()), qs(nq.program.size());
  for (auto& s : ms) s = b.label();
  for (auto& s : qs) s = b.label();
  Builder::Sym star1 = b.label(), bar1 = b.label(), bar2 = b.label(), tilde2 = b.label(), tilde3 = b.label(),
               tilde4 = b.label(), qstart = qs.front(), after_q = b.label(), spin = b.label();

  // P_init: tape 1 input onto tape 2.
  b.copy_prefix(2, IReg{2, 1}, 1, r1(1), r1(7));
  b.jump(ms.front());

  // P_nu
  b.bind(star1);
  auto load_query = [&] { b.copy_prefix(3, IReg{3, 1}, 2, IReg{2, 1}, P2); };
  auto load_guesses = [&] {
    // 2*: guesses y_{m0+1..m0+m} after the query on tape 3
    Builder::Sym loop = b.label(), done = b.label();
    b.icopy(r1(7), r1(1));
    b.icopy(K1, IReg{3, 1});
    b.bind(loop);
    b.incr(r1(7));
    b.incr(K1);
    b.emit(Copy{ZAddr::via(K1), ZAddr::via(r1(7))});
    b.branch_eq(K1, r1(6), done, loop);
    b.bind(done);
    // 3*
    b.icopy(IReg{3, 1}, r1(6));
    // 4*: fresh registers for N_Q and x_n-style padding past its input
    for (std::uint32_t j = 2; j <= kq; ++j) b.reset(IReg{3, j});
    b.icopy(K1, IReg{3, 1});
    b.icopy(K2, K1);
    for (std::uint32_t i = 0; i <= dq; ++i) b.init(3, K1, K2);
  };

  if (mode == Mode::General) {
    b.iconst(r1(3), 1);  // ~1
    b.bind(bar1);
    load_query();
    b.ca(1, true, r1(4), r1(3), caK, caS, caC, caT);
    b.ca(2, true, r1(5), r1(3), caK, caS, caC, caT);
    b.add(r1(6), IReg{3, 1}, r1(4), t0, t1);
    b.reset(r1(9));
    load_guesses();
    b.incr(r1(5));  // 5*
    b.jump(qstart);
  } else if (mode == Mode::A1 || mode == Mode::A2) {
    load_query();
    b.iconst(nqr, n_q);
    Builder::Sym loop = b.label(), test = b.label(), step = b.label(), ok = b.label();
    b.reset(caC);
    b.bind(loop);
    b.branch_eq(caC, nqr, spin, test);
    b.bind(test);
    b.branch_eq(caC, IReg{3, 1}, ok, step);
    b.bind(step);
    b.incr(caC);
    b.jump(loop);
    b.bind(ok);
    // m := n_Q - n0
    Builder::Sym l2 = b.label(), s2 = b.label(), d2 = b.label();
    b.reset(r1(4));
    b.icopy(caT, IReg{3, 1});
    b.bind(l2);
    b.incr(caT);
    b.branch_eq(caT, nqr, d2, s2);
    b.bind(s2);
    b.incr(r1(4));
    b.jump(l2);
    b.bind(d2);
    b.icopy(r1(6), nqr);
    load_guesses();
    b.jump(qstart);
  } else {
    b.iconst(r1(4), 1);
    b.bind(bar1);
    load_query();
    b.add(r1(6), IReg{3, 1}, r1(4), t0, t1);
    load_guesses();
    b.jump(qstart);
  }

  // P''_{N_Q}
  for (std::size_t k = 0; k < nq.program.size(); ++k) {
    b.bind(qs[k]);
    Instruction ins = nq.program.code[k];
    if (std::holds_alternative<Stop>(ins)) {
      b.jump(after_q);
      continue;
    }
    if (mode == Mode::General) b.guard(r1(9), r1(5), bar2);
    ins = on_tape(std::move(ins), 3);
    remap_targets(ins, [&](Label l) { return qs.at(l - 1); });
    bool incr = std::holds_alternative<IndexIncr>(ins);
    b.emit(std::move(ins));
    if (incr) b.init(3, K1, K2);
  }

  b.bind(after_q);
  if (decides) {
    Builder::Sym reject = mode == Mode::A1 ? spin : b.label();
    b.emit(SetConst{1, ZReg{3, 2}});
    b.emit(RelBranch{*st.identity_relation(), {ZReg{3, 1}, ZReg{3, 2}}, tilde2, reject});
    if (mode == Mode::A3) {
      b.bind(reject);
      b.incr(r1(4));
      b.jump(bar1);
    }
  } else {
    b.jump(tilde2);
  }
  if (mode == Mode::General) {
    b.bind(bar2);
    b.incr(r1(3));
    b.jump(bar1);
  }
  if (mode == Mode::A1 || mode == Mode::A2) {
    b.bind(spin);
    b.jump(spin);
  }

  b.bind(tilde2);
  b.icopy(addr, r1(1));
  b.incr(addr);
  b.emit(Copy{ZAddr::via(J), ZAddr::via(addr)});
  b.bind(tilde3);
  b.add(r1(1), r1(1), r1(4), t0, t1);
  b.bind(tilde4);
  std::vector<std::pair<std::uint64_t, Builder::Sym>> cases;
  for (std::size_t k = 0; k < m.program.size(); ++k)
    if (std::holds_alternative<NuAssign>(m.program.code[k])) cases.emplace_back(k + 2, ms.at(k + 1));
  b.dispatch(r1(2), cases, cases.empty() ? ms.front() : cases.back().second, r1(8));

  // P'_M
  for (std::size_t k = 0; k < m.program.size(); ++k) {
    b.bind(ms[k]);
    const Instruction& ins = m.program.code[k];
    if (const auto* nu = std::get_if<NuAssign>(&ins)) {
      if (nu->dest.tape != 1 || nu->query_tape != 1)
        throw Error(ErrorKind::InvalidArgument, "source machine must use one tape");
      b.iconst(r1(2), k + 2);
      b.iconst(J, nu->dest.index);
      b.jump(star1);
    } else if (std::holds_alternative<Stop>(ins)) {
      // The output of M lives on tape 2.
      b.copy_prefix(1, r1(1), 2, IReg{2, 1}, P2);
      b.stop();
    } else if (std::holds_alternative<OracleBranch>(ins)) {
      throw Error(ErrorKind::KindMismatch, "oracle queries are not part of a nu machine");
    } else {
      Instruction x = on_tape(ins, 2);
      remap_targets(x, [&](Label l) { return ms.at(l - 1); });
      b.emit(std::move(x));
    }
  }

  NuToNd out;
  Program p = b.finish();
  out.star1 = b.position(star1);
  out.tilde2 = b.position(tilde2);
  out.tilde3 = b.position(tilde3);
  out.m_start = b.position(ms.front());
  for (auto s : ms) out.m_map.push_back(b.position(s));
  out.machine = make_machine(std::move(p), m.structure, MachineKind::ND, std::nullopt, 3, {17, km + 2, kq + 2});
  return out;
}

}  // namespace

NuToNd compile_nu_to_nd_map(const MachineSpec& m) {
  SpecialCase unused = SpecialCase::A2;
  const MachineSpec& nq = oracle_machine(m, &unused, true);
  return simulate(m, nq, Mode::General, 0);
}

MachineSpec compile_nu_to_nd(const MachineSpec& m) { return compile_nu_to_nd_map(m).machine; }

NuToNd compile_special_map(const MachineSpec& m, SpecialCase c) {
  const MachineSpec& nq = oracle_machine(m, &c, false);
  Mode mode = c == SpecialCase::A1 ? Mode::A1 : c == SpecialCase::A2 ? Mode::A2 : Mode::A3;
  return simulate(m, nq, mode, oracle_arity(m, c));
}

MachineSpec compile_special(const MachineSpec& m, SpecialCase c) { return compile_special_map(m, c).machine; }

MachineSpec compile_nd_to_nu(const MachineSpec& m) {
  if (m.kind != MachineKind::ND) throw Error(ErrorKind::KindMismatch, "source must be an ND machine");
  if (m.tapes != 1) throw Error(ErrorKind::InvalidArgument, "source machine must use one tape");
  const std::uint32_t k = m.index_registers.at(0);
  const IReg ptr{1, k + 1}, aux2{1, k + 2}, aux3{1, k + 3};
  const std::uint32_t direct = direct_z_used(m.program).at(0);
  const std::string oracle = "O";

  Builder b;
  std::vector<Builder::Sym> ms(m.program.size());
  for (auto& s : ms) s = b.label();
  b.icopy(ptr, IReg{1, 1});
  // Guess every directly addressed cell up front.
  for (std::uint32_t i = 0; i < direct; ++i) b.initguess(ptr, aux2, aux3, oracle);
  for (std::size_t l = 0; l < m.program.size(); ++l) {
    b.bind(ms[l]);
    Instruction ins = m.program.code[l];
    if (std::holds_alternative<NuAssign>(ins) || std::holds_alternative<OracleBranch>(ins))
      throw Error(ErrorKind::KindMismatch, "ND machine with oracle instructions");
    remap_targets(ins, [&](Label t) { return ms.at(t - 1); });
    bool incr = std::holds_alternative<IndexIncr>(ins);
    b.emit(std::move(ins));
    if (incr) b.initguess(ptr, aux2, aux3, oracle);
  }
  return make_machine(b.finish(), m.structure, MachineKind::NuOracle, OracleSpec{FullUniverse{}}, 1, {k + 3});
}

MachineSpec flatten_tapes(const MachineSpec& m) {
  if (m.tapes <= 1) return m;
  if (uses_nu(m.program) || uses_oracle_branch(m.program))
    throw Error(ErrorKind::KindMismatch, "flattening supports machines without oracle instructions");
  const std::uint32_t d = m.tapes;
  const std::uint32_t stride = d + 1;  // track d+1 keeps x_n in row 1
  std::vector<std::uint32_t> base(d + 1, 0);
  for (std::uint32_t t = 1; t <= d; ++t) base[t] = base[t - 1] + m.index_registers.at(t - 1);
  const std::uint32_t h = base[d];
  auto reg = [&](IReg r) { return IReg{1, base[r.tape - 1] + r.index}; };
  auto shadow = [&](IReg r) { return IReg{1, h + base[r.tape - 1] + r.index}; };
  const IReg P{1, 2 * h + 1}, Q{1, 2 * h + 2}, R{1, 2 * h + 3}, W{1, 2 * h + 4}, X{1, 2 * h + 5};
  const IReg n = reg(IReg{1, 1});
  std::uint32_t direct = 0;
  for (auto z : direct_z_used(m.program)) direct = std::max(direct, z);
  auto cell = [&](ZReg z) { return ZReg{1, static_cast<std::uint32_t>(track_address(stride, z.tape, z.index))}; };
  auto addr = [&](ZAddr a) {
    if (a.indirect) return ZAddr::via(shadow(IReg{a.tape, a.index}));
    return ZAddr::direct(cell(ZReg{a.tape, a.index}));
  };

  Builder b;
  std::vector<Builder::Sym> ms(m.program.size());
  for (auto& s : ms) s = b.label();
  Builder::Sym gather = b.label();

  auto add_stride = [&](IReg r) {
    for (std::uint32_t i = 0; i < stride; ++i) b.incr(r);
  };
  // Tracks 2..d+1 of the next row receive x_n; W points at the last cell written.
  auto fill_row = [&] {
    b.incr(W);
    for (std::uint32_t t = 2; t <= stride; ++t) {
      b.incr(W);
      b.emit(Copy{ZAddr::via(W), ZAddr::direct(ZReg{1, stride})});
    }
  };

  // Shadow addresses of row 1, and of row n for I_{1,1}.
  for (std::uint32_t t = 1; t <= d; ++t)
    for (std::uint32_t j = 1; j <= m.index_registers.at(t - 1); ++j)
      if (!(t == 1 && j == 1)) b.iconst(shadow(IReg{t, j}), t);
  {
    Builder::Sym loop = b.label(), step = b.label(), done = b.label();
    IReg s11 = shadow(IReg{1, 1});
    b.reset(s11);
    b.reset(R);
    b.bind(loop);
    b.branch_eq(R, n, done, step);
    b.bind(step);
    add_stride(s11);
    b.incr(R);
    b.jump(loop);
    b.bind(done);
  }
  // Park x_1..x_n in track 2 of rows n+1..2n.
  {
    Builder::Sym loop = b.label(), step = b.label(), done = b.label();
    b.icopy(Q, shadow(IReg{1, 1}));
    add_stride(Q);
    b.incr(Q);
    b.reset(P);
    b.bind(loop);
    b.emit(Copy{ZAddr::via(Q), ZAddr::via(P)});
    b.branch_eq(P, n, done, step);
    b.bind(step);
    b.incr(P);
    add_stride(Q);
    b.jump(loop);
    b.bind(done);
    b.icopy(X, Q);
  }
  // Rows 1..n: track 1 gets x_i, the other tracks x_n.
  {
    Builder::Sym loop = b.label(), step = b.label(), done = b.label();
    b.icopy(Q, shadow(IReg{1, 1}));
    add_stride(Q);
    b.incr(Q);
    b.reset(P);
    b.reset(R);
    b.bind(loop);
    b.emit(Copy{ZAddr::via(P), ZAddr::via(Q)});
    b.icopy(W, P);
    for (std::uint32_t t = 2; t <= stride; ++t) {
      b.incr(W);
      b.emit(Copy{ZAddr::via(W), ZAddr::via(X)});
    }
    b.branch_eq(R, n, done, step);
    b.bind(step);
    b.incr(R);
    add_stride(P);
    add_stride(Q);
    b.jump(loop);
    b.bind(done);
  }
  for (std::uint32_t i = 0; i < direct; ++i) fill_row();

  for (std::size_t l = 0; l < m.program.size(); ++l) {
    b.bind(ms[l]);
    const Instruction& ins = m.program.code[l];
    auto to = [&](Label t) { return ms.at(t - 1); };
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Compute>) {
            Compute c{x.fn, cell(x.dest), {}};
            for (auto a : x.args) c.args.push_back(cell(a));
            b.emit(std::move(c));
          } else if constexpr (std::is_same_v<T, SetConst>) {
            b.emit(SetConst{x.constant, cell(x.dest)});
          } else if constexpr (std::is_same_v<T, Copy>) {
            b.emit(Copy{addr(x.dest), addr(x.src)});
          } else if constexpr (std::is_same_v<T, RelBranch>) {
            RelBranch r{x.rel, {}, to(x.then_label), to(x.else_label)};
            for (auto a : x.args) r.args.push_back(cell(a));
            b.emit(std::move(r));
          } else if constexpr (std::is_same_v<T, IndexBranch>) {
            b.emit(IndexBranch{reg(x.lhs), reg(x.rhs), to(x.then_label), to(x.else_label)});
          } else if constexpr (std::is_same_v<T, IndexReset>) {
            b.reset(reg(x.reg));
            b.iconst(shadow(x.reg), x.reg.tape);
          } else if constexpr (std::is_same_v<T, IndexIncr>) {
            b.incr(reg(x.reg));
            add_stride(shadow(x.reg));
            fill_row();
          } else if constexpr (std::is_same_v<T, Stop>) {
            b.jump(gather);
          }
        },
        ins);
  }
  // Output: track 1 cells back to the front.
  {
    Builder::Sym loop = b.label(), step = b.label(), done = b.label();
    b.bind(gather);
    b.reset(P);
    b.reset(Q);
    b.bind(loop);
    b.emit(Copy{ZAddr::via(P), ZAddr::via(Q)});
    b.branch_eq(P, n, done, step);
    b.bind(step);
    b.incr(P);
    add_stride(Q);
    b.jump(loop);
    b.bind(done);
    b.stop();
  }
  return make_machine(b.finish(), m.structure, m.kind, m.oracle, 1, {2 * h + 5});
}

Tuple flatten_guesses(const MachineSpec& m, const Tuple& input, const Tuple& guesses) {
  if (m.tapes <= 1 || guesses.empty()) return guesses;
  if (input.empty()) throw Error(ErrorKind::EmptyInput, "input must be nonempty");
  const std::uint32_t stride = m.tapes + 1;
  const std::size_t n = input.size();
  Tuple out(track_address(stride, 1, n + guesses.size()) - n, input.back());
  for (std::size_t k = 1; k <= guesses.size(); ++k) out[track_address(stride, 1, n + k) - n - 1] = guesses[k - 1];
  return out;
}

MachineSpec decider_to_semidecider(const MachineSpec& decider) {
  const Structure& st = *decider.structure;
  if (!st.identity_available()) throw Error(ErrorKind::IdentityUnavailable, "comparing with c1 needs identity");
  if (st.signature().constants < 1) throw Error(ErrorKind::CaseMismatch, "structure has no constant c1");
  if (decider.tapes != 1) throw Error(ErrorKind::InvalidArgument, "decider must use one tape");
  Builder b;
  std::vector<Builder::Sym> ms(decider.program.size());
  for (auto& s : ms) s = b.label();
  Builder::Sym check = b.label(), spin = b.label(), halt = b.label();
  for (std::size_t l = 0; l < decider.program.size(); ++l) {
    b.bind(ms[l]);
    Instruction ins = decider.program.code[l];
    if (std::holds_alternative<Stop>(ins)) {
      b.jump(check);
      continue;
    }
    remap_targets(ins, [&](Label t) { return ms.at(t - 1); });
    b.emit(std::move(ins));
  }
  b.bind(check);
  b.emit(SetConst{1, ZReg{1, 2}});
  b.emit(RelBranch{*st.identity_relation(), {ZReg{1, 1}, ZReg{1, 2}}, halt, spin});
  b.bind(spin);
  b.jump(spin);
  b.bind(halt);
  b.stop();
  return make_machine(b.finish(), decider.structure, MachineKind::Deterministic, std::nullopt, 1,
                      decider.index_registers);
}

}  // namespace bss
