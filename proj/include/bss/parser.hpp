#pragma once

#include <string>
#include <string_view>

#include "bss/program.hpp"
#include "bss/pseudo.hpp"

namespace bss {

// Parses "1: instr; 2: instr; ...; L: stop." with one label per line.
// Throws ParseError (SyntaxError or UnknownInstructionForm) with a position.
ExtProgram parse_program(std::string_view text);

// parse_program restricted to genuine instructions; pseudo lines raise UnknownPseudo.
Program parse_core(std::string_view text);

// Canonical text. Registers are tape-qualified when the program uses more
// than one tape. parse_core(render_program(p)) == p.
std::string render_program(const Program& p);
std::string render_ext(const ExtProgram& p);
std::string render_instruction(const Instruction& ins, bool qualified);

}  // namespace bss
