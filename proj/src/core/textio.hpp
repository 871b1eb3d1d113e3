#pragma once

#include "core/forge.hpp"
#include "core/ipexp.hpp"
#include "core/pa.hpp"

#include <string>
#include <vector>

namespace palab {

// Line-based formats with `#` comments; parse errors carry line numbers and
// parse(render(x)) == x on every valid value.

// `alphabet <tok> ...`, `state <id>`, `initial <id> <rat>`, `final <id>`,
// `trans <src> <letter> <dst> <rat>`.
Pa parse_pa(const std::string& text);
std::string render_pa(const Pa& pa);

// `state <id>`, `init <id>`, `halt <id>`, `inc1 <p> <q>`, `inc2 <p> <q>`,
// `dec1 <p> <qzero> <qnonzero>`, `dec2 <p> <qzero> <qnonzero>`.
TwoCounterMachine parse_cm(const std::string& text);
std::string render_cm(const TwoCounterMachine& m);

// Header `ipexp n ell m`, then ell lines `term r s1 .. sn`, then m lines
// `row M1 .. Mn c` (r, s rational; M, c integer).
IpExpInstance parse_ipexp(const std::string& text);
std::string render_ipexp(const IpExpInstance& inst);

// Splits on whitespace/commas; when every alphabet letter is one character,
// an argument without separators is split per character ("aab" -> a a b).
// The empty string is the empty word.
Word parse_word_arg(const std::vector<std::string>& alphabet,
                    const std::string& arg);
std::string render_word(const Word& w);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace palab
