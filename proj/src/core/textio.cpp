#include "core/textio.hpp"

#include "core/error.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace palab {

namespace {

struct FileLine {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<FileLine> tokenize(const std::string& text) {
  std::vector<FileLine> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream toks(raw);
    FileLine line;
    line.number = number;
    std::string tok;
    while (toks >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
  input_error("line " + std::to_string(line) + ": " + msg);
}

void need_args(const FileLine& line, std::size_t count) {
  if (line.tokens.size() != count + 1)
    fail_at(line.number, "`" + line.tokens[0] + "` expects " +
                             std::to_string(count) + " argument(s)");
}

Rat arg_rat(const FileLine& line, std::size_t pos) {
  std::optional<Rat> v = rat_parse(line.tokens[pos]);
  if (!v) fail_at(line.number, "not a rational: " + line.tokens[pos]);
  return *v;
}

// Range check performed here so the diagnostic can name the offending line;
// the whole-automaton checks (row sums, etc.) run after parsing.
Rat arg_prob(const FileLine& line, std::size_t pos) {
  Rat v = arg_rat(line, pos);
  if (v < 0 || v > 1)
    fail_at(line.number, "probability outside [0,1]: " + line.tokens[pos]);
  return v;
}

Int arg_int(const FileLine& line, std::size_t pos) {
  std::optional<Int> v = int_parse(line.tokens[pos]);
  if (!v) fail_at(line.number, "not an integer: " + line.tokens[pos]);
  return *v;
}

long arg_count(const FileLine& line, std::size_t pos) {
  Int v = arg_int(line, pos);
  if (v < 0 || !v.fits_slong_p())
    fail_at(line.number, "count out of range: " + line.tokens[pos]);
  return v.get_si();
}

} // namespace

Pa parse_pa(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) input_error("line 1: empty input");

  const FileLine* alpha = nullptr;
  for (const auto& line : lines) {
    if (line.tokens[0] == "alphabet") {
      if (alpha) fail_at(line.number, "duplicate alphabet line");
      alpha = &line;
    }
  }
  if (!alpha) fail_at(lines.front().number, "missing alphabet line");
  if (alpha->tokens.size() < 2)
    fail_at(alpha->number, "alphabet needs at least one letter");

  PaBuilder builder(
      std::vector<std::string>(alpha->tokens.begin() + 1, alpha->tokens.end()));
  // Declare states first so initial/final/trans lines may appear in any order.
  for (const auto& line : lines) {
    if (line.tokens[0] != "state") continue;
    need_args(line, 1);
    try {
      builder.add_state(line.tokens[1]);
    } catch (const PalabError& e) {
      fail_at(line.number, e.what());
    }
  }
  for (const auto& line : lines) {
    const std::string& head = line.tokens[0];
    try {
      if (head == "initial") {
        need_args(line, 2);
        builder.set_initial(line.tokens[1], arg_prob(line, 2));
      } else if (head == "final") {
        need_args(line, 1);
        builder.set_final(line.tokens[1]);
      } else if (head == "trans") {
        need_args(line, 4);
        builder.add_trans(line.tokens[1], line.tokens[2], line.tokens[3],
                          arg_prob(line, 4));
      } else if (head == "alphabet" || head == "state") {
        // handled above
      } else {
        fail_at(line.number, "unknown directive `" + head + "`");
      }
    } catch (const PalabError& e) {
      if (e.kind == ErrKind::Input &&
          std::string(e.what()).rfind("line ", 0) == 0)
        throw;
      fail_at(line.number, e.what());
    }
  }
  return builder.build();
}

std::string render_pa(const Pa& pa) {
  std::ostringstream out;
  out << "alphabet";
  for (const auto& tok : pa.alphabet) out << ' ' << tok;
  out << '\n';
  for (const auto& id : pa.states) out << "state " << id << '\n';
  for (const auto& [q, p] : pa.initial)
    out << "initial " << pa.states[static_cast<std::size_t>(q)] << ' '
        << rat_render(p) << '\n';
  for (std::size_t q = 0; q < pa.states.size(); ++q)
    if (pa.finals[q]) out << "final " << pa.states[q] << '\n';
  for (std::size_t q = 0; q < pa.states.size(); ++q)
    for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
      for (const auto& t : pa.delta[q][a])
        out << "trans " << pa.states[q] << ' ' << pa.alphabet[a] << ' '
            << pa.states[static_cast<std::size_t>(t.dst)] << ' '
            << rat_render(t.prob) << '\n';
  return out.str();
}

TwoCounterMachine parse_cm(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) input_error("line 1: empty input");

  TwoCounterMachine m;
  std::set<std::string> seen;
  auto state_at = [&](const FileLine& line, std::size_t pos) {
    int idx = m.state_index(line.tokens[pos]);
    if (idx < 0)
      fail_at(line.number, "unknown state `" + line.tokens[pos] + "`");
    return idx;
  };
  for (const auto& line : lines) {
    if (line.tokens[0] != "state") continue;
    need_args(line, 1);
    if (!seen.insert(line.tokens[1]).second)
      fail_at(line.number, "duplicate state `" + line.tokens[1] + "`");
    m.states.push_back(line.tokens[1]);
  }
  for (const auto& line : lines) {
    const std::string& head = line.tokens[0];
    if (head == "state") continue;
    if (head == "init") {
      need_args(line, 1);
      if (m.q_init >= 0) fail_at(line.number, "duplicate init line");
      m.q_init = state_at(line, 1);
    } else if (head == "halt") {
      need_args(line, 1);
      if (m.q_halt >= 0) fail_at(line.number, "duplicate halt line");
      m.q_halt = state_at(line, 1);
    } else if (head == "inc1" || head == "inc2") {
      need_args(line, 2);
      CmOp op = head == "inc1" ? CmOp::Inc1 : CmOp::Inc2;
      m.transitions.push_back(
          {op, state_at(line, 1), state_at(line, 2), -1});
    } else if (head == "dec1" || head == "dec2") {
      need_args(line, 3);
      CmOp op = head == "dec1" ? CmOp::Dec1 : CmOp::Dec2;
      m.transitions.push_back(
          {op, state_at(line, 1), state_at(line, 2), state_at(line, 3)});
    } else {
      fail_at(line.number, "unknown directive `" + head + "`");
    }
  }
  if (m.q_init < 0) fail_at(lines.back().number, "missing init line");
  if (m.q_halt < 0) fail_at(lines.back().number, "missing halt line");
  validate_cm(m);
  return m;
}

std::string render_cm(const TwoCounterMachine& m) {
  std::ostringstream out;
  for (const auto& id : m.states) out << "state " << id << '\n';
  out << "init " << m.states[static_cast<std::size_t>(m.q_init)] << '\n';
  out << "halt " << m.states[static_cast<std::size_t>(m.q_halt)] << '\n';
  for (const auto& t : m.transitions) {
    const auto& name = [&](int q) -> const std::string& {
      return m.states[static_cast<std::size_t>(q)];
    };
    switch (t.op) {
      case CmOp::Inc1:
        out << "inc1 " << name(t.src) << ' ' << name(t.target) << '\n';
        break;
      case CmOp::Inc2:
        out << "inc2 " << name(t.src) << ' ' << name(t.target) << '\n';
        break;
      case CmOp::Dec1:
        out << "dec1 " << name(t.src) << ' ' << name(t.target) << ' '
            << name(t.nonzero_target) << '\n';
        break;
      case CmOp::Dec2:
        out << "dec2 " << name(t.src) << ' ' << name(t.target) << ' '
            << name(t.nonzero_target) << '\n';
        break;
    }
  }
  return out.str();
}

IpExpInstance parse_ipexp(const std::string& text) {
  auto lines = tokenize(text);
  if (lines.empty()) input_error("line 1: empty input");

  const FileLine& head = lines.front();
  if (head.tokens[0] != "ipexp")
    fail_at(head.number, "expected header `ipexp n ell m`");
  need_args(head, 3);
  long n = arg_count(head, 1);
  long ell = arg_count(head, 2);
  long rows = arg_count(head, 3);
  if (static_cast<long>(lines.size()) != 1 + ell + rows)
    fail_at(head.number, "expected " + std::to_string(ell) + " term and " +
                             std::to_string(rows) + " row lines");

  IpExpInstance inst;
  inst.f.n = static_cast<int>(n);
  for (long i = 0; i < ell; ++i) {
    const FileLine& line = lines[static_cast<std::size_t>(1 + i)];
    if (line.tokens[0] != "term") fail_at(line.number, "expected `term` line");
    need_args(line, static_cast<std::size_t>(1 + n));
    inst.f.r.push_back(arg_rat(line, 1));
    std::vector<Rat> bases;
    for (long j = 0; j < n; ++j)
      bases.push_back(arg_rat(line, static_cast<std::size_t>(2 + j)));
    inst.f.s.push_back(std::move(bases));
  }
  for (long k = 0; k < rows; ++k) {
    const FileLine& line = lines[static_cast<std::size_t>(1 + ell + k)];
    if (line.tokens[0] != "row") fail_at(line.number, "expected `row` line");
    need_args(line, static_cast<std::size_t>(n + 1));
    std::vector<Int> row;
    for (long j = 0; j < n; ++j)
      row.push_back(arg_int(line, static_cast<std::size_t>(1 + j)));
    inst.M.push_back(std::move(row));
    inst.c.push_back(arg_int(line, static_cast<std::size_t>(1 + n)));
  }
  validate_ipexp(inst);
  return inst;
}

std::string render_ipexp(const IpExpInstance& inst) {
  std::ostringstream out;
  out << "ipexp " << inst.n() << ' ' << inst.ell() << ' ' << inst.m() << '\n';
  for (int i = 0; i < inst.ell(); ++i) {
    out << "term " << rat_render(inst.f.r[static_cast<std::size_t>(i)]);
    for (const auto& base : inst.f.s[static_cast<std::size_t>(i)])
      out << ' ' << rat_render(base);
    out << '\n';
  }
  for (int k = 0; k < inst.m(); ++k) {
    out << "row";
    for (const auto& entry : inst.M[static_cast<std::size_t>(k)])
      out << ' ' << int_render(entry);
    out << ' ' << int_render(inst.c[static_cast<std::size_t>(k)]) << '\n';
  }
  return out.str();
}

Word parse_word_arg(const std::vector<std::string>& alphabet,
                    const std::string& arg) {
  std::string spaced = arg;
  for (char& ch : spaced)
    if (ch == ',') ch = ' ';
  std::istringstream in(spaced);
  Word w;
  std::string tok;
  while (in >> tok) w.push_back(tok);

  auto known = [&](const std::string& letter) {
    for (const auto& a : alphabet)
      if (a == letter) return true;
    return false;
  };
  bool all_known = true;
  for (const auto& letter : w)
    if (!known(letter)) all_known = false;
  if (all_known) return w;

  bool single_char = true;
  for (const auto& a : alphabet)
    if (a.size() != 1) single_char = false;
  if (single_char && w.size() == 1) {
    Word split;
    for (char ch : w[0]) {
      std::string letter(1, ch);
      if (!known(letter))
        input_error("letter `" + letter + "` is not in the alphabet");
      split.push_back(letter);
    }
    return split;
  }
  for (const auto& letter : w)
    if (!known(letter))
      input_error("letter `" + letter + "` is not in the alphabet");
  return w;
}

std::string render_word(const Word& w) {
  std::ostringstream out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << ' ';
    out << w[i];
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) input_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) input_error("cannot write file: " + path);
  out << content;
  if (!out.flush()) input_error("failed writing file: " + path);
}

} // namespace palab
