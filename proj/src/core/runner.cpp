#include "core/runner.hpp"

#include "core/ambiguity.hpp"
#include "core/deciders.hpp"
#include "core/error.hpp"
#include "core/forge.hpp"
#include "core/ipexp.hpp"
#include "core/oracle.hpp"
#include "core/pa.hpp"
#include "core/textio.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

namespace palab {

namespace {

const char* kind_name(ErrKind k) {
  switch (k) {
    case ErrKind::Input: return "input";
    case ErrKind::Contract: return "contract";
    case ErrKind::Resource: return "resource";
  }
  return "unknown";
}

void header(std::ostream& out, const std::string& command) {
  out << "# pa-lab v1\n";
  out << "command: " << command << "\n";
}

void print_block(std::ostream& out, const std::string& label,
                 const std::string& body) {
  if (body.empty()) return;
  out << label << ":\n";
  std::istringstream is(body);
  std::string line;
  while (std::getline(is, line)) out << "    " << line << "\n";
}

std::string vec_render(const std::vector<Int>& x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i].get_str();
  }
  os << ")";
  return os.str();
}

std::string word_or_epsilon(const Word& w) {
  return w.empty() ? std::string("(empty word)") : render_word(w);
}

Pa load_pa(const std::string& path) { return parse_pa(read_text_file(path)); }

// Constant-1/2 comparison automaton over `alphabet` (used to restate the
// one-half cutpoint emptiness question as a containment sweep).
Pa constant_half(const std::vector<std::string>& alphabet) {
  PaBuilder b(alphabet);
  b.add_state("u");
  b.set_initial("u", Rat(1, 2));
  b.set_final("u");
  for (const std::string& letter : alphabet)
    b.add_trans("u", letter, "u", Rat(1));
  return b.build();
}

int verdict_exit(Answer a) { return a == Answer::Unknown ? 2 : 0; }

void verify_no_witness_exceeds(const Pa& A, const Pa& B, long L,
                               const Rat& slack, std::ostream& out) {
  SweepReport sweep = brute_force_containment(A, B, L);
  for (const Word& w : sweep.word_witnesses)
    if (evaluate(A, w) > evaluate(B, w) + slack)
      contract_error("verification failed: word " + word_or_epsilon(w) +
                     " exceeds the certified bound");
  out << "verification: no word of length <= " << L
      << " exceeds the certified bound\n";
}

int do_classify(const std::string& path, bool verify, std::ostream& out) {
  Pa pa = load_pa(path);
  AmbiguityClass cls = classify(pa);
  header(out, "classify");
  out << "input: " << path << "\n";
  out << "states: " << pa.states.size() << "\n";
  out << "ambiguity: " << amb_render(cls) << "\n";
  if (verify) {
    const long L = 4;
    std::vector<Int> counts = max_run_count_by_length(pa, L);
    if (cls.tag == AmbTag::Unambiguous || cls.tag == AmbTag::Finite) {
      Int bound = cls.tag == AmbTag::Unambiguous ? Int(1)
                                                 : Int(*cls.finiteDegree);
      for (const Int& c : counts)
        if (c > bound)
          contract_error(
              "verification failed: run count exceeds the declared bound");
    }
    out << "verification: run counts up to length " << L
        << " consistent with the class\n";
  }
  return 0;
}

int do_eval(const std::string& path, const std::string& word_arg, bool verify,
            std::ostream& out) {
  Pa pa = load_pa(path);
  Word w = parse_word_arg(pa.alphabet, word_arg);
  Rat value = evaluate(pa, w);
  header(out, "eval");
  out << "input: " << path << "\n";
  out << "word: " << word_or_epsilon(w) << "\n";
  out << "value: " << rat_render(value) << "\n";
  if (verify) {
    std::vector<Run> runs = enumerate_accepting_runs(pa, w);
    Rat total(0);
    for (const Run& r : runs) total += run_probability(pa, r);
    if (total != value)
      contract_error("verification failed: run-enumeration sum disagrees");
    out << "verification: sum over " << runs.size()
        << " accepting runs agrees\n";
  }
  return 0;
}

int report_emptiness(const Pa& A, const Verdict& v, const Rat& eps_slack,
                     bool verify, std::ostream& out) {
  switch (v.answer) {
    case Answer::Yes:
      out << "verdict: YES ([[A]] <= 1/2 everywhere"
          << (eps_slack > 0 ? " up to the gap promise" : "") << ")\n";
      break;
    case Answer::No: {
      out << "verdict: NO\n";
      out << "witness: " << word_or_epsilon(*v.witness) << "\n";
      out << "witness value: " << rat_render(evaluate(A, *v.witness)) << "\n";
      break;
    }
    case Answer::Unknown:
      out << "verdict: UNKNOWN\n";
      break;
  }
  print_block(out, "certificate", v.certificate);
  if (verify) {
    if (v.answer == Answer::No) {
      if (!(evaluate(A, *v.witness) > Rat(1, 2)))
        contract_error("verification failed: witness does not exceed 1/2");
      out << "verification: witness value exceeds 1/2 exactly\n";
    } else if (v.answer == Answer::Yes) {
      verify_no_witness_exceeds(A, constant_half(A.alphabet), 4, eps_slack,
                                out);
    }
  }
  return verdict_exit(v.answer);
}

int do_empty(const std::string& path, bool verify, std::ostream& out) {
  Pa A = load_pa(path);
  header(out, "empty");
  out << "input: " << path << "\n";
  Verdict v = emptiness_finite(A);
  return report_emptiness(A, v, Rat(0), verify, out);
}

int do_gap_empty(const std::string& path, const std::string& eps_text,
                 std::optional<long> override_n, bool verify,
                 std::ostream& out) {
  Pa A = load_pa(path);
  std::optional<Rat> eps = rat_parse(eps_text);
  if (!eps) input_error("--epsilon: not a rational: " + eps_text);
  header(out, "gap-empty");
  out << "input: " << path << "\n";
  out << "epsilon: " << rat_render(*eps) << "\n";
  if (override_n) out << "override-N: " << *override_n << "\n";
  Verdict v = gap_emptiness(A, *eps, override_n);
  // A YES under the gap promise only asserts [[A]] <= 1/2 + epsilon.
  return report_emptiness(A, v, *eps, verify, out);
}

int report_containment(const Pa& A, const Pa& B, const Verdict& v, bool verify,
                       std::ostream& out) {
  switch (v.answer) {
    case Answer::Yes:
      out << "verdict: YES ([[A]] <= [[B]] everywhere)\n";
      break;
    case Answer::No:
      out << "verdict: NO\n";
      out << "witness: " << word_or_epsilon(*v.witness) << "\n";
      out << "left value: " << rat_render(evaluate(A, *v.witness)) << "\n";
      out << "right value: " << rat_render(evaluate(B, *v.witness)) << "\n";
      break;
    case Answer::Unknown:
      out << "verdict: UNKNOWN\n";
      break;
  }
  print_block(out, "certificate", v.certificate);
  if (verify) {
    if (v.answer == Answer::No) {
      if (!(evaluate(A, *v.witness) > evaluate(B, *v.witness)))
        contract_error("verification failed: witness is not a counterexample");
      out << "verification: witness separates the two values exactly\n";
    } else if (v.answer == Answer::Yes) {
      verify_no_witness_exceeds(A, B, 4, Rat(0), out);
    }
  }
  return verdict_exit(v.answer);
}

int do_contain(const std::string& path_a, const std::string& path_b,
               bool verify, std::ostream& out) {
  Pa A = load_pa(path_a);
  Pa B = load_pa(path_b);
  AmbiguityClass ca = classify(A);
  AmbiguityClass cb = classify(B);
  header(out, "contain");
  out << "left: " << path_a << " (" << amb_render(ca) << ")\n";
  out << "right: " << path_b << " (" << amb_render(cb) << ")\n";
  bool a_fin = ca.tag == AmbTag::Unambiguous || ca.tag == AmbTag::Finite;
  bool b_fin = cb.tag == AmbTag::Unambiguous || cb.tag == AmbTag::Finite;
  Verdict v;
  if (a_fin && cb.tag == AmbTag::Unambiguous) {
    out << "mode: finitely ambiguous vs unambiguous\n";
    v = containment_fin_vs_unamb(A, B);
  } else if (ca.tag == AmbTag::Unambiguous && b_fin) {
    out << "mode: unambiguous vs finitely ambiguous\n";
    v = containment_unamb_vs_fin(A, B);
  } else {
    out << "configuration: unsupported (decided configurations: finitely "
           "ambiguous vs unambiguous, and unambiguous vs finitely "
           "ambiguous)\n";
    return 1;
  }
  return report_containment(A, B, v, verify, out);
}

int do_forge(const std::string& path, const std::string& out_dir, bool verify,
             std::ostream& out) {
  TwoCounterMachine m = parse_cm(read_text_file(path));
  ReductionOutput r = compile(m);
  header(out, "forge");
  out << "machine: " << path << " (" << m.states.size() << " states, "
      << m.transitions.size() << " transitions)\n";
  const std::pair<const char*, const Pa*> files[4] = {{"A.pa", &r.A},
                                                      {"B.pa", &r.B},
                                                      {"Aprime.pa", &r.Aprime},
                                                      {"Bprime.pa", &r.Bprime}};
  for (const auto& [name, pa] : files) {
    std::filesystem::path p = std::filesystem::path(out_dir) / name;
    write_text_file(p.string(), render_pa(*pa));
    out << "wrote: " << p.string() << " (" << pa->states.size()
        << " states)\n";
  }
  CmSimulation sim = simulate_cm(m);
  if (sim.halted) {
    Word w = encode_execution(m);
    out << "simulation: halts after " << sim.steps << " steps\n";
    out << "halting word: " << word_or_epsilon(w) << "\n";
    out << "A value: " << rat_render(evaluate(r.A, w)) << "\n";
    out << "B value: " << rat_render(evaluate(r.B, w)) << "\n";
  } else {
    out << "simulation: no halt within 10000 steps\n";
  }
  if (verify) {
    // The compiled pair must satisfy [[A]] >= [[B]] everywhere, with the
    // strict primed inequality appearing exactly where [[A]] = [[B]].
    const long L = 3;
    for (long len = 0; len <= L; ++len) {
      std::vector<Word> words = {{}};
      for (long i = 0; i < len; ++i) {
        std::vector<Word> next;
        for (const Word& w : words)
          for (const std::string& letter : r.A.alphabet) {
            Word v = w;
            v.push_back(letter);
            next.push_back(std::move(v));
          }
        words = std::move(next);
      }
      for (const Word& w : words) {
        Rat va = evaluate(r.A, w), vb = evaluate(r.B, w);
        if (va < vb)
          contract_error("verification failed: [[A]] < [[B]] on " +
                         word_or_epsilon(w));
        bool primed_gap = evaluate(r.Aprime, w) > evaluate(r.Bprime, w);
        if (primed_gap != (va == vb))
          contract_error(
              "verification failed: primed pair disagrees with equality on " +
              word_or_epsilon(w));
      }
    }
    out << "verification: pair inequalities hold for all words of length <= "
        << L << "\n";
  }
  return 0;
}

int do_ipexp_solve(const std::string& path, long radius, bool verify,
                   std::ostream& out) {
  IpExpInstance inst = parse_ipexp(read_text_file(path));
  IpExpBudget budget;
  if (radius >= 0) budget.t1_radius = radius;
  header(out, "ipexp solve");
  out << "input: " << path << " (n=" << inst.n() << ", terms=" << inst.ell()
      << ", rows=" << inst.m() << ")\n";
  SolveResult res = ipexp_solve(inst, budget);
  out << "detail: " << res.summary << "\n";
  switch (res.status) {
    case SolveStatus::Sat:
      out << "verdict: SAT x=" << vec_render(res.witness) << "\n";
      out << "value: " << rat_render(eval_expsum(inst.f, res.witness)) << "\n";
      if (verify) {
        if (!verify_sat(inst, res.witness))
          contract_error("verification failed: SAT witness rejected");
        out << "verification: witness satisfies f(x) < 1 and Mx < c\n";
      }
      return 0;
    case SolveStatus::Unsat:
      out << "verdict: UNSAT\n";
      print_block(out, "certificate", render_unsat_cert(*res.cert));
      if (verify) {
        if (!verify_unsat(inst, *res.cert, budget))
          contract_error("verification failed: UNSAT certificate rejected");
        out << "verification: certificate re-checked exactly\n";
      }
      return 0;
    case SolveStatus::Unknown:
      out << "verdict: UNKNOWN\n";
      return 2;
  }
  return 2;
}

int do_brute_contain(const std::string& path_a, const std::string& path_b,
                     long len, std::ostream& out) {
  Pa A = load_pa(path_a);
  Pa B = load_pa(path_b);
  header(out, "brute contain");
  SweepReport rep = brute_force_containment(A, B, len);
  out << "bound: " << rep.bound << "\n";
  out << "witnesses: " << rep.word_witnesses.size() << "\n";
  if (!rep.word_witnesses.empty())
    out << "first witness: " << word_or_epsilon(rep.word_witnesses.front())
        << "\n";
  if (rep.extremal)
    out << "max difference: " << rat_render(*rep.extremal) << "\n";
  return 0;
}

int do_brute_ipexp(const std::string& path, long radius, std::ostream& out) {
  IpExpInstance inst = parse_ipexp(read_text_file(path));
  header(out, "brute ipexp");
  SweepReport rep = brute_force_ipexp(inst, radius);
  out << "bound: " << rep.bound << "\n";
  out << "witnesses: " << rep.vector_witnesses.size() << "\n";
  if (!rep.vector_witnesses.empty())
    out << "first witness: x=" << vec_render(rep.vector_witnesses.front())
        << "\n";
  if (rep.extremal)
    out << "min constrained value: " << rat_render(*rep.extremal) << "\n";
  return 0;
}

int do_brute_runs(const std::string& path, const std::string& word_arg,
                  std::ostream& out) {
  Pa pa = load_pa(path);
  Word w = parse_word_arg(pa.alphabet, word_arg);
  header(out, "brute runs");
  out << "word: " << word_or_epsilon(w) << "\n";
  out << "accepting runs: " << count_accepting_runs(pa, w).get_str() << "\n";
  out << "value: " << rat_render(evaluate(pa, w)) << "\n";
  std::map<long, Int> profile = choice_profile(pa, w);
  out << "choice profile:";
  for (const auto& [choices, count] : profile)
    out << " " << choices << "->" << count.get_str();
  out << "\n";
  return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"pa-lab: exact analysis of probabilistic automata"};
  app.fallthrough();
  app.require_subcommand(1);
  bool verify = false;
  app.add_flag("--verify", verify,
               "re-check every emitted verdict and certificate exactly");

  std::string pa_path, pb_path, word_arg, eps_text, out_dir = ".";
  long override_n = -1, radius = -1, brute_len = 5, brute_radius = 10;

  CLI::App* c_classify =
      app.add_subcommand("classify", "ambiguity class of an automaton");
  c_classify->add_option("pa", pa_path, "automaton file")->required();

  CLI::App* c_eval =
      app.add_subcommand("eval", "exact acceptance value of a word");
  c_eval->add_option("pa", pa_path, "automaton file")->required();
  c_eval->add_option("word", word_arg,
                     "word (space-separated letters; empty for the "
                     "empty word)")
      ->required();

  CLI::App* c_empty = app.add_subcommand(
      "empty", "is [[A]] <= 1/2 everywhere (finitely ambiguous input)");
  c_empty->add_option("pa", pa_path, "automaton file")->required();

  CLI::App* c_gap = app.add_subcommand(
      "gap-empty", "one-half cutpoint emptiness with an epsilon gap promise");
  c_gap->add_option("pa", pa_path, "automaton file")->required();
  c_gap->add_option("--epsilon", eps_text, "gap width, a rational in (0,1)")
      ->required();
  CLI::Option* override_opt = c_gap->add_option(
      "--override-N", override_n,
      "replace the certified layer count (waives the epsilon guarantee)");

  CLI::App* c_contain =
      app.add_subcommand("contain", "is [[A]] <= [[B]] everywhere");
  c_contain->add_option("paA", pa_path, "left automaton file")->required();
  c_contain->add_option("paB", pb_path, "right automaton file")->required();

  CLI::App* c_forge = app.add_subcommand(
      "forge", "compile a two-counter machine into a containment pair");
  c_forge->add_option("tcm", pa_path, "machine file")->required();
  c_forge->add_option("--out", out_dir, "output directory (default .)");

  CLI::App* c_ipexp = app.add_subcommand(
      "ipexp", "exponential-sum inequalities over integer points");
  c_ipexp->require_subcommand(1);
  c_ipexp->fallthrough();
  CLI::App* c_solve =
      c_ipexp->add_subcommand("solve", "decide f(x) < 1, Mx < c");
  c_solve->add_option("file", pa_path, "instance file")->required();
  c_solve->add_option("--radius", radius, "direct-search box radius");

  CLI::App* c_brute = app.add_subcommand("brute", "brute-force oracles");
  c_brute->require_subcommand(1);
  c_brute->fallthrough();
  CLI::App* b_contain =
      c_brute->add_subcommand("contain", "sweep all words up to a length");
  b_contain->add_option("paA", pa_path, "left automaton file")->required();
  b_contain->add_option("paB", pb_path, "right automaton file")->required();
  b_contain->add_option("--len", brute_len, "maximum word length (default 5)");
  CLI::App* b_ipexp =
      c_brute->add_subcommand("ipexp", "sweep the integer box exactly");
  b_ipexp->add_option("file", pa_path, "instance file")->required();
  b_ipexp->add_option("--radius", brute_radius,
                      "max-norm box radius (default 10)");
  CLI::App* b_runs = c_brute->add_subcommand(
      "runs", "enumerate accepting runs of a word");
  b_runs->add_option("pa", pa_path, "automaton file")->required();
  b_runs->add_option("word", word_arg, "word")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error (usage): " << e.what() << "\n";
    return 1;
  }

  try {
    if (c_classify->parsed()) return do_classify(pa_path, verify, out);
    if (c_eval->parsed()) return do_eval(pa_path, word_arg, verify, out);
    if (c_empty->parsed()) return do_empty(pa_path, verify, out);
    if (c_gap->parsed()) {
      std::optional<long> n;
      if (override_opt->count() > 0) n = override_n;
      return do_gap_empty(pa_path, eps_text, n, verify, out);
    }
    if (c_contain->parsed()) return do_contain(pa_path, pb_path, verify, out);
    if (c_forge->parsed()) return do_forge(pa_path, out_dir, verify, out);
    if (c_ipexp->parsed() && c_solve->parsed())
      return do_ipexp_solve(pa_path, radius, verify, out);
    if (c_brute->parsed()) {
      if (b_contain->parsed())
        return do_brute_contain(pa_path, pb_path, brute_len, out);
      if (b_ipexp->parsed()) return do_brute_ipexp(pa_path, brute_radius, out);
      if (b_runs->parsed()) return do_brute_runs(pa_path, word_arg, out);
    }
  } catch (const PalabError& e) {
    err << "error (" << kind_name(e.kind) << "): " << e.what() << "\n";
    return e.kind == ErrKind::Resource ? 2 : 1;
  }
  err << "error (usage): no subcommand selected\n";
  return 1;
}

} // namespace palab
