#include "core/deciders.hpp"

#include "core/error.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace palab {

namespace {

std::string render_x(const std::vector<long>& x) {
  std::string out = "(";
  for (size_t j = 0; j < x.size(); ++j) {
    if (j) out += ", ";
    out += std::to_string(x[j]);
  }
  return out + ")";
}

std::string render_cell(const DeltaTuple& t) {
  return "cell (" + std::to_string(t.kprime) + ", " + std::to_string(t.lprime) +
         "), spine length " + std::to_string(t.spine.steps.size()) + ", " +
         std::to_string(t.cycles.size()) + " cycles";
}

long finite_bound_of(const AmbiguityClass& cls, const char* side) {
  if (cls.tag == AmbTag::Unambiguous) return 1;
  if (cls.tag == AmbTag::Finite) return std::max(1L, *cls.finiteDegree);
  input_error(std::string(side) + " must be finitely ambiguous, got " +
              amb_render(cls));
}

// Exact witness words re-check: every NO leaves this function verified.
void check_witness(const Pa& A, const Pa& B, const Word& w) {
  if (!(evaluate(A, w) > evaluate(B, w)))
    contract_error("verdict witness failed exact re-evaluation");
}

struct TupleOutcome {
  bool satisfiable = false;
  bool unknown = false;
  std::vector<long> x;
  std::string note;
};

// Decides sup_x S_A(x) > S_B(x) for B-side with at most one term: with all
// base ratios at most 1 the supremum sits at x = 0, and any ratio above 1
// makes one coordinate's growth unbounded.
TupleOutcome decide_tuple_against_single_term(const DeltaTuple& t,
                                              long doubling_cap) {
  TupleOutcome out;
  const size_t n = t.cycles.size();
  std::vector<long> x(n, 0);
  if (eval_value_spec(t.p, t.q, x) > eval_value_spec(t.r, t.s, x)) {
    out.satisfiable = true;
    out.x = x;
    out.note = "value gap already at zero cycle counts";
    return out;
  }
  if (t.lprime == 0) return out; // S_A(0) <= 0 impossible: p entries positive
  for (size_t i = 0; i < t.p.size(); ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (!(t.q[i][j] > t.s[0][j])) continue;
      long m = 1;
      for (long iter = 0; iter < doubling_cap; ++iter) {
        x.assign(n, 0);
        x[j] = m;
        if (eval_value_spec(t.p, t.q, x) > eval_value_spec(t.r, t.s, x)) {
          out.satisfiable = true;
          out.x = x;
          out.note = "cycle " + std::to_string(j) + " outgrows the right side";
          return out;
        }
        if (m > (1L << 20))
          resource_error("cycle-count doubling exceeded its budget");
        m *= 2;
      }
      resource_error("cycle-count doubling exceeded its budget");
    }
  }
  return out; // all ratios <= 1 and no gap at zero: unsatisfiable
}

} // namespace

std::string answer_render(Answer a) {
  switch (a) {
    case Answer::Yes: return "YES";
    case Answer::No: return "NO";
    case Answer::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

Int poly_run_bound(long states, long m) {
  if (states < 0 || m < 0) contract_error("poly_run_bound: negative argument");
  if (states > 10000) resource_error("state count too large for the run bound");
  Int base = Int(m + 1) * states * states;
  unsigned long cube = static_cast<unsigned long>(states) *
                       static_cast<unsigned long>(states) *
                       static_cast<unsigned long>(states);
  return int_pow(Int(2), static_cast<unsigned long>(states)) *
         int_pow(base, cube);
}

Verdict containment_fin_vs_unamb(const Pa& A, const Pa& B,
                                 const DecideBudget& budget) {
  if (A.alphabet != B.alphabet)
    input_error("containment requires a shared alphabet");
  AmbiguityClass clsA = classify(A);
  long k_max = finite_bound_of(clsA, "the left automaton");
  AmbiguityClass clsB = classify(B);
  if (clsB.tag != AmbTag::Unambiguous)
    input_error("the right automaton must be unambiguous, got " +
                amb_render(clsB));
  if (k_max > 1000) resource_error("ambiguity degree too large to enumerate");

  TranslateResult tr = translate(A, B, static_cast<int>(k_max), 1,
                                 budget.translate, /*allow_partial=*/true);
  std::ostringstream cert;
  cert << "left ambiguity: " << amb_render(clsA)
       << "; right ambiguity: " << amb_render(clsB) << "\n";
  cert << tr.tuples.size() << " tuples over cells up to (" << k_max << ", 1)\n";

  for (const DeltaTuple& t : tr.tuples) {
    if (t.kprime == 0) continue; // the left side vanishes on these words
    TupleOutcome res = decide_tuple_against_single_term(t, budget.doubling_cap);
    if (!res.satisfiable) continue;
    Word w = inject_word(A.alphabet, t.spine, t.cycles, res.x);
    check_witness(A, B, w);
    Verdict v;
    v.answer = Answer::No;
    v.witness = w;
    cert << "violated at " << render_cell(t) << " with cycle counts "
         << render_x(res.x) << " (" << res.note << ")\n";
    cert << "witness value " << rat_render(evaluate(A, w)) << " > "
         << rat_render(evaluate(B, w)) << " at a word of length " << w.size()
         << "\n";
    v.certificate = cert.str();
    return v;
  }

  Verdict v;
  if (!tr.complete) {
    v.answer = Answer::Unknown;
    cert << "tuple enumeration incomplete: " << tr.note << "\n";
  } else {
    v.answer = Answer::Yes;
    cert << "every tuple is unsatisfiable and the enumeration is complete\n";
  }
  v.certificate = cert.str();
  return v;
}

Verdict emptiness_finite(const Pa& A, const DecideBudget& budget) {
  PaBuilder b(A.alphabet);
  b.add_state("u");
  b.set_initial("u", Rat(1, 2));
  b.set_final("u");
  for (const std::string& letter : A.alphabet) b.add_trans("u", letter, "u", Rat(1));
  Pa half = b.build();
  Verdict v = containment_fin_vs_unamb(A, half, budget);
  v.certificate = "emptiness at threshold 1/2, by containment in the "
                  "constant-1/2 one-state automaton\n" + v.certificate;
  return v;
}

Verdict containment_unamb_vs_fin(const Pa& A, const Pa& B,
                                 const DecideBudget& budget) {
  if (A.alphabet != B.alphabet)
    input_error("containment requires a shared alphabet");
  AmbiguityClass clsA = classify(A);
  if (clsA.tag != AmbTag::Unambiguous)
    input_error("the left automaton must be unambiguous, got " +
                amb_render(clsA));
  AmbiguityClass clsB = classify(B);
  long l_max = finite_bound_of(clsB, "the right automaton");
  if (l_max > 1000) resource_error("ambiguity degree too large to enumerate");

  TranslateResult tr = translate(A, B, 1, static_cast<int>(l_max),
                                 budget.translate, /*allow_partial=*/true);
  std::ostringstream cert;
  cert << "left ambiguity: " << amb_render(clsA)
       << "; right ambiguity: " << amb_render(clsB) << "\n";
  cert << tr.tuples.size() << " tuples over cells up to (1, " << l_max << ")\n";

  bool any_unknown = !tr.complete;
  if (!tr.complete) cert << "tuple enumeration incomplete: " << tr.note << "\n";
  long refuted = 0;

  for (const DeltaTuple& t : tr.tuples) {
    if (t.kprime == 0) continue;
    const size_t n = t.cycles.size();
    if (t.lprime == 0) {
      // The right side vanishes on this cell's words; the spine word wins.
      std::vector<long> x(n, 0);
      Word w = inject_word(A.alphabet, t.spine, t.cycles, x);
      check_witness(A, B, w);
      Verdict v;
      v.answer = Answer::No;
      v.witness = w;
      cert << "violated at " << render_cell(t)
           << ": the right side accepts nothing on this cell\n";
      cert << "witness value " << rat_render(evaluate(A, w)) << " > "
           << rat_render(evaluate(B, w)) << " at a word of length " << w.size()
           << "\n";
      v.certificate = cert.str();
      return v;
    }

    // S_A(x) <= S_B(x) fails iff sum_i (r_i/p_0) prod_j (s_ij/q_0j)^{x_j} < 1
    // for some x in N^n, which is an exponential-sum feasibility question.
    IpExpInstance inst;
    inst.f.n = static_cast<int>(n);
    for (size_t i = 0; i < t.r.size(); ++i) {
      inst.f.r.push_back(t.r[i] / t.p[0]);
      std::vector<Rat> row(n);
      for (size_t j = 0; j < n; ++j) row[j] = t.s[i][j] / t.q[0][j];
      inst.f.s.push_back(std::move(row));
    }
    inst.M.assign(n, std::vector<Int>(n, Int(0)));
    inst.c.assign(n, Int(1));
    for (size_t j = 0; j < n; ++j) inst.M[j][j] = -1; // encodes x_j >= 0

    SolveResult res = ipexp_solve(inst, budget.ipexp);
    if (res.status == SolveStatus::Sat) {
      cert << "violated at " << render_cell(t) << ": " << res.summary << "\n";
      Verdict v;
      v.answer = Answer::No;
      bool renderable = true;
      std::vector<long> x(n, 0);
      for (size_t j = 0; j < n; ++j) {
        if (!res.witness[j].fits_slong_p() ||
            res.witness[j].get_si() > (1L << 20)) {
          renderable = false;
          break;
        }
        x[j] = res.witness[j].get_si();
      }
      if (renderable) {
        Word w = inject_word(A.alphabet, t.spine, t.cycles, x);
        check_witness(A, B, w);
        v.witness = w;
        cert << "witness cycle counts " << render_x(x) << " give value "
             << rat_render(evaluate(A, *v.witness)) << " > "
             << rat_render(evaluate(B, *v.witness)) << " at a word of length "
             << v.witness->size() << "\n";
      } else {
        cert << "witness cycle counts exceed the word rendering budget\n";
      }
      v.certificate = cert.str();
      return v;
    }
    if (res.status == SolveStatus::Unknown) {
      any_unknown = true;
      cert << "inconclusive at " << render_cell(t) << ": " << res.summary << "\n";
      continue;
    }
    ++refuted;
  }

  Verdict v;
  if (any_unknown) {
    v.answer = Answer::Unknown;
  } else {
    v.answer = Answer::Yes;
    cert << "all " << refuted
         << " live tuples refuted with certificates; enumeration complete\n";
  }
  v.certificate = cert.str();
  return v;
}

GapParams compute_N(const Pa& A, const Rat& epsilon) {
  if (!(epsilon > 0 && epsilon < 1))
    input_error("epsilon must lie strictly between 0 and 1");
  Pa At = trim(A);
  AmbiguityClass cls = classify(At);
  if (cls.tag == AmbTag::Exponential)
    input_error("the automaton must not be exponentially ambiguous");

  GapParams gp;
  gp.epsilon = epsilon;
  Rat alpha = 0;
  bool any_choice = false;
  if (initial_is_choice(At)) {
    any_choice = true;
    for (const auto& [q, p] : At.initial) alpha = std::max(alpha, p);
  }
  const long letters = static_cast<long>(At.alphabet.size());
  for (size_t q = 0; q < At.states.size(); ++q) {
    for (long a = 0; a < letters; ++a) {
      const auto& row = At.row(static_cast<int>(q), static_cast<int>(a));
      if (row.size() < 2) continue;
      any_choice = true;
      for (const PaTrans& e : row) alpha = std::max(alpha, e.prob);
    }
  }
  gp.alpha = alpha;
  gp.beta = (1 + alpha) / 2;
  if (!any_choice) {
    gp.m0 = 0;
    gp.N = 0; // every run makes zero choices; nothing is cut off
    return gp;
  }
  // A branching row has two or more positive entries summing to at most 1,
  // so alpha < 1 and beta < 1 strictly.
  const long Q = static_cast<long>(At.states.size());
  const long D = Q * Q * Q;
  const long search_cap = 1L << 20;

  // m0: from here on, consecutive per-choice-count mass bounds shrink by
  // beta, since term(m+1)/term(m) = alpha * ((m+2)/(m+1))^D.
  auto ratio_ok = [&](long m) {
    return rat_pow(Rat(m + 2) / Rat(m + 1), D) * alpha <= gp.beta;
  };
  long hi = 1;
  while (!ratio_ok(hi)) {
    hi *= 2;
    if (hi > search_cap) resource_error("cutoff search exceeded its budget");
  }
  long lo = 0;
  while (lo < hi) {
    long mid = lo + (hi - lo) / 2;
    if (ratio_ok(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  gp.m0 = lo;

  // term(m) bounds the mass of accepting runs making exactly m choices.
  // The explicit return type forces evaluation while the operands are
  // alive; deducing it would hand back a lazy expression over temporaries.
  auto term_of = [&](long m) -> Rat {
    return rat_pow(alpha, m) * Rat(poly_run_bound(Q, m));
  };
  Rat budget_mass = epsilon * (1 - gp.beta);
  auto tail_ok = [&](long N) { return term_of(N + 1) <= budget_mass; };
  long hi2 = gp.m0;
  while (!tail_ok(hi2)) {
    hi2 = hi2 * 2 + 1;
    if (hi2 > search_cap) resource_error("cutoff search exceeded its budget");
  }
  long lo2 = gp.m0;
  while (lo2 < hi2) {
    long mid = lo2 + (hi2 - lo2) / 2;
    if (tail_ok(mid))
      hi2 = mid;
    else
      lo2 = mid + 1;
  }
  gp.N = lo2;
  return gp;
}

Pa build_A_prime(const Pa& A, long N) {
  if (N < 0) input_error("the cutoff must be nonnegative");
  auto layer_name = [&](long k, const std::string& orig) {
    return "l" + std::to_string(k) + "_" + orig;
  };
  PaBuilder b(A.alphabet);
  for (long k = 0; k <= N; ++k)
    for (const std::string& q : A.states) b.add_state(layer_name(k, q));
  for (long k = 0; k <= N; ++k)
    for (size_t q = 0; q < A.states.size(); ++q)
      if (A.is_final(static_cast<int>(q)))
        b.set_final(layer_name(k, A.states[q]));
  // Starting at a multi-option initial distribution is itself a choice.
  long k0 = initial_is_choice(A) ? 1 : 0;
  if (k0 <= N)
    for (const auto& [q, p] : A.initial)
      b.set_initial(layer_name(k0, A.states[q]), p);
  for (size_t q = 0; q < A.states.size(); ++q) {
    for (size_t a = 0; a < A.alphabet.size(); ++a) {
      const auto& row = A.row(static_cast<int>(q), static_cast<int>(a));
      if (row.empty()) continue;
      if (row.size() == 1) {
        for (long k = 0; k <= N; ++k)
          b.add_trans(layer_name(k, A.states[q]), A.alphabet[a],
                      layer_name(k, A.states[row[0].dst]), row[0].prob);
      } else {
        for (long k = 0; k < N; ++k)
          for (const PaTrans& e : row)
            b.add_trans(layer_name(k, A.states[q]), A.alphabet[a],
                        layer_name(k + 1, A.states[e.dst]), e.prob);
      }
    }
  }
  return b.build();
}

Verdict gap_emptiness(const Pa& A, const Rat& epsilon,
                      std::optional<long> override_N,
                      const DecideBudget& budget) {
  if (!(epsilon > 0 && epsilon < 1))
    input_error("epsilon must lie strictly between 0 and 1");
  if (override_N && *override_N < 0)
    input_error("the cutoff override must be nonnegative");
  Pa At = trim(A);
  GapParams gp = compute_N(At, epsilon);
  long N_used = override_N ? *override_N : gp.N;

  std::ostringstream cert;
  cert << "cutoff parameters: alpha = " << rat_render(gp.alpha)
       << ", beta = " << rat_render(gp.beta) << ", m0 = " << gp.m0
       << ", N = " << gp.N << ", epsilon = " << rat_render(gp.epsilon) << "\n";
  if (override_N)
    cert << "cutoff overridden to N = " << N_used
         << "; the epsilon guarantee is waived\n";

  if (N_used > 12 ||
      static_cast<long>(At.states.size()) * (N_used + 1) > 4000) {
    Verdict v;
    v.answer = Answer::Unknown;
    cert << "cutoff exceeds the tractable layer budget\n";
    v.certificate = cert.str();
    return v;
  }

  Pa Ap = build_A_prime(At, N_used);
  Verdict inner = emptiness_finite(Ap, budget);
  Verdict v;
  v.answer = inner.answer;
  if (inner.answer == Answer::No) {
    const Word& w = *inner.witness;
    if (!(evaluate(A, w) > Rat(1, 2)))
      contract_error("cutoff witness failed exact re-evaluation");
    v.witness = w;
    cert << "witness value " << rat_render(evaluate(A, w))
         << " > 1/2 on the original automaton\n";
  } else if (inner.answer == Answer::Yes) {
    cert << "the restricted automaton stays at or below 1/2 everywhere, and "
            "runs beyond the cutoff carry mass at most epsilon\n";
  }
  cert << "restriction to " << Ap.states.size() << " states over " << N_used + 1
       << " layers\n";
  cert << inner.certificate;
  v.certificate = cert.str();
  return v;
}

} // namespace palab
