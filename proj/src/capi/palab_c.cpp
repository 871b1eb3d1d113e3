#include "palab.h"

#include "core/ambiguity.hpp"
#include "core/deciders.hpp"
#include "core/error.hpp"
#include "core/forge.hpp"
#include "core/ipexp.hpp"
#include "core/pa.hpp"
#include "core/runner.hpp"
#include "core/textio.hpp"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <string>
#include <vector>

struct palab_pa {
  palab::Pa impl;
};

namespace {

thread_local std::string g_last_error;

char* dup_c(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

palab_status status_of(palab::ErrKind kind) {
  switch (kind) {
    case palab::ErrKind::Input: return PALAB_ERR_INPUT;
    case palab::ErrKind::Contract: return PALAB_ERR_CONTRACT;
    case palab::ErrKind::Resource: return PALAB_ERR_RESOURCE;
  }
  return PALAB_ERR_CONTRACT;
}

template <typename Fn>
palab_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return PALAB_OK;
  } catch (const palab::PalabError& e) {
    g_last_error = e.what();
    return status_of(e.kind);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return PALAB_ERR_NOMEM;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PALAB_ERR_CONTRACT;
  }
}

palab_status require(bool ok, const char* what) {
  if (ok) return PALAB_OK;
  g_last_error = what;
  return PALAB_ERR_INPUT;
}

void fill_verdict(const palab::Verdict& v, palab_verdict* out) {
  out->answer = v.answer == palab::Answer::Yes
                    ? 1
                    : (v.answer == palab::Answer::No ? 0 : -1);
  out->witness = v.witness ? dup_c(palab::render_word(*v.witness)) : nullptr;
  out->certificate = dup_c(v.certificate);
}

} // namespace

extern "C" {

const char* palab_last_error(void) { return g_last_error.c_str(); }

const char* palab_version(void) { return "pa-lab v1"; }

void palab_string_free(char* s) { std::free(s); }

palab_status palab_pa_parse(const char* text, palab_pa** out) {
  if (palab_status st = require(text && out, "null argument")) return st;
  *out = nullptr;
  return guarded([&] {
    auto handle = new palab_pa{palab::parse_pa(text)};
    *out = handle;
  });
}

void palab_pa_free(palab_pa* pa) { delete pa; }

palab_status palab_pa_render(const palab_pa* pa, char** text_out) {
  if (palab_status st = require(pa && text_out, "null argument")) return st;
  *text_out = nullptr;
  return guarded([&] { *text_out = dup_c(palab::render_pa(pa->impl)); });
}

size_t palab_pa_state_count(const palab_pa* pa) {
  return pa ? pa->impl.states.size() : 0;
}

size_t palab_pa_letter_count(const palab_pa* pa) {
  return pa ? pa->impl.alphabet.size() : 0;
}

palab_status palab_pa_eval(const palab_pa* pa, const char* word,
                           char** value_out) {
  if (palab_status st = require(pa && word && value_out, "null argument"))
    return st;
  *value_out = nullptr;
  return guarded([&] {
    palab::Word w = palab::parse_word_arg(pa->impl.alphabet, word);
    *value_out = dup_c(palab::rat_render(palab::evaluate(pa->impl, w)));
  });
}

palab_status palab_pa_classify(const palab_pa* pa, char** class_out) {
  if (palab_status st = require(pa && class_out, "null argument")) return st;
  *class_out = nullptr;
  return guarded(
      [&] { *class_out = dup_c(palab::amb_render(palab::classify(pa->impl))); });
}

void palab_verdict_clear(palab_verdict* v) {
  if (!v) return;
  std::free(v->witness);
  std::free(v->certificate);
  v->witness = nullptr;
  v->certificate = nullptr;
  v->answer = -1;
}

palab_status palab_empty(const palab_pa* a, palab_verdict* out) {
  if (palab_status st = require(a && out, "null argument")) return st;
  return guarded([&] { fill_verdict(palab::emptiness_finite(a->impl), out); });
}

palab_status palab_contain(const palab_pa* a, const palab_pa* b,
                           palab_verdict* out) {
  if (palab_status st = require(a && b && out, "null argument")) return st;
  return guarded([&] {
    palab::AmbiguityClass ca = palab::classify(a->impl);
    palab::AmbiguityClass cb = palab::classify(b->impl);
    bool a_fin = ca.tag == palab::AmbTag::Unambiguous ||
                 ca.tag == palab::AmbTag::Finite;
    bool b_fin = cb.tag == palab::AmbTag::Unambiguous ||
                 cb.tag == palab::AmbTag::Finite;
    palab::Verdict v;
    if (a_fin && cb.tag == palab::AmbTag::Unambiguous)
      v = palab::containment_fin_vs_unamb(a->impl, b->impl);
    else if (ca.tag == palab::AmbTag::Unambiguous && b_fin)
      v = palab::containment_unamb_vs_fin(a->impl, b->impl);
    else
      palab::input_error(
          "unsupported configuration: containment is decided for finitely "
          "ambiguous vs unambiguous and unambiguous vs finitely ambiguous");
    fill_verdict(v, out);
  });
}

palab_status palab_gap_empty(const palab_pa* a, const char* epsilon,
                             long override_n, palab_verdict* out) {
  if (palab_status st = require(a && epsilon && out, "null argument"))
    return st;
  return guarded([&] {
    std::optional<palab::Rat> eps = palab::rat_parse(epsilon);
    if (!eps)
      palab::input_error(std::string("epsilon is not a rational: ") + epsilon);
    std::optional<long> n;
    if (override_n >= 0) n = override_n;
    fill_verdict(palab::gap_emptiness(a->impl, *eps, n), out);
  });
}

palab_status palab_ipexp_solve(const char* text, long radius,
                               palab_verdict* out) {
  if (palab_status st = require(text && out, "null argument")) return st;
  return guarded([&] {
    palab::IpExpInstance inst = palab::parse_ipexp(text);
    palab::IpExpBudget budget;
    if (radius >= 0) budget.t1_radius = radius;
    palab::SolveResult res = palab::ipexp_solve(inst, budget);
    out->answer = res.status == palab::SolveStatus::Sat
                      ? 1
                      : (res.status == palab::SolveStatus::Unsat ? 0 : -1);
    out->witness = nullptr;
    if (res.status == palab::SolveStatus::Sat) {
      std::string w = "(";
      for (std::size_t i = 0; i < res.witness.size(); ++i) {
        if (i) w += ", ";
        w += res.witness[i].get_str();
      }
      w += ")";
      out->witness = dup_c(w);
    }
    out->certificate =
        dup_c(res.status == palab::SolveStatus::Unsat
                  ? palab::render_unsat_cert(*res.cert)
                  : res.summary);
  });
}

palab_status palab_forge(const char* machine_text, palab_pa** a_out,
                         palab_pa** b_out, palab_pa** aprime_out,
                         palab_pa** bprime_out) {
  if (palab_status st = require(machine_text != nullptr, "null argument"))
    return st;
  if (a_out) *a_out = nullptr;
  if (b_out) *b_out = nullptr;
  if (aprime_out) *aprime_out = nullptr;
  if (bprime_out) *bprime_out = nullptr;
  return guarded([&] {
    palab::TwoCounterMachine m = palab::parse_cm(machine_text);
    palab::ReductionOutput r = palab::compile(m);
    if (a_out) *a_out = new palab_pa{std::move(r.A)};
    if (b_out) *b_out = new palab_pa{std::move(r.B)};
    if (aprime_out) *aprime_out = new palab_pa{std::move(r.Aprime)};
    if (bprime_out) *bprime_out = new palab_pa{std::move(r.Bprime)};
  });
}

int palab_run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return palab::run_command(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

} // extern "C"
