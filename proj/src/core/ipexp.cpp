#include "core/ipexp.hpp"

#include "core/error.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>
#include <utility>

namespace palab {

namespace {

// ---------------------------------------------------------------------------
// Small exact-arithmetic helpers
// ---------------------------------------------------------------------------

Int int_abs(const Int& v) { return v < 0 ? Int(-v) : v; }

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int ceil_div(const Int& a, const Int& b) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int floor_rat(const Rat& v) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return q;
}

int sign_of(const Rat& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

// base^e for arbitrary integer exponents; base must be positive.
Rat rat_pow_int(const Rat& base, const Int& e, long max_abs_exponent) {
  if (base <= 0) contract_error("rat_pow_int: base must be positive");
  if (e == 0 || base == 1) return Rat(1);
  Int ae = int_abs(e);
  if (!ae.fits_slong_p() || ae.get_si() > max_abs_exponent)
    resource_error("exponent " + int_render(e) + " exceeds the arithmetic budget");
  unsigned long k = ae.get_ui();
  double bits = static_cast<double>(mpz_sizeinbase(base.get_num_mpz_t(), 2) +
                                    mpz_sizeinbase(base.get_den_mpz_t(), 2));
  if (bits * static_cast<double>(k) > 6.0e7)
    resource_error("power of " + rat_render(base) + " exceeds the arithmetic budget");
  Int pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), base.get_num_mpz_t(), k);
  mpz_pow_ui(pd.get_mpz_t(), base.get_den_mpz_t(), k);
  if (e > 0) return Rat(pn) / Rat(pd);
  return Rat(pd) / Rat(pn);
}

Int gcd_of(const std::vector<Int>& v) {
  Int g = 0;
  for (const Int& e : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
  return g;
}

std::string render_int_vector(const std::vector<Int>& v) {
  std::string out = "(";
  for (size_t j = 0; j < v.size(); ++j) {
    if (j) out += ", ";
    out += int_render(v[j]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// MPFR plumbing: exact rational enclosures of log p
// ---------------------------------------------------------------------------

struct MpfrVal {
  mpfr_t v;
  explicit MpfrVal(long prec) { mpfr_init2(v, static_cast<mpfr_prec_t>(prec)); }
  ~MpfrVal() { mpfr_clear(v); }
  MpfrVal(const MpfrVal&) = delete;
  MpfrVal& operator=(const MpfrVal&) = delete;
};

Rat mpfr_to_rat(const mpfr_t v) {
  if (mpfr_zero_p(v)) return Rat(0);
  if (!mpfr_number_p(v)) contract_error("interval endpoint is not finite");
  Int m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
  Rat out(m);
  if (e >= 0)
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return out;
}

// [lo, hi] with lo <= log p <= hi, both exact rationals.
std::pair<Rat, Rat> log_enclosure(const Int& p, long prec) {
  long pbits = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) + 8;
  MpfrVal t(std::max(prec, pbits));
  MpfrVal r(prec);
  mpfr_set_z(t.v, p.get_mpz_t(), MPFR_RNDN); // exact: precision covers p
  mpfr_log(r.v, t.v, MPFR_RNDD);
  Rat lo = mpfr_to_rat(r.v);
  mpfr_log(r.v, t.v, MPFR_RNDU);
  Rat hi = mpfr_to_rat(r.v);
  return {lo, hi};
}

LogVector strip_zeros(const LogVector& v) {
  LogVector out;
  for (const auto& [p, e] : v)
    if (e != 0) out.emplace(p, e);
  return out;
}

std::pair<Rat, Rat> affine_enclosure(const Rat& rho, const LogVector& logs, long prec) {
  Rat lo = rho, hi = rho;
  for (const auto& [p, e] : logs) {
    if (e == 0) continue;
    auto [llo, lhi] = log_enclosure(p, prec);
    if (e > 0) {
      lo += e * llo;
      hi += e * lhi;
    } else {
      lo += e * lhi;
      hi += e * llo;
    }
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Prime factorization of small rationals
// ---------------------------------------------------------------------------

void factor_accum(Int v, int sgn, LogVector& out) {
  if (v <= 0) contract_error("factoring a nonpositive integer");
  const Int trial_cap = Int(1) << 20;
  Int p = 2;
  while (v > 1 && p * p <= v && p <= trial_cap) {
    unsigned long k = mpz_remove(v.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
    if (k > 0) out[p] += Rat(static_cast<long>(k) * sgn);
    p = (p == 2) ? Int(3) : Int(p + 2);
  }
  if (v > 1) {
    if (mpz_probab_prime_p(v.get_mpz_t(), 40) == 0)
      resource_error("factorization budget exceeded on " + int_render(v));
    out[v] += Rat(sgn);
  }
}

// ---------------------------------------------------------------------------
// Exact rational LP feasibility: z >= 0 with A z = b  (phase-1 simplex, Bland)
// ---------------------------------------------------------------------------

std::optional<std::vector<Rat>> lp_feasible(const std::vector<std::vector<Rat>>& A,
                                            const std::vector<Rat>& b, int width) {
  const int m = static_cast<int>(A.size());
  if (static_cast<int>(b.size()) != m) contract_error("lp_feasible: shape mismatch");
  if (m == 0) return std::vector<Rat>(width, Rat(0));
  const int total = width + m;  // original vars + artificials
  const int rhs = total;
  std::vector<std::vector<Rat>> T(m, std::vector<Rat>(total + 1, Rat(0)));
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(A[i].size()) != width) contract_error("lp_feasible: row width mismatch");
    bool neg = b[i] < 0;
    for (int j = 0; j < width; ++j) T[i][j] = neg ? Rat(-A[i][j]) : A[i][j];
    T[i][width + i] = 1;
    T[i][rhs] = neg ? Rat(-b[i]) : b[i];
    basis[i] = width + i;
  }
  // Reduced-cost row for minimizing the sum of artificials.
  std::vector<Rat> z(total + 1, Rat(0));
  for (int j = 0; j <= total; ++j) {
    Rat colsum = 0;
    for (int i = 0; i < m; ++i) colsum += T[i][j];
    z[j] = (j >= width && j < total ? Rat(1) : Rat(0)) - colsum;
  }
  long iterations = 0;
  const long iteration_cap = 200000;
  while (true) {
    if (++iterations > iteration_cap) resource_error("simplex iteration budget exceeded");
    int enter = -1;
    for (int j = 0; j < total; ++j)
      if (z[j] < 0) {
        enter = j;
        break;  // Bland: smallest index
      }
    if (enter < 0) break;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rat ratio = T[i][rhs] / T[i][enter];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis[i] < basis[leave]))
        leave = i, best = ratio;
    }
    if (leave < 0) contract_error("phase-1 objective unbounded");
    // Pivot on (leave, enter).
    Rat piv = T[leave][enter];
    for (int j = 0; j <= total; ++j) T[leave][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      Rat f = T[i][enter];
      for (int j = 0; j <= total; ++j) T[i][j] -= f * T[leave][j];
    }
    if (z[enter] != 0) {
      Rat f = z[enter];
      for (int j = 0; j <= total; ++j) z[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  Rat objective = 0;
  for (int i = 0; i < m; ++i)
    if (basis[i] >= width) objective += T[i][rhs];
  if (objective != 0) return std::nullopt;
  std::vector<Rat> x(width, Rat(0));
  for (int i = 0; i < m; ++i)
    if (basis[i] < width) x[basis[i]] = T[i][rhs];
  return x;
}

// Nonnegative mu over the rows of M with M^T mu = d.
std::optional<std::vector<Rat>> side_multipliers(const IpExpInstance& inst,
                                                 const std::vector<Int>& d) {
  const int n = inst.n();
  const int m = inst.m();
  std::vector<std::vector<Rat>> A(n, std::vector<Rat>(m, Rat(0)));
  std::vector<Rat> b(n, Rat(0));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < m; ++k) A[j][k] = Rat(inst.M[k][j]);
    b[j] = Rat(d[j]);
  }
  return lp_feasible(A, b, m);
}

// Nonnegative lambda over the rows of M with lambda != 0, lambda^T M = 0 and
// lambda^T c <= 0: a certificate that M x < c has no real solution.
std::optional<std::vector<Rat>> farkas_multipliers(const IpExpInstance& inst) {
  const int n = inst.n();
  const int m = inst.m();
  if (m == 0) return std::nullopt;
  // Variables (lambda_1..lambda_m, slack); rows: M^T lambda = 0, sum = 1,
  // c^T lambda + slack = 0.
  std::vector<std::vector<Rat>> A(n + 2, std::vector<Rat>(m + 1, Rat(0)));
  std::vector<Rat> b(n + 2, Rat(0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < m; ++k) A[j][k] = Rat(inst.M[k][j]);
  for (int k = 0; k < m; ++k) A[n][k] = 1;
  b[n] = 1;
  for (int k = 0; k < m; ++k) A[n + 1][k] = Rat(inst.c[k]);
  A[n + 1][m] = 1;
  auto sol = lp_feasible(A, b, m + 1);
  if (!sol) return std::nullopt;
  sol->resize(m);
  return sol;
}

// ---------------------------------------------------------------------------
// Unsatisfiability rules
// ---------------------------------------------------------------------------

bool term_is_constant(const ExpSumFunction& f, int i) {
  for (int j = 0; j < f.n; ++j)
    if (f.s[i][j] != 1) return false;
  return true;
}

std::optional<UnsatCert> rule_const_term(const IpExpInstance& inst) {
  Rat constSum = 0;
  int single = -1;
  for (int i = 0; i < inst.ell(); ++i) {
    if (!term_is_constant(inst.f, i)) continue;
    constSum += inst.f.r[i];
    if (single < 0 && inst.f.r[i] >= 1) single = i;
  }
  if (constSum < 1) return std::nullopt;
  UnsatCert cert;
  cert.kind = UnsatCert::Kind::ConstTerm;
  cert.term_index = single;
  cert.note = "constant part of f equals " + rat_render(constSum);
  return cert;
}

std::optional<UnsatCert> rule_lp_empty(const IpExpInstance& inst) {
  auto lam = farkas_multipliers(inst);
  if (!lam) return std::nullopt;
  UnsatCert cert;
  cert.kind = UnsatCert::Kind::LpEmpty;
  cert.farkas = *lam;
  cert.note = "linear constraints are infeasible over the reals";
  return cert;
}

struct CoordBounds {
  std::vector<bool> has_lower, has_upper;
  std::vector<Int> lower, upper;
  std::vector<int> lower_row, upper_row;
};

// Integer bounds x_j >= lower_j / x_j <= upper_j implied by constraint rows
// whose only nonzero coefficient sits at coordinate j.
CoordBounds single_variable_bounds(const IpExpInstance& inst) {
  const int n = inst.n();
  CoordBounds cb;
  cb.has_lower.assign(n, false);
  cb.has_upper.assign(n, false);
  cb.lower.assign(n, Int(0));
  cb.upper.assign(n, Int(0));
  cb.lower_row.assign(n, -1);
  cb.upper_row.assign(n, -1);
  for (int k = 0; k < inst.m(); ++k) {
    int nz = -1;
    bool single = true;
    for (int j = 0; j < n; ++j) {
      if (inst.M[k][j] == 0) continue;
      if (nz >= 0) {
        single = false;
        break;
      }
      nz = j;
    }
    if (!single || nz < 0) continue;
    const Int& mk = inst.M[k][nz];
    Int strict = inst.c[k] - 1; // integer x: M x < c  <=>  M x <= c - 1
    if (mk > 0) {
      Int bound = floor_div(strict, mk);
      if (!cb.has_upper[nz] || bound < cb.upper[nz]) {
        cb.has_upper[nz] = true;
        cb.upper[nz] = bound;
        cb.upper_row[nz] = k;
      }
    } else {
      Int bound = ceil_div(strict, mk);
      if (!cb.has_lower[nz] || bound > cb.lower[nz]) {
        cb.has_lower[nz] = true;
        cb.lower[nz] = bound;
        cb.lower_row[nz] = k;
      }
    }
  }
  return cb;
}

std::optional<UnsatCert> rule_dominated(const IpExpInstance& inst, long expo_budget) {
  const int n = inst.n();
  CoordBounds cb = single_variable_bounds(inst);
  for (int i = 0; i < inst.ell(); ++i) {
    std::vector<Int> used_bounds(n, Int(0));
    std::vector<int> used_rows(n, -1);
    Rat prod = inst.f.r[i];
    bool ok = true;
    try {
      for (int j = 0; j < n && ok; ++j) {
        const Rat& s = inst.f.s[i][j];
        if (s == 1) continue;
        if (s > 1) {
          if (!cb.has_lower[j]) {
            ok = false;
            break;
          }
          prod *= rat_pow_int(s, cb.lower[j], expo_budget);
          used_bounds[j] = cb.lower[j];
          used_rows[j] = cb.lower_row[j];
        } else {
          if (!cb.has_upper[j]) {
            ok = false;
            break;
          }
          prod *= rat_pow_int(s, cb.upper[j], expo_budget);
          used_bounds[j] = cb.upper[j];
          used_rows[j] = cb.upper_row[j];
        }
      }
    } catch (const PalabError& e) {
      if (e.kind != ErrKind::Resource) throw;
      ok = false;
    }
    if (!ok || prod < 1) continue;
    UnsatCert cert;
    cert.kind = UnsatCert::Kind::Dominated;
    cert.term_index = i;
    cert.dom_bounds = used_bounds;
    cert.dom_rows = used_rows;
    cert.note = "term stays at " + rat_render(prod) + " or above on the feasible set";
    return cert;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact base cases: n = 0 and n = 1
// ---------------------------------------------------------------------------

SolveResult unsat_result(UnsatCert cert, const std::string& summary) {
  SolveResult res;
  res.status = SolveStatus::Unsat;
  res.cert = std::make_shared<UnsatCert>(std::move(cert));
  res.summary = summary;
  return res;
}

SolveResult sat_result(std::vector<Int> witness, const std::string& summary) {
  SolveResult res;
  res.status = SolveStatus::Sat;
  res.witness = std::move(witness);
  res.summary = summary;
  return res;
}

SolveResult unknown_result(const std::string& summary) {
  SolveResult res;
  res.status = SolveStatus::Unknown;
  res.summary = summary;
  return res;
}

SolveResult solve_base0(const IpExpInstance& inst) {
  for (int k = 0; k < inst.m(); ++k) {
    if (inst.c[k] < 1) {
      UnsatCert cert;
      cert.kind = UnsatCert::Kind::Base0;
      cert.note = "constraint row " + std::to_string(k) + " demands 0 < " +
                  int_render(inst.c[k]);
      return unsat_result(std::move(cert), "unsat: infeasible zero-variable constraint");
    }
  }
  Rat total = 0;
  for (const Rat& r : inst.f.r) total += r;
  if (total < 1) return sat_result({}, "sat: constant value " + rat_render(total));
  UnsatCert cert;
  cert.kind = UnsatCert::Kind::Base0;
  cert.note = "constant value " + rat_render(total) + " is not below 1";
  return unsat_result(std::move(cert), "unsat: constant value >= 1");
}

SolveResult solve_base1(const IpExpInstance& inst, const IpExpBudget& budget) {
  const long expo = budget.exponent_budget;
  bool has_lo = false, has_hi = false;
  Int lo = 0, hi = 0;
  for (int k = 0; k < inst.m(); ++k) {
    const Int& mk = inst.M[k][0];
    Int strict = inst.c[k] - 1;
    if (mk == 0) {
      if (inst.c[k] < 1) {
        UnsatCert cert;
        cert.kind = UnsatCert::Kind::Base1;
        cert.note = "constraint row " + std::to_string(k) + " demands 0 < " +
                    int_render(inst.c[k]);
        return unsat_result(std::move(cert), "unsat: infeasible constant constraint row");
      }
      continue;
    }
    if (mk > 0) {
      Int bound = floor_div(strict, mk);
      if (!has_hi || bound < hi) hi = bound;
      has_hi = true;
    } else {
      Int bound = ceil_div(strict, mk);
      if (!has_lo || bound > lo) lo = bound;
      has_lo = true;
    }
  }
  if (has_lo && has_hi && lo > hi) {
    UnsatCert cert;
    cert.kind = UnsatCert::Kind::Base1;
    cert.note = "feasible integers form the empty interval [" + int_render(lo) +
                ", " + int_render(hi) + "]";
    return unsat_result(std::move(cert), "unsat: empty feasible interval");
  }
  bool growing = false, decaying = false;
  Rat constant_part = 0;
  for (int i = 0; i < inst.ell(); ++i) {
    const Rat& s = inst.f.s[i][0];
    if (s > 1)
      growing = true;
    else if (s < 1)
      decaying = true;
    else
      constant_part += inst.f.r[i];
  }
  auto eval1 = [&](const Int& x) {
    return eval_expsum(inst.f, {x}, expo);
  };
  auto sat_at = [&](const Int& x) {
    return sat_result({x}, "sat at x = " + int_render(x) + " with value " +
                               rat_render(eval1(x)));
  };
  auto unsat_note = [&](const std::string& note) {
    UnsatCert cert;
    cert.kind = UnsatCert::Kind::Base1;
    cert.note = note;
    return unsat_result(std::move(cert), "unsat: " + note);
  };
  if (!growing && !decaying) {
    if (constant_part >= 1)
      return unsat_note("f is the constant " + rat_render(constant_part));
    Int x = has_lo ? lo : (has_hi ? hi : Int(0));
    return sat_at(x);
  }
  auto doubling_witness = [&](Int start, int direction) -> SolveResult {
    // f approaches constant_part < 1 in the given direction; walk there.
    Int x = start, step = 1;
    for (int guard = 0; guard < 240; ++guard) {
      if (eval1(x) < 1) {
        if ((has_lo && x < lo) || (has_hi && x > hi))
          contract_error("doubling witness escaped the feasible interval");
        return sat_at(x);
      }
      x += direction > 0 ? step : Int(-step);
      step *= 2;
    }
    resource_error("monotone witness search exceeded its budget");
  };
  if (!growing) {
    // f nonincreasing; infimum toward +infinity is constant_part.
    if (has_hi) {
      if (eval1(hi) < 1) return sat_at(hi);
      return unsat_note("f is nonincreasing and its minimum on the feasible "
                        "interval, at x = " + int_render(hi) + ", equals " +
                        rat_render(eval1(hi)));
    }
    if (constant_part < 1) return doubling_witness(has_lo ? lo : Int(0), +1);
    return unsat_note("f is nonincreasing with limit " + rat_render(constant_part) +
                      " >= 1 toward +infinity");
  }
  if (!decaying) {
    if (has_lo) {
      if (eval1(lo) < 1) return sat_at(lo);
      return unsat_note("f is nondecreasing and its minimum on the feasible "
                        "interval, at x = " + int_render(lo) + ", equals " +
                        rat_render(eval1(lo)));
    }
    if (constant_part < 1) return doubling_witness(has_hi ? hi : Int(0), -1);
    return unsat_note("f is nondecreasing with limit " + rat_render(constant_part) +
                      " >= 1 toward -infinity");
  }
  // Both growing and decaying terms: f is convex with +infinity limits on
  // both sides, so it has a finite integer minimizer. Delta(x) = f(x+1)-f(x)
  // is nondecreasing; locate the least x with Delta(x) >= 0.
  auto delta_nonneg = [&](const Int& x) { return eval1(x + 1) >= eval1(x); };
  Int L = 0, step = 1;
  int guard = 0;
  while (delta_nonneg(L)) {
    L -= step;
    step *= 2;
    if (++guard > 240) resource_error("minimizer bracketing exceeded its budget");
  }
  Int H = L + 1;
  step = 1;
  guard = 0;
  while (!delta_nonneg(H)) {
    H += step;
    step *= 2;
    if (++guard > 240) resource_error("minimizer bracketing exceeded its budget");
  }
  while (H - L > 1) {
    Int mid = floor_div(L + H, Int(2));
    if (delta_nonneg(mid))
      H = mid;
    else
      L = mid;
  }
  Int xstar = H; // Delta(xstar) >= 0 > Delta(xstar - 1): integer minimizer
  if (has_lo && xstar < lo) xstar = lo;
  if (has_hi && xstar > hi) xstar = hi;
  Rat v = eval1(xstar);
  if (v < 1) return sat_at(xstar);
  return unsat_note("convex minimum over the feasible interval is " + rat_render(v) +
                    " at x = " + int_render(xstar));
}

// ---------------------------------------------------------------------------
// Direct search (track T1): max-norm shells, lexicographic within a shell
// ---------------------------------------------------------------------------

bool point_ok(const IpExpInstance& inst, const std::vector<long>& x,
              long expo_budget, std::vector<Int>* out) {
  const int n = inst.n();
  for (int k = 0; k < inst.m(); ++k) {
    Int acc = 0;
    for (int j = 0; j < n; ++j) acc += inst.M[k][j] * x[j];
    if (!(acc < inst.c[k])) return false;
  }
  long abs_sum = 0;
  for (long v : x) abs_sum += std::labs(v);
  if (abs_sum > expo_budget) return false;
  Rat total = 0;
  for (int i = 0; i < inst.ell(); ++i) {
    Rat term = inst.f.r[i];
    for (int j = 0; j < n; ++j)
      if (x[j] != 0 && inst.f.s[i][j] != 1) term *= rat_pow(inst.f.s[i][j], x[j]);
    total += term;
    if (total >= 1) return false; // terms are positive: total only grows
  }
  out->assign(x.begin(), x.end());
  return true;
}

enum class ScanOutcome { Found, Clean, Capped };

ScanOutcome t1_scan(const IpExpInstance& inst, long shell_lo, long shell_hi,
                    long point_cap, long expo_budget, std::vector<Int>* out) {
  const int n = inst.n();
  if (n == 0 || shell_hi < shell_lo) return ScanOutcome::Clean;
  long points = 0;
  long steps = 0;
  const long step_cap = std::max(point_cap * 8, 1L << 22);
  for (long R = shell_lo; R <= shell_hi; ++R) {
    std::vector<long> x(n, -R);
    while (true) {
      if (++steps > step_cap) return ScanOutcome::Capped;
      long mx = 0;
      for (long v : x) mx = std::max(mx, std::labs(v));
      if (mx == R) {
        if (++points > point_cap) return ScanOutcome::Capped;
        if (point_ok(inst, x, expo_budget, out)) return ScanOutcome::Found;
      }
      int j = n - 1;
      while (j >= 0 && x[j] == R) x[j--] = -R;
      if (j < 0) break;
      ++x[j];
    }
  }
  return ScanOutcome::Clean;
}

// ---------------------------------------------------------------------------
// Recursive solver
// ---------------------------------------------------------------------------

struct SolveCtx {
  const IpExpBudget& budget;
  long nodes = 0;
};

SolveResult solve_inner(const IpExpInstance& inst, SolveCtx& ctx);

// Returns SAT mapped back to x coordinates, UNSAT with a Sliced certificate,
// or UNKNOWN when a slice was inconclusive / the split is impossible.
SolveResult proc_slices(const IpExpInstance& inst, const DirectionCert& dir,
                        SolveCtx& ctx) {
  Int width = dir.b - dir.a + 1;
  if (width <= 0) {
    // Empty direction interval: no integer point exists in X at all.
    UnsatCert cert;
    cert.kind = UnsatCert::Kind::Sliced;
    cert.dir = dir;
    return unsat_result(std::move(cert), "unsat: direction interval is empty");
  }
  if (width > ctx.budget.slice_width)
    return unknown_result("slice interval wider than the budget");
  Int g = gcd_of(dir.d);
  bool any_unknown = false;
  std::vector<std::pair<Int, std::shared_ptr<UnsatCert>>> slices;
  for (Int i = dir.a; i <= dir.b; ++i) {
    if (!mpz_divisible_p(i.get_mpz_t(), g.get_mpz_t())) continue;
    auto hp = hyperplane_solutions(dir.d, i);
    if (!hp) contract_error("slice parametrization unexpectedly missing");
    IpExpInstance sub = substitute(inst, hp->Nmat, hp->h);
    SolveResult rec = solve_inner(sub, ctx);
    if (rec.status == SolveStatus::Sat) {
      const int n = inst.n();
      std::vector<Int> x(hp->h);
      for (int row = 0; row < n; ++row)
        for (size_t col = 0; col < rec.witness.size(); ++col)
          x[row] += hp->Nmat[row][col] * rec.witness[col];
      if (!is_witness(inst, x))
        contract_error("slice witness failed exact re-verification");
      return sat_result(std::move(x), "sat via slice " + int_render(i));
    }
    if (rec.status == SolveStatus::Unknown) {
      any_unknown = true;
      continue;
    }
    slices.emplace_back(i, rec.cert);
  }
  if (any_unknown) return unknown_result("some slice was inconclusive");
  UnsatCert cert;
  cert.kind = UnsatCert::Kind::Sliced;
  cert.dir = dir;
  cert.slices = std::move(slices);
  return unsat_result(std::move(cert),
                      "unsat: all slices along " + render_int_vector(dir.d) + " refuted");
}

SolveResult solve_inner(const IpExpInstance& inst, SolveCtx& ctx) {
  if (++ctx.nodes > ctx.budget.max_nodes)
    return unknown_result("node budget exhausted");
  const int n = inst.n();
  if (n == 0) return solve_base0(inst);
  if (auto cert = rule_const_term(inst))
    return unsat_result(std::move(*cert), "unsat: constant part of f is >= 1");
  if (auto cert = rule_lp_empty(inst))
    return unsat_result(std::move(*cert), "unsat: constraints infeasible over the reals");
  if (auto cert = rule_dominated(inst, ctx.budget.exponent_budget))
    return unsat_result(std::move(*cert), "unsat: a term is bounded below by 1");
  if (n == 1) return solve_base1(inst, ctx.budget);

  std::vector<Int> witness;
  const long R = ctx.budget.t1_radius;
  const long capA = std::max(1L, ctx.budget.t1_points / 4);
  bool t1_capped = false;

  ScanOutcome scan = t1_scan(inst, 0, std::min(4L, R), capA,
                             ctx.budget.exponent_budget, &witness);
  if (scan == ScanOutcome::Found)
    return sat_result(std::move(witness),
                      "sat by direct search in the max-norm-4 box");
  t1_capped |= scan == ScanOutcome::Capped;

  bool proc_pressure = false;
  auto dir = find_bounding_direction(inst, ctx.budget);
  if (dir && dir->empty_x) {
    // The same exact checks already ran above as rules; reaching this point
    // means they disagreed, which is a bug.
    contract_error("direction search reported an empty X missed by the rules");
  }
  if (dir) {
    SolveResult rec = proc_slices(inst, *dir, ctx);
    if (rec.status != SolveStatus::Unknown) return rec;
    proc_pressure = true;
  } else {
    proc_pressure = true;
  }

  if (R > 4) {
    scan = t1_scan(inst, 5, std::min(10L, R), capA, ctx.budget.exponent_budget,
                   &witness);
    if (scan == ScanOutcome::Found)
      return sat_result(std::move(witness),
                        "sat by direct search in the max-norm-10 box");
    t1_capped |= scan == ScanOutcome::Capped;
  }
  if (R > 10) {
    scan = t1_scan(inst, 11, R, std::max(1L, ctx.budget.t1_points / 2),
                   ctx.budget.exponent_budget, &witness);
    if (scan == ScanOutcome::Found)
      return sat_result(std::move(witness), "sat by direct search in the outer box");
    t1_capped |= scan == ScanOutcome::Capped;
  }
  std::string why = "unknown: direct search up to radius " + std::to_string(R);
  if (t1_capped) why += " (point budget hit)";
  why += proc_pressure ? "; slicing inconclusive" : "";
  return unknown_result(why);
}

} // namespace

// ---------------------------------------------------------------------------
// Public API
// ---------------------------------------------------------------------------

void validate_ipexp(const IpExpInstance& inst) {
  const int n = inst.f.n;
  if (n < 0) input_error("dimension must be nonnegative");
  if (inst.f.r.size() != inst.f.s.size())
    input_error("term coefficient and base counts differ");
  for (size_t i = 0; i < inst.f.r.size(); ++i) {
    if (inst.f.r[i] <= 0)
      input_error("term coefficient " + rat_render(inst.f.r[i]) + " must be positive");
    if (static_cast<int>(inst.f.s[i].size()) != n)
      input_error("term " + std::to_string(i) + " has the wrong number of bases");
    for (const Rat& s : inst.f.s[i])
      if (s <= 0) input_error("term base " + rat_render(s) + " must be positive");
  }
  if (inst.M.size() != inst.c.size())
    input_error("constraint matrix and right-hand side sizes differ");
  for (const auto& row : inst.M)
    if (static_cast<int>(row.size()) != n)
      input_error("constraint row has the wrong number of coefficients");
}

Rat eval_expsum(const ExpSumFunction& f, const std::vector<Int>& x,
                long exponent_budget) {
  if (static_cast<int>(x.size()) != f.n)
    contract_error("evaluation point has the wrong dimension");
  Int abs_sum = 0;
  for (const Int& v : x) abs_sum += int_abs(v);
  if (!abs_sum.fits_slong_p() || abs_sum.get_si() > exponent_budget)
    resource_error("evaluation point exceeds the exponent budget");
  Rat total = 0;
  for (size_t i = 0; i < f.r.size(); ++i) {
    Rat term = f.r[i];
    for (int j = 0; j < f.n; ++j)
      if (x[j] != 0 && f.s[i][j] != 1)
        term *= rat_pow_int(f.s[i][j], x[j], exponent_budget);
    total += term;
  }
  return total;
}

bool satisfies_constraints(const IpExpInstance& inst, const std::vector<Int>& x) {
  if (static_cast<int>(x.size()) != inst.n())
    contract_error("evaluation point has the wrong dimension");
  for (int k = 0; k < inst.m(); ++k) {
    Int acc = 0;
    for (int j = 0; j < inst.n(); ++j) acc += inst.M[k][j] * x[j];
    if (!(acc < inst.c[k])) return false;
  }
  return true;
}

bool is_witness(const IpExpInstance& inst, const std::vector<Int>& x) {
  return satisfies_constraints(inst, x) && eval_expsum(inst.f, x) < 1;
}

LogVector logvec_of_rational(const Rat& q) {
  if (q <= 0) contract_error("log of a nonpositive rational");
  LogVector out;
  factor_accum(Int(q.get_num()), +1, out);
  factor_accum(Int(q.get_den()), -1, out);
  return strip_zeros(out);
}

void logvec_add_scaled(LogVector& acc, const LogVector& v, const Rat& scale) {
  if (scale == 0) return;
  for (const auto& [p, e] : v) {
    Rat& slot = acc[p];
    slot += e * scale;
    if (slot == 0) acc.erase(p);
  }
}

int logvec_sign(const LogVector& v) {
  Int L = 1;
  for (const auto& [p, e] : v) {
    if (e == 0) continue;
    mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), e.get_den_mpz_t());
  }
  Int num = 1, den = 1;
  double bits = 0;
  for (const auto& [p, e] : v) {
    if (e == 0) continue;
    Rat scaled = e * Rat(L);
    Int E = scaled.get_num(); // denominator is 1 after clearing
    Int aE = int_abs(E);
    bits += mpz_get_d(aE.get_mpz_t()) *
            static_cast<double>(mpz_sizeinbase(p.get_mpz_t(), 2));
    if (bits > 8.0e6 || !aE.fits_ulong_p())
      resource_error("sign computation exceeds the arithmetic budget");
    Int pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), aE.get_ui());
    if (E > 0)
      num *= pw;
    else
      den *= pw;
  }
  if (num > den) return 1;
  if (num < den) return -1;
  return 0;
}

LogAffine logaffine_of_rational_log(const Rat& q) {
  return LogAffine{Rat(0), logvec_of_rational(q)};
}

int logaffine_sign(const LogAffine& v, long max_prec_bits) {
  LogVector logs = strip_zeros(v.logs);
  if (logs.empty()) return sign_of(v.rho);
  const long cap = std::max(max_prec_bits, 128L);
  for (long prec = 128; prec <= cap; prec *= 2) {
    auto [lo, hi] = affine_enclosure(v.rho, logs, prec);
    if (lo > 0) return 1;
    if (hi < 0) return -1;
  }
  resource_error("sign refinement exceeded the precision cap");
}

Int logaffine_floor(const LogAffine& v, long max_prec_bits) {
  LogVector logs = strip_zeros(v.logs);
  if (logs.empty()) return floor_rat(v.rho);
  const long cap = std::max(max_prec_bits, 128L);
  for (long prec = 128; prec <= cap; prec *= 2) {
    auto [lo, hi] = affine_enclosure(v.rho, logs, prec);
    Int flo = floor_rat(lo), fhi = floor_rat(hi);
    if (flo == fhi) return flo; // the value is irrational, so this terminates
  }
  resource_error("floor refinement exceeded the precision cap");
}

Int logaffine_ceil(const LogAffine& v, long max_prec_bits) {
  LogAffine neg;
  neg.rho = -v.rho;
  for (const auto& [p, e] : v.logs) neg.logs[p] = -e;
  return -logaffine_floor(neg, max_prec_bits);
}

std::optional<DirectionCert> find_bounding_direction(const IpExpInstance& inst,
                                                     const IpExpBudget& budget) {
  validate_ipexp(inst);
  const int n = inst.n();
  const int m = inst.m();
  const int ell = inst.ell();
  if (n == 0) return std::nullopt;

  auto vacuous = [&](std::string reason,
                     std::vector<Rat> mu) -> DirectionCert {
    DirectionCert cert;
    cert.d.assign(n, Int(0));
    cert.d[0] = 1;
    cert.a = 0;
    cert.b = 0;
    cert.lam_pos.assign(ell, Rat(0));
    cert.lam_neg.assign(ell, Rat(0));
    cert.mu_pos = std::move(mu);
    cert.mu_neg.assign(m, Rat(0));
    cert.empty_x = true;
    cert.empty_reason = std::move(reason);
    return cert;
  };

  Rat constSum = 0;
  for (int i = 0; i < ell; ++i)
    if (term_is_constant(inst.f, i)) constSum += inst.f.r[i];
  if (constSum >= 1)
    return vacuous("f is at least " + rat_render(constSum) + " everywhere",
                   std::vector<Rat>(m, Rat(0)));
  if (auto lam = farkas_multipliers(inst))
    return vacuous("constraints are infeasible over the reals", std::move(*lam));

  long radius = std::max(1L, budget.dir_radius);
  // Keep the candidate count bounded regardless of dimension.
  while (radius > 1 &&
         std::pow(2.0 * radius + 1.0, static_cast<double>(n)) > 200000.0)
    --radius;

  for (long shell = 1; shell <= radius; ++shell) {
    std::vector<long> v(n, -shell);
    while (true) {
      long mx = 0;
      for (long e : v) mx = std::max(mx, std::labs(e));
      if (mx == shell) {
        long first = 0;
        for (long e : v)
          if (e != 0) {
            first = e;
            break;
          }
        if (first > 0) {
          std::vector<Int> d(v.begin(), v.end());
          if (gcd_of(d) == 1) {
            std::vector<Int> dneg(n);
            for (int j = 0; j < n; ++j) dneg[j] = -d[j];
            auto mu_pos = side_multipliers(inst, d);
            if (mu_pos) {
              auto mu_neg = side_multipliers(inst, dneg);
              if (mu_neg) {
                Rat upper = 0, lower_neg = 0;
                for (int k = 0; k < m; ++k) {
                  upper += (*mu_pos)[k] * Rat(inst.c[k]);
                  lower_neg += (*mu_neg)[k] * Rat(inst.c[k]);
                }
                DirectionCert cert;
                cert.d = std::move(d);
                cert.lam_pos.assign(ell, Rat(0));
                cert.lam_neg.assign(ell, Rat(0));
                cert.mu_pos = std::move(*mu_pos);
                cert.mu_neg = std::move(*mu_neg);
                cert.b = logaffine_floor(LogAffine{upper, {}}, budget.prec_bits);
                cert.a = logaffine_ceil(LogAffine{-lower_neg, {}}, budget.prec_bits);
                return cert;
              }
            }
          }
        }
      }
      int j = n - 1;
      while (j >= 0 && v[j] == shell) v[j--] = -shell;
      if (j < 0) break;
      ++v[j];
    }
  }
  return std::nullopt;
}

std::optional<HyperplaneParam> hyperplane_solutions(const std::vector<Int>& d,
                                                    const Int& i) {
  const int n = static_cast<int>(d.size());
  bool nonzero = false;
  for (const Int& e : d) nonzero |= e != 0;
  if (!nonzero) contract_error("hyperplane direction must be nonzero");

  std::vector<std::vector<Int>> U(n, std::vector<Int>(n, Int(0)));
  for (int j = 0; j < n; ++j) U[j][j] = 1;
  std::vector<Int> v = d;
  for (int j = 1; j < n; ++j) {
    if (v[j] == 0) continue;
    Int g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(),
               v[j].get_mpz_t());
    Int f0 = v[j] / g, fj = v[0] / g;
    for (int row = 0; row < n; ++row) {
      Int c0 = U[row][0], cj = U[row][j];
      U[row][0] = s * c0 + t * cj;
      U[row][j] = fj * cj - f0 * c0;
    }
    v[0] = g;
    v[j] = 0;
  }
  if (v[0] < 0) {
    v[0] = -v[0];
    for (int row = 0; row < n; ++row) U[row][0] = -U[row][0];
  }
  Int g = v[0];
  // d^T U = (g, 0, ..., 0) by construction; check it.
  for (int col = 0; col < n; ++col) {
    Int acc = 0;
    for (int row = 0; row < n; ++row) acc += d[row] * U[row][col];
    if (acc != (col == 0 ? g : Int(0)))
      contract_error("column sweep lost the direction identity");
  }
  if (!mpz_divisible_p(i.get_mpz_t(), g.get_mpz_t())) return std::nullopt;
  Int scale = i / g;
  HyperplaneParam hp;
  hp.d = d;
  hp.g = g;
  hp.U = U;
  hp.Nmat.assign(n, std::vector<Int>(n - 1 >= 0 ? n - 1 : 0));
  hp.h.assign(n, Int(0));
  for (int row = 0; row < n; ++row) {
    hp.h[row] = scale * U[row][0];
    for (int col = 1; col < n; ++col) hp.Nmat[row][col - 1] = U[row][col];
  }
  return hp;
}

IpExpInstance substitute(const IpExpInstance& inst,
                         const std::vector<std::vector<Int>>& Nmat,
                         const std::vector<Int>& h) {
  const int n = inst.n();
  if (static_cast<int>(h.size()) != n || static_cast<int>(Nmat.size()) != n)
    contract_error("substitution shapes do not match the instance");
  const int n2 = n > 0 ? static_cast<int>(Nmat[0].size()) : 0;
  for (const auto& row : Nmat)
    if (static_cast<int>(row.size()) != n2)
      contract_error("substitution matrix rows have inconsistent widths");
  const long expo = 200000;
  IpExpInstance out;
  out.f.n = n2;
  out.f.r.reserve(inst.ell());
  out.f.s.reserve(inst.ell());
  for (int i = 0; i < inst.ell(); ++i) {
    Rat r2 = inst.f.r[i];
    for (int j = 0; j < n; ++j)
      if (h[j] != 0) r2 *= rat_pow_int(inst.f.s[i][j], h[j], expo);
    std::vector<Rat> row(n2, Rat(1));
    for (int t = 0; t < n2; ++t) {
      Rat acc = 1;
      for (int j = 0; j < n; ++j)
        if (Nmat[j][t] != 0) acc *= rat_pow_int(inst.f.s[i][j], Nmat[j][t], expo);
      row[t] = acc;
    }
    out.f.r.push_back(std::move(r2));
    out.f.s.push_back(std::move(row));
  }
  out.M.assign(inst.m(), std::vector<Int>(n2, Int(0)));
  out.c.assign(inst.m(), Int(0));
  for (int k = 0; k < inst.m(); ++k) {
    for (int t = 0; t < n2; ++t) {
      Int acc = 0;
      for (int j = 0; j < n; ++j) acc += inst.M[k][j] * Nmat[j][t];
      out.M[k][t] = acc;
    }
    Int shift = 0;
    for (int j = 0; j < n; ++j) shift += inst.M[k][j] * h[j];
    out.c[k] = inst.c[k] - shift;
  }
  return out;
}

SolveResult ipexp_solve(const IpExpInstance& inst, const IpExpBudget& budget) {
  validate_ipexp(inst);
  SolveCtx ctx{budget};
  SolveResult res = solve_inner(inst, ctx);
  std::ostringstream extra;
  extra << res.summary << " [t1_radius=" << budget.t1_radius
        << " dir_radius=" << budget.dir_radius
        << " slice_width=" << budget.slice_width << " nodes=" << ctx.nodes << "]";
  res.summary = extra.str();
  if (res.status == SolveStatus::Sat && !verify_sat(inst, res.witness))
    contract_error("solver produced a witness that fails re-verification");
  return res;
}

bool verify_sat(const IpExpInstance& inst, const std::vector<Int>& witness) {
  if (static_cast<int>(witness.size()) != inst.n()) return false;
  return is_witness(inst, witness);
}

namespace {

bool verify_dominated(const IpExpInstance& inst, const UnsatCert& cert,
                      long expo_budget) {
  const int n = inst.n();
  int i = cert.term_index;
  if (i < 0 || i >= inst.ell()) return false;
  if (static_cast<int>(cert.dom_bounds.size()) != n ||
      static_cast<int>(cert.dom_rows.size()) != n)
    return false;
  Rat prod = inst.f.r[i];
  for (int j = 0; j < n; ++j) {
    const Rat& s = inst.f.s[i][j];
    if (s == 1) continue;
    int k = cert.dom_rows[j];
    if (k < 0 || k >= inst.m()) return false;
    for (int jj = 0; jj < n; ++jj)
      if (jj != j && inst.M[k][jj] != 0) return false;
    const Int& mk = inst.M[k][j];
    if (mk == 0) return false;
    Int strict = inst.c[k] - 1;
    if (s > 1) {
      if (mk > 0) return false;                       // need a lower bound
      Int implied = ceil_div(strict, mk);             // x_j >= implied
      if (!(cert.dom_bounds[j] <= implied)) return false;
    } else {
      if (mk < 0) return false;                       // need an upper bound
      Int implied = floor_div(strict, mk);            // x_j <= implied
      if (!(cert.dom_bounds[j] >= implied)) return false;
    }
    prod *= rat_pow_int(s, cert.dom_bounds[j], expo_budget);
  }
  return prod >= 1;
}

bool verify_sliced(const IpExpInstance& inst, const UnsatCert& cert,
                   const IpExpBudget& budget) {
  const int n = inst.n();
  const int m = inst.m();
  const int ell = inst.ell();
  const DirectionCert& dir = cert.dir;
  if (static_cast<int>(dir.d.size()) != n) return false;
  bool nonzero = false;
  for (const Int& e : dir.d) nonzero |= e != 0;
  if (!nonzero) return false;
  if (static_cast<int>(dir.mu_pos.size()) != m ||
      static_cast<int>(dir.mu_neg.size()) != m ||
      static_cast<int>(dir.lam_pos.size()) != ell ||
      static_cast<int>(dir.lam_neg.size()) != ell)
    return false;
  for (const Rat& v : dir.mu_pos)
    if (v < 0) return false;
  for (const Rat& v : dir.mu_neg)
    if (v < 0) return false;
  for (const Rat& v : dir.lam_pos)
    if (v < 0) return false;
  for (const Rat& v : dir.lam_neg)
    if (v < 0) return false;
  // Rational components: mu expresses d (resp. -d) over the rows of M.
  for (int j = 0; j < n; ++j) {
    Rat acc_pos = 0, acc_neg = 0;
    for (int k = 0; k < m; ++k) {
      acc_pos += dir.mu_pos[k] * Rat(inst.M[k][j]);
      acc_neg += dir.mu_neg[k] * Rat(inst.M[k][j]);
    }
    if (acc_pos != Rat(dir.d[j]) || acc_neg != Rat(-dir.d[j])) return false;
  }
  // Log components: lambda-weighted base exponents cancel per coordinate.
  for (int j = 0; j < n; ++j) {
    LogVector acc_pos, acc_neg;
    for (int i = 0; i < ell; ++i) {
      LogVector b = logvec_of_rational(inst.f.s[i][j]);
      logvec_add_scaled(acc_pos, b, dir.lam_pos[i]);
      logvec_add_scaled(acc_neg, b, dir.lam_neg[i]);
    }
    if (!strip_zeros(acc_pos).empty() || !strip_zeros(acc_neg).empty())
      return false;
  }
  // Certified bounds: d.x <= rho_pos + sum lam_pos_i * (-log r_i), mirrored.
  LogAffine upper, lower;
  for (int k = 0; k < m; ++k) {
    upper.rho += dir.mu_pos[k] * Rat(inst.c[k]);
    lower.rho -= dir.mu_neg[k] * Rat(inst.c[k]);
  }
  for (int i = 0; i < ell; ++i) {
    LogVector lr = logvec_of_rational(inst.f.r[i]);
    logvec_add_scaled(upper.logs, lr, -dir.lam_pos[i]);
    logvec_add_scaled(lower.logs, lr, dir.lam_neg[i]);
  }
  if (!(dir.b >= logaffine_floor(upper, budget.prec_bits))) return false;
  if (!(dir.a <= logaffine_ceil(lower, budget.prec_bits))) return false;
  // Slice coverage: one verified child per lattice-compatible i in [a, b].
  Int g = gcd_of(dir.d);
  std::map<Int, std::shared_ptr<UnsatCert>> by_slice;
  for (const auto& [i, child] : cert.slices) {
    if (i < dir.a || i > dir.b) return false;
    if (!mpz_divisible_p(i.get_mpz_t(), g.get_mpz_t())) return false;
    if (!child) return false;
    if (!by_slice.emplace(i, child).second) return false;
  }
  for (Int i = dir.a; i <= dir.b; ++i) {
    if (!mpz_divisible_p(i.get_mpz_t(), g.get_mpz_t())) continue;
    auto it = by_slice.find(i);
    if (it == by_slice.end()) return false;
    auto hp = hyperplane_solutions(dir.d, i);
    if (!hp) return false;
    IpExpInstance sub = substitute(inst, hp->Nmat, hp->h);
    if (!verify_unsat(sub, *it->second, budget)) return false;
  }
  return true;
}

} // namespace

bool verify_unsat(const IpExpInstance& inst, const UnsatCert& cert,
                  const IpExpBudget& budget) {
  switch (cert.kind) {
    case UnsatCert::Kind::ConstTerm: {
      if (cert.term_index >= 0) {
        if (cert.term_index >= inst.ell()) return false;
        return term_is_constant(inst.f, cert.term_index) &&
               inst.f.r[cert.term_index] >= 1;
      }
      Rat constSum = 0;
      for (int i = 0; i < inst.ell(); ++i)
        if (term_is_constant(inst.f, i)) constSum += inst.f.r[i];
      return constSum >= 1;
    }
    case UnsatCert::Kind::Dominated:
      return verify_dominated(inst, cert, budget.exponent_budget);
    case UnsatCert::Kind::LpEmpty: {
      if (static_cast<int>(cert.farkas.size()) != inst.m()) return false;
      Rat total = 0;
      for (const Rat& v : cert.farkas) {
        if (v < 0) return false;
        total += v;
      }
      if (total == 0) return false;
      for (int j = 0; j < inst.n(); ++j) {
        Rat acc = 0;
        for (int k = 0; k < inst.m(); ++k) acc += cert.farkas[k] * Rat(inst.M[k][j]);
        if (acc != 0) return false;
      }
      Rat rhs = 0;
      for (int k = 0; k < inst.m(); ++k) rhs += cert.farkas[k] * Rat(inst.c[k]);
      return rhs <= 0;
    }
    case UnsatCert::Kind::Base0:
      if (inst.n() != 0) return false;
      return solve_base0(inst).status == SolveStatus::Unsat;
    case UnsatCert::Kind::Base1:
      if (inst.n() != 1) return false;
      return solve_base1(inst, budget).status == SolveStatus::Unsat;
    case UnsatCert::Kind::Sliced:
      return verify_sliced(inst, cert, budget);
  }
  return false;
}

std::string render_unsat_cert(const UnsatCert& cert, int indent) {
  const std::string pad(indent, ' ');
  std::ostringstream out;
  switch (cert.kind) {
    case UnsatCert::Kind::ConstTerm:
      out << pad << "unsat: the constant part of f is at least 1";
      if (cert.term_index >= 0) out << " (term " << cert.term_index << " alone)";
      out << "\n";
      break;
    case UnsatCert::Kind::Dominated:
      out << pad << "unsat: term " << cert.term_index
          << " is bounded below by 1 using per-coordinate integer bounds "
          << render_int_vector(cert.dom_bounds) << "\n";
      break;
    case UnsatCert::Kind::LpEmpty: {
      out << pad << "unsat: constraints infeasible over the reals; multipliers (";
      for (size_t k = 0; k < cert.farkas.size(); ++k) {
        if (k) out << ", ";
        out << rat_render(cert.farkas[k]);
      }
      out << ")\n";
      break;
    }
    case UnsatCert::Kind::Base0:
      out << pad << "unsat (no variables): " << cert.note << "\n";
      break;
    case UnsatCert::Kind::Base1:
      out << pad << "unsat (one variable): " << cert.note << "\n";
      break;
    case UnsatCert::Kind::Sliced: {
      out << pad << "unsat: every solution has " << int_render(cert.dir.a)
          << " <= d.x <= " << int_render(cert.dir.b)
          << " for d = " << render_int_vector(cert.dir.d)
          << "; all lattice slices refuted:\n";
      for (const auto& [i, child] : cert.slices) {
        out << pad << "  slice d.x = " << int_render(i) << ":\n";
        if (child) out << render_unsat_cert(*child, indent + 4);
      }
      break;
    }
  }
  return out.str();
}

} // namespace palab
