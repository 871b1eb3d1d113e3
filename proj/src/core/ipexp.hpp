#pragma once

#include "core/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace palab {

// f(x) = sum_i r_i * prod_j s_{i,j}^{x_j} with positive rational r, s.
struct ExpSumFunction {
  int n = 0;
  std::vector<Rat> r;
  std::vector<std::vector<Rat>> s; // ell rows of length n

  bool operator==(const ExpSumFunction&) const = default;
};

// Satisfiability target: integer x with  f(x) < 1  and  M x < c  (componentwise).
struct IpExpInstance {
  ExpSumFunction f;
  std::vector<std::vector<Int>> M; // m rows of length n
  std::vector<Int> c;              // length m

  int n() const { return f.n; }
  int ell() const { return static_cast<int>(f.r.size()); }
  int m() const { return static_cast<int>(M.size()); }
  bool operator==(const IpExpInstance&) const = default;
};

void validate_ipexp(const IpExpInstance& inst);

Rat eval_expsum(const ExpSumFunction& f, const std::vector<Int>& x,
                long exponent_budget = 200000);
bool satisfies_constraints(const IpExpInstance& inst, const std::vector<Int>& x);
bool is_witness(const IpExpInstance& inst, const std::vector<Int>& x);

// ---- Exact arithmetic over rational combinations of logarithms of primes ----

// Sparse prime -> rational exponent map representing sum_p e_p * log p.
using LogVector = std::map<Int, Rat>;

LogVector logvec_of_rational(const Rat& q); // q > 0
void logvec_add_scaled(LogVector& acc, const LogVector& v, const Rat& scale);
int logvec_sign(const LogVector& v); // exact

// rho + sum_p e_p log p. Sign/floor/ceil are exact: rational when the log
// part vanishes, otherwise by interval refinement (the value is irrational,
// so refinement terminates); precision beyond the cap raises a resource error.
struct LogAffine {
  Rat rho;
  LogVector logs;
};

LogAffine logaffine_of_rational_log(const Rat& q); // log q as a LogAffine
int logaffine_sign(const LogAffine& v, long max_prec_bits = 4096);
Int logaffine_floor(const LogAffine& v, long max_prec_bits = 4096);
Int logaffine_ceil(const LogAffine& v, long max_prec_bits = 4096);

// ---- Bounding directions and hyperplane enumeration ----

struct IpExpBudget {
  long t1_radius = 25;        // direct-search max-norm radius
  long t1_points = 500000;    // direct-search point cap
  long dir_radius = 3;        // candidate bounding-direction radius
  long slice_width = 1024;    // max integer slices per split
  long max_nodes = 20000;     // recursion nodes
  long prec_bits = 4096;      // interval-refinement precision cap
  long exponent_budget = 200000;
};

// Certificate that every real x with f(x) < 1 and Mx < c has d.x in [a,b]:
// nonnegative multipliers expressing d (resp. -d) over the rows of M and the
// term exponent rows of f, split over the basis {1} u {log p}.
struct DirectionCert {
  std::vector<Int> d;
  Int a, b;
  std::vector<Rat> lam_pos, mu_pos; // d side: term rows, M rows
  std::vector<Rat> lam_neg, mu_neg; // -d side
  bool empty_x = false;             // X certified empty (a,b carry no content)
  std::string empty_reason;
};

std::optional<DirectionCert> find_bounding_direction(const IpExpInstance& inst,
                                                     const IpExpBudget& budget = {});

// Integer solutions of d.x = i: none when gcd(d) does not divide i, else
// x = h + N y with N the last n-1 columns of a unimodular U, d^T U = (g,0,..).
struct HyperplaneParam {
  std::vector<Int> d;
  Int g;
  std::vector<std::vector<Int>> U;    // n x n, |det| = 1
  std::vector<std::vector<Int>> Nmat; // n x (n-1)
  std::vector<Int> h;                 // one solution for the queried i
};

std::optional<HyperplaneParam> hyperplane_solutions(const std::vector<Int>& d,
                                                    const Int& i);

// Instance in the y coordinates of x = h + N y.
IpExpInstance substitute(const IpExpInstance& inst,
                         const std::vector<std::vector<Int>>& Nmat,
                         const std::vector<Int>& h);

// ---- Solver ----

enum class SolveStatus { Sat, Unsat, Unknown };

// UNSAT certificate tree, re-checkable by verify_unsat.
struct UnsatCert {
  enum class Kind {
    ConstTerm,   // constant part of f >= 1 everywhere; term_index names a
                 // single sufficient constant term, -1 means the sum of all
                 // constant terms is >= 1
    Dominated,   // term i: r_i * prod bound-adjusted s powers >= 1 on Mx < c
    LpEmpty,     // Farkas multipliers: Mx < c infeasible over the reals
    Base0,       // n = 0: direct evaluation
    Base1,       // n = 1: convex minimization over the feasible interval
    Sliced       // direction d, all slices d.x = i in [a,b] unsat
  };
  Kind kind = Kind::Base0;
  int term_index = -1;                   // ConstTerm / Dominated
  std::vector<Int> dom_bounds;           // Dominated: per-coordinate bound used
  std::vector<int> dom_rows;             // Dominated: constraint row per coordinate
  std::vector<Rat> farkas;               // LpEmpty
  std::string note;                      // Base0 / Base1 reasoning
  DirectionCert dir;                     // Sliced
  std::vector<std::pair<Int, std::shared_ptr<UnsatCert>>> slices;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<Int> witness;          // Sat
  std::shared_ptr<UnsatCert> cert;   // Unsat
  std::string summary;               // human-readable outcome detail
};

SolveResult ipexp_solve(const IpExpInstance& inst, const IpExpBudget& budget = {});

bool verify_sat(const IpExpInstance& inst, const std::vector<Int>& witness);
bool verify_unsat(const IpExpInstance& inst, const UnsatCert& cert,
                  const IpExpBudget& budget = {});

std::string render_unsat_cert(const UnsatCert& cert, int indent = 0);

} // namespace palab
