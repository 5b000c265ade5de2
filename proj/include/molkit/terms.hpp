#pragma once

#include <algorithm>
#include <random>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "molkit/errors.hpp"
#include "molkit/finlat.hpp"
#include "molkit/subspace.hpp"

namespace molkit {

// Ortholattice terms: variables, 0, 1, join, meet, orthocomplement.
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum Kind { kVar, kZero, kOne, kJoin, kMeet, kOrtho };
  Kind kind;
  std::string var;
  TermPtr left, right;

  static TermPtr variable(std::string name) {
    return std::make_shared<Term>(Term{kVar, std::move(name), nullptr, nullptr});
  }
  static TermPtr zero() { return std::make_shared<Term>(Term{kZero, "", nullptr, nullptr}); }
  static TermPtr one() { return std::make_shared<Term>(Term{kOne, "", nullptr, nullptr}); }
  static TermPtr join(TermPtr a, TermPtr b) {
    return std::make_shared<Term>(Term{kJoin, "", std::move(a), std::move(b)});
  }
  static TermPtr meet(TermPtr a, TermPtr b) {
    return std::make_shared<Term>(Term{kMeet, "", std::move(a), std::move(b)});
  }
  static TermPtr ortho(TermPtr a) {
    return std::make_shared<Term>(Term{kOrtho, "", std::move(a), nullptr});
  }
};

inline void collect_variables(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == Term::kVar) out.insert(t->var);
  collect_variables(t->left, out);
  collect_variables(t->right, out);
}

inline std::vector<std::string> variables_of(const TermPtr& t) {
  std::set<std::string> s;
  collect_variables(t, s);
  return {s.begin(), s.end()};
}

inline bool contains_ortho(const TermPtr& t) {
  if (!t) return false;
  if (t->kind == Term::kOrtho) return true;
  return contains_ortho(t->left) || contains_ortho(t->right);
}

inline bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind || a->var != b->var) return false;
  return term_equal(a->left, b->left) && term_equal(a->right, b->right);
}

// Premise pairs (x_i, y_i) with a complement-free lattice term conclusion.
struct OrthoImplication {
  std::vector<std::pair<std::string, std::string>> premises;
  TermPtr conclusion;
};

struct Identity {
  TermPtr lhs, rhs;
};

using ParsedInput = std::variant<TermPtr, Identity, OrthoImplication>;

// --- s-expression reader -------------------------------------------------------

namespace detail {

struct Sexp {
  bool atom = false;
  std::string text;
  std::vector<Sexp> items;
};

inline Sexp read_sexp(const std::string& s, std::size_t& pos) {
  auto skip = [&] { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; };
  skip();
  if (pos >= s.size()) throw SyntaxError("unexpected end of input at position " + std::to_string(pos));
  if (s[pos] == '(') {
    Sexp out;
    ++pos;
    skip();
    while (pos < s.size() && s[pos] != ')') {
      out.items.push_back(read_sexp(s, pos));
      skip();
    }
    if (pos >= s.size()) throw SyntaxError("missing ')' at position " + std::to_string(pos));
    ++pos;
    return out;
  }
  if (s[pos] == ')') throw SyntaxError("unexpected ')' at position " + std::to_string(pos));
  Sexp out;
  out.atom = true;
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' &&
         s[pos] != ')')
    out.text += s[pos++];
  return out;
}

inline TermPtr term_of_sexp(const Sexp& e) {
  if (e.atom) {
    if (e.text == "0") return Term::zero();
    if (e.text == "1") return Term::one();
    return Term::variable(e.text);
  }
  if (e.items.empty()) throw SyntaxError("empty list is not a term");
  if (!e.items[0].atom) throw SyntaxError("operator position must be an atom");
  const std::string& op = e.items[0].text;
  if (op == "'") {
    if (e.items.size() != 2) throw SyntaxError("' takes exactly one argument");
    return Term::ortho(term_of_sexp(e.items[1]));
  }
  if (op == "+" || op == "*") {
    if (e.items.size() < 3) throw SyntaxError(op + " takes at least two arguments");
    TermPtr acc = term_of_sexp(e.items[1]);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
      TermPtr next = term_of_sexp(e.items[i]);
      acc = op == "+" ? Term::join(acc, next) : Term::meet(acc, next);
    }
    return acc;
  }
  throw SyntaxError("unknown operator '" + op + "'");
}

}  // namespace detail

inline ParsedInput parse_input(const std::string& text) {
  std::size_t pos = 0;
  detail::Sexp e = detail::read_sexp(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw SyntaxError("trailing input at position " + std::to_string(pos));
  if (!e.atom && !e.items.empty() && e.items[0].atom && e.items[0].text == "=") {
    if (e.items.size() != 3) throw SyntaxError("= takes exactly two terms");
    return Identity{detail::term_of_sexp(e.items[1]), detail::term_of_sexp(e.items[2])};
  }
  if (!e.atom && !e.items.empty() && e.items[0].atom && e.items[0].text == "oimp") {
    if (e.items.size() != 3) throw SyntaxError("oimp takes a premise list and a conclusion");
    OrthoImplication oi;
    const detail::Sexp& prem = e.items[1];
    if (prem.atom) throw SyntaxError("oimp premises must be a list of pairs");
    for (const auto& p : prem.items) {
      if (p.atom || p.items.size() != 2 || !p.items[0].atom || !p.items[1].atom)
        throw SyntaxError("each oimp premise must be a pair of variables");
      oi.premises.emplace_back(p.items[0].text, p.items[1].text);
    }
    oi.conclusion = detail::term_of_sexp(e.items[2]);
    if (contains_ortho(oi.conclusion))
      throw SyntaxError("oimp conclusion must be a pure lattice term");
    return oi;
  }
  return detail::term_of_sexp(e);
}

inline TermPtr parse_term(const std::string& text) {
  ParsedInput p = parse_input(text);
  if (auto* t = std::get_if<TermPtr>(&p)) return *t;
  throw SyntaxError("expected a plain term");
}

inline std::string render(const TermPtr& t) {
  switch (t->kind) {
    case Term::kVar: return t->var;
    case Term::kZero: return "0";
    case Term::kOne: return "1";
    case Term::kOrtho: return "(' " + render(t->left) + ")";
    case Term::kJoin: return "(+ " + render(t->left) + " " + render(t->right) + ")";
    case Term::kMeet: return "(* " + render(t->left) + " " + render(t->right) + ")";
  }
  throw Error("unreachable");
}

inline std::string render(const Identity& id) {
  return "(= " + render(id.lhs) + " " + render(id.rhs) + ")";
}

inline std::string render(const OrthoImplication& oi) {
  std::string s = "(oimp (";
  for (std::size_t i = 0; i < oi.premises.size(); ++i) {
    if (i) s += " ";
    s += "(" + oi.premises[i].first + " " + oi.premises[i].second + ")";
  }
  s += ") " + render(oi.conclusion) + ")";
  return s;
}

// --- evaluation ----------------------------------------------------------------

// Models: anything with element type, join/meet/ortho/bottom/top.
struct LatticeModel {
  const FiniteOrtholattice& l;
  using Element = int;
  int join(int a, int b) const { return l.join(a, b); }
  int meet(int a, int b) const { return l.meet(a, b); }
  int ortho(int a) const { return l.ortho(a); }
  int bottom() const { return l.bottom(); }
  int top() const { return l.top(); }
};

struct SubspaceModel {
  FormSpace space;
  using Element = Subspace;
  Subspace join(const Subspace& a, const Subspace& b) const { return sum(a, b); }
  Subspace meet(const Subspace& a, const Subspace& b) const { return intersect(a, b); }
  Subspace ortho(const Subspace& a) const { return ortho_complement(a); }
  Subspace bottom() const { return Subspace::zero(space); }
  Subspace top() const { return Subspace::full(space); }
};

template <typename Model>
typename Model::Element eval_term(const TermPtr& t, const Model& m,
                                  const std::map<std::string, typename Model::Element>& env) {
  switch (t->kind) {
    case Term::kVar: {
      auto it = env.find(t->var);
      if (it == env.end()) throw UnboundVariable("no value for variable '" + t->var + "'");
      return it->second;
    }
    case Term::kZero: return m.bottom();
    case Term::kOne: return m.top();
    case Term::kJoin: return m.join(eval_term(t->left, m, env), eval_term(t->right, m, env));
    case Term::kMeet: return m.meet(eval_term(t->left, m, env), eval_term(t->right, m, env));
    case Term::kOrtho: return m.ortho(eval_term(t->left, m, env));
  }
  throw Error("unreachable");
}

struct IdentityVerdict {
  bool holds = true;
  std::map<std::string, int> counterexample;  // empty when holds
};

// Exhaustive quantification over all assignments in a finite model.
inline IdentityVerdict identity_holds(const TermPtr& g, const TermPtr& h,
                                      const FiniteOrtholattice& l) {
  std::set<std::string> vs;
  collect_variables(g, vs);
  collect_variables(h, vs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  LatticeModel m{l};
  std::map<std::string, int> env;
  std::vector<int> pick(vars.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = pick[i];
    if (eval_term(g, m, env) != eval_term(h, m, env)) return {false, env};
    std::size_t i = 0;
    while (i < vars.size() && ++pick[i] == l.size()) pick[i++] = 0;
    if (i == vars.size()) break;
    if (vars.empty()) break;
  }
  return {true, {}};
}

// --- the identity <-> orthoimplication translation -----------------------------

namespace detail {

inline TermPtr replace_constants(const TermPtr& t, const TermPtr& u) {
  switch (t->kind) {
    case Term::kZero: return Term::meet(u, Term::ortho(u));
    case Term::kOne: return Term::join(u, Term::ortho(u));
    case Term::kVar: return t;
    case Term::kOrtho: return Term::ortho(replace_constants(t->left, u));
    case Term::kJoin: return Term::join(replace_constants(t->left, u), replace_constants(t->right, u));
    case Term::kMeet: return Term::meet(replace_constants(t->left, u), replace_constants(t->right, u));
  }
  throw Error("unreachable");
}

// Push orthocomplements to the variables; x'' cancels. The input must be
// constant-free.
inline TermPtr demorgan(const TermPtr& t, bool complemented) {
  switch (t->kind) {
    case Term::kVar:
      return complemented ? Term::ortho(t) : t;
    case Term::kOrtho:
      return demorgan(t->left, !complemented);
    case Term::kJoin:
      return complemented ? Term::meet(demorgan(t->left, true), demorgan(t->right, true))
                          : Term::join(demorgan(t->left, false), demorgan(t->right, false));
    case Term::kMeet:
      return complemented ? Term::join(demorgan(t->left, true), demorgan(t->right, true))
                          : Term::meet(demorgan(t->left, false), demorgan(t->right, false));
    default:
      throw Error("demorgan: constants must be replaced first");
  }
}

inline TermPtr substitute_ortho_leaves(const TermPtr& t,
                                       const std::map<std::string, std::string>& partner) {
  switch (t->kind) {
    case Term::kVar: return t;
    case Term::kOrtho: return Term::variable(partner.at(t->left->var));
    case Term::kJoin:
      return Term::join(substitute_ortho_leaves(t->left, partner),
                        substitute_ortho_leaves(t->right, partner));
    case Term::kMeet:
      return Term::meet(substitute_ortho_leaves(t->left, partner),
                        substitute_ortho_leaves(t->right, partner));
    default: throw Error("unreachable");
  }
}

}  // namespace detail

// For g <= h valid in all ortholattices: the identity g = h is equivalent,
// over orthomodular lattices, to the orthoimplication with conclusion
// f = h g' where complements are pushed to variables and x_i' is renamed y_i.
inline OrthoImplication to_orthoimplication(const TermPtr& g, const TermPtr& h) {
  std::set<std::string> vs;
  collect_variables(g, vs);
  collect_variables(h, vs);
  std::string uname = "u";
  while (vs.count(uname)) uname += "u";
  TermPtr u = Term::variable(uname);
  TermPtr g2 = detail::replace_constants(g, u);
  TermPtr h2 = detail::replace_constants(h, u);
  std::set<std::string> vars = vs;
  collect_variables(g2, vars);
  collect_variables(h2, vars);

  TermPtr f0 = detail::demorgan(Term::meet(h2, Term::ortho(g2)), false);
  std::map<std::string, std::string> partner;
  int i = 0;
  for (const std::string& v : vars) {
    std::string cand = "y" + std::to_string(++i);
    while (vars.count(cand)) cand += "_";
    partner[v] = cand;
  }
  OrthoImplication oi;
  oi.conclusion = detail::substitute_ortho_leaves(f0, partner);
  for (const std::string& v : vars) oi.premises.emplace_back(v, partner.at(v));
  return oi;
}

enum class OimpVerdict { kHolds, kFails, kNoCounterexampleInSamples };

struct OimpResult {
  OimpVerdict verdict;
  std::map<std::string, int> counterexample;  // exhaustive mode only
};

// Exhaustive: quantify over all premise-satisfying tuples under the
// canonical orthogonality x perp y iff x <= y'.
inline OimpResult orthoimplication_holds(const OrthoImplication& oi, const FiniteOrtholattice& l) {
  std::vector<std::pair<int, int>> orthopairs;
  for (int x = 0; x < l.size(); ++x)
    for (int y = 0; y < l.size(); ++y)
      if (l.leq(x, l.ortho(y))) orthopairs.emplace_back(x, y);
  LatticeModel m{l};
  std::size_t n = oi.premises.size();
  std::vector<std::size_t> pick(n, 0);
  std::map<std::string, int> env;
  for (;;) {
    env.clear();
    bool consistent = true;
    for (std::size_t i = 0; i < n && consistent; ++i) {
      auto [x, y] = orthopairs[pick[i]];
      auto put = [&](const std::string& name, int val) {
        auto it = env.find(name);
        if (it == env.end())
          env[name] = val;
        else if (it->second != val)
          consistent = false;
      };
      put(oi.premises[i].first, x);
      put(oi.premises[i].second, y);
    }
    if (consistent) {
      // repeated variables across premises must still satisfy orthogonality
      for (std::size_t i = 0; i < n && consistent; ++i)
        consistent = l.leq(env[oi.premises[i].first], l.ortho(env[oi.premises[i].second]));
      if (consistent && eval_term(oi.conclusion, m, env) != l.bottom())
        return {OimpVerdict::kFails, env};
    }
    std::size_t i = 0;
    while (i < n && ++pick[i] == orthopairs.size()) pick[i++] = 0;
    if (i == n || n == 0) break;
  }
  return {OimpVerdict::kHolds, {}};
}

// Interval mode: the implication must hold in every [0, u].
inline bool orthoimplication_holds_in_intervals(const OrthoImplication& oi,
                                                const FiniteOrtholattice& l) {
  for (int u = 0; u < l.size(); ++u) {
    FiniteOrtholattice sub = interval_subalgebra(l, u, l.bottom());
    if (orthoimplication_holds(oi, sub).verdict != OimpVerdict::kHolds) return false;
  }
  return true;
}

// Sampled mode over a subspace MOL: random subspaces with y_i inside x_i^perp.
// A "holds" verdict here is explicitly non-conclusive.
template <typename Rng>
OimpResult orthoimplication_sampled(const OrthoImplication& oi, const FormSpace& space, Rng& rng,
                                    int samples = 500) {
  SubspaceModel m{space};
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> nrows(0, space.dimension());
  auto random_subspace = [&] {
    RationalMatrix mm(nrows(rng), space.dimension());
    for (std::size_t i = 0; i < mm.rows(); ++i)
      for (std::size_t j = 0; j < mm.cols(); ++j) mm.at(i, j) = Rational(entry(rng));
    return Subspace(space, mm);
  };
  auto random_inside = [&](const Subspace& w) {
    if (w.is_zero()) return w;
    std::uniform_int_distribution<std::size_t> cnt(0, w.dim());
    std::size_t rows = cnt(rng);
    RationalMatrix mm(rows, space.dimension());
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Rational> acc(space.dimension(), Rational(0));
      for (std::size_t brow = 0; brow < w.dim(); ++brow) {
        Rational c(entry(rng));
        for (std::size_t j = 0; j < space.dimension(); ++j)
          acc[j] += c * w.basis().at(brow, j);
      }
      for (std::size_t j = 0; j < space.dimension(); ++j) mm.at(r, j) = acc[j];
    }
    return Subspace(space, mm);
  };
  for (int it = 0; it < samples; ++it) {
    std::map<std::string, Subspace> env;
    bool consistent = true;
    for (const auto& [xn, yn] : oi.premises) {
      if (!env.count(xn)) env.emplace(xn, random_subspace());
      if (!env.count(yn)) env.emplace(yn, random_inside(ortho_complement(env.at(xn))));
    }
    for (const auto& [xn, yn] : oi.premises)
      consistent = consistent && leq(env.at(xn), ortho_complement(env.at(yn)));
    if (!consistent) continue;
    if (!eval_term(oi.conclusion, m, env).is_zero()) return {OimpVerdict::kFails, {}};
  }
  return {OimpVerdict::kNoCounterexampleInSamples, {}};
}

// --- compiled evaluation for exhaustive corpus sweeps ---------------------------

// Postfix program over variable slots; avoids per-assignment name lookups.
struct CompiledTerm {
  enum Op { kPushVar, kPushZero, kPushOne, kJoin, kMeet, kOrtho };
  std::vector<std::pair<Op, int>> prog;
  std::vector<std::string> slots;

  int eval(const FiniteOrtholattice& l, const std::vector<int>& assign) const {
    static thread_local std::vector<int> stack;
    stack.clear();
    for (const auto& [op, arg] : prog) {
      switch (op) {
        case kPushVar: stack.push_back(assign[arg]); break;
        case kPushZero: stack.push_back(l.bottom()); break;
        case kPushOne: stack.push_back(l.top()); break;
        case kOrtho: stack.back() = l.ortho(stack.back()); break;
        case kJoin: {
          int b = stack.back();
          stack.pop_back();
          stack.back() = l.join(stack.back(), b);
          break;
        }
        case kMeet: {
          int b = stack.back();
          stack.pop_back();
          stack.back() = l.meet(stack.back(), b);
          break;
        }
      }
    }
    return stack.back();
  }
};

inline void compile_into(const TermPtr& t, const std::vector<std::string>& slots,
                         CompiledTerm& out) {
  switch (t->kind) {
    case Term::kVar: {
      auto it = std::find(slots.begin(), slots.end(), t->var);
      if (it == slots.end()) throw UnboundVariable("no slot for '" + t->var + "'");
      out.prog.emplace_back(CompiledTerm::kPushVar, static_cast<int>(it - slots.begin()));
      return;
    }
    case Term::kZero: out.prog.emplace_back(CompiledTerm::kPushZero, 0); return;
    case Term::kOne: out.prog.emplace_back(CompiledTerm::kPushOne, 0); return;
    case Term::kOrtho:
      compile_into(t->left, slots, out);
      out.prog.emplace_back(CompiledTerm::kOrtho, 0);
      return;
    case Term::kJoin:
    case Term::kMeet:
      compile_into(t->left, slots, out);
      compile_into(t->right, slots, out);
      out.prog.emplace_back(t->kind == Term::kJoin ? CompiledTerm::kJoin : CompiledTerm::kMeet, 0);
      return;
  }
}

inline CompiledTerm compile_term(const TermPtr& t, const std::vector<std::string>& slots) {
  CompiledTerm c;
  c.slots = slots;
  compile_into(t, slots, c);
  return c;
}

// identity_holds with compiled terms; same verdict, fit for large sweeps.
inline IdentityVerdict identity_holds_fast(const TermPtr& g, const TermPtr& h,
                                           const FiniteOrtholattice& l) {
  std::set<std::string> vs;
  collect_variables(g, vs);
  collect_variables(h, vs);
  std::vector<std::string> vars(vs.begin(), vs.end());
  CompiledTerm cg = compile_term(g, vars);
  CompiledTerm ch = compile_term(h, vars);
  std::vector<int> assign(vars.size(), 0);
  for (;;) {
    if (cg.eval(l, assign) != ch.eval(l, assign)) {
      std::map<std::string, int> cx;
      for (std::size_t i = 0; i < vars.size(); ++i) cx[vars[i]] = assign[i];
      return {false, cx};
    }
    std::size_t i = 0;
    while (i < vars.size() && ++assign[i] == l.size()) assign[i++] = 0;
    if (i == vars.size()) break;
  }
  return {true, {}};
}

// For distinct premise variables, monotonicity of the conclusion collapses
// each premise x_i perp y_i to its extreme case x_i = y_i', so quantification
// over |L|^n assignments of the y_i decides the implication.
inline OimpResult orthoimplication_holds_fast(const OrthoImplication& oi,
                                              const FiniteOrtholattice& l) {
  std::set<std::string> names;
  for (const auto& [x, y] : oi.premises) {
    if (!names.insert(x).second || !names.insert(y).second)
      return orthoimplication_holds(oi, l);  // repeated variables: honest enumeration
  }
  std::vector<std::string> concl_vars = variables_of(oi.conclusion);
  for (const auto& v : concl_vars)
    if (!names.count(v)) return orthoimplication_holds(oi, l);
  std::size_t n = oi.premises.size();
  std::vector<std::string> slots;
  for (const auto& [x, y] : oi.premises) {
    slots.push_back(x);
    slots.push_back(y);
  }
  CompiledTerm cf = compile_term(oi.conclusion, slots);
  std::vector<int> ys(n, 0), assign(2 * n, 0);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) {
      assign[2 * i] = l.ortho(ys[i]);  // x_i at its maximum y_i'
      assign[2 * i + 1] = ys[i];
    }
    if (cf.eval(l, assign) != l.bottom()) {
      std::map<std::string, int> cx;
      for (std::size_t i = 0; i < 2 * n; ++i) cx[slots[i]] = assign[i];
      return {OimpVerdict::kFails, cx};
    }
    std::size_t i = 0;
    while (i < n && ++ys[i] == l.size()) ys[i++] = 0;
    if (i == n || n == 0) break;
  }
  return {OimpVerdict::kHolds, {}};
}

// Adapter for the ideal approximation check: evaluate a pure lattice term.
inline bool check_ideal_approximation_term(const FiniteOrtholattice& l,
                                           const std::vector<int>& ideal, const TermPtr& f,
                                           const std::vector<std::string>& argnames,
                                           const std::vector<int>& cs, int p) {
  if (contains_ortho(f))
    throw Error("check_ideal_approximation_term: f must be a pure lattice term");
  auto evalf = [&](const FiniteOrtholattice& lat, const std::vector<int>& args) {
    std::map<std::string, int> env;
    for (std::size_t i = 0; i < argnames.size(); ++i) env[argnames[i]] = args[i];
    LatticeModel m{lat};
    return eval_term(f, m, env);
  };
  return check_ideal_approximation(l, ideal, evalf, cs, p);
}

}  // namespace molkit
