// Acceptance suite: every criterion below is checked exactly (no floating
// point anywhere) and prints one pass/fail line. Exit status is nonzero if
// any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include "molkit/corpus.hpp"
#include "molkit/frames.hpp"
#include "molkit/geometry.hpp"
#include "molkit/terms.hpp"
#include "molkit/witness.hpp"

using namespace molkit;

namespace {

int failures = 0;

void criterion(int number, const std::string& what, const std::function<bool(std::string&)>& run,
               double budget_seconds = 0.0) {
  auto t0 = std::chrono::steady_clock::now();
  std::string note;
  bool ok = false;
  try {
    ok = run(note);
  } catch (const std::exception& e) {
    note = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    ok = false;
    note += " [time budget " + std::to_string(budget_seconds) + "s exceeded]";
  }
  std::ostringstream line;
  line << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << number << ": " << what;
  if (!note.empty()) line << " -- " << note;
  line << " (" << static_cast<long long>(secs * 1000) << " ms)";
  std::cout << line.str() << "\n";
  if (!ok) ++failures;
}

std::vector<Rational> rational_samples() {
  return {Rational(0),    Rational(1),     Rational(-1), Rational(2),  Rational(-2),
          Rational(1, 2), Rational(-1, 2), Rational(3),  Rational(-3), Rational(5),
          Rational(1, 3)};
}

std::vector<RationalMatrix> block2_samples() {
  using M = RationalMatrix;
  return {M::zero(2, 2),
          M::identity(2),
          M{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}},
          M{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
          M{{Rational(2), Rational(1)}, {Rational(1), Rational(2)}},
          M{{Rational(1), Rational(0)}, {Rational(0), Rational(0)}}};
}

// >= 20 finite MOLs built as random products of Boolean(<=3) and MO_{<=4}
std::vector<FiniteOrtholattice> build_corpus() {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> kind(0, 1), bpar(1, 3), mpar(2, 4);
  auto factor = [&] {
    return kind(rng) == 0 ? boolean_algebra(bpar(rng)) : mo(mpar(rng));
  };
  std::vector<FiniteOrtholattice> corpus;
  while (corpus.size() < 20) {
    FiniteOrtholattice l = product(factor(), factor());
    if (l.size() > 80) continue;  // keep the exhaustive sweeps at desk scale
    corpus.push_back(std::move(l));
  }
  return corpus;
}

Subspace random_subspace(std::mt19937_64& rng, const FormSpace& sp) {
  std::uniform_int_distribution<int> entry(-5, 5);
  std::uniform_int_distribution<std::size_t> nrows(0, sp.dimension());
  RationalMatrix m(nrows(rng), sp.dimension());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = Rational(entry(rng));
  return Subspace(sp, m);
}

struct NamedIdentity {
  const char* name;
  const char* lhs;
  const char* rhs;
};

std::vector<NamedIdentity> identity_list() {
  return {
      {"orthomodular law", "(+ y (* (+ x y) (' y)))", "(+ x y)"},
      {"distributivity", "(+ (* x y) (* x z))", "(* x (+ y z))"},
      {"DeMorgan join", "(' (+ x y))", "(* (' x) (' y))"},
      {"DeMorgan meet", "(' (* x y))", "(+ (' x) (' y))"},
      {"absorption", "(* x (+ x y))", "x"},
      {"absorption dual", "(+ x (* x y))", "x"},
      {"involution", "(' (' x))", "x"},
      {"complement join", "(+ x (' x))", "1"},
      {"complement meet", "0", "(* x (' x))"},
      {"modular identity", "(+ (* x z) (* y z))", "(* (+ (* x z) y) z)"},
      {"orthomodular variant", "(+ x (* (' x) (+ x y)))", "(+ x y)"},
  };
}

}  // namespace

int main() {
  std::vector<FiniteOrtholattice> corpus = build_corpus();

  criterion(
      1, "canonical frames pass the frame axioms in L(Q^n), n = 3..6, blocks 1 and 2",
      [&](std::string& note) {
        int checked = 0;
        for (int n = 3; n <= 6; ++n) {
          FormSpace sp = FormSpace::with_identity_form(static_cast<std::size_t>(n));
          Frame f = Frame::canonical(n, 1, sp);
          // route the elements through the explicit check as well
          std::vector<Subspace> axes;
          std::vector<std::vector<Subspace>> sides(n, std::vector<Subspace>(n, Subspace::zero(sp)));
          for (int i = 0; i < n; ++i) axes.push_back(f.axis(i));
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (i != j) sides[i][j] = f.side(i, j);
          Frame g = Frame::check_frame(axes, sides);
          if (!g.spanning() || !g.orthogonal()) return false;
          ++checked;
        }
        Frame f62 = Frame::canonical(3, 2, FormSpace::with_identity_form(6));
        if (!f62.spanning() || !f62.orthogonal()) return false;
        ++checked;
        note = std::to_string(checked) + " frames (orders 3..6 at block 1, order 3 at block 2)";
        return true;
      },
      5.0);

  criterion(
      2, "coordinate-ring operations agree with the matrix oracle at blocks 1 and 2",
      [&](std::string& note) {
        auto f3 = std::make_shared<const Frame>(
            Frame::canonical(3, 1, FormSpace::with_identity_form(3)));
        int checks = 0;
        for (const Rational& a : rational_samples()) {
          RingElem ea = embed_ring(a, f3, 0, 1);
          if (value_of(ring_neg(ea)).at(0, 0) != -a) return false;
          auto inv = ring_inverse(ea);
          if (inv.has_value() != !a.is_zero()) return false;
          if (inv && value_of(*inv).at(0, 0) != a.inverse()) return false;
          for (const Rational& b : rational_samples()) {
            RingElem eb = embed_ring(b, f3, 0, 1);
            if (value_of(ring_add(ea, eb)).at(0, 0) != a + b) return false;
            if (value_of(ring_mul(ea, eb)).at(0, 0) != a * b) return false;
            checks += 2;
          }
        }
        auto f6 = std::make_shared<const Frame>(
            Frame::canonical(3, 2, FormSpace::with_identity_form(6)));
        for (const RationalMatrix& a : block2_samples()) {
          RingElem ea = embed_ring(a, f6, 0, 1);
          if (value_of(ring_neg(ea)) != -a) return false;
          auto inv = ring_inverse(ea);
          if (inv.has_value() != is_invertible(a)) return false;
          if (inv && value_of(*inv) != inverse(a)) return false;
          for (const RationalMatrix& b : block2_samples()) {
            RingElem eb = embed_ring(b, f6, 0, 1);
            if (value_of(ring_add(ea, eb)) != a + b) return false;
            if (value_of(ring_mul(ea, eb)) != a * b) return false;
            checks += 2;
          }
        }
        note = std::to_string(checks) + " exact operation comparisons";
        return true;
      },
      30.0);

  criterion(3, "involution polynomial matches the matrix-ring involution, twice is identity",
            [&](std::string& note) {
              int checks = 0;
              for (const RationalMatrix& gram :
                   {RationalMatrix::diagonal({Rational(1), Rational(2), Rational(3)}),
                    RationalMatrix::diagonal({Rational(1), Rational(1, 2), Rational(5)})}) {
                FormSpace sp(3, gram);
                auto f = std::make_shared<const Frame>(Frame::canonical(3, 1, sp));
                Rational alpha2 = gram.at(1, 1);
                std::vector<RationalMatrix> alpha1 = {RationalMatrix::identity(1)};
                for (const Rational& r : rational_samples()) {
                  RingElem e = embed_ring(r, f, 0, 1);
                  RingElem st = star_polynomial(e);
                  RationalMatrix rm(1, 1);
                  rm.at(0, 0) = r;
                  // the coordinate-ring involution is conjugation of the
                  // transpose by the normalised first block
                  if (value_of(st) != matrix_involution(alpha1, rm)) return false;
                  if (star_polynomial(st) != e) return false;
                  // the orthocomplement witness carries the alpha_2 factor
                  Subspace w =
                      intersect(ortho_complement(e.carrier), sum(f->axis(0), f->axis(1)));
                  if (w != embed_ring(-(r * alpha2), f, 1, 0).carrier) return false;
                  checks += 3;
                }
              }
              note = std::to_string(checks) + " exact checks over two diagonal forms";
              return true;
            });

  criterion(4, "generation-lemma replay: every displayed identity holds in L(Q^6), full checklist",
            [&](std::string& note) {
              LemmaMResult r = verify_lemma_m(Rational(1), Rational(1));
              if (!r.report.all_pass) {
                for (const auto& s : r.report.steps)
                  if (!s.pass) note = "failed: " + s.name;
                return false;
              }
              if (r.report.steps.size() != lemma_m_checklist().size()) return false;
              for (std::size_t i = 0; i < r.report.steps.size(); ++i)
                if (r.report.steps[i].name != lemma_m_checklist()[i]) return false;
              note = std::to_string(r.report.steps.size()) + " displayed identities covered";
              return true;
            });

  criterion(
      5, "orthogonal generating frames at k = 1,2,3: definiteness twice, both psi identities",
      [&](std::string& note) {
        std::string conventions;
        for (int k = 1; k <= 3; ++k) {
          auto [A, B] = ab_matrices(k);
          if (!is_positive_definite(A) || !is_positive_definite(B)) return false;
          if (!positive_definite_by_transforms(k, Rational(1), Rational(1))) return false;
          M2Instance inst = build_m2({k, Rational(1), Rational(1)});
          if (!inst.report.all_pass) return false;
          if (!inst.frame->orthogonal() || !inst.frame->spanning()) return false;
          if (k == 3 && inst.space.dimension() != 12) return false;
          const StepResult* psi = inst.report.find("psi(A) identity at (1,2)");
          if (k == 1 && psi) conventions = psi->detail;
        }
        note = "k=3 in Q^12; psi reading: " + conventions;
        return true;
      },
      60.0);

  criterion(6, "generation chain replay at k = 1,2 reaches the derived frame and sampled embeds",
            [&](std::string& note) {
              int steps = 0;
              for (int k = 1; k <= 2; ++k) {
                StepReport r = verify_m1_chain(k);
                if (!r.all_pass) return false;
                steps += static_cast<int>(r.steps.size());
              }
              note = "trace of " + std::to_string(steps) + " steps across both levels";
              return true;
            });

  criterion(7, "structure theorem: every corpus member decomposes with a verified isomorphism",
            [&](std::string& note) {
              int mo_factors = 0, bool_factors = 0;
              for (const auto& l : corpus) {
                MolDecomposition dec = decompose_finite_mol(l);  // throws on any failure
                for (const auto& f : dec.factors)
                  (f.kind == MolFactor::kMo ? mo_factors : bool_factors)++;
              }
              note = std::to_string(corpus.size()) + " members; " + std::to_string(mo_factors) +
                     " MO factors, " + std::to_string(bool_factors) + " Boolean factors";
              return true;
            });

  criterion(
      8, "congruence machinery: closure rules hold, both irreducibility routes agree",
      [&](std::string& note) {
        std::mt19937_64 rng(11);
        int closures = 0;
        for (const auto& l : corpus) {
          std::vector<std::pair<int, int>> covers = l.covering_pairs();
          std::shuffle(covers.begin(), covers.end(), rng);
          if (covers.size() > 4) covers.resize(4);
          for (auto [a, b] : covers) {
            QuotientSet q = congruence_from_quotient(l, a, b);
            if (!satisfies_quotient_closure_rules(l, q)) return false;
            ++closures;
          }
          SubdirectIrreducibility si = is_subdirectly_irreducible(l);
          if (si.si != si.perspectivity_criterion) return false;
        }
        note = std::to_string(closures) + " principal congruences rule-checked; " +
               std::to_string(corpus.size()) + " members cross-checked";
        return true;
      });

  criterion(
      9, "identity <-> orthoimplication equivalence for 11 identities on every corpus member",
      [&](std::string& note) {
        int comparisons = 0;
        for (const NamedIdentity& id : identity_list()) {
          TermPtr g = parse_term(id.lhs);
          TermPtr h = parse_term(id.rhs);
          OrthoImplication oi = to_orthoimplication(g, h);
          for (const auto& l : corpus) {
            bool ih = identity_holds_fast(g, h, l).holds;
            bool oh = orthoimplication_holds_fast(oi, l).verdict == OimpVerdict::kHolds;
            if (ih != oh) {
              note = std::string("mismatch on '") + id.name + "'";
              return false;
            }
            ++comparisons;
          }
        }
        note = std::to_string(comparisons) + " equivalences";
        return true;
      });

  criterion(
      10, "quotient representation embeds MO_2 and filter stability holds across the corpus",
      [&](std::string& note) {
        FiniteOrtholattice m = product(mo(2), boolean_algebra(1));
        int a = m.index_of("(0,0)"), b = m.index_of("(0,1)");
        QuotientSet theta = detail::quotients_of_partition(
            m, detail::congruence_partition(m, {{m.join(a, b), a}}));
        std::vector<int> all;
        for (int i = 0; i < m.size(); ++i) all.push_back(i);
        RepresentationMap rep = quotient_representation(m, all, theta);  // verifies eta and perp
        if (rep.geometry.size() != 4) return false;
        if (!find_isomorphism(subspace_lattice(rep.geometry), mo(2))) return false;

        // filter stability (the collinear meets stay below the filter) over
        // every congruence of every corpus member
        int triples = 0;
        for (const auto& l : corpus) {
          std::vector<int> atoms = l.atoms();
          for (const QuotientSet& th : congruence_lattice(l)) {
            int fmin = l.top();
            for (int x = 0; x < l.size(); ++x)
              if (th.contains(l.top(), x)) fmin = l.meet(fmin, x);
            for (int x = 0; x < l.size(); ++x)
              for (int y = 0; y < l.size(); ++y) {
                if (l.meet(x, y) != l.bottom()) continue;
                for (int p : atoms) {
                  if (!l.leq(p, fmin) || !l.leq(p, l.join(x, y)) || l.leq(p, x) || l.leq(p, y))
                    continue;
                  if (!l.leq(l.meet(x, l.join(p, y)), fmin)) return false;
                  if (!l.leq(l.meet(y, l.join(p, x)), fmin)) return false;
                  ++triples;
                }
              }
          }
        }
        note = "embedding verified; " + std::to_string(triples) + " filter-stable triples";
        return true;
      });

  criterion(
      11, "subspace MOL law suite on 1000 random subspaces under 3 forms",
      [&](std::string& note) {
        std::mt19937_64 rng(31415);
        std::vector<FormSpace> spaces;
        spaces.push_back(FormSpace::with_identity_form(8));
        spaces.push_back(FormSpace(
            5, RationalMatrix::diagonal(
                   {Rational(1), Rational(2), Rational(3), Rational(1, 2), Rational(5)})));
        {
          RationalMatrix g(6, 6);
          for (std::size_t i = 0; i < 6; ++i) g.at(i, i) = Rational(2);
          for (std::size_t i = 0; i + 1 < 6; ++i) {
            g.at(i, i + 1) = Rational(1);
            g.at(i + 1, i) = Rational(1);
          }
          spaces.push_back(FormSpace(6, g));  // positive definite tridiagonal
        }
        int count = 0;
        Subspace prev = Subspace::zero(spaces[0]);
        for (int it = 0; it < 1000; ++it) {
          const FormSpace& sp = spaces[it % spaces.size()];
          Subspace u = random_subspace(rng, sp);
          Subspace v = random_subspace(rng, sp);
          Subspace uo = ortho_complement(u);
          if (ortho_complement(uo) != u) return false;
          if (!intersect(u, uo).is_zero()) return false;
          if (u.dim() + uo.dim() != sp.dimension()) return false;
          if (ortho_complement(sum(u, v)) != intersect(uo, ortho_complement(v))) return false;
          if (ortho_complement(intersect(u, v)) != sum(uo, ortho_complement(v))) return false;
          Subspace small = intersect(u, v);
          if (!leq(uo, ortho_complement(small))) return false;
          if (sum(small, intersect(u, ortho_complement(small))) != u) return false;
          ++count;
        }
        note = std::to_string(count) + " subspaces checked";
        return true;
      },
      60.0);

  criterion(12, "doubling embedding homomorphism suite on 200 random subspaces of Q^4",
            [&](std::string& note) {
              std::mt19937_64 rng(2718);
              FormSpace src = FormSpace::with_identity_form(4);
              for (int it = 0; it < 200; ++it) {
                Subspace u = random_subspace(rng, src);
                Subspace v = random_subspace(rng, src);
                if (doubling_embed(u).dim() != 2 * u.dim()) return false;
                if (doubling_embed(sum(u, v)) != sum(doubling_embed(u), doubling_embed(v)))
                  return false;
                if (doubling_embed(intersect(u, v)) !=
                    intersect(doubling_embed(u), doubling_embed(v)))
                  return false;
                if (doubling_embed(ortho_complement(u)) != ortho_complement(doubling_embed(u)))
                  return false;
              }
              note = "200 subspaces, join/meet/orthocomplement/dimension all exact";
              return true;
            });

  if (failures == 0) {
    std::cout << "acceptance: all 12 criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << failures << " criteria FAILED\n";
  return 1;
}
