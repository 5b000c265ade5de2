// molkit: exact-arithmetic workbench for modular ortholattices.
// Batch subcommands over stable text formats; all output is exact rationals.

#include <CLI11.hpp>

#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "molkit/corpus.hpp"
#include "molkit/frames.hpp"
#include "molkit/geometry.hpp"
#include "molkit/report.hpp"
#include "molkit/terms.hpp"
#include "molkit/witness.hpp"

using namespace molkit;

namespace {

struct Global {
  bool json = false;
  unsigned long long seed = 0;
};

FormSpace form_from_spec(const std::string& spec) {
  if (spec.rfind("id:", 0) == 0) {
    int n = std::stoi(spec.substr(3));
    return FormSpace::with_identity_form(static_cast<std::size_t>(n));
  }
  RationalMatrix g = matrix_from_text(read_file(spec));
  return FormSpace(g.rows(), g);
}

Subspace read_subspace(const std::string& path, const FormSpace& sp) {
  return subspace_from_text(read_file(path), sp);
}

std::string describe(const Subspace& u) {
  std::ostringstream os;
  os << "dim " << u.dim() << "\n" << to_text(u);
  return os.str();
}

int run_lattice(const Global& g, const std::string& action, const std::string& spec) {
  Report rep;
  rep.command = "lattice " + action + " " + spec;
  if (action == "check") {
    bool is_file = spec.find(':') == std::string::npos && spec != "o6";
    if (is_file) {
      std::istringstream is(read_file(spec));
      OrderData d = order_data_from_stream(is);
      LatticeValidation v = validate_order(d);
      rep.add("is_lattice", v.is_lattice, v.problems.empty() ? "" : v.problems.front());
      if (v.is_lattice) {
        rep.add("is_modular", v.is_modular);
        if (v.has_ortho) {
          rep.add("ortho_axioms", v.ortho_ok);
          rep.add("is_orthomodular", v.is_orthomodular);
          rep.add("is_MOL", v.is_mol);
        }
      }
    } else {
      LatticeValidation v = lattice_from_spec(spec).validate();
      rep.add("is_lattice", v.is_lattice);
      rep.add("is_modular", v.is_modular, v.is_modular ? "" : v.problems.front());
      if (v.has_ortho) {
        rep.add("ortho_axioms", v.ortho_ok);
        rep.add("is_orthomodular", v.is_orthomodular);
        rep.add("is_MOL", v.is_mol);
      }
    }
    return rep.emit(g.json);
  }
  FiniteOrtholattice l = lattice_from_spec(spec);
  if (action == "decompose") {
    MolDecomposition dec = decompose_finite_mol(l);
    std::ostringstream os;
    for (const auto& f : dec.factors)
      os << (f.kind == MolFactor::kBoolean ? "Boolean(" : "MO_")
         << f.param << (f.kind == MolFactor::kBoolean ? ") " : " ");
    rep.pass("factors", os.str());
    rep.pass("product isomorphic to input");  // decompose throws otherwise
  } else if (action == "congruences") {
    std::vector<QuotientSet> cons = congruence_lattice(l);
    std::ostringstream os;
    os << cons.size() << " congruences; quotient-set sizes:";
    for (const auto& c : cons) os << " " << c.size();
    rep.pass("congruence lattice", os.str());
  } else if (action == "si") {
    SubdirectIrreducibility r = is_subdirectly_irreducible(l);
    rep.add("congruence route and perspectivity criterion agree",
            r.si == r.perspectivity_criterion);
    rep.pass(r.si ? "subdirectly irreducible" : "not subdirectly irreducible");
  } else {
    throw UnknownSpec("lattice actions: check, decompose, congruences, si");
  }
  return rep.emit(g.json);
}

int run_space(const Global& g, const std::string& action, const std::string& form,
              const std::string& in1, const std::string& in2) {
  Report rep;
  rep.command = "space " + action;
  FormSpace sp = form_from_spec(form);
  if (action == "ortho") {
    Subspace u = read_subspace(in1, sp);
    rep.pass("orthocomplement", describe(ortho_complement(u)));
  } else if (action == "meet" || action == "join") {
    Subspace u = read_subspace(in1, sp);
    Subspace v = read_subspace(in2, sp);
    rep.pass(action, describe(action == "meet" ? intersect(u, v) : sum(u, v)));
  } else if (action == "perspective") {
    Subspace u = read_subspace(in1, sp);
    Subspace v = read_subspace(in2, sp);
    auto c = is_perspective(u, v);
    if (c)
      rep.pass("perspective via common complement", describe(*c));
    else
      rep.fail("perspective", "no witness (dimensions differ)");
  } else {
    throw UnknownSpec("space actions: ortho, meet, join, perspective");
  }
  return rep.emit(g.json);
}

int run_geom(const Global& g, const std::string& action, const std::string& file,
             const std::string& arg) {
  Report rep;
  rep.command = "geom " + action + " " + file;
  if (action == "represent") {
    FiniteOrtholattice l = lattice_from_spec(file);
    std::vector<int> sub;
    if (arg.empty()) {
      for (int i = 0; i < l.size(); ++i) sub.push_back(i);
    } else {
      std::istringstream is(arg);
      std::string name;
      while (std::getline(is, name, ',')) sub.push_back(l.index_of(name));
    }
    RepresentationMap r = canonical_representation(l, sub);
    std::ostringstream os;
    os << r.geometry.size() << " points; eta sizes:";
    for (int a : sub) os << " " << r.eta.at(a).size();
    rep.pass("geometric representation verified", os.str());
    return rep.emit(g.json);
  }
  PointGeometry geo = geometry_from_text(read_file(file));
  if (action == "components") {
    ComponentsReport r = components(geo);
    std::ostringstream os;
    os << r.components.size() << " components; sizes:";
    for (const auto& c : r.components) os << " " << c.size();
    rep.pass("components", os.str());
    if (geo.has_perp())
      rep.add("distinct components pairwise orthogonal", r.cross_orthogonal,
              r.violations.empty() ? "" : r.violations.front());
  } else if (action == "polarity") {
    PolarityReport r = check_polarity(geo);
    rep.add("nondegenerate", r.nondegenerate);
    rep.add("pair condition (p+r) meets p^perp", r.pairs_condition,
            r.failures.empty() ? "" : r.failures.front());
    rep.add("anisotropic", r.anisotropic);
    rep.add("polarity", r.is_polarity);
  } else if (action == "closure") {
    std::vector<int> seed;
    std::istringstream is(arg);
    std::string name;
    while (std::getline(is, name, ',')) {
      for (int i = 0; i < geo.size(); ++i)
        if (geo.name(i) == name) seed.push_back(i);
    }
    ClosureResult r = subgeometry_closure(geo, seed);
    std::ostringstream os;
    for (int p : r.points) os << geo.name(p) << " ";
    if (r.cap_exceeded)
      rep.inconclusive("closure (cap exceeded)", os.str());
    else
      rep.pass("closure", os.str());
  } else {
    throw UnknownSpec("geom actions: components, polarity, closure, represent");
  }
  return rep.emit(g.json);
}

int run_frame(const Global& g, const std::string& action, const std::string& form, int order,
              std::size_t block, const std::string& op, const std::vector<std::string>& args) {
  Report rep;
  rep.command = "frame " + action;
  FormSpace sp = form_from_spec(form);
  auto f = std::make_shared<const Frame>(Frame::canonical(order, block, sp));
  if (action == "check" || action == "canonical") {
    rep.pass("frame axioms verified");
    rep.add("spanning", f->spanning());
    rep.add("orthogonal under the given form", f->orthogonal());
    if (action == "canonical") {
      std::ostringstream os;
      for (int i = 0; i < f->order(); ++i) os << "axis " << i + 1 << ":\n" << to_text(f->axis(i));
      rep.pass("elements", os.str());
    }
    return rep.emit(g.json);
  }
  if (action != "ring-op") throw UnknownSpec("frame actions: check, canonical, ring-op");
  auto parse_value = [&](const std::string& s) {
    if (block == 1) {
      RationalMatrix m(1, 1);
      m.at(0, 0) = Rational::parse(s);
      return m;
    }
    return matrix_from_text(read_file(s));
  };
  auto val = [](const RingElem& e) { return to_text(value_of(e)); };
  if (op == "add" || op == "mul") {
    if (args.size() != 2) throw UnknownSpec("add/mul need two arguments");
    RingElem x = embed_ring(parse_value(args[0]), f, 0, 1);
    RingElem y = embed_ring(parse_value(args[1]), f, 0, 1);
    RingElem r = op == "add" ? ring_add(x, y) : ring_mul(x, y);
    rep.pass("result value", val(r));
    rep.pass("result carrier", to_text(r.carrier));
  } else if (op == "neg") {
    if (args.size() != 1) throw UnknownSpec("neg needs one argument");
    rep.pass("result value", val(ring_neg(embed_ring(parse_value(args[0]), f, 0, 1))));
  } else if (op == "inv") {
    if (args.size() != 1) throw UnknownSpec("inv needs one argument");
    auto r = ring_inverse(embed_ring(parse_value(args[0]), f, 0, 1));
    if (r)
      rep.pass("result value", val(*r));
    else
      rep.fail("inverse", "element not invertible in the coordinate ring");
  } else if (op == "star") {
    if (args.size() != 1) throw UnknownSpec("star needs one argument");
    rep.pass("result value", val(star_polynomial(embed_ring(parse_value(args[0]), f, 0, 1))));
  } else {
    throw UnknownSpec("ring ops: add, mul, neg, inv, star");
  }
  return rep.emit(g.json);
}

void steps_into(const StepReport& sr, Report& rep) {
  for (const auto& s : sr.steps) rep.add(s.name, s.pass, s.detail);
}

int run_witness(const Global& g, const std::string& action, int k, const std::string& a,
                const std::string& b, const std::string& in, bool verify) {
  Report rep;
  rep.command = "witness " + action;
  Rational ra = Rational::parse(a), rb = Rational::parse(b);
  if (action == "ab") {
    auto [A, B] = ab_matrices(k, ra, rb);
    rep.pass("A_k", to_text(A));
    rep.pass("B_k", to_text(B));
    rep.add("positive definite by leading minors",
            is_positive_definite(A) && is_positive_definite(B));
    rep.add("positive definite by the proof's transforms",
            positive_definite_by_transforms(k, ra, rb));
  } else if (action == "m2") {
    M2Instance inst = build_m2({k, ra, rb});
    steps_into(inst.report, rep);
    if (verify) rep.add("all identities verified", inst.report.all_pass);
  } else if (action == "lemma-m") {
    LemmaMResult r = verify_lemma_m(ra, rb);
    steps_into(r.report, rep);
  } else if (action == "m1") {
    StepReport r = verify_m1_chain(k, ra, rb);
    steps_into(r, rep);
  } else if (action == "double") {
    std::istringstream is(read_file(in));
    std::string kw;
    std::size_t n = 0;
    is >> kw >> n;
    if (kw != "ambient") throw ParseError("subspace: missing 'ambient n' line");
    FormSpace sp = FormSpace::with_identity_form(n);
    Subspace u(sp, matrix_from_stream(is));
    rep.pass("doubled", describe(doubling_embed(u)));
  } else {
    throw UnknownSpec("witness actions: ab, m2, lemma-m, m1, double");
  }
  return rep.emit(g.json);
}

int run_term(const Global& g, const std::string& action, const std::string& model,
             const std::string& text, const std::string& assigns, int samples) {
  Report rep;
  rep.command = "term " + action;
  if (action == "translate") {
    ParsedInput p = parse_input(text);
    if (!std::holds_alternative<Identity>(p)) throw SyntaxError("translate expects (= g h)");
    const Identity& id = std::get<Identity>(p);
    rep.pass("orthoimplication", render(to_orthoimplication(id.lhs, id.rhs)));
    return rep.emit(g.json);
  }
  if (model.rfind("space:", 0) == 0) {
    FormSpace sp = form_from_spec(model.substr(6));
    ParsedInput p = parse_input(text);
    std::mt19937_64 rng(g.seed);
    OrthoImplication oi;
    if (std::holds_alternative<OrthoImplication>(p)) {
      oi = std::get<OrthoImplication>(p);
    } else if (std::holds_alternative<Identity>(p)) {
      const Identity& id = std::get<Identity>(p);
      oi = to_orthoimplication(id.lhs, id.rhs);
    } else {
      throw SyntaxError("sampled mode expects (= g h) or (oimp ...)");
    }
    OimpResult r = orthoimplication_sampled(oi, sp, rng, samples);
    if (r.verdict == OimpVerdict::kFails)
      rep.fail("sampled check", "counterexample found");
    else
      rep.inconclusive("sampled check",
                       "no counterexample in " + std::to_string(samples) + " samples");
    return rep.emit(g.json);
  }
  FiniteOrtholattice l = lattice_from_spec(model);
  if (action == "eval") {
    TermPtr t = parse_term(text);
    std::map<std::string, int> env;
    std::istringstream is(assigns);
    std::string pair;
    while (std::getline(is, pair, ',')) {
      std::size_t eq = pair.find('=');
      if (eq == std::string::npos) throw UnknownSpec("assignments look like x=name,y=name");
      env[pair.substr(0, eq)] = l.index_of(pair.substr(eq + 1));
    }
    LatticeModel m{l};
    rep.pass("value", l.name(eval_term(t, m, env)));
  } else if (action == "check") {
    ParsedInput p = parse_input(text);
    if (std::holds_alternative<Identity>(p)) {
      const Identity& id = std::get<Identity>(p);
      IdentityVerdict v = identity_holds(id.lhs, id.rhs, l);
      std::ostringstream w;
      for (const auto& [name, e] : v.counterexample) w << name << "=" << l.name(e) << " ";
      rep.add("identity holds", v.holds, v.holds ? "" : w.str());
    } else if (std::holds_alternative<OrthoImplication>(p)) {
      OimpResult r = orthoimplication_holds(std::get<OrthoImplication>(p), l);
      std::ostringstream w;
      for (const auto& [name, e] : r.counterexample) w << name << "=" << l.name(e) << " ";
      rep.add("orthoimplication holds", r.verdict == OimpVerdict::kHolds,
              r.verdict == OimpVerdict::kHolds ? "" : w.str());
    } else {
      throw SyntaxError("check expects (= g h) or (oimp ...)");
    }
  } else {
    throw UnknownSpec("term actions: eval, check, translate");
  }
  return rep.emit(g.json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact computations in modular ortholattices"};
  app.require_subcommand(1);
  Global g;
  app.add_flag("--json", g.json, "emit reports as JSON");
  app.add_option("--seed", g.seed, "seed for sampled checks");

  std::string action, spec, form = "id:3", in1, in2, op, text, assigns, arg, out;
  int order = 3, k = 1, samples = 500;
  std::size_t block = 1;
  std::string a = "1", b = "1";
  std::vector<std::string> ring_args;
  bool verify = false;

  CLI::App* lat = app.add_subcommand("lattice", "finite lattice analysis");
  lat->add_option("action", action, "check|decompose|congruences|si")->required();
  lat->add_option("spec", spec, "lattice file or built-in spec")->required();

  CLI::App* space = app.add_subcommand("space", "subspace MOL operations");
  space->add_option("action", action, "ortho|meet|join|perspective")->required();
  space->add_option("--form", form, "gram matrix file or id:N");
  space->add_option("--in,--a", in1, "first subspace file");
  space->add_option("--b", in2, "second subspace file");

  CLI::App* geom = app.add_subcommand("geom", "point geometry analysis");
  geom->add_option("action", action, "components|polarity|closure|represent")->required();
  geom->add_option("file", spec, "geometry file (or lattice spec for represent)")->required();
  geom->add_option("--points,--sub", arg, "comma separated names");

  std::string frame_spec;
  CLI::App* frame = app.add_subcommand("frame", "canonical frames and ring ops");
  frame->add_option("action", action, "check|canonical|ring-op")->required();
  frame->add_option("--form", form, "gram matrix file or id:N");
  frame->add_option("--frame", frame_spec, "canonical frame spec N or NxBLOCK");
  frame->add_option("--order", order, "frame order (n >= 3)");
  frame->add_option("--block", block, "block size");
  frame->add_option("--op", op, "add|mul|neg|inv|star");
  frame->add_option("--args", ring_args, "ring element values");

  CLI::App* wit = app.add_subcommand("witness", "the frame-generated MOL constructions");
  wit->add_option("action", action, "ab|m2|lemma-m|m1|double")->required();
  wit->add_option("--k", k, "level");
  wit->add_option("--a", a, "seed a");
  wit->add_option("--b", b, "seed b");
  wit->add_option("--in", in1, "input subspace file");
  wit->add_flag("--verify", verify, "assert the displayed identities");

  CLI::App* term = app.add_subcommand("term", "term language over finite models");
  term->add_option("action", action, "eval|check|translate")->required();
  term->add_option("--model", spec, "mo:N | bool:N | o6 | prod:.. | space:FORM | FILE");
  term->add_option("--assign", assigns, "x=name,y=name");
  term->add_option("--samples", samples, "sample count for space models");
  term->add_option("text", text, "term, (= g h), or (oimp ...)");

  CLI::App* corpus = app.add_subcommand("corpus", "write built-in lattice files");
  corpus->add_option("spec", spec, "mo:N | bool:N | o6 | prod:A,B | interval:U:V:SPEC")
      ->required();
  corpus->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (lat->parsed()) return run_lattice(g, action, spec);
    if (space->parsed()) return run_space(g, action, form, in1, in2);
    if (geom->parsed()) return run_geom(g, action, spec, arg);
    if (frame->parsed()) {
      if (!frame_spec.empty()) {
        std::size_t x = frame_spec.find('x');
        order = std::stoi(frame_spec.substr(0, x));
        block = x == std::string::npos ? 1 : std::stoul(frame_spec.substr(x + 1));
      }
      return run_frame(g, action, form, order, block, op, ring_args);
    }
    if (wit->parsed()) return run_witness(g, action, k, a, b, in1, verify);
    if (term->parsed()) return run_term(g, action, spec, text, assigns, samples);
    if (corpus->parsed()) {
      FiniteOrtholattice l = lattice_from_spec(spec);
      std::string content = to_text(l);
      if (out.empty())
        std::cout << content;
      else
        write_file(out, content);
      return 0;
    }
  } catch (const UnknownSpec& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
