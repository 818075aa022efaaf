// Simplification works on a sparse polynomial view of an expression:
// a sum of terms c * prod(atom^k), where atoms are variables, function calls
// with simplified arguments, and sums that could not be multiplied out
// (bases of powers, denominators, or sums multiplying non-constant factors).
// Negative exponents stand for division.
//
// Passes, each applied once per round and kept only when the result is no
// larger than its input (ties broken by canonical key):
//   fold_constants          local folding of constant subtrees and identities
//   flatten                 Sub/Neg to Add/Mul, nested Add/Mul merged
//   collect_terms           like terms merged in the polynomial view
//   extract_common_factors  collect_terms plus pulling out shared factors
//   cancel_quotients        common factors of numerator and denominator removed
//   distribute_products     products of sums multiplied out
// Rounds repeat until nothing changes, at most 16 times.

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abb/symdiff.hpp"
#include "builders.hpp"

namespace abb {

namespace {

using Mono = std::map<std::string, int>;
using Poly = std::map<Mono, double>;

struct Term {
  Mono mono;
  double coef = 1.0;
};

constexpr int kMaxRounds = 16;
constexpr int kMaxFactorSteps = 8;

void add_term(Poly& p, const Mono& m, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) p.erase(it);
  }
}

Mono mono_mul(Mono a, const Mono& b) {
  for (const auto& [k, e] : b) {
    int& slot = a[k];
    slot += e;
    if (slot == 0) a.erase(k);
  }
  return a;
}

Mono mono_pow(const Mono& a, int k) {
  Mono out;
  if (k == 0) return out;
  for (const auto& [key, e] : a) out[key] = e * k;
  return out;
}

Poly constant_poly(double c) {
  Poly p;
  add_term(p, {}, c);
  return p;
}

Poly scaled(const Poly& p, double s) {
  Poly out;
  for (const auto& [m, c] : p) add_term(out, m, c * s);
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) add_term(out, mono_mul(ma, mb), ca * cb);
  }
  return out;
}

Term term_of(const Poly& p) {
  const auto& [m, c] = *p.begin();
  return {m, c};
}

Term term_mul(const Term& a, const Term& b) { return {mono_mul(a.mono, b.mono), a.coef * b.coef}; }

bool integral(double c) { return std::fabs(c) < 1e15 && std::floor(c) == c; }

struct Options {
  bool distribute = false;
  bool factor = false;
};

class Collector {
 public:
  explicit Collector(Options opt) : opt_(opt) {}

  Expr run(const Expr& e) { return render(to_poly(e)); }

 private:
  struct Atom {
    Expr expr;
    bool is_exp = false;
    std::optional<Poly> sum;  // set for sum atoms
  };

  struct Factored {
    double g = 1.0;
    Mono f;
    Poly rest;
  };

  Mono atom_mono(const Expr& e) {
    std::string key = canonical_key(e);
    const bool is_exp = e.kind() == NodeKind::Func && e.function() == Function::Exp;
    atoms_.try_emplace(key, Atom{e, is_exp, std::nullopt});
    return {{std::move(key), 1}};
  }

  Term sum_atom(const Poly& p) {
    Expr e = render_sum(p);
    std::string key = canonical_key(e);
    atoms_.try_emplace(key, Atom{e, false, p});
    return {{{std::move(key), 1}}, 1.0};
  }

  Poly to_poly(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return constant_poly(e.value());
      case NodeKind::Variable: return {{atom_mono(e), 1.0}};
      case NodeKind::Add: {
        Poly out;
        for (const auto& c : e.children()) {
          for (const auto& [m, k] : to_poly(c)) add_term(out, m, k);
        }
        return out;
      }
      case NodeKind::Sub: {
        Poly out = to_poly(e.child(0));
        for (const auto& [m, k] : to_poly(e.child(1))) add_term(out, m, -k);
        return out;
      }
      case NodeKind::Neg: return scaled(to_poly(e.child(0)), -1.0);
      case NodeKind::Mul: return product(e);
      case NodeKind::Div: return quotient(e);
      case NodeKind::Pow: return power(e);
      case NodeKind::Func: {
        Expr arg = render(to_poly(e.child(0)));
        Expr f = build::func(e.function(), arg);
        if (f.is_constant()) return constant_poly(f.value());
        return {{atom_mono(f), 1.0}};
      }
    }
    return {};
  }

  Poly product(const Expr& e) {
    Term scalar;
    std::vector<Poly> sums;
    for (const auto& c : e.children()) {
      Poly p = to_poly(c);
      if (p.empty()) return {};
      if (p.size() == 1) {
        scalar = term_mul(scalar, term_of(p));
      } else {
        sums.push_back(std::move(p));
      }
    }
    if (sums.empty()) return finish(scalar);
    if (opt_.distribute) {
      Poly acc{{scalar.mono, scalar.coef}};
      for (const auto& s : sums) acc = poly_mul(acc, s);
      Poly out;
      for (const auto& [m, c] : acc) {
        for (const auto& [m2, c2] : finish({m, c})) add_term(out, m2, c2);
      }
      return out;
    }
    if (sums.size() == 1 && scalar.mono.empty()) return scaled(sums.front(), scalar.coef);
    for (const auto& s : sums) scalar = term_mul(scalar, sum_factor(s));
    return finish(scalar);
  }

  Poly quotient(const Expr& e) {
    Poly num = to_poly(e.child(0));
    Poly den = to_poly(e.child(1));
    if (den.empty()) return {{atom_mono(Expr::div(render(num), render(den))), 1.0}};
    if (num.empty()) return {};
    Term d = den.size() == 1 ? term_of(den) : sum_factor(den);
    Term inv{mono_pow(d.mono, -1), 1.0 / d.coef};
    if (num.size() > 1 && !opt_.distribute) return finish(term_mul(sum_factor(num), inv));
    Poly out;
    for (const auto& [m, c] : num) {
      for (const auto& [m2, c2] : finish(term_mul({m, c}, inv))) add_term(out, m2, c2);
    }
    return out;
  }

  Poly power(const Expr& e) {
    const int k = e.exponent();
    Poly base = to_poly(e.child(0));
    if (base.empty()) {
      if (k > 0) return {};
      return {{atom_mono(Expr::pow(render(base), k)), 1.0}};
    }
    Term t = base.size() == 1 ? term_of(base) : sum_factor(base);
    return finish({mono_pow(t.mono, k), std::pow(t.coef, k)});
  }

  // A multi-term sum as a single term: content times an atom for the rest.
  Term sum_factor(const Poly& p) {
    if (opt_.factor) {
      Factored fo = factor_out(p);
      if (!fo.f.empty()) {
        if (fo.rest.empty()) return {{}, 0.0};
        Term r = fo.rest.size() == 1 ? term_of(fo.rest) : sum_atom(fo.rest);
        return term_mul({fo.f, fo.g}, r);
      }
    }
    return sum_atom(p);
  }

  // Merges products of distinct exponentials, then expands a lone sum atom.
  Poly finish(Term t) {
    std::vector<std::pair<std::string, int>> exps;
    for (const auto& [key, k] : t.mono) {
      if (atoms_.at(key).is_exp) exps.emplace_back(key, k);
    }
    if (exps.size() >= 2) {
      Poly arg;
      for (const auto& [key, k] : exps) {
        for (const auto& [m, c] : to_poly(atoms_.at(key).expr.child(0))) add_term(arg, m, c * k);
        t.mono.erase(key);
      }
      Expr merged = build::func(Function::Exp, render(arg));
      if (merged.is_constant()) {
        t.coef *= merged.value();
      } else {
        t.mono = mono_mul(t.mono, atom_mono(merged));
      }
    }
    if (t.coef == 0.0) return {};
    if (t.mono.size() == 1 && t.mono.begin()->second == 1) {
      const Atom& a = atoms_.at(t.mono.begin()->first);
      if (a.sum) return scaled(*a.sum, t.coef);
    }
    return {{t.mono, t.coef}};
  }

  Poly linearize(const Poly& p) {
    Poly out;
    for (const auto& [m, c] : p) {
      for (const auto& [m2, c2] : finish({m, c})) add_term(out, m2, c2);
    }
    return out;
  }

  // Atoms present in every term with the same sign (smallest exponent) and
  // the integer content of the coefficients.
  static std::pair<double, Mono> common_part(const Poly& p) {
    std::map<std::string, std::pair<int, int>> range;  // key -> (min, max) over terms
    std::map<std::string, std::size_t> seen;
    for (const auto& [m, c] : p) {
      for (const auto& [key, e] : m) {
        auto [it, fresh] = range.try_emplace(key, e, e);
        if (!fresh) {
          it->second.first = std::min(it->second.first, e);
          it->second.second = std::max(it->second.second, e);
        }
        ++seen[key];
      }
    }
    Mono f;
    for (const auto& [key, mm] : range) {
      if (seen[key] != p.size()) continue;
      if (mm.first > 0) f[key] = mm.first;
      if (mm.second < 0) f[key] = mm.first;
    }
    bool all_int = true;
    long long g = 0;
    for (const auto& [m, c] : p) {
      if (!integral(c)) {
        all_int = false;
        break;
      }
      g = std::gcd(g, std::llabs(static_cast<long long>(c)));
    }
    return {all_int && g > 0 ? static_cast<double>(g) : 1.0, f};
  }

  Factored factor_out(const Poly& p) {
    Factored fo;
    fo.rest = p;
    for (int step = 0; step < kMaxFactorSteps && fo.rest.size() > 1; ++step) {
      auto [g, f] = common_part(fo.rest);
      if (f.empty()) break;
      Mono inv = mono_pow(f, -1);
      Poly divided;
      for (const auto& [m, c] : fo.rest) add_term(divided, mono_mul(m, inv), c / g);
      fo.rest = linearize(divided);
      fo.g *= g;
      fo.f = mono_mul(fo.f, f);
    }
    return fo;
  }

  Expr atom_power(const std::string& key, int k) {
    const Expr& base = atoms_.at(key).expr;
    return k == 1 ? base : Expr::pow(base, k);
  }

  Expr render_term(const Term& t) {
    std::vector<Expr> num;
    std::vector<Expr> den;
    for (const auto& [key, k] : t.mono) {
      if (k > 0) num.push_back(atom_power(key, k));
      if (k < 0) den.push_back(atom_power(key, -k));
    }
    Expr top;
    if (num.empty()) {
      top = Expr::constant(t.coef);
    } else if (t.coef == 1.0) {
      top = Expr::mul(std::move(num));
    } else if (t.coef == -1.0) {
      top = Expr::neg(Expr::mul(std::move(num)));
    } else {
      num.insert(num.begin(), Expr::constant(t.coef));
      top = Expr::mul(std::move(num));
    }
    if (den.empty()) return top;
    return Expr::div(top, Expr::mul(std::move(den)));
  }

  Expr render_sum(const Poly& p) {
    if (p.empty()) return Expr::constant(0.0);
    auto it = p.begin();
    Expr acc = render_term({it->first, it->second});
    for (++it; it != p.end(); ++it) {
      if (it->second < 0.0) {
        acc = Expr::sub(acc, render_term({it->first, -it->second}));
      } else {
        acc = Expr::add({acc, render_term({it->first, it->second})});
      }
    }
    return acc;
  }

  Expr render(const Poly& p) {
    if (p.empty()) return Expr::constant(0.0);
    if (p.size() == 1) return render_term(term_of(p));
    if (opt_.factor) {
      Factored fo = factor_out(p);
      if (!fo.f.empty()) {
        if (fo.rest.empty()) return Expr::constant(0.0);
        Term r = fo.rest.size() == 1 ? term_of(fo.rest) : sum_atom(fo.rest);
        return render_term(term_mul({fo.f, fo.g}, r));
      }
    }
    return render_sum(p);
  }

  Options opt_;
  std::map<std::string, Atom> atoms_;
};

Expr rebuild(const Expr& e, std::vector<Expr> kids) {
  switch (e.kind()) {
    case NodeKind::Add: return Expr::add(std::move(kids));
    case NodeKind::Mul: return Expr::mul(std::move(kids));
    case NodeKind::Neg: return Expr::neg(kids[0]);
    case NodeKind::Sub: return Expr::sub(kids[0], kids[1]);
    case NodeKind::Div: return Expr::div(kids[0], kids[1]);
    case NodeKind::Pow: return Expr::pow(kids[0], e.exponent());
    case NodeKind::Func: return Expr::func(e.function(), kids[0]);
    default: return e;
  }
}

Expr rebuild_bottom_up(const Expr& e, const std::function<Expr(const Expr&)>& at_node) {
  if (e.children().empty()) return at_node(e);
  std::vector<Expr> kids;
  kids.reserve(e.children().size());
  for (const auto& c : e.children()) kids.push_back(rebuild_bottom_up(c, at_node));
  return at_node(rebuild(e, std::move(kids)));
}

// Multiplicative decomposition used by cancel_quotients.
struct Factors {
  double coef = 1.0;
  std::map<std::string, std::pair<Expr, int>> f;
  std::map<std::string, int> signs;  // bit 1: seen in numerator, bit 2: denominator
  int coef_sides = 0;
};

void factorize(const Expr& e, int k, Factors& out) {
  switch (e.kind()) {
    case NodeKind::Constant:
      if (e.value() != 1.0) out.coef_sides |= k > 0 ? 1 : 2;
      out.coef *= std::pow(e.value(), k);
      return;
    case NodeKind::Mul:
      for (const auto& c : e.children()) factorize(c, k, out);
      return;
    case NodeKind::Neg:
      out.coef *= (k % 2 == 0) ? 1.0 : -1.0;
      factorize(e.child(0), k, out);
      return;
    case NodeKind::Pow: factorize(e.child(0), k * e.exponent(), out); return;
    case NodeKind::Div:
      factorize(e.child(0), k, out);
      factorize(e.child(1), -k, out);
      return;
    default: {
      const std::string key = canonical_key(e);
      auto& slot = out.f.try_emplace(key, e, 0).first->second;
      slot.second += k;
      out.signs[key] |= k > 0 ? 1 : 2;
    }
  }
}

Expr cancel_at(const Expr& e) {
  if (e.kind() != NodeKind::Div) return e;
  Factors fs;
  factorize(e, 1, fs);
  bool cancels = fs.coef_sides == 3;
  for (const auto& [key, s] : fs.signs) cancels = cancels || s == 3;
  if (!cancels || !std::isfinite(fs.coef)) return e;
  std::vector<Expr> num;
  std::vector<Expr> den;
  for (const auto& [key, pe] : fs.f) {
    const auto& [base, k] = pe;
    if (k > 0) num.push_back(k == 1 ? base : Expr::pow(base, k));
    if (k < 0) den.push_back(k == -1 ? base : Expr::pow(base, -k));
  }
  if (fs.coef != 1.0 || num.empty()) num.insert(num.begin(), Expr::constant(fs.coef));
  Expr top = Expr::mul(std::move(num));
  if (den.empty()) return top;
  return Expr::div(top, Expr::mul(std::move(den)));
}

Expr fold_at(const Expr& e) {
  const auto kids = e.children();
  switch (e.kind()) {
    case NodeKind::Add: return build::add({kids.begin(), kids.end()});
    case NodeKind::Mul: return build::mul({kids.begin(), kids.end()});
    case NodeKind::Neg: return build::neg(kids[0]);
    case NodeKind::Sub: return build::sub(kids[0], kids[1]);
    case NodeKind::Div: return build::div(kids[0], kids[1]);
    case NodeKind::Pow: return build::pow(kids[0], e.exponent());
    case NodeKind::Func: return build::func(e.function(), kids[0]);
    default: return e;
  }
}

bool better(const Expr& candidate, const Expr& current) {
  const std::size_t a = node_count(candidate);
  const std::size_t b = node_count(current);
  if (a != b) return a < b;
  return canonical_key(candidate) < canonical_key(current);
}

}  // namespace

namespace passes {

Expr fold_constants(const Expr& e) { return rebuild_bottom_up(e, fold_at); }

Expr flatten(const Expr& e) { return normalize_structure(e); }

Expr collect_terms(const Expr& e) { return Collector({}).run(e); }

Expr extract_common_factors(const Expr& e) { return Collector({.distribute = false, .factor = true}).run(e); }

Expr cancel_quotients(const Expr& e) { return rebuild_bottom_up(e, cancel_at); }

Expr distribute_products(const Expr& e) { return Collector({.distribute = true, .factor = false}).run(e); }

}  // namespace passes

Expr simplify(const Expr& e, SimplifyStats* stats) {
  using Pass = Expr (*)(const Expr&);
  static constexpr Pass kPipeline[] = {
      passes::fold_constants,         passes::flatten,          passes::collect_terms,
      passes::extract_common_factors, passes::cancel_quotients, passes::distribute_products,
      passes::fold_constants,
  };
  Expr cur = e;
  int rounds = 0;
  for (; rounds < kMaxRounds; ++rounds) {
    const Expr start = cur;
    for (Pass pass : kPipeline) {
      Expr candidate = pass(cur);
      if (better(candidate, cur)) cur = std::move(candidate);
    }
    if (structurally_equal(cur, start)) break;
  }
  if (stats) {
    stats->rounds = std::min(rounds + 1, kMaxRounds);
    stats->nodes_before = node_count(e);
    stats->nodes_after = node_count(cur);
  }
  return cur;
}

}  // namespace abb
