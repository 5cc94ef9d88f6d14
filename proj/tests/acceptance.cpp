// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exits with the number of failed
// criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "pba/extension.hpp"
#include "pba/horn_tarski.hpp"
#include "pba/quantum.hpp"
#include "pba/quotient.hpp"
#include "pba/representability.hpp"

using namespace pba;

namespace {

std::mt19937_64 gen(424242ULL);

Rat rat_between(const Rat& lo, const Rat& hi, long steps = 16) {
    std::uniform_int_distribution<long> d(0, steps);
    return lo + (hi - lo) * Rat(d(gen), steps);
}

struct Harness {
    int failed = 0;

    void run(const std::string& label, double budget_s, const std::function<bool(std::string&)>& body) {
        std::string detail;
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > budget_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("runtime budget exceeded");
        }
        std::printf("[%s] %s (%.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", label.c_str(), secs,
                    budget_s);
        if (!detail.empty()) std::printf("       %s\n", detail.c_str());
        if (!ok) ++failed;
    }
};

ThreeSpec<Rat> random_three_spec() {
    Rat p1 = rat_between(0, 1), p2 = rat_between(0, 1), p3 = rat_between(0, 1);
    Rat p13 = rat_between(std::max(Rat(0), p1 + p3 - 1), std::min(p1, p3));
    Rat p23 = rat_between(std::max(Rat(0), p2 + p3 - 1), std::min(p2, p3));
    return {p1, p2, p3, p13, p23};
}

Ppt<Rat> bipartite_ppt(const std::vector<Rat>& singles, std::size_t left,
                       const std::vector<Rat>& pair_values) {
    std::size_t right = singles.size() - left;
    std::vector<Context> ctxs;
    for (std::size_t a = 0; a < left; ++a)
        for (std::size_t b = 0; b < right; ++b)
            ctxs.push_back(Context({static_cast<int>(a), static_cast<int>(left + b)}));
    Pba pba(static_cast<int>(singles.size()), ctxs);
    State<Rat> st;
    std::size_t idx = 0;
    for (const auto& c : pba.contexts) {
        Rat pa = singles[c.gens[0]], pb = singles[c.gens[1]];
        st.measures.push_back(measure_from_intersections<Rat>(2, {1, pa, pb, pair_values[idx++]}));
    }
    return Ppt<Rat>{pba, st};
}

Ppt<Rat> random_bell_ppt(bool adversarial) {
    std::vector<Rat> singles(4);
    for (auto& p : singles) p = rat_between(Rat(1, 8), Rat(7, 8), 8);
    std::vector<Rat> pairs;
    int flip = std::uniform_int_distribution<int>(0, 3)(gen);
    int i = 0;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) {
            Rat lo = std::max(Rat(0), singles[a] + singles[2 + b] - 1);
            Rat hi = std::min(singles[a], singles[2 + b]);
            pairs.push_back(adversarial ? (i == flip ? lo : hi) : rat_between(lo, hi, 8));
            ++i;
        }
    return bipartite_ppt(singles, 2, pairs);
}

/// Random measure with integer weights over 2^k atoms.
Measure<Rat> random_measure(int arity) {
    std::size_t size = std::size_t(1) << arity;
    std::uniform_int_distribution<long> d(0, 7);
    std::vector<long> raw(size);
    long total = 0;
    while (total == 0) {
        total = 0;
        for (auto& x : raw) {
            x = d(gen);
            total += x;
        }
    }
    std::vector<Rat> w(size);
    for (std::size_t i = 0; i < size; ++i) w[i] = Rat(raw[i], total);
    return Measure<Rat>::from_weights(arity, std::move(w));
}

/// Random forest-shaped PPT on at most `max_gens` generators. A new context
/// may inherit generators only from one parent, and only generators the
/// parent still owns alone; each generator then belongs to at most two
/// contexts and every overlap is a tree edge, so the compatibility graph is
/// a forest by construction. Measures are restrictions of one global random
/// measure.
Ppt<Rat> random_forest_ppt(int max_gens) {
    std::uniform_int_distribution<int> dn(2, max_gens);
    int n = dn(gen);
    auto global = random_measure(n);
    std::vector<std::vector<int>> nodes;
    std::vector<int> owner_count(n, 0);
    int next_gen = 0;
    std::uniform_int_distribution<int> fresh_d(1, 2);
    while (next_gen < n) {
        std::vector<int> node;
        bool attach = !nodes.empty() && std::uniform_int_distribution<int>(0, 2)(gen) > 0;
        if (attach) {
            const auto& parent = nodes[std::uniform_int_distribution<std::size_t>(0, nodes.size() - 1)(gen)];
            std::vector<int> pool;  // generators still private to the parent
            for (int g : parent)
                if (owner_count[g] == 1) pool.push_back(g);
            std::size_t cap = pool.size() == parent.size() ? pool.size() - 1 : pool.size();
            if (cap > 0) {
                std::shuffle(pool.begin(), pool.end(), gen);
                std::uniform_int_distribution<std::size_t> pick(1, cap);
                node.assign(pool.begin(), pool.begin() + pick(gen));
            }
        }
        int fresh = std::min(fresh_d(gen), n - next_gen);
        if (fresh == 0) break;
        for (int f = 0; f < fresh; ++f) node.push_back(next_gen++);
        std::sort(node.begin(), node.end());
        for (int g : node) ++owner_count[g];
        nodes.push_back(node);
    }
    std::vector<Context> ctxs;
    for (auto& nd : nodes) ctxs.push_back(Context(nd));
    Pba pba(n, ctxs);
    State<Rat> st;
    for (const auto& c : pba.contexts) {
        std::vector<int> kept(c.gens.begin(), c.gens.end());
        st.measures.push_back(global.restrict_to(kept));
    }
    return Ppt<Rat>{pba, st};
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

int main() {
    Harness h;

    h.run("criterion 1: three-observable extension suite, 10000 random admissible inputs", 10,
          [&](std::string& detail) {
              Element a1 = generator_element(0, 3), a2 = generator_element(1, 3),
                      a3 = generator_element(2, 3);
              for (int rep = 0; rep < 10000; ++rep) {
                  auto s = random_three_spec();
                  auto box = chi_eta_intervals(s);
                  if (!(box.eta_lo <= box.eta_hi && box.chi_lo <= box.chi_hi)) {
                      detail = "empty admissible box at case " + std::to_string(rep);
                      return false;
                  }
                  auto m = extend_three(s);  // from_weights enforces >= 0 and sum 1 exactly
                  if (m.value(a1) != s.p1 || m.value(a2) != s.p2 || m.value(a3) != s.p3 ||
                      m.value(meet(a1, a3)) != s.p13 || m.value(meet(a2, a3)) != s.p23) {
                      detail = "marginal mismatch at case " + std::to_string(rep);
                      return false;
                  }
              }
              return true;
          });

    h.run("criterion 2: four-observable gluing biconditional on 1000 random Bell states", 60,
          [&](std::string& detail) {
              for (int rep = 0; rep < 1000; ++rep) {
                  auto ppt = random_bell_ppt(rep % 3 == 0);
                  auto glue = bell_glue_extension(ppt);
                  bool lp = classical_representable(ppt).representable;
                  if (glue.has_value() != lp) {
                      detail = "gluing and LP disagree at case " + std::to_string(rep);
                      return false;
                  }
                  if (glue) {
                      for (std::size_t ci = 0; ci < ppt.pba.contexts.size(); ++ci) {
                          std::vector<int> kept(ppt.pba.contexts[ci].gens.begin(),
                                                ppt.pba.contexts[ci].gens.end());
                          if (glue->restrict_to(kept) != ppt.state.measures[ci]) {
                              detail = "glued extension does not restrict at case " +
                                       std::to_string(rep);
                              return false;
                          }
                      }
                  }
              }
              return true;
          });

    h.run("criterion 3: CHSH singlet fixture violates with a verified separator", 1,
          [&](std::string& detail) {
              auto [labels, projs] =
                  chsh_projectors({0.0, kPi / 2}, {3 * kPi / 4, 5 * kPi / 4});
              auto ppba = build_projection_pba(labels, projs);
              auto ppt = free_state_from_projections(ppba, singlet_state());
              double r2 = std::sqrt(2.0);
              auto pair_value = [&](int a, int b) {
                  auto m = ppt.measure_on({a, b});
                  return m.value(meet(generator_element(0, 2), generator_element(1, 2)));
              };
              double q_hi = (2 + r2) / 8, q_lo = (2 - r2) / 8;
              if (std::abs(pair_value(0, 2) - q_hi) > 1e-9 || std::abs(pair_value(0, 3) - q_hi) > 1e-9 ||
                  std::abs(pair_value(1, 3) - q_hi) > 1e-9 || std::abs(pair_value(1, 2) - q_lo) > 1e-9) {
                  detail = "pair values off the (2 +- sqrt 2)/8 targets";
                  return false;
              }
              double ch = pair_value(0, 2) + pair_value(0, 3) + pair_value(1, 3) - pair_value(1, 2) -
                          ppt.measure_on({0}).value(generator_element(0, 1)) -
                          ppt.measure_on({3}).value(generator_element(0, 1));
              if (std::abs(ch - (r2 - 1) / 2) > 1e-9 || !(ch > 0)) {
                  detail = "CH expression value off (sqrt 2 - 1)/2";
                  return false;
              }
              if (chsh_condition(ppt).representable) {
                  detail = "interval-overlap condition did not refuse the singlet";
                  return false;
              }
              auto lp = classical_representable(ppt);
              if (lp.representable || !verify_certificate(lp.p, lp.spec, lp.certificate)) {
                  detail = "LP separator missing or unverifiable against the 16 vertices";
                  return false;
              }
              return true;
          });

    h.run("criterion 4: per-s block has 48 facets and a 32-facet type-1..4 grouping", 300,
          [&](std::string& detail) {
              CorrelationSpec spec(4, {0b0001, 0b0010, 0b0100, 0b1000, 0b1001, 0b1010, 0b1100, 0b0011,
                                       0b0101, 0b0110, 0b0111});
              auto facets = enumerate_facets(spec);
              if (facets.size() != 48) {
                  detail = "facet count " + std::to_string(facets.size()) + " != 48";
                  return false;
              }
              auto counted = classify_facet_types(facets, {7, 8, 9, 10});
              if (counted.typed != 32) {
                  detail = "finding: the canonical irredundant facet list has " +
                           std::to_string(counted.typed) +
                           " type-1..4 facets and " + std::to_string(counted.given_only) +
                           " facets purely about the observed block (exactly the 12 facets of the "
                           "7-dimensional block polytope); the quoted 32/16 split is not reproduced "
                           "by pattern matching, base-facet comparison, or per-expression domination "
                           "analysis. The unit suite pins the verified 36/12 behavior.";
                  return false;
              }
              return counted.unmatched == 0;
          });

    h.run("criterion 5: 500 random forest PPTs glue exactly and agree with the LP", 60,
          [&](std::string& detail) {
              for (int rep = 0; rep < 500; ++rep) {
                  auto ppt = random_forest_ppt(8);
                  Measure<Rat> glued = extend_tree(ppt, ppt.pba.contexts);
                  for (std::size_t ci = 0; ci < ppt.pba.contexts.size(); ++ci) {
                      std::vector<int> kept(ppt.pba.contexts[ci].gens.begin(),
                                            ppt.pba.contexts[ci].gens.end());
                      if (glued.restrict_to(kept) != ppt.state.measures[ci]) {
                          detail = "restriction mismatch at case " + std::to_string(rep);
                          return false;
                      }
                  }
                  if (!classical_representable(ppt).representable) {
                      detail = "LP disagrees with the tree extension at case " + std::to_string(rep);
                      return false;
                  }
              }
              return true;
          });

    h.run("criterion 6: Horn-Tarski extension matches LP membership on 200 fixtures", 120,
          [&](std::string& detail) {
              for (int rep = 0; rep < 200; ++rep) {
                  std::uniform_int_distribution<int> dn(2, 4);
                  int n = dn(gen);
                  // monomial domain: singletons plus a few random subsets
                  std::set<std::uint32_t> monos;
                  for (int i = 0; i < n; ++i) monos.insert(std::uint32_t(1) << i);
                  std::uniform_int_distribution<std::uint32_t> dm(1, (1u << n) - 1);
                  for (int extra = 0; extra < n; ++extra) monos.insert(dm(gen));
                  CorrelationSpec spec(n, std::vector<std::uint32_t>(monos.begin(), monos.end()));

                  bool from_measure = rep % 2 == 0;
                  std::vector<Rat> p(spec.dim());
                  Measure<Rat> source = random_measure(n);
                  for (std::size_t j = 0; j < spec.dim(); ++j) {
                      Element e = Element::one(n);
                      for (int g = 0; g < n; ++g)
                          if ((spec.monomials[j] >> g) & 1u) e = meet(e, generator_element(g, n));
                      p[j] = from_measure ? source.value(e) : rat_between(0, 1, 12);
                  }
                  std::vector<std::pair<Element, Rat>> entries = {{Element::one(n), Rat(1)}};
                  for (std::size_t j = 0; j < spec.dim(); ++j) {
                      Element e = Element::one(n);
                      for (int g = 0; g < n; ++g)
                          if ((spec.monomials[j] >> g) & 1u) e = meet(e, generator_element(g, n));
                      entries.emplace_back(e, p[j]);
                  }
                  auto f = PartialFunction<Rat>::make(n, entries);
                  bool member = membership(p, spec).feasible;
                  bool extended = true;
                  try {
                      auto m = extend_full(f);
                      for (const auto& [e, v] : entries)
                          if (m.value(e) != v) {
                              detail = "extension does not honor its inputs at case " +
                                       std::to_string(rep);
                              return false;
                          }
                  } catch (const NotExtensible&) {
                      extended = false;
                  }
                  if (extended != member) {
                      detail = "extension and membership disagree at case " + std::to_string(rep);
                      return false;
                  }
                  if (from_measure && !is_partial_measure(f, 4).pass_bounded) {
                      detail = "a true measure restriction failed the bounded sequence check";
                      return false;
                  }
              }
              return true;
          });

    h.run("criterion 7: quotient pipeline on CHSH passes; the triangle is rejected", 5,
          [&](std::string& detail) {
              auto [labels, projs] =
                  chsh_projectors({0.0, kPi / 2}, {3 * kPi / 4, 5 * kPi / 4});
              auto target = build_projection_pba(labels, projs);
              std::vector<QuantumState> states = {singlet_state(),
                                                  QuantumState::pure({1.0, 0.0, 0.0, 0.0}),
                                                  QuantumState::pure({0.0, 0.0, 0.0, 1.0})};
              auto free_ht = build_free_ht(target, labels, projs, states);
              auto report = verify_empirical_quotient_quantum(free_ht, states);
              if (!report.all()) {
                  detail = "CHSH quotient conditions failed";
                  for (const auto& f : report.findings) detail += "; " + f;
                  return false;
              }

              // the three-context triangle identifying A~B~C~A^c
              Pba tri(3, {Context({0, 1}), Context({1, 2}), Context({0, 2})});
              auto equal_pair = Measure<Rat>::from_weights(2, {Rat(1, 2), 0, 0, Rat(1, 2)});
              auto anti_pair = Measure<Rat>::from_weights(2, {0, Rat(1, 2), Rat(1, 2), 0});
              State<Rat> st;
              st.measures = {equal_pair, equal_pair, anti_pair};
              QuotientRelation rel;
              Element z_eq(2);
              z_eq.add_atom(0b01);
              z_eq.add_atom(0b10);
              Element z_anti(2);
              z_anti.add_atom(0b00);
              z_anti.add_atom(0b11);
              rel.zero_atoms = {z_eq, z_eq, z_anti};
              auto tri_report = verify_empirical_quotient(tri, std::vector<State<Rat>>{st}, rel);
              if (tri_report.operations_preserved) {
                  detail = "triangle transitivity contradiction was not detected";
                  return false;
              }
              bool witnessed = false;
              for (const auto& w : tri_report.findings)
                  if (w.find("via:") != std::string::npos) witnessed = true;
              if (!witnessed) {
                  detail = "triangle rejection carries no transitivity witness";
                  return false;
              }
              return true;
          });

    h.run("criterion 8: representable fixtures admit homomorphisms; free Bell has 16 and embeds", 5,
          [&](std::string& detail) {
              auto [labels, projs] =
                  chsh_projectors({0.0, kPi / 2}, {3 * kPi / 4, 5 * kPi / 4});
              auto target = build_projection_pba(labels, projs);
              auto product_state = QuantumState::pure({0.36, 0.48, 0.48, 0.64});
              std::vector<QuantumState> states = {product_state,
                                                  QuantumState::pure({1.0, 0.0, 0.0, 0.0}),
                                                  QuantumState::pure({0.0, 0.0, 0.0, 1.0})};
              auto free_ht = build_free_ht(target, labels, projs, states);
              for (const auto& st : free_ht.states) {
                  Ppt<double> ppt{free_ht.pba, st};
                  if (classical_representable(ppt).representable &&
                      enumerate_homomorphisms(free_ht.pba, free_ht.relation).empty()) {
                      detail = "a representable fixture has no homomorphisms";
                      return false;
                  }
              }

              // orthogonal pair: relation present, representable, homomorphisms exist
              CMatrix p(2), q(2);
              p.at(0, 0) = 1;
              q.at(1, 1) = 1;
              std::vector<QuantumState> two = {QuantumState::pure({0.6, 0.8}),
                                               QuantumState::pure({1.0, 0.0})};
              auto orth = build_free_ht(build_projection_pba({"P", "Q"}, {p, q}), {"P", "Q"}, {p, q}, two);
              for (const auto& st : orth.states) {
                  Ppt<double> ppt{orth.pba, st};
                  if (quotient_representable(ppt, orth.relation).feasible &&
                      enumerate_homomorphisms(orth.pba, orth.relation).empty()) {
                      detail = "orthogonal-pair quotient lost its homomorphisms";
                      return false;
                  }
              }

              auto homs = enumerate_homomorphisms(free_ht.pba, free_ht.relation);
              if (homs.size() != 16) {
                  detail = "free Bell homomorphism count " + std::to_string(homs.size()) + " != 16";
                  return false;
              }
              if (!check_embeddable(free_ht.pba, free_ht.relation).embeddable) {
                  detail = "free Bell algebra failed the embeddability check";
                  return false;
              }
              return true;
          });

    std::printf("%d of 8 criteria failed\n", h.failed);
    return h.failed;
}
