#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "pba/extension.hpp"
#include "pba/polytope.hpp"
#include "pba/ppt.hpp"

namespace pba {

/// Correlation spec induced by a PPT: one monomial per nonempty generator
/// subset of each context, over the generators covered by some context.
/// Returns the spec together with the covered-generator list (spec-local
/// index -> global GeneratorId).
inline std::pair<CorrelationSpec, std::vector<GeneratorId>> correlation_spec_of(const Pba& pba) {
    std::vector<GeneratorId> covered;
    for (const auto& c : pba.contexts)
        for (auto g : c.gens) covered.push_back(g);
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    if (static_cast<int>(covered.size()) > CorrelationSpec::kMembershipLimit)
        throw LimitExceeded("too many covered generators for LP membership");
    auto local_of = [&](GeneratorId g) {
        return static_cast<int>(std::lower_bound(covered.begin(), covered.end(), g) - covered.begin());
    };
    std::set<std::uint32_t> monos;
    for (const auto& c : pba.contexts) {
        int k = c.arity();
        for (std::uint32_t sub = 1; sub < (std::uint32_t(1) << k); ++sub) {
            std::uint32_t mask = 0;
            for (int j = 0; j < k; ++j)
                if ((sub >> j) & 1u) mask |= std::uint32_t(1) << local_of(c.gens[j]);
            monos.insert(mask);
        }
    }
    return {CorrelationSpec(static_cast<int>(covered.size()),
                            std::vector<std::uint32_t>(monos.begin(), monos.end())),
            covered};
}

/// The observed coordinate vector for the induced spec.
template <class Q>
std::vector<Q> correlation_vector_of(const Ppt<Q>& ppt, const CorrelationSpec& spec,
                                     const std::vector<GeneratorId>& covered) {
    std::vector<Q> p(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        std::vector<GeneratorId> gens;
        for (int b = 0; b < spec.n; ++b)
            if ((spec.monomials[j] >> b) & 1u) gens.push_back(covered[b]);
        auto m = ppt.measure_on(gens);
        Element inter = Element::one(m.arity());
        for (int b = 0; b < m.arity(); ++b) inter = meet(inter, generator_element(b, m.arity()));
        p[j] = m.value(inter);
    }
    return p;
}

template <class Q>
struct Representability {
    bool representable = false;
    CorrelationSpec spec;
    std::vector<GeneratorId> covered;
    std::vector<Q> p;
    FeasibilityCertificate<Q> certificate;
    std::optional<Measure<Q>> extension;  // over all n generators when representable
};

/// LP decision of classical representability with a certificate either way:
/// a decomposition yields the extending measure over all generators
/// (uncovered generators padded independently), an infeasibility yields a
/// separating functional.
template <class Q>
Representability<Q> classical_representable(const Ppt<Q>& ppt) {
    Representability<Q> out;
    auto [spec, covered] = correlation_spec_of(ppt.pba);
    out.spec = spec;
    out.covered = covered;
    out.p = correlation_vector_of(ppt, spec, covered);
    out.certificate = membership(out.p, spec);
    out.representable = out.certificate.feasible;
    if (!out.representable) return out;

    auto measure_covered = Measure<Q>::from_weights(spec.n, out.certificate.lambda);
    if (static_cast<int>(covered.size()) == ppt.pba.n) {
        out.extension = std::move(measure_covered);
        return out;
    }
    std::vector<GeneratorId> uncovered;
    for (GeneratorId g = 0; g < ppt.pba.n; ++g)
        if (!std::binary_search(covered.begin(), covered.end(), g)) uncovered.push_back(g);
    auto prod = product_disjoint(measure_covered, covered,
                                 Measure<Q>::uniform(static_cast<int>(uncovered.size())), uncovered);
    out.extension = std::move(prod.first);
    return out;
}

}  // namespace pba
