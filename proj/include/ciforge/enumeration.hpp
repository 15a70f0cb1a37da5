#pragma once

#include "concept.hpp"
#include "interpretation.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace ciforge {

/// Canonical concepts over a signature, bounded by role depth and size, laid
/// out in layers. A prime is an atom or ∃r.F; a non-⊥ canonical concept is ⊤
/// or a set of distinct primes. Layer k holds the fillers that may sit under
/// d-k existentials, so their size budget is cap-(d-k).
class ConceptSpace {
public:
    ConceptSpace(const Signature& sig, std::size_t depth, std::size_t size_cap)
        : depth_(depth), cap_(size_cap) {
        for (const auto& a : sig.concept_names)
            atoms_.push_back(Concept::atom(a));
        for (const auto& r : sig.role_names)
            roles_.push_back(Symbol(r));
        if (size_cap == 0)
            return;
        primes_.resize(depth + 1);
        fillers_.resize(depth + 1);
        for (std::size_t k = 0; k <= depth; ++k) {
            std::size_t budget = budget_at(k);
            auto& pr = primes_[k];
            if (budget >= 1)
                pr = atoms_;
            if (k > 0)
                for (auto r : roles_)
                    for (const auto& f : fillers_[k - 1])
                        if (1 + f.size() <= budget)
                            pr.push_back(Concept::exists(r, f));
            if (k < depth) {
                auto& fl = fillers_[k];
                if (budget >= 1)
                    fl.push_back(Concept::top());
                for_each_prime_set(pr, budget, [&](const std::vector<std::size_t>& idx) {
                    std::vector<Concept> parts;
                    for (auto i : idx)
                        parts.push_back(pr[i]);
                    fl.push_back(Concept::conjunction(std::move(parts)));
                });
            }
        }
    }

    std::size_t depth() const noexcept { return depth_; }
    std::size_t size_cap() const noexcept { return cap_; }

    /// Primes allowed at the top level, i.e. with depth <= d and size <= cap.
    const std::vector<Concept>& top_primes() const {
        static const std::vector<Concept> none;
        return primes_.empty() ? none : primes_.back();
    }
    const std::vector<Concept>& primes(std::size_t k) const { return primes_.at(k); }
    const std::vector<Concept>& fillers(std::size_t k) const { return fillers_.at(k); }

    /// Calls `f` with the indices of every non-empty set of primes from `pr`
    /// whose sizes sum to at most `budget`. Indices are increasing.
    template <class F>
    static void for_each_prime_set(const std::vector<Concept>& pr, std::size_t budget, F&& f) {
        // next[b][i]: first index >= i whose size fits in b; skips oversized
        // primes in O(1) instead of rescanning them at every level.
        const std::size_t n = pr.size();
        std::size_t max_size = 0;
        for (const auto& p : pr)
            max_size = std::max<std::size_t>(max_size, p.size());
        const std::size_t top = std::min(budget, max_size);
        std::vector<std::vector<std::uint32_t>> next(top + 1, std::vector<std::uint32_t>(n + 1, static_cast<std::uint32_t>(n)));
        for (std::size_t b = 1; b <= top; ++b)
            for (std::size_t i = n; i-- > 0;)
                next[b][i] = pr[i].size() <= b ? static_cast<std::uint32_t>(i) : next[b][i + 1];
        std::vector<std::size_t> idx;
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t left) {
            const auto& nx = next[std::min(left, top)];
            for (std::size_t i = nx[from]; i < n; i = nx[i + 1]) {
                idx.push_back(i);
                f(static_cast<const std::vector<std::size_t>&>(idx));
                std::size_t rest = left - pr[i].size();
                if (rest > 0 && i + 1 < n)
                    rec(i + 1, rest);
                idx.pop_back();
            }
        };
        if (top > 0)
            rec(0, budget);
    }

    /// Every canonical concept with role depth <= d and size <= cap, once each:
    /// ⊤, ⊥, then prime sets.
    void for_each(const std::function<void(const Concept&)>& f) const {
        if (cap_ == 0)
            return;
        f(Concept::top());
        f(Concept::bottom());
        const auto& pr = top_primes();
        for_each_prime_set(pr, cap_, [&](const std::vector<std::size_t>& idx) {
            std::vector<Concept> parts;
            for (auto i : idx)
                parts.push_back(pr[i]);
            f(Concept::conjunction(std::move(parts)));
        });
    }

    /// Number of concepts `for_each` visits, without building them.
    std::uint64_t count() const {
        if (cap_ == 0)
            return 0;
        std::uint64_t n = 2;
        for_each_prime_set(top_primes(), cap_, [&](const std::vector<std::size_t>&) { ++n; });
        return n;
    }

private:
    std::size_t budget_at(std::size_t k) const {
        std::size_t gap = depth_ - k;
        return cap_ > gap ? cap_ - gap : 0;
    }

    std::size_t depth_;
    std::size_t cap_;
    std::vector<Concept> atoms_;
    std::vector<Symbol> roles_;
    std::vector<std::vector<Concept>> primes_;
    std::vector<std::vector<Concept>> fillers_;
};

inline std::vector<Concept> enumerate_concepts(const Signature& sig, std::size_t depth, std::size_t size_cap) {
    std::vector<Concept> out;
    ConceptSpace(sig, depth, size_cap).for_each([&](const Concept& c) { out.push_back(c); });
    return out;
}

} // namespace ciforge
