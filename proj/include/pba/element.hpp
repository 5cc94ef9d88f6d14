#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "pba/errors.hpp"

namespace pba {

/// An element of the free Boolean algebra on `arity` generators, stored as
/// the set of atoms below it. Atoms are indexed by the tuple
/// eps in {0,1}^arity read as a binary integer, eps_1 least significant,
/// so atom index `e` assigns generator i the value (e >> i) & 1.
class Element {
public:
    static constexpr int kMaxArity = 20;

    explicit Element(int arity) : arity_(check_arity(arity)), words_(word_count(arity), 0) {}

    static Element zero(int arity) { return Element(arity); }

    static Element one(int arity) {
        Element e(arity);
        for (std::uint32_t a = 0; a < e.atom_capacity(); ++a) e.add_atom(a);
        return e;
    }

    static Element atom(int arity, std::uint32_t eps) {
        Element e(arity);
        e.add_atom(eps);
        return e;
    }

    /// The element corresponding to local generator i: all atoms with eps_i = 1.
    static Element generator(int i, int arity) {
        if (i < 0 || i >= arity)
            throw IndexOutOfRange("generator index " + std::to_string(i) + " out of range for arity " +
                                  std::to_string(arity));
        Element e(arity);
        for (std::uint32_t a = 0; a < e.atom_capacity(); ++a)
            if ((a >> i) & 1u) e.add_atom(a);
        return e;
    }

    int arity() const { return arity_; }
    std::uint32_t atom_capacity() const { return std::uint32_t(1) << arity_; }

    bool contains_atom(std::uint32_t eps) const {
        return (words_[eps >> 6] >> (eps & 63u)) & 1u;
    }

    void add_atom(std::uint32_t eps) { words_[eps >> 6] |= std::uint64_t(1) << (eps & 63u); }

    std::size_t atom_count() const {
        std::size_t n = 0;
        for (auto w : words_) n += std::popcount(w);
        return n;
    }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    bool is_one() const { return atom_count() == atom_capacity(); }

    Element meet(const Element& other) const {
        check_same_arity(other);
        Element r(arity_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & other.words_[i];
        return r;
    }

    Element join(const Element& other) const {
        check_same_arity(other);
        Element r(arity_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] | other.words_[i];
        return r;
    }

    Element complement() const {
        Element r(arity_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    Element symmetric_difference(const Element& other) const {
        check_same_arity(other);
        Element r(arity_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ other.words_[i];
        return r;
    }

    bool subset_of(const Element& other) const {
        check_same_arity(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~other.words_[i]) return false;
        return true;
    }

    bool operator==(const Element& other) const {
        return arity_ == other.arity_ && words_ == other.words_;
    }
    bool operator!=(const Element& other) const { return !(*this == other); }
    bool operator<(const Element& other) const {
        if (arity_ != other.arity_) return arity_ < other.arity_;
        return words_ < other.words_;
    }

    /// Sorted list of atom indices; joining the atoms back reproduces the element.
    std::vector<std::uint32_t> atoms() const {
        std::vector<std::uint32_t> out;
        out.reserve(atom_count());
        for (std::uint32_t a = 0; a < atom_capacity(); ++a)
            if (contains_atom(a)) out.push_back(a);
        return out;
    }

    /// Image of this element under the inclusion of the subalgebra generated by
    /// the local generators `positions` (sorted, values < big_arity) into the
    /// free algebra on big_arity generators: every atom completion is kept.
    Element embed(const std::vector<int>& positions, int big_arity) const {
        if (static_cast<int>(positions.size()) != arity_)
            throw ArityMismatch("embed: position list size != arity");
        Element r(big_arity);
        for (std::uint32_t big = 0; big < r.atom_capacity(); ++big) {
            std::uint32_t local = 0;
            for (std::size_t j = 0; j < positions.size(); ++j)
                local |= ((big >> positions[j]) & 1u) << j;
            if (contains_atom(local)) r.add_atom(big);
        }
        return r;
    }

    std::string to_atom_string() const {
        std::string s;
        for (auto a : atoms()) {
            if (!s.empty()) s += ",";
            std::string bits;
            for (int i = 0; i < arity_; ++i) bits += char('0' + ((a >> i) & 1u));
            s += bits;
        }
        return "{" + s + "}";
    }

private:
    static int check_arity(int k) {
        if (k < 0 || k > kMaxArity)
            throw LimitExceeded("arity " + std::to_string(k) + " outside [0," + std::to_string(kMaxArity) + "]");
        return k;
    }

    static std::size_t word_count(int k) { return ((std::size_t(1) << k) + 63) / 64; }

    void check_same_arity(const Element& other) const {
        if (arity_ != other.arity_)
            throw ArityMismatch("element arities differ: " + std::to_string(arity_) + " vs " +
                                std::to_string(other.arity_));
    }

    void trim() {
        int used = arity_ >= 6 ? 64 : (1 << arity_);
        if (used < 64) words_.back() &= (std::uint64_t(1) << used) - 1;
    }

    int arity_;
    std::vector<std::uint64_t> words_;
};

inline Element meet(const Element& a, const Element& b) { return a.meet(b); }
inline Element join(const Element& a, const Element& b) { return a.join(b); }
inline Element complement(const Element& a) { return a.complement(); }

inline std::vector<std::uint32_t> atom_decomposition(const Element& a) { return a.atoms(); }

inline Element generator_element(int i, int arity) { return Element::generator(i, arity); }

}  // namespace pba
