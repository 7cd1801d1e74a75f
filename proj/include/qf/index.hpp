#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace qf {

// Lattice coordinate l in Z^d.
using MultiIndex = std::vector<int>;

// Index of a coefficient array entry.  Plain families live on Z^d \ {0}
// (tag == 0); the two-sample construction extends the lattice by a sample
// tag s in {1, 2}, with basis function psi_m(t_s) on [0,1]^{2d}.
struct Index {
    MultiIndex lattice;
    int tag = 0;

    friend bool operator==(const Index&, const Index&) = default;
};

// Lexicographic: lattice entries first, then tag.  Used for deterministic
// tie-breaking (argmin selections, output ordering).
inline bool operator<(const Index& a, const Index& b) {
    if (a.lattice != b.lattice) return a.lattice < b.lattice;
    return a.tag < b.tag;
}

inline bool is_zero(const MultiIndex& l) {
    for (int v : l)
        if (v != 0) return false;
    return true;
}

inline std::string to_string(const Index& ix) {
    std::string s = "(";
    for (std::size_t i = 0; i < ix.lattice.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(ix.lattice[i]);
    }
    s += ")";
    if (ix.tag != 0) s += "#" + std::to_string(ix.tag);
    return s;
}

}  // namespace qf
