#pragma once

// The lattice-path comparison map from the cochain complex of a glued total
// sheaf into the total complex of the bundle's double complex.
//
// For a cell coordinate (sigma, tau) the relevant fiber elements form a
// grid: row i holds the transports of tau into the fiber over sigma_i. Each
// monotone path through the grid spells out a chain of the total poset, and
// the map reads the cochain there with a sign depending on where the path's
// up-steps happen.

#include <vector>

#include "posheaf/bicomplex.hpp"
#include "posheaf/bundle.hpp"

namespace psh {

// grid[i][j] = fiber-local id of the transport of tau_j into the fiber over
// sigma_i; row 0 is tau itself.
std::vector<std::vector<int>> traversal_grid(const Bundle& b, const Chain& sigma,
                                             const Chain& tau);

// All monotone step words from (0,0) to (p,q): 0 = right (base direction),
// 1 = up (fiber direction); lexicographic order.
std::vector<std::vector<int>> step_words(int p, int q);

// Sum of (p - i) over the word's up-steps, i the base index they happen at.
int traversal_weight(const std::vector<int>& word, int p);

// ceil(n/2), the parity offset attached to fiber degree n.
int iota(int n);

// Per-degree matrices S^n(E,F) -> T^n. `ts`, `s`, `t` must come from the
// same bundle: the glued total sheaf, its cochain complex, and the total
// complex of the double complex.
std::vector<QMat> phi(const Bundle& b, const TotalSheaf& ts, const Complex& s, const Complex& t);

}  // namespace psh
