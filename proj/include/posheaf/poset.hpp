#pragma once

// Finite posets presented by their cover relation, chain (nerve)
// enumeration, up-set views, and the admissibility recognizers feeding the
// decomposition machinery. Posets are immutable after validation and every
// query here is pure.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "posheaf/linalg.hpp"

namespace psh {

// A chain is a strictly increasing sequence of element ids; increasing in
// the poset order, not necessarily in id order.
using Chain = std::vector<int>;

struct Poset {
    int n = 0;
    std::vector<std::string> names;
    std::vector<std::pair<int, int>> covers;  // u precedes v, sorted lexicographically
    std::vector<std::vector<char>> closure;   // closure[u][v] = 1 iff u <= v

    bool leq(int u, int v) const { return closure[u][v] != 0; }
    bool less(int u, int v) const { return u != v && closure[u][v] != 0; }
    int height() const;  // longest chain, counted in covers
};

// Checks acyclicity and minimality of the cover relation (a cover implied by
// two others is an error, as is a duplicate or a loop) and precomputes the
// order closure. Throws Error with a specific culprit on failure.
Poset validate_poset(const std::vector<std::string>& names,
                     std::vector<std::pair<int, int>> covers);

// All strictly increasing (k+1)-vertex chains, lexicographic by id sequence.
std::vector<Chain> chains(const Poset& p, int k);

// A subset of a parent poset with the inherited order. Members are parent
// ids in ascending order; covers are covers of the induced order (which need
// not be covers of the parent).
struct SubposetView {
    std::vector<int> members;
    std::vector<std::pair<int, int>> covers;
};

SubposetView make_view(const Poset& p, std::vector<int> members);
SubposetView up_set(const Poset& p, int x);                    // { z : x <= z }
SubposetView complement_up_set(const Poset& p, int x);         // everything else
SubposetView relative_up_set(const Poset& p, int x, int y);    // { z : x <= z and y <= z }

// Materializes a view as a poset of its own (ids 0..m-1 in member order,
// names inherited).
Poset induced_poset(const Poset& p, const std::vector<int>& members);

// The least element of the view if it has one. "Unique minimum" means an
// element below every member; an empty view or one with several minimal
// elements has none.
std::optional<int> unique_minimum(const Poset& p, const SubposetView& v);

// The unique minimal element of the whole poset, when there is one.
std::optional<int> global_minimum(const Poset& p);

// Elements covering the global minimum, ascending. Throws Error when the
// poset has no unique minimal element.
std::vector<int> atoms(const Poset& p);

// True iff x covers the global minimum and for every y outside the up-set of
// x the set { z : x <= z and y <= z } has a least element. Throws Error when
// the poset has no global minimum.
bool is_admissible_at(const Poset& p, int x);

// First admissible atom in id order, if any.
std::optional<int> find_admissible_witness(const Poset& p);

// Witness tree for the recursive decomposition: at each interior node an
// admissible x together with the branches for the up-set of x and its
// complement. Leaves are singletons (accepted by convention) or rank-1
// boolean posets, i.e. 2-chains.
struct DecompTree {
    bool ok = false;
    std::vector<int> members;  // parent ids of this node's carrier
    int witness = -1;          // admissible element, -1 at leaves
    std::string reason;        // failure note or base-case tag
    std::unique_ptr<DecompTree> up;    // branch for the up-set of the witness
    std::unique_ptr<DecompTree> rest;  // branch for its complement
};

DecompTree is_recursively_admissible(const Poset& p);

// Fixture generators. All deterministic in their arguments.
Poset boolean_lattice(int n);  // elements are subset bitmasks
Poset chain_poset(int n);
Poset random_poset(int n, double density, uint64_t seed);

}  // namespace psh
