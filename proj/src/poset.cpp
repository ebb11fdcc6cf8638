#include "posheaf/poset.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace psh {

int Poset::height() const
{
    // Longest path in the cover relation, by repeated relaxation.
    std::vector<int> h(n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [u, v] : covers)
            if (h[u] + 1 > h[v]) {
                h[v] = h[u] + 1;
                changed = true;
            }
    }
    int best = 0;
    for (int x : h) best = std::max(best, x);
    return best;
}

Poset validate_poset(const std::vector<std::string>& names,
                     std::vector<std::pair<int, int>> covers)
{
    Poset p;
    p.n = static_cast<int>(names.size());
    p.names = names;
    {
        std::set<std::string> seen;
        for (const std::string& s : names)
            if (!seen.insert(s).second) throw Error("duplicate element name '" + s + "'");
    }
    std::sort(covers.begin(), covers.end());
    for (size_t i = 0; i < covers.size(); ++i) {
        auto [u, v] = covers[i];
        if (u < 0 || u >= p.n || v < 0 || v >= p.n)
            throw Error("cover references an element out of range");
        if (u == v) throw Error("cover loop at '" + names[u] + "'");
        if (i > 0 && covers[i] == covers[i - 1])
            throw Error("duplicate cover (" + names[u] + ", " + names[v] + ")");
    }
    p.covers = covers;

    // Order closure by iterated composition; a strict relation reaching back
    // to its source is a cycle.
    p.closure.assign(p.n, std::vector<char>(p.n, 0));
    for (int i = 0; i < p.n; ++i) p.closure[i][i] = 1;
    for (auto [u, v] : covers) p.closure[u][v] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = 0; u < p.n; ++u)
            for (int w = 0; w < p.n; ++w) {
                if (!p.closure[u][w]) continue;
                for (int v = 0; v < p.n; ++v)
                    if (p.closure[w][v] && !p.closure[u][v]) {
                        p.closure[u][v] = 1;
                        changed = true;
                    }
            }
    }
    for (auto [u, v] : covers)
        if (p.closure[v][u])
            throw Error("cycle through cover (" + names[u] + ", " + names[v] + ")");

    // Minimality: a cover with an element strictly between its endpoints is
    // implied by shorter covers.
    for (auto [u, v] : covers)
        for (int w = 0; w < p.n; ++w)
            if (w != u && w != v && p.closure[u][w] && p.closure[w][v])
                throw Error("redundant cover (" + names[u] + ", " + names[v] + "): implied through '" +
                            names[w] + "'");
    return p;
}

namespace {

void extend_chain(const Poset& p, Chain& cur, int k, std::vector<Chain>& out)
{
    if (static_cast<int>(cur.size()) == k + 1) {
        out.push_back(cur);
        return;
    }
    for (int y = 0; y < p.n; ++y)
        if (p.less(cur.back(), y)) {
            cur.push_back(y);
            extend_chain(p, cur, k, out);
            cur.pop_back();
        }
}

}  // namespace

std::vector<Chain> chains(const Poset& p, int k)
{
    std::vector<Chain> out;
    if (k < 0) return out;
    Chain cur;
    for (int x = 0; x < p.n; ++x) {
        cur.assign(1, x);
        extend_chain(p, cur, k, out);
    }
    return out;
}

SubposetView make_view(const Poset& p, std::vector<int> members)
{
    std::sort(members.begin(), members.end());
    SubposetView v;
    v.members = std::move(members);
    for (int a : v.members)
        for (int b : v.members) {
            if (!p.less(a, b)) continue;
            bool direct = true;
            for (int w : v.members)
                if (w != a && w != b && p.less(a, w) && p.less(w, b)) {
                    direct = false;
                    break;
                }
            if (direct) v.covers.emplace_back(a, b);
        }
    std::sort(v.covers.begin(), v.covers.end());
    return v;
}

SubposetView up_set(const Poset& p, int x)
{
    std::vector<int> m;
    for (int z = 0; z < p.n; ++z)
        if (p.leq(x, z)) m.push_back(z);
    return make_view(p, std::move(m));
}

SubposetView complement_up_set(const Poset& p, int x)
{
    std::vector<int> m;
    for (int z = 0; z < p.n; ++z)
        if (!p.leq(x, z)) m.push_back(z);
    return make_view(p, std::move(m));
}

SubposetView relative_up_set(const Poset& p, int x, int y)
{
    std::vector<int> m;
    for (int z = 0; z < p.n; ++z)
        if (p.leq(x, z) && p.leq(y, z)) m.push_back(z);
    return make_view(p, std::move(m));
}

Poset induced_poset(const Poset& p, const std::vector<int>& members)
{
    SubposetView v = make_view(p, members);
    std::vector<std::string> names;
    names.reserve(v.members.size());
    for (int m : v.members) names.push_back(p.names[m]);
    std::vector<int> local(p.n, -1);
    for (size_t i = 0; i < v.members.size(); ++i) local[v.members[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> covers;
    for (auto [a, b] : v.covers) covers.emplace_back(local[a], local[b]);
    return validate_poset(names, covers);
}

std::optional<int> unique_minimum(const Poset& p, const SubposetView& v)
{
    for (int m : v.members) {
        bool below_all = true;
        for (int z : v.members)
            if (!p.leq(m, z)) {
                below_all = false;
                break;
            }
        if (below_all) return m;
    }
    return std::nullopt;
}

std::optional<int> global_minimum(const Poset& p)
{
    int found = -1;
    for (int x = 0; x < p.n; ++x) {
        bool minimal = true;
        for (int y = 0; y < p.n; ++y)
            if (y != x && p.leq(y, x)) {
                minimal = false;
                break;
            }
        if (minimal) {
            if (found >= 0) return std::nullopt;
            found = x;
        }
    }
    if (found < 0) return std::nullopt;  // empty poset
    return found;
}

std::vector<int> atoms(const Poset& p)
{
    std::optional<int> zero = global_minimum(p);
    if (!zero) throw Error("poset has no unique minimal element");
    std::vector<int> out;
    for (auto [u, v] : p.covers)
        if (u == *zero) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_admissible_at(const Poset& p, int x)
{
    std::optional<int> zero = global_minimum(p);
    if (!zero) throw Error("poset has no unique minimal element");
    std::vector<int> at = atoms(p);
    if (std::find(at.begin(), at.end(), x) == at.end()) return false;
    SubposetView rest = complement_up_set(p, x);
    for (int y : rest.members)
        if (!unique_minimum(p, relative_up_set(p, x, y))) return false;
    return true;
}

std::optional<int> find_admissible_witness(const Poset& p)
{
    for (int x : atoms(p))
        if (is_admissible_at(p, x)) return x;
    return std::nullopt;
}

namespace {

// Recursive recognizer on an induced carrier. Parent ids are kept in the
// tree so callers can trace the decomposition in the original poset.
DecompTree recurse_admissible(const Poset& parent, const std::vector<int>& members)
{
    DecompTree t;
    t.members = members;
    Poset q = induced_poset(parent, members);
    if (!global_minimum(q)) {
        t.reason = "no unique minimal element";
        return t;
    }
    if (q.n == 1) {
        t.ok = true;
        t.reason = "singleton";
        return t;
    }
    if (q.n == 2) {  // with a 0 this is the 2-chain, boolean of rank 1
        t.ok = true;
        t.reason = "boolean of rank 1";
        return t;
    }
    for (int x : atoms(q)) {
        if (!is_admissible_at(q, x)) continue;
        std::vector<int> up_m, rest_m;
        for (int z = 0; z < q.n; ++z)
            (q.leq(x, z) ? up_m : rest_m).push_back(members[z]);
        DecompTree up = recurse_admissible(parent, up_m);
        DecompTree rest = recurse_admissible(parent, rest_m);
        if (up.ok && rest.ok) {
            t.ok = true;
            t.witness = members[x];
            t.up = std::make_unique<DecompTree>(std::move(up));
            t.rest = std::make_unique<DecompTree>(std::move(rest));
            return t;
        }
    }
    t.reason = "no admissible element decomposes into admissible parts";
    return t;
}

}  // namespace

DecompTree is_recursively_admissible(const Poset& p)
{
    std::vector<int> all(p.n);
    for (int i = 0; i < p.n; ++i) all[i] = i;
    return recurse_admissible(p, all);
}

Poset boolean_lattice(int n)
{
    int size = 1 << n;
    std::vector<std::string> names(size);
    for (int m = 0; m < size; ++m) {
        std::string s = "{";
        for (int b = 0; b < n; ++b)
            if (m & (1 << b)) s += std::to_string(b + 1);
        s += "}";
        names[m] = s;
    }
    std::vector<std::pair<int, int>> covers;
    for (int m = 0; m < size; ++m)
        for (int b = 0; b < n; ++b)
            if (!(m & (1 << b))) covers.emplace_back(m, m | (1 << b));
    return validate_poset(names, covers);
}

Poset chain_poset(int n)
{
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    std::vector<std::pair<int, int>> covers;
    for (int i = 0; i + 1 < n; ++i) covers.emplace_back(i, i + 1);
    return validate_poset(names, covers);
}

Poset random_poset(int n, double density, uint64_t seed)
{
    std::mt19937_64 rng(seed);
    // Edge draws avoid std::uniform_real_distribution so the stream is pinned
    // by the engine alone.
    auto draw = [&rng, density]() {
        return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0) < density;
    };
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (draw()) rel[i][j] = 1;
    // Close transitively, then keep only the covers.
    for (int w = 0; w < n; ++w)
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (rel[u][w] && rel[w][v]) rel[u][v] = 1;
    std::vector<std::pair<int, int>> covers;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            if (!rel[u][v]) continue;
            bool direct = true;
            for (int w = 0; w < n; ++w)
                if (w != u && w != v && rel[u][w] && rel[w][v]) {
                    direct = false;
                    break;
                }
            if (direct) covers.emplace_back(u, v);
        }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
    return validate_poset(names, covers);
}

}  // namespace psh
