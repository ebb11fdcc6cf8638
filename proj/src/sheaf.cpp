#include "posheaf/sheaf.hpp"

#include <algorithm>

namespace psh {

Sheaf constant_sheaf(const Poset& p, int dim)
{
    Sheaf f;
    f.poset = p;
    f.dims.assign(p.n, dim);
    for (auto c : p.covers) f.rest[c] = QMat::identity(dim);
    return f;
}

CheckReport validate_sheaf(const Sheaf& f)
{
    const Poset& p = f.poset;
    if (static_cast<int>(f.dims.size()) != p.n) return {false, "dimension table size mismatch"};
    for (int d : f.dims)
        if (d < 0) return {false, "negative stalk dimension"};
    if (f.rest.size() != p.covers.size())
        return {false, "restriction table does not match the cover relation"};
    for (auto [u, v] : p.covers) {
        auto it = f.rest.find({u, v});
        if (it == f.rest.end())
            return {false, "missing restriction for cover (" + p.names[u] + ", " + p.names[v] + ")"};
        if (it->second.rows != f.dims[u] || it->second.cols != f.dims[v])
            return {false, "restriction shape mismatch on cover (" + p.names[u] + ", " + p.names[v] + ")"};
    }
    // Path independence, checked from every source element: fix a reference
    // composite to each reachable z, then every cover (w,z) inside the
    // up-set must reproduce it.
    for (int u = 0; u < p.n; ++u) {
        std::vector<QMat> ref(p.n);
        std::vector<char> have(p.n, 0);
        ref[u] = QMat::identity(f.dims[u]);
        have[u] = 1;
        // Covers are processed in topological sweeps; heights are tiny.
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto [w, z] : p.covers) {
                if (!have[w]) continue;
                QMat via = ref[w] * f.rest.at({w, z});
                if (!have[z]) {
                    ref[z] = via;
                    have[z] = 1;
                    progress = true;
                } else if (ref[z] != via) {
                    return {false, "path dependence from '" + p.names[u] + "' through cover (" +
                                       p.names[w] + ", " + p.names[z] + ")"};
                }
            }
        }
    }
    return {};
}

QMat restriction_along(const Sheaf& f, int u, int v)
{
    const Poset& p = f.poset;
    if (!p.leq(u, v)) throw Error("restriction requested along an incomparable pair");
    QMat m = QMat::identity(f.dims[u]);
    int cur = u;
    while (cur != v) {
        // Walk up one cover towards v; smallest successor id keeps the walk
        // deterministic (the result is path independent anyway).
        int next = -1;
        for (auto [a, b] : p.covers)
            if (a == cur && p.leq(b, v)) {
                next = b;
                break;
            }
        if (next < 0) throw Error("no cover path found; closure is inconsistent");
        m = m * f.rest.at({cur, next});
        cur = next;
    }
    return m;
}

CheckReport validate_complex(const Complex& c)
{
    for (int k = 0; k + 1 <= c.top(); ++k) {
        QMat dd = c.dmat(k + 1) * c.dmat(k);
        if (!dd.is_zero()) return {false, "d composed with d is nonzero out of degree " + std::to_string(k)};
    }
    for (size_t k = 0; k < c.dims.size(); ++k)
        if (c.labels[k].size() != static_cast<size_t>(c.dims[k]))
            return {false, "label count mismatch in degree " + std::to_string(k)};
    return {};
}

namespace {

// Offset of each chain's coordinate block within a degree, plus total size.
struct BlockIndex {
    std::map<Chain, int> pos;
    int total = 0;
};

BlockIndex block_index(const std::vector<Chain>& chs, const std::vector<int>& dims)
{
    BlockIndex ix;
    for (const Chain& c : chs) {
        ix.pos[c] = ix.total;
        ix.total += dims[c.front()];
    }
    return ix;
}

}  // namespace

Complex cochain_complex(const Poset& p, const Sheaf& f)
{
    Complex cx;
    int top = p.height();
    cx.dims.resize(top + 1);
    cx.labels.resize(top + 1);
    std::vector<std::vector<Chain>> ch(top + 2);
    std::vector<BlockIndex> ix(top + 2);
    for (int k = 0; k <= top + 1; ++k) {
        ch[k] = chains(p, k);
        ix[k] = block_index(ch[k], f.dims);
    }
    for (int k = 0; k <= top; ++k) {
        cx.dims[k] = ix[k].total;
        for (const Chain& c : ch[k])
            for (int t = 0; t < f.dims[c.front()]; ++t) cx.labels[k].push_back({c, {}, t});
    }
    cx.d.resize(top + 1);
    for (int k = 0; k <= top; ++k) {
        QMat d(k + 1 <= top ? ix[k + 1].total : 0, ix[k].total);
        for (const Chain& c : ch[k + 1]) {
            int row0 = ix[k + 1].pos.at(c);
            // Face 0 drops the least vertex and restricts along its cover of
            // the next one; the remaining faces are plain reindexings.
            Chain face(c.begin() + 1, c.end());
            QMat r = restriction_along(f, c[0], c[1]);
            int col0 = ix[k].pos.at(face);
            for (int i = 0; i < r.rows; ++i)
                for (int j = 0; j < r.cols; ++j)
                    if (sgn(r(i, j)) != 0) d(row0 + i, col0 + j) += r(i, j);
            for (size_t j = 1; j < c.size(); ++j) {
                Chain fj;
                for (size_t t = 0; t < c.size(); ++t)
                    if (t != j) fj.push_back(c[t]);
                int cj = ix[k].pos.at(fj);
                Rat s = (j % 2 == 0) ? 1 : -1;
                for (int t = 0; t < f.dims[c.front()]; ++t) d(row0 + t, cj + t) += s;
            }
        }
        cx.d[k] = std::move(d);
    }
    return cx;
}

std::vector<CohomStep> complex_cohomology(const Complex& c)
{
    std::vector<CohomStep> out;
    for (int k = 0; k <= c.top(); ++k) out.push_back(cohomology_step(c.dmat(k - 1), c.dmat(k)));
    return out;
}

std::vector<CohomStep> complex_cohomology_z(const Complex& c)
{
    auto to_z = [](const QMat& q) {
        ZMat z(q.rows, q.cols);
        for (size_t i = 0; i < q.a.size(); ++i) {
            if (q.a[i].get_den() != 1) throw Error("complex has non-integral entries");
            z.a[i] = q.a[i].get_num();
        }
        return z;
    };
    std::vector<CohomStep> out;
    for (int k = 0; k <= c.top(); ++k)
        out.push_back(cohomology_step(to_z(c.dmat(k - 1)), to_z(c.dmat(k))));
    return out;
}

std::vector<CohomStep> sheaf_cohomology(const Sheaf& f)
{
    return complex_cohomology(cochain_complex(f.poset, f));
}

std::vector<CohomStep> sheaf_cohomology_z(const Sheaf& f)
{
    return complex_cohomology_z(cochain_complex(f.poset, f));
}

SheafMorphism identity_morphism(const Sheaf& f)
{
    SheafMorphism g;
    g.source = f;
    g.target = f;
    g.vertex_map.resize(f.poset.n);
    for (int i = 0; i < f.poset.n; ++i) {
        g.vertex_map[i] = i;
        g.components.push_back(QMat::identity(f.dims[i]));
    }
    return g;
}

SheafMorphism compose(const SheafMorphism& outer, const SheafMorphism& inner)
{
    if (inner.target.poset.n != outer.source.poset.n)
        throw Error("morphism composition source/target mismatch");
    SheafMorphism g;
    g.source = inner.source;
    g.target = outer.target;
    g.vertex_map.resize(outer.target.poset.n);
    for (int x = 0; x < outer.target.poset.n; ++x) {
        g.vertex_map[x] = inner.vertex_map[outer.vertex_map[x]];
        g.components.push_back(outer.components[x] * inner.components[outer.vertex_map[x]]);
    }
    return g;
}

CheckReport validate_morphism(const SheafMorphism& g)
{
    const Poset& q = g.target.poset;
    const Poset& p = g.source.poset;
    if (static_cast<int>(g.vertex_map.size()) != q.n) return {false, "vertex map size mismatch"};
    if (static_cast<int>(g.components.size()) != q.n) return {false, "component table size mismatch"};
    for (int x = 0; x < q.n; ++x) {
        int gx = g.vertex_map[x];
        if (gx < 0 || gx >= p.n) return {false, "vertex map out of range at '" + q.names[x] + "'"};
        const QMat& m = g.components[x];
        if (m.rows != g.target.dims[x] || m.cols != g.source.dims[gx])
            return {false, "component shape mismatch at '" + q.names[x] + "'"};
    }
    for (auto [x, y] : q.covers) {
        if (!p.leq(g.vertex_map[x], g.vertex_map[y]))
            return {false, "vertex map not monotone on cover (" + q.names[x] + ", " + q.names[y] + ")"};
        // Both routes F(vm(y)) -> G(x) must agree.
        QMat lhs = g.components[x] * restriction_along(g.source, g.vertex_map[x], g.vertex_map[y]);
        QMat rhs = g.target.rest.at({x, y}) * g.components[y];
        if (lhs != rhs)
            return {false, "naturality fails on cover (" + q.names[x] + ", " + q.names[y] + ")"};
    }
    return {};
}

std::vector<QMat> induced_chain_map(const SheafMorphism& g)
{
    Complex src = cochain_complex(g.source.poset, g.source);
    Complex tgt = cochain_complex(g.target.poset, g.target);
    return induced_chain_map(g, src, tgt);
}

std::vector<QMat> induced_chain_map(const SheafMorphism& g, const Complex& src_cx,
                                    const Complex& tgt_cx)
{
    int degrees = std::max(src_cx.top(), tgt_cx.top()) + 1;
    std::vector<QMat> out(degrees);
    // Coordinate offsets by chain in both complexes.
    auto offsets = [](const Complex& cx, int k) {
        std::map<Chain, int> pos;
        const auto& ls = cx.labels[k];
        for (size_t i = 0; i < ls.size(); ++i)
            if (pos.find(ls[i].base) == pos.end()) pos[ls[i].base] = static_cast<int>(i);
        return pos;
    };
    for (int k = 0; k < degrees; ++k) {
        QMat m(tgt_cx.dim(k), src_cx.dim(k));
        if (k <= tgt_cx.top() && k <= src_cx.top()) {
            std::map<Chain, int> srcpos = offsets(src_cx, k);
            std::map<Chain, int> tgtpos = offsets(tgt_cx, k);
            for (auto& [sigma, row0] : tgtpos) {
                Chain image;
                for (int v : sigma) image.push_back(g.vertex_map[v]);
                bool degenerate = false;
                for (size_t i = 0; i + 1 < image.size(); ++i)
                    if (image[i] == image[i + 1]) degenerate = true;
                if (degenerate) continue;
                auto it = srcpos.find(image);
                if (it == srcpos.end()) throw Error("image chain missing from source complex");
                const QMat& comp = g.components[sigma.front()];
                for (int i = 0; i < comp.rows; ++i)
                    for (int j = 0; j < comp.cols; ++j)
                        if (sgn(comp(i, j)) != 0) m(row0 + i, it->second + j) = comp(i, j);
            }
        }
        out[k] = std::move(m);
    }
    return out;
}

}  // namespace psh
