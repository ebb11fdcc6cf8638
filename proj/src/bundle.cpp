#include "posheaf/bundle.hpp"

#include <algorithm>

namespace psh {

Bundle constant_bundle(const Poset& base, const Sheaf& fiber)
{
    Bundle b;
    b.base = base;
    b.fibers.assign(base.n, fiber);
    BundleArrow id;
    id.f.resize(fiber.poset.n);
    for (int u = 0; u < fiber.poset.n; ++u) {
        id.f[u] = u;
        id.m.push_back(QMat::identity(fiber.dims[u]));
    }
    for (auto c : base.covers) b.arrows[c] = id;
    return b;
}

Bundle sheaf_as_bundle(const Sheaf& f)
{
    Bundle b;
    b.base = f.poset;
    Poset point = validate_poset({"*"}, {});
    for (int x = 0; x < f.poset.n; ++x) {
        Sheaf fib;
        fib.poset = point;
        fib.dims = {f.dims[x]};
        b.fibers.push_back(std::move(fib));
    }
    for (const auto& [cov, m] : f.rest) b.arrows[cov] = BundleArrow{{0}, {m}};
    return b;
}

namespace {

BundleArrow identity_arrow(const Sheaf& fiber)
{
    BundleArrow a;
    a.f.resize(fiber.poset.n);
    for (int u = 0; u < fiber.poset.n; ++u) {
        a.f[u] = u;
        a.m.push_back(QMat::identity(fiber.dims[u]));
    }
    return a;
}

// first, then continue: the arrow for x -> z through x -> y -> z.
BundleArrow compose_arrows(const BundleArrow& xy, const BundleArrow& yz)
{
    BundleArrow a;
    a.f.resize(xy.f.size());
    for (size_t u = 0; u < xy.f.size(); ++u) {
        a.f[u] = yz.f[xy.f[u]];
        a.m.push_back(xy.m[u] * yz.m[xy.f[u]]);
    }
    return a;
}

bool arrows_equal(const BundleArrow& a, const BundleArrow& b)
{
    if (a.f != b.f || a.m.size() != b.m.size()) return false;
    for (size_t i = 0; i < a.m.size(); ++i)
        if (a.m[i] != b.m[i]) return false;
    return true;
}

}  // namespace

CheckReport validate_bundle(const Bundle& b)
{
    const Poset& base = b.base;
    if (static_cast<int>(b.fibers.size()) != base.n) return {false, "fiber table size mismatch"};
    for (int x = 0; x < base.n; ++x) {
        CheckReport r = validate_sheaf(b.fibers[x]);
        if (!r.ok) return {false, "fiber over '" + base.names[x] + "': " + r.message};
    }
    if (b.arrows.size() != base.covers.size())
        return {false, "arrow table does not match the base cover relation"};
    for (auto [x, y] : base.covers) {
        auto it = b.arrows.find({x, y});
        if (it == b.arrows.end())
            return {false, "missing arrow for base cover (" + base.names[x] + ", " + base.names[y] + ")"};
        const BundleArrow& a = it->second;
        if (static_cast<int>(a.f.size()) != b.fibers[x].poset.n ||
            a.m.size() != a.f.size())
            return {false, "arrow size mismatch on base cover (" + base.names[x] + ", " + base.names[y] + ")"};
        for (int u = 0; u < b.fibers[x].poset.n; ++u) {
            if (a.f[u] < 0 || a.f[u] >= b.fibers[y].poset.n)
                return {false, "arrow vertex image out of range on base cover (" + base.names[x] +
                                   ", " + base.names[y] + ")"};
            if (a.m[u].rows != b.fibers[x].dims[u] || a.m[u].cols != b.fibers[y].dims[a.f[u]])
                return {false, "arrow matrix shape mismatch on base cover (" + base.names[x] +
                                   ", " + base.names[y] + ")"};
        }
        SheafMorphism g = arrow_morphism(b, x, y);
        CheckReport r = validate_morphism(g);
        if (!r.ok)
            return {false, "arrow on base cover (" + base.names[x] + ", " + base.names[y] + "): " + r.message};
    }
    // Path independence over base diamonds: fix reference transports from
    // each x and check every outgoing cover against them.
    for (int x = 0; x < base.n; ++x) {
        std::vector<BundleArrow> ref(base.n);
        std::vector<char> have(base.n, 0);
        ref[x] = identity_arrow(b.fibers[x]);
        have[x] = 1;
        bool progress = true;
        while (progress) {
            progress = false;
            for (auto [w, z] : base.covers) {
                if (!have[w]) continue;
                BundleArrow via = compose_arrows(ref[w], b.arrows.at({w, z}));
                if (!have[z]) {
                    ref[z] = std::move(via);
                    have[z] = 1;
                    progress = true;
                } else if (!arrows_equal(ref[z], via)) {
                    return {false, "transport from '" + base.names[x] + "' is path dependent through cover (" +
                                       base.names[w] + ", " + base.names[z] + ")"};
                }
            }
        }
    }
    return {};
}

BundleArrow transport(const Bundle& b, int x, int y)
{
    if (!b.base.leq(x, y)) throw Error("transport along an incomparable base pair");
    BundleArrow a = identity_arrow(b.fibers[x]);
    int cur = x;
    while (cur != y) {
        int next = -1;
        for (auto [p, q] : b.base.covers)
            if (p == cur && b.base.leq(q, y)) {
                next = q;
                break;
            }
        if (next < 0) throw Error("no cover path found in base");
        a = compose_arrows(a, b.arrows.at({cur, next}));
        cur = next;
    }
    return a;
}

SheafMorphism arrow_morphism(const Bundle& b, int x, int y)
{
    BundleArrow a = transport(b, x, y);
    SheafMorphism g;
    g.source = b.fibers[y];
    g.target = b.fibers[x];
    g.vertex_map = a.f;
    g.components = a.m;
    return g;
}

TotalSheaf total_sheaf(const Bundle& b)
{
    const Poset& base = b.base;
    TotalSheaf t;
    t.offset.resize(base.n);
    int total = 0;
    for (int x = 0; x < base.n; ++x) {
        t.offset[x] = total;
        total += b.fibers[x].poset.n;
    }
    t.pi.resize(total);
    t.local.resize(total);
    std::vector<std::string> names(total);
    for (int x = 0; x < base.n; ++x)
        for (int u = 0; u < b.fibers[x].poset.n; ++u) {
            int g = t.offset[x] + u;
            t.pi[g] = x;
            t.local[g] = u;
            names[g] = base.names[x] + "/" + b.fibers[x].poset.names[u];
        }

    // Transport for every comparable base pair, composed once.
    std::map<std::pair<int, int>, BundleArrow> trans;
    for (int x = 0; x < base.n; ++x)
        for (int y = 0; y < base.n; ++y)
            if (base.leq(x, y)) trans[{x, y}] = transport(b, x, y);

    auto leq_total = [&](int g, int h) {
        int x = t.pi[g], y = t.pi[h];
        if (!base.leq(x, y)) return false;
        const BundleArrow& a = trans.at({x, y});
        return b.fibers[y].poset.leq(a.f[t.local[g]], t.local[h]);
    };

    std::vector<std::pair<int, int>> covers;
    for (int g = 0; g < total; ++g)
        for (int h = 0; h < total; ++h) {
            if (g == h || !leq_total(g, h)) continue;
            bool direct = true;
            for (int w = 0; w < total && direct; ++w)
                if (w != g && w != h && leq_total(g, w) && leq_total(w, h)) direct = false;
            if (direct) covers.emplace_back(g, h);
        }

    t.sheaf.poset = validate_poset(names, covers);
    for (int g = 0; g < total; ++g)
        for (int h = 0; h < total; ++h)
            if (t.sheaf.poset.leq(g, h) != leq_total(g, h))
                throw Error("glued order disagrees with its cover closure");

    t.sheaf.dims.resize(total);
    for (int g = 0; g < total; ++g) t.sheaf.dims[g] = b.fibers[t.pi[g]].dims[t.local[g]];
    for (auto [g, h] : covers) {
        int x = t.pi[g], y = t.pi[h];
        const BundleArrow& a = trans.at({x, y});
        // Fiber restriction first, then the transport matrix.
        QMat r = a.m[t.local[g]] * restriction_along(b.fibers[y], a.f[t.local[g]], t.local[h]);
        t.sheaf.rest[{g, h}] = std::move(r);
    }
    return t;
}

Bundle restrict_bundle(const Bundle& b, const std::vector<int>& members)
{
    std::vector<int> ms = members;
    std::sort(ms.begin(), ms.end());
    Bundle out;
    out.base = induced_poset(b.base, ms);
    for (int m : ms) out.fibers.push_back(b.fibers[m]);
    for (auto [u, v] : out.base.covers) out.arrows[{u, v}] = transport(b, ms[u], ms[v]);
    return out;
}

Sheaf q_cochain_sheaf(const Bundle& b, int q)
{
    Sheaf s;
    s.poset = b.base;
    s.dims.resize(b.base.n);
    std::vector<Complex> cx;
    for (int x = 0; x < b.base.n; ++x) {
        cx.push_back(cochain_complex(b.fibers[x].poset, b.fibers[x]));
        s.dims[x] = cx[x].dim(q);
    }
    for (auto [x, y] : b.base.covers) {
        SheafMorphism g = arrow_morphism(b, x, y);
        std::vector<QMat> ind = induced_chain_map(g, cx[y], cx[x]);
        s.rest[{x, y}] = (q < static_cast<int>(ind.size())) ? ind[q] : QMat(s.dims[x], s.dims[y]);
    }
    return s;
}

Sheaf fib_cohomology_sheaf(const Bundle& b, int q)
{
    Sheaf s;
    s.poset = b.base;
    s.dims.resize(b.base.n);
    std::vector<Complex> cx;
    std::vector<QMat> reps(b.base.n), cob(b.base.n);
    for (int x = 0; x < b.base.n; ++x) {
        cx.push_back(cochain_complex(b.fibers[x].poset, b.fibers[x]));
        if (q <= cx[x].top()) {
            CohomStep st = cohomology_step(cx[x].dmat(q - 1), cx[x].dmat(q));
            s.dims[x] = st.betti;
            reps[x] = st.representatives;
            cob[x] = image_basis(cx[x].dmat(q - 1));
        } else {
            s.dims[x] = 0;
            reps[x] = QMat(0, 0);
            cob[x] = QMat(0, 0);
        }
    }
    for (auto [x, y] : b.base.covers) {
        QMat r(s.dims[x], s.dims[y]);
        if (s.dims[x] > 0 && s.dims[y] > 0) {
            SheafMorphism g = arrow_morphism(b, x, y);
            std::vector<QMat> ind = induced_chain_map(g, cx[y], cx[x]);
            QMat pushed = ind[q] * reps[y];
            // pushed columns are cocycles; write them as representative
            // combinations modulo coboundaries.
            std::optional<QMat> sol = solve(hstack(reps[x], cob[x]), pushed);
            if (!sol) throw Error("induced cohomology class left the representative span");
            for (int i = 0; i < s.dims[x]; ++i)
                for (int j = 0; j < s.dims[y]; ++j) r(i, j) = (*sol)(i, j);
        }
        s.rest[{x, y}] = std::move(r);
    }
    return s;
}

}  // namespace psh
