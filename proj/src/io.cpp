#include "posheaf/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace psh {

using njson = nlohmann::ordered_json;

namespace {

njson parse_text(const std::string& text)
{
    try {
        return njson::parse(text);
    } catch (const std::exception& e) {
        throw Error(std::string("document parse: ") + e.what());
    }
}

void check_keys(const njson& j, const std::set<std::string>& allowed, const std::string& path)
{
    if (!j.is_object()) throw Error("expected an object at " + path);
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            throw Error("unknown key '" + item.key() + "' at " + path);
}

const njson& field(const njson& j, const char* key, const std::string& path)
{
    if (!j.is_object() || !j.contains(key))
        throw Error(std::string("missing key '") + key + "' at " + path);
    return j.at(key);
}

int int_field(const njson& j, const std::string& path)
{
    if (!j.is_number_integer()) throw Error("expected an integer at " + path);
    return j.get<int>();
}

std::string format_field(const njson& j, const char* want, const std::string& path)
{
    const njson& f = field(j, "format", path);
    if (!f.is_string() || f.get<std::string>() != want)
        throw Error("expected format \"" + std::string(want) + "\" at " + path + "/format");
    return want;
}

njson poset_block(const Poset& p)
{
    njson j;
    j["elements"] = p.names;
    njson cov = njson::array();
    for (auto [u, v] : p.covers) cov.push_back(njson::array({u, v}));
    j["covers"] = std::move(cov);
    return j;
}

Poset poset_from_block(const njson& j, const std::string& path)
{
    check_keys(j, {"elements", "covers"}, path);
    const njson& el = field(j, "elements", path);
    if (!el.is_array()) throw Error("expected an array at " + path + "/elements");
    std::vector<std::string> names;
    for (size_t i = 0; i < el.size(); ++i) {
        if (!el[i].is_string())
            throw Error("expected a string at " + path + "/elements/" + std::to_string(i));
        names.push_back(el[i].get<std::string>());
    }
    const njson& cov = field(j, "covers", path);
    if (!cov.is_array()) throw Error("expected an array at " + path + "/covers");
    std::vector<std::pair<int, int>> covers;
    for (size_t i = 0; i < cov.size(); ++i) {
        std::string cpath = path + "/covers/" + std::to_string(i);
        if (!cov[i].is_array() || cov[i].size() != 2)
            throw Error("expected a pair at " + cpath);
        covers.emplace_back(int_field(cov[i][0], cpath), int_field(cov[i][1], cpath));
    }
    try {
        return validate_poset(names, covers);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

njson matrix_block(const QMat& m)
{
    njson rows = njson::array();
    for (int i = 0; i < m.rows; ++i) {
        njson row = njson::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(rat_string(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

QMat matrix_from_block(const njson& j, int rows, int cols, bool strict, const std::string& path)
{
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        throw Error("expected " + std::to_string(rows) + " matrix rows at " + path);
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const njson& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw Error("expected " + std::to_string(cols) + " entries in row " +
                        std::to_string(i) + " at " + path);
        for (int k = 0; k < cols; ++k) {
            if (!row[k].is_string())
                throw Error("matrix entries must be rational strings at " + path);
            std::optional<Rat> x = parse_rat(row[k].get<std::string>(), strict);
            if (!x)
                throw Error("bad rational \"" + row[k].get<std::string>() + "\" at " + path +
                            "/" + std::to_string(i) + "/" + std::to_string(k));
            m(i, k) = *x;
        }
    }
    return m;
}

std::string cover_name(const Poset& p, std::pair<int, int> c)
{
    return "'" + p.names[c.first] + "' < '" + p.names[c.second] + "'";
}

njson sheaf_block(const Sheaf& f)
{
    njson j;
    j["poset"] = poset_block(f.poset);
    j["dims"] = f.dims;
    njson rs = njson::array();
    for (auto c : f.poset.covers) {
        auto it = f.rest.find(c);
        if (it == f.rest.end())
            throw Error("sheaf has no matrix for cover " + cover_name(f.poset, c));
        njson entry;
        entry["cover"] = njson::array({c.first, c.second});
        entry["matrix"] = matrix_block(it->second);
        rs.push_back(std::move(entry));
    }
    j["restrictions"] = std::move(rs);
    return j;
}

Sheaf sheaf_from_block(const njson& j, bool strict, const std::string& path)
{
    check_keys(j, {"poset", "dims", "restrictions"}, path);
    Sheaf f;
    f.poset = poset_from_block(field(j, "poset", path), path + "/poset");
    const njson& dims = field(j, "dims", path);
    if (!dims.is_array() || static_cast<int>(dims.size()) != f.poset.n)
        throw Error("expected one dimension per element at " + path + "/dims");
    for (size_t i = 0; i < dims.size(); ++i) {
        int d = int_field(dims[i], path + "/dims/" + std::to_string(i));
        if (d < 0) throw Error("negative dimension at " + path + "/dims/" + std::to_string(i));
        f.dims.push_back(d);
    }
    const njson& rs = field(j, "restrictions", path);
    if (!rs.is_array()) throw Error("expected an array at " + path + "/restrictions");
    for (size_t i = 0; i < rs.size(); ++i) {
        std::string epath = path + "/restrictions/" + std::to_string(i);
        check_keys(rs[i], {"cover", "matrix"}, epath);
        const njson& cov = field(rs[i], "cover", epath);
        if (!cov.is_array() || cov.size() != 2) throw Error("expected a pair at " + epath + "/cover");
        std::pair<int, int> c{int_field(cov[0], epath), int_field(cov[1], epath)};
        if (!std::binary_search(f.poset.covers.begin(), f.poset.covers.end(), c))
            throw Error("not a cover of the poset at " + epath + "/cover");
        if (f.rest.count(c)) throw Error("duplicate restriction at " + epath);
        f.rest[c] = matrix_from_block(field(rs[i], "matrix", epath), f.dims[c.first],
                                      f.dims[c.second], strict, epath + "/matrix");
    }
    for (auto c : f.poset.covers)
        if (!f.rest.count(c))
            throw Error("missing restriction matrix for cover " + cover_name(f.poset, c) +
                        " at " + path + "/restrictions");
    CheckReport r = validate_sheaf(f);
    if (!r.ok) throw Error(path + ": " + r.message);
    return f;
}

double unit_draw(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

std::vector<int> element_levels(const Poset& p)
{
    // Longest chain below each element. Covers may list ids in any order, so
    // iterate to the fixpoint; the relation is acyclic.
    std::vector<int> lvl(p.n, 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto [u, v] : p.covers)
            if (lvl[v] < lvl[u] + 1) {
                lvl[v] = lvl[u] + 1;
                changed = true;
            }
    }
    return lvl;
}

Rat small_entry(std::mt19937_64& rng)
{
    return Rat(static_cast<long>(rng() % 5) - 2);
}

QMat random_matrix(int rows, int cols, std::mt19937_64& rng)
{
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = small_entry(rng);
    return m;
}

Sheaf level_pullback_sheaf(const Poset& p, int max_dim, std::mt19937_64& rng)
{
    std::vector<int> lvl = element_levels(p);
    int h = 0;
    for (int x : lvl) h = std::max(h, x);
    std::vector<int> ld;
    for (int i = 0; i <= h; ++i) ld.push_back(1 + static_cast<int>(rng() % max_dim));
    std::vector<QMat> step;  // level i <- level i+1
    for (int i = 0; i < h; ++i) step.push_back(random_matrix(ld[i], ld[i + 1], rng));
    Sheaf f;
    f.poset = p;
    for (int u = 0; u < p.n; ++u) f.dims.push_back(ld[lvl[u]]);
    for (auto c : p.covers) {
        QMat m = QMat::identity(ld[lvl[c.first]]);
        for (int i = lvl[c.first]; i < lvl[c.second]; ++i) m = m * step[i];
        f.rest[c] = std::move(m);
    }
    return f;
}

Sheaf rank_one_sheaf(const Poset& p, int max_dim, std::mt19937_64& rng)
{
    // R(u < v) = c_u b_v with b_v c_v = 1 everywhere, so composites collapse
    // to c_u b_w regardless of the path.
    std::vector<QMat> c, b;
    Sheaf f;
    f.poset = p;
    for (int u = 0; u < p.n; ++u) {
        int d = 1 + static_cast<int>(rng() % max_dim);
        f.dims.push_back(d);
        QMat cu(d, 1);
        for (int i = 0; i < d; ++i) cu(i, 0) = small_entry(rng);
        int i0 = -1;
        for (int i = 0; i < d; ++i)
            if (sgn(cu(i, 0)) != 0) {
                i0 = i;
                break;
            }
        if (i0 < 0) {
            cu(0, 0) = 1;
            i0 = 0;
        }
        QMat bu(1, d);
        for (int i = 0; i < d; ++i) bu(0, i) = small_entry(rng);
        Rat dot = (bu * cu)(0, 0);
        bu(0, i0) += (Rat(1) - dot) / cu(i0, 0);
        c.push_back(std::move(cu));
        b.push_back(std::move(bu));
    }
    for (auto cov : p.covers) f.rest[cov] = c[cov.first] * b[cov.second];
    return f;
}

}  // namespace

std::string poset_to_json(const Poset& p)
{
    njson j;
    j["format"] = "posheaf-poset/1";
    njson block = poset_block(p);
    j["elements"] = block["elements"];
    j["covers"] = block["covers"];
    return j.dump(2) + "\n";
}

Poset poset_from_json(const std::string& text, bool strict)
{
    (void)strict;
    njson j = parse_text(text);
    check_keys(j, {"format", "elements", "covers"}, "/");
    format_field(j, "posheaf-poset/1", "/");
    njson block;
    block["elements"] = field(j, "elements", "/");
    block["covers"] = field(j, "covers", "/");
    return poset_from_block(block, "/");
}

std::string sheaf_to_json(const Sheaf& f)
{
    njson j;
    j["format"] = "posheaf-sheaf/1";
    njson block = sheaf_block(f);
    j["poset"] = block["poset"];
    j["dims"] = block["dims"];
    j["restrictions"] = block["restrictions"];
    return j.dump(2) + "\n";
}

Sheaf sheaf_from_json(const std::string& text, bool strict)
{
    njson j = parse_text(text);
    check_keys(j, {"format", "poset", "dims", "restrictions"}, "/");
    format_field(j, "posheaf-sheaf/1", "/");
    njson block;
    block["poset"] = field(j, "poset", "/");
    block["dims"] = field(j, "dims", "/");
    block["restrictions"] = field(j, "restrictions", "/");
    return sheaf_from_block(block, strict, "/");
}

std::string bundle_to_json(const BundleDocument& d)
{
    const Bundle& b = d.bundle;
    njson j;
    j["format"] = "posheaf-bundle/1";
    j["ring"] = d.ring;
    j["base"] = poset_block(b.base);
    njson fibers = njson::array();
    for (const Sheaf& f : b.fibers) fibers.push_back(sheaf_block(f));
    j["fibers"] = std::move(fibers);
    njson arrows = njson::array();
    for (auto c : b.base.covers) {
        auto it = b.arrows.find(c);
        if (it == b.arrows.end())
            throw Error("bundle has no arrow for cover " + cover_name(b.base, c));
        njson entry;
        entry["cover"] = njson::array({c.first, c.second});
        entry["vertex_map"] = it->second.f;
        njson ms = njson::array();
        for (const QMat& m : it->second.m) ms.push_back(matrix_block(m));
        entry["matrices"] = std::move(ms);
        arrows.push_back(std::move(entry));
    }
    j["arrows"] = std::move(arrows);
    if (!d.metadata.is_null()) j["metadata"] = d.metadata;
    return j.dump(2) + "\n";
}

BundleDocument bundle_from_json(const std::string& text, bool strict)
{
    njson j = parse_text(text);
    check_keys(j, {"format", "ring", "base", "fibers", "arrows", "metadata"}, "/");
    format_field(j, "posheaf-bundle/1", "/");
    BundleDocument doc;
    const njson& ring = field(j, "ring", "/");
    if (!ring.is_string() || ring.get<std::string>() != "rational")
        throw Error("unsupported ring at /ring (only \"rational\")");
    Bundle& b = doc.bundle;
    b.base = poset_from_block(field(j, "base", "/"), "/base");
    const njson& fibers = field(j, "fibers", "/");
    if (!fibers.is_array() || static_cast<int>(fibers.size()) != b.base.n)
        throw Error("expected one fiber per base element at /fibers");
    for (int x = 0; x < b.base.n; ++x)
        b.fibers.push_back(sheaf_from_block(fibers[x], strict, "/fibers/" + std::to_string(x)));
    const njson& arrows = field(j, "arrows", "/");
    if (!arrows.is_array()) throw Error("expected an array at /arrows");
    for (size_t i = 0; i < arrows.size(); ++i) {
        std::string apath = "/arrows/" + std::to_string(i);
        check_keys(arrows[i], {"cover", "vertex_map", "matrices"}, apath);
        const njson& cov = field(arrows[i], "cover", apath);
        if (!cov.is_array() || cov.size() != 2) throw Error("expected a pair at " + apath + "/cover");
        std::pair<int, int> c{int_field(cov[0], apath), int_field(cov[1], apath)};
        if (!std::binary_search(b.base.covers.begin(), b.base.covers.end(), c))
            throw Error("not a base cover at " + apath + "/cover");
        if (b.arrows.count(c)) throw Error("duplicate arrow at " + apath);
        const Sheaf& fx = b.fibers[c.first];
        const Sheaf& fy = b.fibers[c.second];
        BundleArrow a;
        const njson& vm = field(arrows[i], "vertex_map", apath);
        if (!vm.is_array() || static_cast<int>(vm.size()) != fx.poset.n)
            throw Error("expected one image per fiber element at " + apath + "/vertex_map");
        for (size_t u = 0; u < vm.size(); ++u) {
            int img = int_field(vm[u], apath + "/vertex_map/" + std::to_string(u));
            if (img < 0 || img >= fy.poset.n)
                throw Error("vertex image out of range at " + apath + "/vertex_map/" +
                            std::to_string(u));
            a.f.push_back(img);
        }
        const njson& ms = field(arrows[i], "matrices", apath);
        if (!ms.is_array() || static_cast<int>(ms.size()) != fx.poset.n)
            throw Error("expected one matrix per fiber element at " + apath + "/matrices");
        for (int u = 0; u < fx.poset.n; ++u)
            a.m.push_back(matrix_from_block(ms[u], fx.dims[u], fy.dims[a.f[u]], strict,
                                            apath + "/matrices/" + std::to_string(u)));
        b.arrows[c] = std::move(a);
    }
    for (auto c : b.base.covers)
        if (!b.arrows.count(c))
            throw Error("missing arrow for cover " + cover_name(b.base, c) + " at /arrows");
    if (j.contains("metadata")) {
        if (j.at("metadata").is_null()) throw Error("metadata must not be null at /metadata");
        doc.metadata = j.at("metadata");
    }
    CheckReport r = validate_bundle(b);
    if (!r.ok) throw Error("/: " + r.message);
    return doc;
}

std::string document_format(const std::string& text)
{
    njson j = parse_text(text);
    if (!j.is_object() || !j.contains("format") || !j.at("format").is_string())
        throw Error("document has no format tag");
    return j.at("format").get<std::string>();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("cannot write '" + path + "'");
}

std::string fnv1a_hex(const std::string& bytes)
{
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 15];
        h >>= 4;
    }
    return out;
}

bool Report::pass() const
{
    for (const ReportCheck& c : checks)
        if (!c.ok) return false;
    return true;
}

std::string Report::to_json() const
{
    njson j;
    j["command"] = command;
    j["input_digest"] = input_digest;
    njson cs = njson::array();
    for (const ReportCheck& c : checks) {
        njson e;
        e["name"] = c.name;
        e["ok"] = c.ok;
        e["note"] = c.note;
        cs.push_back(std::move(e));
    }
    j["checks"] = std::move(cs);
    j["tables"] = tables;
    if (seconds) j["seconds"] = *seconds;
    j["exit_code"] = exit_code;
    return j.dump(2) + "\n";
}

std::string Report::to_text() const
{
    std::ostringstream out;
    out << "command: " << command << "\n";
    out << "input: " << input_digest << "\n";
    for (const ReportCheck& c : checks) {
        out << "check " << c.name << ": " << (c.ok ? "pass" : "FAIL");
        if (!c.note.empty()) out << " (" << c.note << ")";
        out << "\n";
    }
    for (const auto& item : tables.items())
        out << "table " << item.key() << ": " << item.value().dump() << "\n";
    if (seconds) {
        out << "seconds: ";
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", *seconds);
        out << buf << "\n";
    }
    out << "exit: " << exit_code << "\n";
    return out.str();
}

Bundle collapse_bundle(int k)
{
    if (k < 1) throw Error("collapse_bundle: need at least one fiber vertex");
    Bundle b;
    b.base = chain_poset(2);
    b.fibers.push_back(constant_sheaf(chain_poset(k), 1));
    b.fibers.push_back(constant_sheaf(chain_poset(1), 1));
    BundleArrow a;
    a.f.assign(k, 0);
    a.m.assign(k, QMat::identity(1));
    b.arrows[{0, 1}] = std::move(a);
    return b;
}

Sheaf cube_sheaf()
{
    Sheaf f;
    f.poset = boolean_lattice(2);
    f.dims.assign(4, 2);
    QMat one = QMat::identity(2);
    QMat x(2, 2);  // multiplication by x in Q[x]/(x^2), basis (1, x)
    x(1, 0) = 1;
    f.rest[{0, 1}] = one;
    f.rest[{0, 2}] = x;
    f.rest[{1, 3}] = x;
    f.rest[{2, 3}] = one;
    return f;
}

Sheaf random_sheaf(const Poset& p, int max_dim, uint64_t seed)
{
    if (max_dim < 1) throw Error("random_sheaf: max_dim must be positive");
    std::mt19937_64 rng(seed);
    int mode = static_cast<int>(rng() % 3);
    if (mode == 0) {
        // Free matrices survive validation on diamond-free posets; elsewhere
        // fall through to a recipe that is valid by construction.
        for (int attempt = 0; attempt < 4; ++attempt) {
            Sheaf f;
            f.poset = p;
            for (int u = 0; u < p.n; ++u) f.dims.push_back(1 + static_cast<int>(rng() % max_dim));
            for (auto c : p.covers)
                f.rest[c] = random_matrix(f.dims[c.first], f.dims[c.second], rng);
            if (validate_sheaf(f).ok) return f;
        }
        mode = 2;
    }
    Sheaf f = (mode == 1) ? rank_one_sheaf(p, max_dim, rng) : level_pullback_sheaf(p, max_dim, rng);
    CheckReport r = validate_sheaf(f);
    if (!r.ok) throw Error("random_sheaf: construction broke path independence: " + r.message);
    return f;
}

Bundle random_bundle(const Poset& base, int max_fiber, int max_dim, uint64_t seed)
{
    if (max_fiber < 1) throw Error("random_bundle: max_fiber must be positive");
    std::mt19937_64 rng(seed);
    std::vector<int> lvl = element_levels(base);
    int h = 0;
    for (int x : lvl) h = std::max(h, x);

    // One fiber poset per height level, with a monotone collapse map between
    // consecutive levels. Vertex maps along arbitrary base arrows compose the
    // collapses, so functoriality holds for free.
    std::vector<Poset> level_fib;
    for (int i = 0; i <= h; ++i) {
        int n = 1 + static_cast<int>(rng() % max_fiber);
        double density = 0.2 + 0.6 * unit_draw(rng);
        level_fib.push_back(random_poset(n, density, rng()));
    }
    std::vector<std::vector<int>> g(h >= 0 ? h : 0);
    for (int i = 0; i < h; ++i) {
        const Poset& src = level_fib[i];
        const Poset& dst = level_fib[i + 1];
        bool done = false;
        for (int attempt = 0; attempt < 20 && !done; ++attempt) {
            std::vector<int> cand;
            for (int u = 0; u < src.n; ++u) cand.push_back(static_cast<int>(rng() % dst.n));
            done = true;
            for (int u = 0; u < src.n && done; ++u)
                for (int v = 0; v < src.n && done; ++v)
                    if (src.leq(u, v) && !dst.leq(cand[u], cand[v])) done = false;
            if (done) g[i] = std::move(cand);
        }
        if (!done) g[i].assign(src.n, static_cast<int>(rng() % dst.n));
    }
    auto hop = [&g](int from, int to, int u) {
        for (int i = from; i < to; ++i) u = g[i][u];
        return u;
    };

    // The glued total order, built directly so a sheaf can be drawn on it.
    std::vector<int> off(base.n, 0), pi, loc;
    for (int x = 0; x < base.n; ++x) {
        off[x] = static_cast<int>(pi.size());
        for (int u = 0; u < level_fib[lvl[x]].n; ++u) {
            pi.push_back(x);
            loc.push_back(u);
        }
    }
    int total = static_cast<int>(pi.size());
    auto leq_total = [&](int a, int c) {
        int x = pi[a], y = pi[c];
        if (!base.leq(x, y)) return false;
        return level_fib[lvl[y]].leq(hop(lvl[x], lvl[y], loc[a]), loc[c]);
    };
    std::vector<std::string> names;
    for (int a = 0; a < total; ++a)
        names.push_back(base.names[pi[a]] + "/" + level_fib[lvl[pi[a]]].names[loc[a]]);
    std::vector<std::pair<int, int>> covers;
    for (int a = 0; a < total; ++a)
        for (int c = 0; c < total; ++c) {
            if (a == c || !leq_total(a, c)) continue;
            bool direct = true;
            for (int w = 0; w < total && direct; ++w)
                if (w != a && w != c && leq_total(a, w) && leq_total(w, c)) direct = false;
            if (direct) covers.emplace_back(a, c);
        }
    Poset tp = validate_poset(names, covers);
    Sheaf glued = random_sheaf(tp, max_dim, rng());

    Bundle b;
    b.base = base;
    for (int x = 0; x < base.n; ++x) {
        Sheaf f;
        f.poset = level_fib[lvl[x]];
        for (int u = 0; u < f.poset.n; ++u) f.dims.push_back(glued.dims[off[x] + u]);
        for (auto c : f.poset.covers)
            f.rest[c] = restriction_along(glued, off[x] + c.first, off[x] + c.second);
        b.fibers.push_back(std::move(f));
    }
    for (auto c : base.covers) {
        BundleArrow a;
        for (int u = 0; u < level_fib[lvl[c.first]].n; ++u) {
            int img = hop(lvl[c.first], lvl[c.second], u);
            a.f.push_back(img);
            a.m.push_back(restriction_along(glued, off[c.first] + u, off[c.second] + img));
        }
        b.arrows[c] = std::move(a);
    }
    CheckReport r = validate_bundle(b);
    if (!r.ok) throw Error("random_bundle: construction produced an invalid bundle: " + r.message);
    return b;
}

Poset random_admissible_base(int n, uint64_t seed)
{
    if (n < 1) throw Error("random_admissible_base: need at least one element");
    if (n == 1) return chain_poset(1);
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        double density = 0.15 + 0.7 * unit_draw(rng);
        Poset q = random_poset(n - 1, density, rng());
        std::vector<char> has_lower(q.n, 0);
        for (auto [u, v] : q.covers) {
            (void)u;
            has_lower[v] = 1;
        }
        std::vector<std::string> names{"0"};
        for (int i = 0; i < q.n; ++i) names.push_back(std::to_string(i + 1));
        std::vector<std::pair<int, int>> covers;
        for (int i = 0; i < q.n; ++i)
            if (!has_lower[i]) covers.emplace_back(0, i + 1);
        for (auto [u, v] : q.covers) covers.emplace_back(u + 1, v + 1);
        Poset p = validate_poset(names, covers);
        if (is_recursively_admissible(p).ok) return p;
    }
    throw Error("random_admissible_base: retry budget exceeded");
}

}  // namespace psh
