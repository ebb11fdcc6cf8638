// Command line for the poset sheaf engine: document validation, cohomology,
// gluing, spectral pages, the comparison map, admissibility and the full
// certificate run, plus fixture generation.
//
// Exit codes: 0 pass, 1 validation failure, 2 property violated, 3 I/O error.

#include "posheaf/bicomplex.hpp"
#include "posheaf/decomp.hpp"
#include "posheaf/io.hpp"
#include "posheaf/traversal.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <functional>
#include <iostream>

using namespace psh;
using njson = nlohmann::ordered_json;

namespace {

struct Options {
    std::string input = "-";
    std::string out;
    std::string format = "text";
    bool strict = false;
    bool timings = false;
};

std::string read_input(const std::string& path)
{
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    return read_file(path);
}

void emit(const Options& opt, const std::string& text)
{
    if (opt.out.empty())
        std::cout << text;
    else
        write_file(opt.out, text);
}

using Clock = std::chrono::steady_clock;

int finish(const Options& opt, Report& rep, Clock::time_point start)
{
    if (opt.timings)
        rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    emit(opt, opt.format == "json" ? rep.to_json() : rep.to_text());
    return rep.exit_code;
}

int io_fail(const Error& e)
{
    std::cerr << "error: " << e.what() << "\n";
    return 3;
}

int load_fail(const Error& e)
{
    std::cerr << "error: " << e.what() << "\n";
    return 1;
}

njson betti_table(const std::vector<CohomStep>& h, int max_degree)
{
    njson out = njson::array();
    for (size_t n = 0; n < h.size(); ++n) {
        if (max_degree >= 0 && static_cast<int>(n) > max_degree) break;
        out.push_back(h[n].betti);
    }
    return out;
}

njson torsion_table(const std::vector<CohomStep>& h, int max_degree)
{
    njson out = njson::array();
    for (size_t n = 0; n < h.size(); ++n) {
        if (max_degree >= 0 && static_cast<int>(n) > max_degree) break;
        njson t = njson::array();
        for (const Int& d : h[n].torsion) t.push_back(d.get_str());
        out.push_back(std::move(t));
    }
    return out;
}

njson decomp_tree_json(const Poset& p, const DecompTree& t)
{
    njson j;
    njson members = njson::array();
    for (int v : t.members) members.push_back(p.names[v]);
    j["members"] = std::move(members);
    j["ok"] = t.ok;
    if (t.witness >= 0) j["witness"] = p.names[t.witness];
    if (!t.reason.empty()) j["reason"] = t.reason;
    if (t.up) j["up"] = decomp_tree_json(p, *t.up);
    if (t.rest) j["rest"] = decomp_tree_json(p, *t.rest);
    return j;
}

njson cert_node_json(const CertNode& c)
{
    njson j;
    j["members"] = c.members;
    j["ok"] = c.ok;
    if (c.leaf) {
        j["leaf"] = true;
        j["signed_identity"] = c.phi_ok;
    } else {
        j["witness"] = c.witness;
        j["cone_acyclic"] = c.phi_ok;
        j["cone_betti"] = c.cone_betti;
        j["e2"] = c.e2_ok;
        j["convergence"] = c.conv_ok;
        j["ladder"] = c.ladder_ok;
        j["alpha1"] = c.alpha1_ok;
        j["alpha2"] = c.alpha2_ok;
        j["les_total"] = c.les_total_ok;
        j["les_cochain"] = c.les_cochain_ok;
        if (c.alpha_const_checked) j["alpha_const"] = c.alpha_const_ok;
    }
    if (!c.message.empty()) j["message"] = c.message;
    if (c.up) j["up"] = cert_node_json(*c.up);
    if (c.rest) j["rest"] = cert_node_json(*c.rest);
    return j;
}

// The poset a document talks about, whatever its kind.
Poset poset_of_document(const std::string& bytes, bool strict)
{
    std::string fmt = document_format(bytes);
    if (fmt == "posheaf-poset/1") return poset_from_json(bytes, strict);
    if (fmt == "posheaf-sheaf/1") return sheaf_from_json(bytes, strict).poset;
    if (fmt == "posheaf-bundle/1") return bundle_from_json(bytes, strict).bundle.base;
    throw Error("unsupported document format \"" + fmt + "\"");
}

// Sheaf input for cohomology: a sheaf document directly, a bundle document
// through gluing.
Sheaf sheaf_of_document(const std::string& bytes, bool strict)
{
    std::string fmt = document_format(bytes);
    if (fmt == "posheaf-sheaf/1") return sheaf_from_json(bytes, strict);
    if (fmt == "posheaf-bundle/1")
        return total_sheaf(bundle_from_json(bytes, strict).bundle).sheaf;
    throw Error("expected a sheaf or bundle document, got \"" + fmt + "\"");
}

// Bundle input for pages, phi-check and verify-main: a bundle document
// directly, a sheaf document as the point-fiber bundle over its poset.
Bundle bundle_of_document(const std::string& bytes, bool strict)
{
    std::string fmt = document_format(bytes);
    if (fmt == "posheaf-bundle/1") return bundle_from_json(bytes, strict).bundle;
    if (fmt == "posheaf-sheaf/1") return sheaf_as_bundle(sheaf_from_json(bytes, strict));
    throw Error("expected a bundle or sheaf document, got \"" + fmt + "\"");
}

int run_validate(const Options& opt)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Report rep;
    rep.command = "validate";
    rep.input_digest = fnv1a_hex(bytes);
    try {
        std::string fmt = document_format(bytes);
        rep.tables["kind"] = fmt;
        if (fmt == "posheaf-poset/1") {
            Poset p = poset_from_json(bytes, opt.strict);
            rep.tables["elements"] = p.n;
            rep.tables["covers"] = p.covers.size();
        } else if (fmt == "posheaf-sheaf/1") {
            Sheaf f = sheaf_from_json(bytes, opt.strict);
            rep.tables["elements"] = f.poset.n;
            rep.tables["dims"] = f.dims;
        } else if (fmt == "posheaf-bundle/1") {
            BundleDocument d = bundle_from_json(bytes, opt.strict);
            rep.tables["base_elements"] = d.bundle.base.n;
            njson fd = njson::array();
            for (const Sheaf& f : d.bundle.fibers) fd.push_back(f.poset.n);
            rep.tables["fiber_sizes"] = std::move(fd);
        } else {
            throw Error("unsupported document format \"" + fmt + "\"");
        }
        rep.checks.push_back({"load", true, ""});
    } catch (const Error& e) {
        rep.checks.push_back({"load", false, e.what()});
        rep.exit_code = 1;
    }
    return finish(opt, rep, start);
}

int run_cohomology(const Options& opt, const std::string& ring, int max_degree)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Sheaf f;
    try {
        f = sheaf_of_document(bytes, opt.strict);
    } catch (const Error& e) {
        return load_fail(e);
    }
    Report rep;
    rep.command = "cohomology";
    rep.input_digest = fnv1a_hex(bytes);
    rep.tables["ring"] = ring;
    std::vector<CohomStep> h = (ring == "integer") ? sheaf_cohomology_z(f) : sheaf_cohomology(f);
    rep.tables["betti"] = betti_table(h, max_degree);
    if (ring == "integer") rep.tables["torsion"] = torsion_table(h, max_degree);
    return finish(opt, rep, start);
}

int run_total_sheaf(const Options& opt)
{
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    try {
        BundleDocument d = bundle_from_json(bytes, opt.strict);
        TotalSheaf ts = total_sheaf(d.bundle);
        emit(opt, sheaf_to_json(ts.sheaf));
    } catch (const Error& e) {
        return load_fail(e);
    }
    return 0;
}

int run_pages(const Options& opt)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Bundle b;
    try {
        b = bundle_of_document(bytes, opt.strict);
    } catch (const Error& e) {
        return load_fail(e);
    }
    Report rep;
    rep.command = "pages";
    rep.input_digest = fnv1a_hex(bytes);
    Bicomplex k = build_bicomplex(b);
    SpectralPages pg = spectral_pages(k);
    njson pages = njson::array();
    for (int r = 0; r < static_cast<int>(pg.pages.size()); ++r) {
        njson cells = njson::array();
        for (const auto& [cell, pc] : pg.pages[r]) {
            if (pc.dim == 0) continue;
            njson c;
            c["p"] = cell.first;
            c["q"] = cell.second;
            c["dim"] = pc.dim;
            cells.push_back(std::move(c));
        }
        njson row;
        row["r"] = r;
        row["cells"] = std::move(cells);
        pages.push_back(std::move(row));
    }
    rep.tables["pages"] = std::move(pages);
    E2Report e2 = e2_check(b, k, pg);
    std::string e2_note;
    njson e2_cells = njson::array();
    for (const E2Cell& c : e2.cells) {
        njson row;
        row["p"] = c.p;
        row["q"] = c.q;
        row["pages"] = c.from_pages;
        row["base"] = c.from_base_cohomology;
        e2_cells.push_back(std::move(row));
        if (!c.ok && e2_note.empty())
            e2_note = "cell (" + std::to_string(c.p) + "," + std::to_string(c.q) + ") disagrees";
    }
    rep.tables["e2"] = std::move(e2_cells);
    rep.checks.push_back({"e2", e2.ok, e2_note});
    ConvergenceReport cv = convergence_check(k, pg);
    std::string cv_note;
    njson cv_lines = njson::array();
    for (const ConvergenceLine& l : cv.lines) {
        njson row;
        row["n"] = l.n;
        row["einf"] = l.einf_total;
        row["betti"] = l.total_betti;
        cv_lines.push_back(std::move(row));
        if (!l.ok && cv_note.empty()) cv_note = "degree " + std::to_string(l.n) + " disagrees";
    }
    rep.tables["convergence"] = std::move(cv_lines);
    rep.checks.push_back({"convergence", cv.ok, cv_note});
    rep.exit_code = rep.pass() ? 0 : 2;
    return finish(opt, rep, start);
}

int run_phi_check(const Options& opt)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Bundle b;
    try {
        b = bundle_of_document(bytes, opt.strict);
    } catch (const Error& e) {
        return load_fail(e);
    }
    Report rep;
    rep.command = "phi-check";
    rep.input_digest = fnv1a_hex(bytes);
    Bicomplex k = build_bicomplex(b);
    TotalSheaf ts = total_sheaf(b);
    Complex t = total_complex(k);
    Complex s = cochain_complex(ts.sheaf.poset, ts.sheaf);
    ChainMap g{s, t, phi(b, ts, s, t)};
    CheckReport cm = chain_map_check(g);
    rep.checks.push_back({"chain-map", cm.ok, cm.message});
    if (cm.ok) {
        ConeCertificate cert = is_quasi_iso(g);
        rep.checks.push_back({"quasi-iso", cert.quasi_iso, ""});
        rep.tables["cone_betti"] = cert.cone_betti;
    }
    rep.exit_code = rep.pass() ? 0 : 2;
    return finish(opt, rep, start);
}

int run_admissible(const Options& opt)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Poset p;
    try {
        p = poset_of_document(bytes, opt.strict);
    } catch (const Error& e) {
        return load_fail(e);
    }
    Report rep;
    rep.command = "admissible";
    rep.input_digest = fnv1a_hex(bytes);
    DecompTree tree = is_recursively_admissible(p);
    std::string note;
    if (tree.witness >= 0) note = "witness '" + p.names[tree.witness] + "'";
    if (!tree.ok) note = tree.reason;
    rep.checks.push_back({"recursively-admissible", tree.ok, note});
    rep.tables["tree"] = decomp_tree_json(p, tree);
    rep.exit_code = tree.ok ? 0 : 2;
    return finish(opt, rep, start);
}

int run_verify_main(const Options& opt)
{
    auto start = Clock::now();
    std::string bytes;
    try {
        bytes = read_input(opt.input);
    } catch (const Error& e) {
        return io_fail(e);
    }
    Bundle b;
    try {
        b = bundle_of_document(bytes, opt.strict);
    } catch (const Error& e) {
        return load_fail(e);
    }
    Report rep;
    rep.command = "verify-main";
    rep.input_digest = fnv1a_hex(bytes);
    try {
        std::unique_ptr<CertNode> cert = verify_main_theorem(b);
        rep.checks.push_back({"certificate", cert->ok, cert->message});
        rep.tables["nodes"] = cert->nodes();
        rep.tables["tree"] = cert_node_json(*cert);
        rep.exit_code = cert->ok ? 0 : 2;
    } catch (const Error& e) {
        rep.checks.push_back({"certificate", false, e.what()});
        rep.exit_code = 2;
    }
    return finish(opt, rep, start);
}

Sheaf fiber_from_flags(const std::string& fiber_file, int fiber_size, int fiber_dim, bool strict)
{
    if (!fiber_file.empty()) return sheaf_from_json(read_file(fiber_file), strict);
    return constant_sheaf(chain_poset(fiber_size), fiber_dim);
}

int emit_bundle(const Options& opt, const Bundle& b)
{
    BundleDocument d;
    d.bundle = b;
    emit(opt, bundle_to_json(d));
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sheaf cohomology on finite posets: gluing, spectral pages, certificates"};
    app.require_subcommand(1);

    Options opt;
    std::function<int()> action;

    auto add_common = [&opt](CLI::App* sc, bool takes_input) {
        if (takes_input)
            sc->add_option("input", opt.input, "input document, - for stdin");
        sc->add_option("-o,--out", opt.out, "write output to a file instead of stdout");
        sc->add_option("--format", opt.format, "report format: text or json")
            ->check(CLI::IsMember({"text", "json"}));
        sc->add_flag("--strict", opt.strict, "reject non-canonical rational strings");
        sc->add_flag("--timings", opt.timings, "attach wall time to the report");
    };

    CLI::App* val = app.add_subcommand("validate", "load and validate a document");
    add_common(val, true);
    val->callback([&] { action = [&] { return run_validate(opt); }; });

    std::string ring = "rational";
    int max_degree = -1;
    CLI::App* coh = app.add_subcommand("cohomology", "cohomology of a sheaf, gluing bundles first");
    add_common(coh, true);
    coh->add_option("--ring", ring, "rational or integer (adds torsion)")
        ->check(CLI::IsMember({"rational", "integer"}));
    coh->add_option("--max-degree", max_degree, "truncate the reported degrees");
    coh->callback([&] { action = [&] { return run_cohomology(opt, ring, max_degree); }; });

    CLI::App* tot = app.add_subcommand("total-sheaf", "glue a bundle and emit the total sheaf");
    add_common(tot, true);
    tot->callback([&] { action = [&] { return run_total_sheaf(opt); }; });

    CLI::App* pg = app.add_subcommand("pages", "spectral pages with the identification and convergence checks");
    add_common(pg, true);
    pg->callback([&] { action = [&] { return run_pages(opt); }; });

    CLI::App* ph = app.add_subcommand("phi-check", "comparison chain map and its cone certificate");
    add_common(ph, true);
    ph->callback([&] { action = [&] { return run_phi_check(opt); }; });

    CLI::App* ad = app.add_subcommand("admissible", "recursive admissibility witness and decomposition tree");
    add_common(ad, true);
    ad->callback([&] { action = [&] { return run_admissible(opt); }; });

    CLI::App* vm = app.add_subcommand("verify-main", "full certificate tree for a bundle");
    add_common(vm, true);
    vm->callback([&] { action = [&] { return run_verify_main(opt); }; });

    CLI::App* gen = app.add_subcommand("gen", "emit fixture documents");
    gen->require_subcommand(1);
    int gen_n = 2, fiber_size = 2, fiber_dim = 1;
    bool poset_only = false;
    std::string base_file, fiber_file;
    uint64_t seed = 0;
    int base_size = 4, max_fiber = 2, max_dim = 2;

    CLI::App* gb = gen->add_subcommand("boolean", "constant bundle over the boolean lattice B_n");
    add_common(gb, false);
    gb->add_option("n", gen_n, "number of atoms")->required();
    gb->add_option("--fiber-size", fiber_size, "fiber chain length");
    gb->add_option("--fiber-dim", fiber_dim, "fiber stalk dimension");
    gb->add_flag("--poset-only", poset_only, "emit just the base poset document");
    gb->callback([&] {
        action = [&] {
            if (poset_only) {
                emit(opt, poset_to_json(boolean_lattice(gen_n)));
                return 0;
            }
            return emit_bundle(opt, constant_bundle(boolean_lattice(gen_n),
                                                    constant_sheaf(chain_poset(fiber_size), fiber_dim)));
        };
    });

    CLI::App* gc = gen->add_subcommand("chain", "constant bundle over the chain C_n");
    add_common(gc, false);
    gc->add_option("n", gen_n, "number of elements")->required();
    gc->add_option("--fiber-size", fiber_size, "fiber chain length");
    gc->add_option("--fiber-dim", fiber_dim, "fiber stalk dimension");
    gc->add_flag("--poset-only", poset_only, "emit just the base poset document");
    gc->callback([&] {
        action = [&] {
            if (poset_only) {
                emit(opt, poset_to_json(chain_poset(gen_n)));
                return 0;
            }
            return emit_bundle(opt, constant_bundle(chain_poset(gen_n),
                                                    constant_sheaf(chain_poset(fiber_size), fiber_dim)));
        };
    });

    CLI::App* gk = gen->add_subcommand("constant-bundle", "constant bundle over a poset document");
    add_common(gk, false);
    gk->add_option("--base-file", base_file, "poset document for the base")->required();
    gk->add_option("--fiber-file", fiber_file, "sheaf document for the fiber");
    gk->add_option("--fiber-size", fiber_size, "fiber chain length when no file is given");
    gk->add_option("--fiber-dim", fiber_dim, "fiber stalk dimension when no file is given");
    gk->callback([&] {
        action = [&] {
            try {
                Poset base = poset_from_json(read_file(base_file), opt.strict);
                Sheaf fiber = fiber_from_flags(fiber_file, fiber_size, fiber_dim, opt.strict);
                return emit_bundle(opt, constant_bundle(base, fiber));
            } catch (const Error& e) {
                return load_fail(e);
            }
        };
    });

    CLI::App* gr = gen->add_subcommand("random", "random bundle over a random admissible base");
    add_common(gr, false);
    gr->add_option("--seed", seed, "generator seed");
    gr->add_option("--base-size", base_size, "base element count");
    gr->add_option("--max-fiber", max_fiber, "largest fiber poset");
    gr->add_option("--max-dim", max_dim, "largest stalk dimension");
    gr->callback([&] {
        action = [&] {
            Poset base = random_admissible_base(base_size, seed);
            return emit_bundle(opt, random_bundle(base, max_fiber, max_dim,
                                                  seed ^ 0x9e3779b97f4a7c15ull));
        };
    });

    CLI::App* gl = gen->add_subcommand("collapse", "chain fiber collapsing onto a point over a 2-chain");
    add_common(gl, false);
    gl->add_option("k", fiber_size, "fiber chain length")->required();
    gl->callback([&] { action = [&] { return emit_bundle(opt, collapse_bundle(fiber_size)); }; });

    CLI::App* gq = gen->add_subcommand("cube", "the canned commuting-square sheaf document");
    add_common(gq, false);
    gq->callback([&] { action = [&] {
        emit(opt, sheaf_to_json(cube_sheaf()));
        return 0;
    }; });

    CLI11_PARSE(app, argc, argv);
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
