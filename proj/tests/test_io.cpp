#include "doctest.h"

#include "posheaf/decomp.hpp"
#include "posheaf/io.hpp"

#include "json.hpp"

#include <cstdio>
#include <functional>
#include <string>

using namespace psh;
using njson = nlohmann::ordered_json;

namespace {

Sheaf halving_sheaf()
{
    Sheaf f;
    f.poset = chain_poset(2);
    f.dims = {1, 1};
    QMat half(1, 1);
    half(0, 0) = Rat(1, 2);
    f.rest[{0, 1}] = half;
    return f;
}

std::string message_of(const std::function<void()>& run)
{
    try {
        run();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("documents round-trip byte for byte")
{
    std::string p = poset_to_json(boolean_lattice(2));
    CHECK(poset_to_json(poset_from_json(p)) == p);
    std::string p2 = poset_to_json(random_poset(5, 0.4, 3));
    CHECK(poset_to_json(poset_from_json(p2)) == p2);

    std::string s = sheaf_to_json(halving_sheaf());
    CHECK(sheaf_to_json(sheaf_from_json(s, true)) == s);
    std::string s2 = sheaf_to_json(cube_sheaf());
    CHECK(sheaf_to_json(sheaf_from_json(s2, true)) == s2);

    std::string b = bundle_to_json({collapse_bundle(2), "rational", nullptr});
    CHECK(bundle_to_json(bundle_from_json(b, true)) == b);
}

TEST_CASE("metadata survives the round trip and may not be null")
{
    BundleDocument doc{collapse_bundle(1), "rational", njson::object()};
    doc.metadata["label"] = "smallest collapse";
    doc.metadata["steps"] = 1;
    std::string text = bundle_to_json(doc);
    BundleDocument back = bundle_from_json(text);
    CHECK(back.metadata == doc.metadata);
    CHECK(bundle_to_json(back) == text);

    njson j = njson::parse(text);
    j["metadata"] = nullptr;
    std::string msg = message_of([&] { bundle_from_json(j.dump()); });
    CHECK(msg.find("metadata must not be null") != std::string::npos);
}

TEST_CASE("format tags identify documents without full validation")
{
    CHECK(document_format(poset_to_json(chain_poset(2))) == "posheaf-poset/1");
    CHECK(document_format(sheaf_to_json(halving_sheaf())) == "posheaf-sheaf/1");
    CHECK(document_format(bundle_to_json({collapse_bundle(1), "rational", nullptr})) ==
          "posheaf-bundle/1");
    CHECK(document_format("{\"format\": \"anything/9\"}") == "anything/9");
    CHECK_THROWS_AS(document_format("{\"fmt\": 1}"), Error);
    CHECK_THROWS_AS(document_format("not json"), Error);
}

TEST_CASE("poset parsing rejects malformed documents with a path")
{
    njson good = njson::parse(poset_to_json(boolean_lattice(2)));

    njson j = good;
    j["extra"] = 1;
    CHECK(message_of([&] { poset_from_json(j.dump()); }).find("unknown key 'extra'") !=
          std::string::npos);

    j = good;
    j.erase("covers");
    CHECK(message_of([&] { poset_from_json(j.dump()); }).find("missing key 'covers'") !=
          std::string::npos);

    j = good;
    j["format"] = "posheaf-poset/2";
    CHECK(message_of([&] { poset_from_json(j.dump()); }).find("expected format") !=
          std::string::npos);

    // Covers are index pairs, not name pairs.
    j = good;
    j["covers"][0] = njson::array({"a", "b"});
    CHECK(message_of([&] { poset_from_json(j.dump()); }).find("expected an integer") !=
          std::string::npos);

    // Relation problems surface with the document path prefixed.
    j = good;
    j["covers"] = njson::array({njson::array({0, 1}), njson::array({1, 0})});
    std::string msg = message_of([&] { poset_from_json(j.dump()); });
    CHECK(msg.rfind("/", 0) == 0);
    CHECK_FALSE(msg.empty());
}

TEST_CASE("sheaf parsing rejects shape and cover problems")
{
    njson good = njson::parse(sheaf_to_json(halving_sheaf()));

    njson j = good;
    j["restrictions"][0]["cover"] = njson::array({1, 0});
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("not a cover of the poset") !=
          std::string::npos);

    j = good;
    j["restrictions"][0]["matrix"] = njson::array();
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("matrix rows") !=
          std::string::npos);

    j = good;
    j["restrictions"] = njson::array();
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("missing restriction matrix") !=
          std::string::npos);

    j = good;
    j["restrictions"].push_back(j["restrictions"][0]);
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("duplicate restriction") !=
          std::string::npos);

    j = good;
    j["restrictions"][0]["matrix"][0][0] = "1/0";
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("bad rational \"1/0\"") !=
          std::string::npos);

    j = good;
    j["dims"] = njson::array({1});
    CHECK(message_of([&] { sheaf_from_json(j.dump()); }).find("one dimension per element") !=
          std::string::npos);
}

TEST_CASE("bundle parsing rejects ring, map, and arrow problems")
{
    njson good = njson::parse(bundle_to_json({collapse_bundle(2), "rational", nullptr}));

    njson j = good;
    j["ring"] = "integer";
    CHECK(message_of([&] { bundle_from_json(j.dump()); }).find("unsupported ring") !=
          std::string::npos);

    j = good;
    j["arrows"][0]["vertex_map"][0] = 7;
    CHECK(message_of([&] { bundle_from_json(j.dump()); }).find("vertex image out of range") !=
          std::string::npos);

    j = good;
    j["arrows"] = njson::array();
    CHECK(message_of([&] { bundle_from_json(j.dump()); }).find("missing arrow for cover") !=
          std::string::npos);

    j = good;
    j["fibers"] = njson::array();
    CHECK(message_of([&] { bundle_from_json(j.dump()); }).find("one fiber per base element") !=
          std::string::npos);
}

TEST_CASE("strict parsing pins rational spellings, lenient normalizes them")
{
    njson j = njson::parse(sheaf_to_json(halving_sheaf()));
    j["restrictions"][0]["matrix"][0][0] = "2/4";
    std::string text = j.dump();

    Sheaf lenient = sheaf_from_json(text);
    CHECK(lenient.rest.at({0, 1})(0, 0) == Rat(1, 2));
    CHECK(sheaf_to_json(lenient).find("\"1/2\"") != std::string::npos);
    CHECK(message_of([&] { sheaf_from_json(text, true); }).find("bad rational \"2/4\"") !=
          std::string::npos);

    j["restrictions"][0]["matrix"][0][0] = "02";
    CHECK(sheaf_from_json(j.dump()).rest.at({0, 1})(0, 0) == Rat(2));
    CHECK_THROWS_AS(sheaf_from_json(j.dump(), true), Error);

    // Signed noise is rejected in both modes.
    j["restrictions"][0]["matrix"][0][0] = "+2";
    CHECK_THROWS_AS(sheaf_from_json(j.dump()), Error);
    CHECK_THROWS_AS(sheaf_from_json(j.dump(), true), Error);
}

TEST_CASE("digest is frozen on known bytes")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("posheaf") != fnv1a_hex("posheag"));
}

TEST_CASE("reports render deterministically in both formats")
{
    Report r;
    r.command = "check";
    r.input_digest = fnv1a_hex("sample");
    r.checks.push_back({"shapes", true, ""});
    r.checks.push_back({"naturality", false, "square (0,1)"});
    r.tables["dims"] = njson::array({2, 1});
    r.exit_code = 2;

    CHECK_FALSE(r.pass());
    CHECK(r.to_json() == r.to_json());
    CHECK(r.to_text() == r.to_text());
    CHECK(r.to_json().find("\"seconds\"") == std::string::npos);
    CHECK(r.to_text().find("check naturality: FAIL (square (0,1))") != std::string::npos);
    CHECK(r.to_text().find("exit: 2") != std::string::npos);

    njson parsed = njson::parse(r.to_json());
    CHECK(parsed["exit_code"] == 2);
    CHECK(parsed["checks"][0]["ok"] == true);
    CHECK(parsed["tables"]["dims"] == njson::array({2, 1}));

    r.seconds = 1.25;
    CHECK(r.to_json().find("\"seconds\"") != std::string::npos);
    CHECK(r.to_text().find("seconds: 1.250") != std::string::npos);

    Report empty;
    CHECK(empty.pass());
}

TEST_CASE("files round-trip through the filesystem")
{
    std::string path = "roundtrip_scratch.json";
    std::string text = poset_to_json(chain_poset(3));
    write_file(path, text);
    CHECK(read_file(path) == text);
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("no_such_directory/really_not_here.json"), Error);
}

TEST_CASE("collapse bundles have the documented shape and gluing")
{
    CHECK_THROWS_AS(collapse_bundle(0), Error);
    for (int k = 1; k <= 4; ++k) {
        Bundle b = collapse_bundle(k);
        CHECK(validate_bundle(b).ok);
        CHECK(b.base.n == 2);
        CHECK(b.fibers[0].poset.n == k);
        CHECK(b.fibers[1].poset.n == 1);
        TotalSheaf ts = total_sheaf(b);
        CHECK(ts.sheaf.poset.n == k + 1);
        CHECK(static_cast<int>(ts.sheaf.poset.covers.size()) == k);
        for (int d : ts.sheaf.dims) CHECK(d == 1);
    }
}

TEST_CASE("the cube square sheaf is valid with frozen cohomology")
{
    Sheaf f = cube_sheaf();
    CHECK(validate_sheaf(f).ok);
    CHECK(f.poset.n == 4);
    for (int d : f.dims) CHECK(d == 2);
    std::vector<int> betti;
    for (const CohomStep& h : sheaf_cohomology(f)) betti.push_back(h.betti);
    CHECK(betti == std::vector<int>({2, 0, 0}));
}

TEST_CASE("random generators always produce valid objects")
{
    for (uint64_t seed = 0; seed < 25; ++seed) {
        Poset p = random_poset(5, 0.35, seed);
        Sheaf f = random_sheaf(p, 3, seed);
        CHECK(validate_sheaf(f).ok);
        Bundle b = random_bundle(random_poset(3, 0.5, seed ^ 77), 3, 2, seed);
        CHECK(validate_bundle(b).ok);
    }
}

TEST_CASE("random generators are deterministic in their seeds")
{
    CHECK(sheaf_to_json(random_sheaf(boolean_lattice(2), 3, 11)) ==
          sheaf_to_json(random_sheaf(boolean_lattice(2), 3, 11)));
    CHECK(bundle_to_json({random_bundle(chain_poset(3), 3, 2, 4), "rational", nullptr}) ==
          bundle_to_json({random_bundle(chain_poset(3), 3, 2, 4), "rational", nullptr}));
    CHECK(poset_to_json(random_admissible_base(5, 2)) ==
          poset_to_json(random_admissible_base(5, 2)));
    CHECK(sheaf_to_json(random_sheaf(boolean_lattice(2), 3, 11)) !=
          sheaf_to_json(random_sheaf(boolean_lattice(2), 3, 12)));
}

TEST_CASE("random admissible bases are accepted by the recognizer")
{
    for (uint64_t seed = 0; seed < 8; ++seed) {
        Poset p = random_admissible_base(4 + static_cast<int>(seed % 3), seed);
        DecompTree t = is_recursively_admissible(p);
        CHECK(t.ok);
    }
}
