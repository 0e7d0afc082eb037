#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pmres/io.hpp"
#include "pmres/mesh.hpp"
#include "pmres/verify.hpp"

using namespace pmres;
using namespace pmres::testing;

namespace {

json trigon_json() {
    return json::parse(R"({"dimension":1,"facets":[[0,1],[1,2],[2,0]],"labels":[[[0],0],[[1],1],[[2],2]]})");
}

ComplexFile file_of(const SimplicialComplex& c) {
    ComplexFile f;
    f.dimension = c.dimension;
    f.facets = c.facets;
    return f;
}

}  // namespace

TEST_CASE("complex files parse and round-trip", "[io]") {
    auto f = parse_complex_file(trigon_json());
    CHECK(f.dimension == 1);
    CHECK(f.facets.size() == 3);
    REQUIRE(f.labels);
    CHECK(f.labels->labels.size() == 3);

    // parse . emit . parse == parse, and emit is byte-stable on the result
    json emitted = emit_complex_file(f);
    auto f2 = parse_complex_file(emitted);
    CHECK(emit_complex_file(f2).dump() == emitted.dump());

    auto pm = file_to_pseudo_manifold(f);
    CHECK(pm.complex.facets.size() == 3);
}

TEST_CASE("schema violations carry field diagnostics", "[io]") {
    auto expect_schema = [](const char* text, const char* needle) {
        try {
            parse_complex_file(json::parse(text));
            FAIL("expected a SchemaError");
        } catch (const Error& e) {
            CHECK(e.kind() == "SchemaError");
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_schema(R"({"facets":[[0,1]]})", "dimension");
    expect_schema(R"({"dimension":1})", "facets");
    expect_schema(R"({"dimension":1,"facets":[[0,1]],"orientation":[1,1]})", "orientation");
    expect_schema(R"({"dimension":1,"facets":[[0,1]],"coloring":[[0]]})", "coloring");

    // a facet with a repeated vertex fails when the complex is built
    auto f = parse_complex_file(json::parse(R"({"dimension":1,"facets":[[0,0]]})"));
    CHECK_THROWS_MATCHES(make_complex(f.dimension, f.facets), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.kind() == "SchemaError"; }));
}

TEST_CASE("orientation entries are canonicalized with the facet sort", "[io]") {
    // facet listed in non-sorted vertex order with +1 means the oriented
    // simplex as listed; the emitted sign refers to sorted order
    ComplexFile f;
    f.dimension = 1;
    f.facets = {{1, 0}, {1, 2}, {2, 0}};
    f.orientation = std::vector<signed char>{1, 1, 1};
    json j = emit_complex_file(f);
    CHECK(j["facets"] == json::parse("[[0,1],[0,2],[1,2]]"));
    // [1,0] and [2,0] reverse when sorted; [1,2] does not
    CHECK(j["orientation"] == json::parse("[-1,-1,1]"));
}

TEST_CASE("run reports are byte-stable apart from the timing block", "[io]") {
    auto pm = make_pseudo_manifold(simplex_boundary(2));
    ComplexFile f = file_of(pm.complex);
    auto out1 = resolve_pipeline(pm);
    auto out2 = resolve_pipeline(pm);
    json r1 = build_run_report(f, out1, 1000000, 1.0);
    json r2 = build_run_report(f, out2, 1000000, 999.0);
    CHECK(r1["timing"] != r2["timing"]);
    r1.erase("timing");
    r2.erase("timing");
    CHECK(r1.dump() == r2.dump());
    CHECK(r1["input"]["digest_fnv1a64"] == input_digest(f));
}

TEST_CASE("export bundles verify, tampered bundles do not", "[io]") {
    auto pm = make_pseudo_manifold(polygon(3));
    GoodLabeling lab;
    for (const Cell& f : proper_faces(pm.complex))
        if (cell_dim(f) == 0) lab.labels[f] = f[0];
    ComplexFile f = file_of(pm.complex);
    f.labels = lab;
    auto out = resolve_pipeline(pm, std::nullopt, lab);
    json bundle = export_bundle(f, out, 1000000, 0.0);

    auto rep = verify_bundle(bundle);
    CHECK(rep.ok);
    CHECK(rep.problems.empty());

    SECTION("tampered h") {
        bundle["cubes"][3]["h"] = 1 - bundle["cubes"][3]["h"].get<int>();
        auto bad = verify_bundle(bundle);
        CHECK_FALSE(bad.ok);
    }
    SECTION("tampered adjacency") {
        auto row = bundle["adjacency"][0];
        bundle["adjacency"][0][0] = (row[0].get<int>() + 1) % bundle["cubes"].size();
        auto bad = verify_bundle(bundle);
        CHECK_FALSE(bad.ok);
    }
    SECTION("tampered sign") {
        bundle["cube_signs"][2] = -bundle["cube_signs"][2].get<int>();
        auto bad = verify_bundle(bundle);
        CHECK_FALSE(bad.ok);
    }
    SECTION("tampered report") {
        bundle["report"]["degree"]["r"] = 7;
        auto bad = verify_bundle(bundle);
        CHECK_FALSE(bad.ok);
    }
}

TEST_CASE("OFF export needs a surface run", "[io]") {
    auto pm = make_pseudo_manifold(polygon(3));
    GoodLabeling lab;
    for (const Cell& f : proper_faces(pm.complex))
        if (cell_dim(f) == 0) lab.labels[f] = f[0];
    auto out = resolve_pipeline(pm, std::nullopt, lab);
    CHECK_THROWS_AS(export_off(out, std::nullopt), Error);

    auto sp = make_pseudo_manifold(simplex_boundary(2));
    auto sout = resolve_pipeline(sp);
    auto off = export_off(sout, std::nullopt);
    CHECK(off.substr(0, 4) == "OFF\n");
    // header counts match the order complex
    std::istringstream ss(off);
    std::string tag;
    std::size_t nv = 0, nf = 0, ne = 0;
    ss >> tag >> nv >> nf >> ne;
    CHECK(nv == sout.quotient.class_count);
    CHECK(nf == 8 * static_cast<std::size_t>(sout.comp.count));
}

TEST_CASE("census report serialization", "[io]") {
    auto oct = make_pseudo_manifold(octahedron());
    auto rep = census_match(oct, {});
    json j = census_report_json(rep);
    CHECK(j["matched"].get<bool>());
    CHECK(j["r"].get<long>() == 0);
    CHECK(j["classes"].size() == rep.classes.size());
}
