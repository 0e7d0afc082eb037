// Command-line front end: validate / label / resolve / verify / census.
// All structured input and output is JSON; see README for the schemas.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pmres/io.hpp"
#include "pmres/mesh.hpp"
#include "pmres/verify.hpp"

using namespace pmres;

namespace {

void emit_output(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        ioutil::write_file(out_path, text);
}

int run_validate(const std::string& in_path, const std::string& out_path) {
    ComplexFile file = parse_complex_path(in_path);
    SimplicialComplex c = make_complex(file.dimension, file.facets);
    SkeletonReport rep = validate(c);

    json j;
    j["pure"] = rep.pure;
    j["ridge_degrees_ok"] = rep.ridge_degrees_ok;
    j["ridge_degree_histogram"] = json::object();
    for (const auto& [deg, cnt] : rep.ridge_degree_histogram)
        j["ridge_degree_histogram"][std::to_string(deg)] = cnt;
    j["strongly_connected"] = rep.strongly_connected;
    j["exact"] = rep.exact;
    j["singular_faces"] = json::array();
    for (const auto& s : rep.singular_faces) {
        json sf;
        sf["face"] = s.face;
        sf["link_dimension"] = s.link_dimension;
        sf["detail"] = s.detail;
        j["singular_faces"].push_back(sf);
    }
    std::string orientable_error;
    bool orientable = true;
    if (rep.ok()) {
        try {
            auto pm = file.orientation ? make_pseudo_manifold(c, file.orientation) : make_pseudo_manifold(c);
            (void)pm;
        } catch (const Error& e) {
            orientable = false;
            orientable_error = e.what();
        }
    }
    j["orientable"] = orientable;
    if (!orientable) j["orientation_error"] = orientable_error;
    emit_output(j, out_path);
    if (!rep.ok()) return static_cast<int>(ExitCode::validation);
    if (!orientable) return static_cast<int>(ExitCode::validation);
    return 0;
}

int run_label(const std::string& in_path, const std::string& coloring_path, const std::string& out_path) {
    ComplexFile file = parse_complex_path(in_path);
    PseudoManifold pm = file_to_pseudo_manifold(file);

    std::optional<std::map<VertexId, int>> coloring = file.coloring;
    if (!coloring_path.empty()) {
        json cj = ioutil::parse_json(ioutil::read_file(coloring_path), coloring_path);
        if (!cj.is_object() || !cj.contains("coloring"))
            throw err::schema(coloring_path + ": expected an object with a 'coloring' field");
        ComplexFile wrapper = parse_complex_file(
            json{{"dimension", file.dimension}, {"facets", json(file.facets)}, {"coloring", cj["coloring"]}});
        coloring = wrapper.coloring;
    }

    auto r = ensure_good(pm, coloring, file.labels);
    ComplexFile outf;
    outf.dimension = r.pm.dimension();
    outf.facets = r.pm.complex.facets;
    outf.orientation = r.pm.orientation;
    outf.labels = r.labeling;
    json j = emit_complex_file(outf);
    j["provenance"] = to_string(r.provenance);
    emit_output(j, out_path);
    return 0;
}

int run_resolve(const std::string& in_path, std::uint64_t seed_flag, std::uint64_t max_states,
                const std::string& export_path, const std::string& off_path, const std::string& order_path,
                const std::string& all_from, const std::string& out_path) {
    auto t0 = std::chrono::steady_clock::now();
    ComplexFile file = parse_complex_path(in_path);
    PseudoManifold pm = file_to_pseudo_manifold(file);

    std::vector<std::uint32_t> seeds;
    if (all_from.empty()) {
        seeds.push_back(static_cast<std::uint32_t>(seed_flag));
    } else {
        std::stringstream ss(all_from);
        std::string tok;
        while (std::getline(ss, tok, ',')) seeds.push_back(static_cast<std::uint32_t>(std::stoull(tok)));
        if (seeds.empty()) throw err::schema("--all-from: empty seed list");
    }

    json reports = json::array();
    for (std::uint32_t seed : seeds) {
        ResolveOptions opts;
        opts.seed_flag = seed;
        opts.max_states = max_states;
        ResolveOutcome out = resolve_pipeline(pm, file.coloring, file.labels, opts);
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        json rep = build_run_report(file, out, max_states, ms);
        reports.push_back(rep);

        if (seeds.size() == 1) {
            if (!export_path.empty())
                ioutil::write_file(export_path, export_bundle(file, out, max_states, ms).dump(2) + "\n");
            if (!order_path.empty()) {
                auto oc = order_complex(out.quotient, out.cube_signs);
                ComplexFile ocf;
                ocf.dimension = oc.pm.dimension();
                ocf.facets = oc.pm.complex.facets;
                ocf.orientation = oc.pm.orientation;
                ioutil::write_file(order_path, emit_complex_file(ocf).dump(2) + "\n");
            }
            if (!off_path.empty()) ioutil::write_file(off_path, export_off(out, file.coordinates));
        }
    }
    if (seeds.size() == 1) {
        emit_output(reports[0], out_path);
    } else {
        json multi;
        multi["schema_version"] = 1;
        multi["tool"] = "pmres";
        multi["seeds"] = seeds;
        multi["components"] = reports;
        emit_output(multi, out_path);
    }
    return 0;
}

int run_verify(const std::string& bundle_path, const std::string& out_path) {
    json bundle = ioutil::parse_json(ioutil::read_file(bundle_path), bundle_path);
    VerifyReport rep = verify_bundle(bundle);
    json j;
    j["ok"] = rep.ok;
    j["problems"] = rep.problems;
    emit_output(j, out_path);
    return rep.ok ? 0 : static_cast<int>(ExitCode::internal);
}

int run_census(const std::string& manifold_path, const std::string& prescription_path,
               const std::string& out_path) {
    ComplexFile mf = parse_complex_path(manifold_path);
    PseudoManifold m = file_to_pseudo_manifold(mf);
    SkeletonReport sk = validate(m.complex);
    if (!sk.singular_faces.empty())
        throw err::pattern_mismatch("census input is not a manifold: " +
                                    std::to_string(sk.singular_faces.size()) + " singular face(s)");

    json pj = ioutil::parse_json(ioutil::read_file(prescription_path), prescription_path);
    if (!pj.is_object() || !pj.contains("spheres") || !pj["spheres"].is_array())
        throw err::schema(prescription_path + ": expected an object with a 'spheres' array");
    std::vector<OrientedSphere> ys;
    for (const auto& sj : pj["spheres"]) {
        if (!sj.is_object() || !sj.contains("facets"))
            throw err::schema("prescription spheres need a 'facets' field");
        std::vector<Cell> facets;
        for (const auto& fj : sj["facets"]) facets.push_back(ioutil::cell_from_json(fj, "spheres.facets"));
        int dim = static_cast<int>(facets[0].size()) - 1;
        SimplicialComplex c = make_complex(std::max(dim, 0), facets);
        std::optional<std::vector<signed char>> ori;
        if (sj.contains("orientation")) {
            std::vector<signed char> signs;
            for (const auto& s : sj["orientation"]) signs.push_back(static_cast<signed char>(s.get<int>()));
            ori = std::move(signs);
        }
        ys.push_back(make_oriented_sphere(std::move(c), std::move(ori)));
    }

    CensusReport rep = census_match(m, ys);
    emit_output(census_report_json(rep), out_path);
    return rep.matched ? 0 : static_cast<int>(ExitCode::validation);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resolution of pseudo-manifold singularities by cube-complex assembly"};
    app.require_subcommand(1);

    std::string in_path, out_path, coloring_path, export_path, off_path, order_path, all_from;
    std::string bundle_path, manifold_path, prescription_path;
    std::uint64_t seed_flag = 0, max_states = 1000000;

    auto* validate_cmd = app.add_subcommand("validate", "pseudo-manifold checks and singular-face census");
    validate_cmd->add_option("input", in_path, "complex file (JSON)")->required();
    validate_cmd->add_option("--out", out_path, "write the report here instead of stdout");

    auto* label_cmd = app.add_subcommand("label", "produce a well-labeled complex, subdividing if needed");
    label_cmd->add_option("input", in_path, "complex file (JSON)")->required();
    label_cmd->add_option("--coloring", coloring_path, "separate JSON file with a 'coloring' field");
    label_cmd->add_option("--out", out_path, "write the labeled complex here instead of stdout");

    auto* resolve_cmd = app.add_subcommand("resolve", "run the full resolution pipeline");
    resolve_cmd->add_option("input", in_path, "complex file (JSON)")->required();
    resolve_cmd->add_option("--seed-flag", seed_flag, "index of the seed flag (default 0)");
    resolve_cmd->add_option("--max-states", max_states, "state cap (default 1000000)");
    resolve_cmd->add_option("--export", export_path, "write a self-contained resolution bundle");
    resolve_cmd->add_option("--export-off", off_path, "write an OFF mesh of the order complex (n = 2)");
    resolve_cmd->add_option("--export-order", order_path, "write the order complex as a complex file");
    resolve_cmd->add_option("--all-from", all_from, "comma-separated seed flags; one component each");
    resolve_cmd->add_option("--out", out_path, "write the run report here instead of stdout");

    auto* verify_cmd = app.add_subcommand("verify", "re-run all invariant checks on an exported bundle");
    verify_cmd->add_option("bundle", bundle_path, "bundle produced by resolve --export")->required();
    verify_cmd->add_option("--out", out_path, "write the verification report here instead of stdout");

    auto* census_cmd = app.add_subcommand("census", "match a manifold's vertex links against a prescription");
    census_cmd->add_option("manifold", manifold_path, "manifold complex file (JSON)")->required();
    census_cmd->add_option("prescription", prescription_path, "prescription file (JSON)")->required();
    census_cmd->add_option("--out", out_path, "write the census report here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) return run_validate(in_path, out_path);
        if (label_cmd->parsed()) return run_label(in_path, coloring_path, out_path);
        if (resolve_cmd->parsed())
            return run_resolve(in_path, seed_flag, max_states, export_path, off_path, order_path, all_from,
                               out_path);
        if (verify_cmd->parsed()) return run_verify(bundle_path, out_path);
        if (census_cmd->parsed()) return run_census(manifold_path, prescription_path, out_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::internal);
    }
    return 0;
}
